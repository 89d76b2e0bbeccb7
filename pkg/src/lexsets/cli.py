"""Command-line pipeline: extract lexical sets, then analyse their geometry.

Subcommands: ``extract``, ``analyze``, ``run`` (both stages) and
``validate-config``. Runs are driven by a JSON config file; a few flags
override config values. Exit codes: 0 success, 1 usage/config error,
2 input or parse error, 3 empty result.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import report
from .analysis import VerbInventory, analyze_lexical_sets, load_inventory
from .corpus import (
    ExtractionRules,
    ParseStats,
    count_fillers,
    lexical_sets_from_counts,
    parse_conll,
    passes_length_filter,
    read_database,
    write_database,
    write_database_tsv,
)
from .embeddings import load_text_vectors
from .errors import ConfigError, ConllParseError, InputError, LexsetsError, VectorFormatError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_EMPTY = 3

_BATCH_SIZE = 512


@dataclass
class RunConfig:
    corpus_paths: list[str]
    vectors_path: str
    inventory_path: str
    output_prefix: str
    reference_ranking_path: str | None = None
    rules: ExtractionRules = field(default_factory=ExtractionRules)
    strict_parsing: bool = False
    worker_count: int = 1
    distance_rank_direction: str = "ascending"
    overlap_rank_direction: str = "descending"
    verbose_geometry: bool = False

    def __post_init__(self):
        if not self.corpus_paths:
            raise ConfigError("corpus_paths must list at least one file")
        if not self.vectors_path:
            raise ConfigError("vectors_path is required")
        if not self.inventory_path:
            raise ConfigError("inventory_path is required")
        if not self.output_prefix:
            raise ConfigError("output_prefix is required")
        if self.worker_count < 1:
            raise ConfigError("worker_count must be >= 1")


def load_config(path: str | Path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as stream:
            data = json.load(stream)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    known = {
        "corpus_paths", "vectors_path", "inventory_path", "reference_ranking_path",
        "output_prefix", "rules", "strict_parsing", "worker_count",
        "distance_rank_direction", "overlap_rank_direction", "verbose_geometry",
    }
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    try:
        rules = ExtractionRules.from_dict(data.get("rules", {}))
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad extraction rules: {exc}") from None
    try:
        return RunConfig(
            corpus_paths=list(data.get("corpus_paths", [])),
            vectors_path=data.get("vectors_path", ""),
            inventory_path=data.get("inventory_path", ""),
            reference_ranking_path=data.get("reference_ranking_path"),
            output_prefix=data.get("output_prefix", ""),
            rules=rules,
            strict_parsing=bool(data.get("strict_parsing", False)),
            worker_count=int(data.get("worker_count", 1)),
            distance_rank_direction=data.get("distance_rank_direction", "ascending"),
            overlap_rank_direction=data.get("overlap_rank_direction", "descending"),
            verbose_geometry=bool(data.get("verbose_geometry", False)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}") from None


def _apply_overrides(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    if getattr(args, "output_prefix", None):
        config.output_prefix = args.output_prefix
    if getattr(args, "workers", None) is not None:
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        config.worker_count = args.workers
    if getattr(args, "strict", False):
        config.strict_parsing = True
    if getattr(args, "max_sentence_length", None) is not None:
        rules = config.rules.to_dict()
        rules["max_sentence_length"] = args.max_sentence_length
        try:
            config.rules = ExtractionRules.from_dict(rules)
        except ValueError as exc:
            raise ConfigError(f"bad --max-sentence-length: {exc}") from None
    return config


def _check_readable(paths: list[str]) -> None:
    for path in paths:
        if path and not Path(path).is_file():
            raise FileNotFoundError(path)


def _load_inventory(config: RunConfig) -> VerbInventory:
    reference = None
    if config.reference_ranking_path:
        reference = open(config.reference_ranking_path, encoding="utf-8")
    try:
        with open(config.inventory_path, encoding="utf-8") as stream:
            return load_inventory(stream, reference)
    finally:
        if reference is not None:
            reference.close()


def _prefix_path(config: RunConfig, suffix: str) -> Path:
    path = Path(f"{config.output_prefix}_{suffix}")
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _write_json(path: Path, obj) -> None:
    with open(path, "w", encoding="utf-8") as stream:
        json.dump(obj, stream, ensure_ascii=False, indent=2)
        stream.write("\n")


def _run_extraction(config: RunConfig, targets: frozenset[str]):
    stats = ParseStats()
    filtered = 0
    processed = 0
    counts: Counter = Counter()

    def sentence_stream():
        nonlocal filtered, processed
        for corpus_path in config.corpus_paths:
            with open(corpus_path, encoding="utf-8") as stream:
                for sentence in parse_conll(stream, strict=config.strict_parsing, stats=stats):
                    if not passes_length_filter(sentence, config.rules):
                        filtered += 1
                        continue
                    processed += 1
                    yield sentence

    if config.worker_count == 1:
        for sentence in sentence_stream():
            counts.update(count_fillers([sentence], targets, config.rules))
    else:
        with ProcessPoolExecutor(max_workers=config.worker_count) as pool:
            pending = []
            batch = []
            max_pending = config.worker_count * 2
            for sentence in sentence_stream():
                batch.append(sentence)
                if len(batch) >= _BATCH_SIZE:
                    pending.append(pool.submit(count_fillers, batch, targets, config.rules))
                    batch = []
                    if len(pending) >= max_pending:
                        counts.update(pending.pop(0).result())
            if batch:
                pending.append(pool.submit(count_fillers, batch, targets, config.rules))
            for future in pending:
                counts.update(future.result())

    manifest = {
        "corpus_files": list(config.corpus_paths),
        **stats.as_dict(),
        "sentences_filtered_by_length": filtered,
        "sentences_processed": processed,
        "filler_records": int(sum(counts.values())),
        "target_verbs": sorted(targets),
        "rules": config.rules.to_dict(),
    }
    return lexical_sets_from_counts(counts), manifest


def cmd_extract(config: RunConfig) -> int:
    _check_readable(config.corpus_paths)
    _check_readable([config.inventory_path])
    inventory = _load_inventory(config)
    targets = frozenset(lemma.lower() for lemma in inventory.lemmas)
    sets, manifest = _run_extraction(config, targets)
    with open(_prefix_path(config, "lexsets.json"), "w", encoding="utf-8") as stream:
        write_database(sets, stream)
    with open(_prefix_path(config, "lexsets.tsv"), "w", encoding="utf-8") as stream:
        write_database_tsv(sets, stream)
    _write_json(_prefix_path(config, "manifest.json"), manifest)
    if not sets:
        print("warning: no target-verb occurrences found; database is empty", file=sys.stderr)
    return EXIT_OK


def cmd_analyze(config: RunConfig, database_path: str | None = None) -> int:
    database_path = database_path or f"{config.output_prefix}_lexsets.json"
    _check_readable([database_path, config.vectors_path, config.inventory_path])
    if config.reference_ranking_path:
        _check_readable([config.reference_ranking_path])
    with open(database_path, encoding="utf-8") as stream:
        sets = read_database(stream)
    with open(config.vectors_path, encoding="utf-8") as stream:
        store = load_text_vectors(stream, metadata=str(config.vectors_path))
    inventory = _load_inventory(config)

    result = analyze_lexical_sets(
        sets,
        store,
        inventory,
        distance_rank_direction=config.distance_rank_direction,
        overlap_rank_direction=config.overlap_rank_direction,
    )

    geometry_csv, geometry_json = report.geometry_documents(result, verbose=config.verbose_geometry)
    analysis_csv, analysis_json = report.analysis_documents(result)
    _prefix_path(config, "geometry.csv").write_text(geometry_csv, encoding="utf-8")
    _prefix_path(config, "geometry.json").write_text(geometry_json, encoding="utf-8")
    _prefix_path(config, "analysis.csv").write_text(analysis_csv, encoding="utf-8")
    _prefix_path(config, "analysis.json").write_text(analysis_json, encoding="utf-8")
    for suffix, spec in report.figure_specs(result).items():
        _prefix_path(config, f"{suffix}.svg").write_text(report.render_svg(spec), encoding="utf-8")

    manifest = {
        "database": database_path,
        "vectors": store.stats(),
        "verbs_included": [v.lemma for v in result.verbs],
        "verbs_excluded": result.excluded,
        "coverage": {
            f"{verb}/{role}": {
                "covered_tokens": geometry.covered_tokens,
                "oov_tokens": geometry.oov_tokens,
                "oov_types": geometry.oov_types,
            }
            for (verb, role), geometry in sorted(result.geometries.items())
        },
        "distances_above_one": result.distances_above_one,
        "notes": result.notes,
    }
    _write_json(_prefix_path(config, "analysis_manifest.json"), manifest)

    if not result.verbs:
        print("error: every inventory verb was excluded from the analysis", file=sys.stderr)
        for item in result.excluded:
            print(f"  {item['verb']}: {item['reason']}", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_run(config: RunConfig) -> int:
    status = cmd_extract(config)
    if status != EXIT_OK:
        return status
    return cmd_analyze(config)


def cmd_validate_config(path: str) -> int:
    config = load_config(path)
    missing = [p for p in [*config.corpus_paths, config.vectors_path, config.inventory_path,
                           config.reference_ranking_path] if p and not Path(p).is_file()]
    if missing:
        for item in missing:
            print(f"error: missing input file: {item}", file=sys.stderr)
        return EXIT_INPUT
    print(f"config {path} is valid")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexsets",
        description="Extract verb-argument lexical sets and analyse their vector geometry.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_common(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--config", required=True, help="JSON run configuration")
        sub.add_argument("--output-prefix", help="override the configured output prefix")
        sub.add_argument("--workers", type=int, help="override the configured worker count")
        sub.add_argument("--strict", action="store_true", help="abort on the first parse error")
        sub.add_argument(
            "--max-sentence-length", type=int, help="override the sentence-length cutoff"
        )

    add_common(subparsers.add_parser("extract", help="extract the lexical-set database"))
    analyze = subparsers.add_parser("analyze", help="analyse an extracted database")
    add_common(analyze)
    analyze.add_argument("--database", help="lexical-set database (default: <prefix>_lexsets.json)")
    add_common(subparsers.add_parser("run", help="extract then analyse"))
    validate = subparsers.add_parser("validate-config", help="check a config file")
    validate.add_argument("--config", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    try:
        if args.command == "validate-config":
            return cmd_validate_config(args.config)
        config = _apply_overrides(load_config(args.config), args)
        if args.command == "extract":
            return cmd_extract(config)
        if args.command == "analyze":
            return cmd_analyze(config, args.database)
        return cmd_run(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: missing input file: {exc.args[0]}", file=sys.stderr)
        return EXIT_INPUT
    except (ConllParseError, VectorFormatError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (LexsetsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
