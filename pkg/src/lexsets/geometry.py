"""Frequency-weighted centroids and distance dispersion of lexical sets.

A lexical set maps to a cloud of filler vectors; its centre is the
token-frequency-weighted Euclidean mean, and the spread is summarised by
weighted quantiles of the cosine distances from that centre.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import LexicalSet
from .embeddings import EmbeddingStore, cosine_distance
from .errors import EmptySetError

#: One row of a distance table: (filler lemma, cosine distance, token count).
DistanceEntry = tuple[str, float, int]


@dataclass
class SetGeometry:
    verb_lemma: str
    role: str
    centroid: np.ndarray
    filler_distances: list[DistanceEntry]
    covered_tokens: int
    oov_tokens: int
    oov_types: int


@dataclass(frozen=True)
class BoxStats:
    """Five-number summary plus Tukey whiskers (1.5 * IQR fences)."""

    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    whisker_low: float
    whisker_high: float
    outlier_count: int

    def as_dict(self) -> dict:
        return {
            "minimum": self.minimum,
            "q1": self.q1,
            "median": self.median,
            "q3": self.q3,
            "maximum": self.maximum,
            "whisker_low": self.whisker_low,
            "whisker_high": self.whisker_high,
            "outlier_count": self.outlier_count,
        }


def _split_known(lex_set: LexicalSet, store: EmbeddingStore):
    known: list[tuple[str, int, np.ndarray]] = []
    oov_tokens = 0
    oov_types = 0
    for lemma in sorted(lex_set.counts):
        count = lex_set.counts[lemma]
        vec = store.lookup(lemma)
        if vec is None:
            oov_tokens += count
            oov_types += 1
        else:
            known.append((lemma, count, vec))
    return known, oov_tokens, oov_types


def weighted_centroid(
    lex_set: LexicalSet, store: EmbeddingStore
) -> tuple[np.ndarray, tuple[int, int, int]]:
    """Token-frequency-weighted mean vector of the in-vocabulary fillers.

    Returns the centroid and a coverage triple
    (covered_tokens, oov_tokens, oov_types).
    """
    known, oov_tokens, oov_types = _split_known(lex_set, store)
    if not known:
        raise EmptySetError(
            f"no in-vocabulary fillers for verb {lex_set.verb_lemma!r} role {lex_set.role}"
        )
    total = 0
    acc = np.zeros(store.dimension, dtype=np.float64)
    for _, count, vec in known:
        acc += count * vec
        total += count
    return acc / total, (total, oov_tokens, oov_types)


def distance_distribution(
    lex_set: LexicalSet, store: EmbeddingStore, centroid: np.ndarray
) -> SetGeometry:
    """Cosine distance of every in-vocabulary filler type from the centroid.

    Each filler type contributes one entry weighted by its token count;
    out-of-vocabulary fillers are tallied, not silently dropped.
    """
    known, oov_tokens, oov_types = _split_known(lex_set, store)
    entries: list[DistanceEntry] = [
        (lemma, cosine_distance(vec, centroid), count) for lemma, count, vec in known
    ]
    return SetGeometry(
        verb_lemma=lex_set.verb_lemma,
        role=lex_set.role,
        centroid=np.asarray(centroid, dtype=np.float64),
        filler_distances=entries,
        covered_tokens=sum(count for _, count, _ in known),
        oov_tokens=oov_tokens,
        oov_types=oov_types,
    )


def compute_set_geometry(lex_set: LexicalSet, store: EmbeddingStore) -> SetGeometry:
    """Centroid plus distance distribution in one step."""
    centroid, _ = weighted_centroid(lex_set, store)
    return distance_distribution(lex_set, store, centroid)


def weighted_quantile(values: Sequence[tuple[float, float]], q: float) -> float:
    """Lower weighted quantile of (value, weight) pairs.

    Returns the smallest value v such that the cumulative weight of items
    <= v reaches q times the total weight; q=0 gives the minimum and q=1
    the maximum.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"quantile fraction must be in [0, 1], got {q}")
    if len(values) == 0:
        raise EmptySetError("weighted quantile of an empty list")
    data = np.asarray([v for v, _ in values], dtype=np.float64)
    weights = np.asarray([w for _, w in values], dtype=np.float64)
    if np.any(weights <= 0):
        raise ValueError("weights must be positive")
    order = np.argsort(data, kind="stable")
    data = data[order]
    cumulative = np.cumsum(weights[order])
    target = q * cumulative[-1]
    idx = int(np.searchsorted(cumulative, target, side="left"))
    return float(data[min(idx, len(data) - 1)])


def weighted_box_stats(values: Sequence[float], weights: Sequence[float]) -> BoxStats:
    """Box-and-whisker summary over weighted observations."""
    if len(values) == 0:
        raise EmptySetError("box statistics of an empty list")
    if len(values) != len(weights):
        raise ValueError("values and weights must have equal length")
    pairs = list(zip(values, weights))
    q1 = weighted_quantile(pairs, 0.25)
    median = weighted_quantile(pairs, 0.5)
    q3 = weighted_quantile(pairs, 0.75)
    iqr = q3 - q1
    low_fence = q1 - 1.5 * iqr
    high_fence = q3 + 1.5 * iqr
    data = np.asarray(values, dtype=np.float64)
    wts = np.asarray(weights, dtype=np.float64)
    inside = (data >= low_fence) & (data <= high_fence)
    # Fences always capture the quartiles, so `inside` is non-empty.
    whisker_low = float(data[inside].min())
    whisker_high = float(data[inside].max())
    outlier_weight = wts[~inside].sum()
    outlier_count = int(round(float(outlier_weight)))
    return BoxStats(
        minimum=float(data.min()),
        q1=q1,
        median=median,
        q3=q3,
        maximum=float(data.max()),
        whisker_low=whisker_low,
        whisker_high=whisker_high,
        outlier_count=outlier_count,
    )


def box_stats(geometry: SetGeometry) -> BoxStats:
    """Box statistics of a set's filler distances, weighted by token count."""
    if not geometry.filler_distances:
        raise EmptySetError(
            f"no distances for verb {geometry.verb_lemma!r} role {geometry.role}"
        )
    values = [d for _, d, _ in geometry.filler_distances]
    weights = [w for _, _, w in geometry.filler_distances]
    return weighted_box_stats(values, weights)
