"""Render the report artifacts: CSV/JSON tables and the three figure kinds.

Everything lands in demos/output/. The SVG files are standalone and
deterministic -- rendering the same data twice yields byte-identical
documents, which is what makes the golden-file tests in the suite
possible.
"""

from pathlib import Path

from lexsets import analyze_lexical_sets, load_inventory, load_text_vectors, read_database
from lexsets.report import analysis_documents, figure_specs, geometry_documents, render_svg

DATA = Path(__file__).parent.parent / "tests" / "data"
OUTPUT = Path(__file__).parent / "output"


def main():
    with open(DATA / "golden" / "toy_lexsets.json", encoding="utf-8") as stream:
        sets = read_database(stream)
    with open(DATA / "toy_vectors.txt", encoding="utf-8") as stream:
        store = load_text_vectors(stream)
    with open(DATA / "toy_inventory.json", encoding="utf-8") as stream:
        inventory = load_inventory(stream)
    result = analyze_lexical_sets(sets, store, inventory)

    OUTPUT.mkdir(exist_ok=True)
    geometry_csv, geometry_json = geometry_documents(result, verbose=True)
    (OUTPUT / "geometry.csv").write_text(geometry_csv, encoding="utf-8")
    (OUTPUT / "geometry.json").write_text(geometry_json, encoding="utf-8")
    analysis_csv, analysis_json = analysis_documents(result)
    (OUTPUT / "analysis.csv").write_text(analysis_csv, encoding="utf-8")
    (OUTPUT / "analysis.json").write_text(analysis_json, encoding="utf-8")
    print("tables -> demos/output/{geometry,analysis}.{csv,json}")
    print("  (the verbose geometry JSON also lists every filler's distance)")

    for suffix, spec in figure_specs(result).items():
        svg = render_svg(spec)
        (OUTPUT / f"{suffix}.svg").write_text(svg, encoding="utf-8")
        print(f"figure -> demos/output/{suffix}.svg  ({spec.kind}, {svg.count('class=')} elements)")

    again = {suffix: render_svg(spec) for suffix, spec in figure_specs(result).items()}
    identical = all(
        (OUTPUT / f"{suffix}.svg").read_text(encoding="utf-8") == svg
        for suffix, svg in again.items()
    )
    print(f"\nsecond render byte-identical to the first: {identical}")


if __name__ == "__main__":
    main()
