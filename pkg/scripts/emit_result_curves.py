"""Turn the appendix result tables into latency/quality curve points."""
import argparse
import sys
from pathlib import Path

from wordsimt.curves import emit_curve, parse_result_table

DATA = Path(__file__).resolve().parent.parent / "data" / "curves"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("tables", nargs="*", type=Path,
                    help="LaTeX table files (default: every .tex under data/curves)")
    ap.add_argument("--latency", choices=["word", "token"], default="word")
    ap.add_argument("--format", choices=["csv", "json"], default="csv")
    args = ap.parse_args()

    points = []
    for path in args.tables or sorted(DATA.glob("*.tex")):
        pts = parse_result_table(path.read_text(encoding="utf-8"), latency=args.latency)
        print(f"{path.name}: {len(pts)} points", file=sys.stderr)
        points += pts
    sys.stdout.write(emit_curve(points, args.format))


if __name__ == "__main__":
    main()
