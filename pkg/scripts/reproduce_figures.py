"""Write the kappa* curve and (p, |z|) region datasets, plus gnuplot scripts.

    python scripts/reproduce_figures.py --out figures/ --workers 4
"""

import argparse
import pathlib

from qadditivity.additivity import solvable_range
from qadditivity.cli import FIGURES, plot_script, records_to_csv
from qadditivity.sweep import figure1_dataset, figure23_dataset, monotonicity_report


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures")
    ap.add_argument("--p-step", type=float, default=0.01)
    ap.add_argument("--z-step", type=float, default=0.005)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, (kind, value) in FIGURES.items():
        if kind == "figure1":
            recs = figure1_dataset(value, p_step=args.p_step, workers=args.workers)
        else:
            recs = figure23_dataset(value, args.p_step, args.z_step, workers=args.workers)
        path = out / f"{name}.csv"
        path.write_text(records_to_csv(recs))
        (out / f"{name}.gp").write_text(plot_script(str(path), kind))
        solvable = sum(r.solvable for r in recs)
        print(f"{name}: {len(recs)} points, {solvable} solvable -> {path}")
        if kind == "figure23":
            flags = monotonicity_report(recs)
            print(f"  non-monotone in |z| (solvable above an unsolvable point): {len(flags)}")

    print("solvable p-ranges at |z| = 0.2:")
    for q in (0.1, 0.3, 0.5, 0.7, 0.9, 1.0):
        r = solvable_range(q, 0.2, 0.005)
        spans = ", ".join(f"[{lo:.4f}, {hi:.4f}]" for lo, hi in r.intervals) or "none"
        print(f"  q={q}: {spans}  (measure {r.measure:.4f})")


if __name__ == "__main__":
    main()
