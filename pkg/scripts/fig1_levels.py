"""Si:Bi energy levels against field, with the cancellation fields marked."""

import argparse
from pathlib import Path

import numpy as np

from sibi.core import all_labels, energy_array
from sibi.params import SystemParams
from sibi.svg import Plot
from sibi.transitions import cancellation_fields


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("figures"))
    ap.add_argument("--Bmax", type=float, default=0.6)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    p = SystemParams.si_bi()
    B = np.linspace(0.0, args.Bmax, 601)
    w = B * p.gamma_e / p.A
    plot = Plot("Si:Bi energy levels", "B (T)", "E (GHz)")
    for k, lab in enumerate(all_labels(p), 1):
        color = "#d62728" if k in (10, 20) else ("#1f77b4" if k < 10 else "#2ca02c")
        plot.add(B, energy_array(p, lab, w), f"|{k}>" if k in (10, 20) else "", color=color)
    for r in cancellation_fields(p):
        if 0 < r.B <= args.Bmax:
            plot.mark(r.B, f"k={r.k}")
    path = args.out / "fig1_levels.svg"
    path.write_text(plot.render())
    print(path)


if __name__ == "__main__":
    main()
