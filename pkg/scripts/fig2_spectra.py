"""X-band field-swept spectra: derivative trace and the line stick list."""

import argparse
from pathlib import Path

import numpy as np

from sibi.params import SystemParams
from sibi.spectrum import LineShape, synthesize, uniform_axis
from sibi.svg import Plot
from sibi.transitions import resonance_fields


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("figures"))
    ap.add_argument("--frequency", type=float, default=9.67849)
    ap.add_argument("--fwhm", type=float, default=0.42, help="mT")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    p = SystemParams.si_bi()
    axis = uniform_axis(0.05, 0.6, 11001)
    shape = LineShape(args.fwhm)
    allowed = resonance_fields(p, args.frequency, (0.05, 0.6))
    every = resonance_fields(p, args.frequency, (0.05, 0.6), include_forbidden=True)

    plot = Plot(f"{args.frequency:g} GHz spectrum", "B (T)", "dA/dB (arb. units)")
    for lines, label, color in ((every, "all lines", "#1f77b4"), (allowed, "allowed only", "#d62728")):
        d = synthesize(lines, axis, shape, mode="derivative").signal
        plot.add(axis, d / np.abs(d).max(), label, color=color)
    for ln in allowed:
        plot.mark(ln.position, ln.transition.name(p))
    path = args.out / "fig2_spectra.svg"
    path.write_text(plot.render())
    print(path)
    for ln in every:
        print(f"{ln.position:.5f} T  {ln.intensity:.4f}  {ln.transition.name(p)}  {ln.kind}")


if __name__ == "__main__":
    main()
