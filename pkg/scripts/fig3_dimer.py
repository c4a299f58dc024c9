"""Exchange-coupled pairs: single-J and J-ensemble spectra near a
cancellation resonance and at the highest-field line."""

import argparse
from pathlib import Path

from sibi.dimer import JDistribution, dimer_spectrum, ensemble_spectrum
from sibi.params import SystemParams
from sibi.spectrum import LineShape, feature_width, synthesize, uniform_axis
from sibi.svg import Plot
from sibi.transitions import cancellation_fields, resonance_fields


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("figures"))
    ap.add_argument("--frequency", type=float, default=9.67849)
    ap.add_argument("--J", type=float, default=0.5)
    ap.add_argument("--Jmean", type=float, default=0.3)
    ap.add_argument("--Jsigma", type=float, default=0.3)
    ap.add_argument("--nodes", type=int, default=33)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    p = SystemParams.si_bi()
    shape = LineShape(0.42)
    mono = resonance_fields(p, args.frequency, (0.05, 0.6))
    k4 = cancellation_fields(p)[4].B
    windows = {
        "resonance": min(mono.positions, key=lambda b: abs(b - k4)),
        "off": max(mono.positions),
    }
    dist = JDistribution(args.Jmean, args.Jsigma, args.nodes)
    for name, centre in windows.items():
        axis = uniform_axis(centre - 0.02, centre + 0.02, 801)
        single = synthesize(mono.select(axis[0] - 0.01, axis[-1] + 0.01), axis, shape, warn_clipped=False)
        pair = dimer_spectrum(p, args.J, args.frequency, axis, shape)
        ens = ensemble_spectrum(p, dist, args.frequency, axis, shape)
        feat = feature_width(ens, (axis[0], axis[-1]), envelope=True)
        width = "n/a" if feat is None else f"{feat.fwhm_mT():.2f} mT"
        plot = Plot(f"pairs near {centre:.4f} T ({name})", "B (T)", "absorption (arb. units)")
        plot.add(axis, single.signal / single.signal.max(), "single donor", color="#7f7f7f")
        plot.add(axis, pair.signal / pair.signal.max(), f"pair, J = {args.J:g} GHz", color="#1f77b4")
        plot.add(axis, ens.signal / ens.signal.max(), f"J ensemble, FWHM {width}", color="#d62728")
        path = args.out / f"fig3_dimer_{name}.svg"
        path.write_text(plot.render())
        print(path, width)


if __name__ == "__main__":
    main()
