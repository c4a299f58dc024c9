"""Command-line front end.

    sibi levels      energy levels versus field
    sibi spectrum    field-swept line list and synthetic spectrum
    sibi resonances  cancellation fields and df/dB = 0 extrema
    sibi dimer       exchange-coupled pair spectra, single J and J ensemble
    sibi qubit       strengths of the four two-qubit transitions versus field

Exit codes: 0 success, 2 I/O error, 3 invalid arguments or parameters.
Nothing is written when validation fails. Outputs contain no timestamps,
so identical invocations give byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .core import all_labels, asymptotic_label, energy_array
from .params import ParameterError, SystemParams
from .spectrum import LineShape, SpectrumGrid, UnderResolvedGrid, feature_width, params_digest, synthesize
from .svg import Plot
from .transitions import (
    Transition,
    all_extrema,
    cancellation_fields,
    qubit_report,
    resonance_fields,
)

EXIT_OK, EXIT_IO, EXIT_INVALID = 0, 2, 3
FORMATS = ("csv", "json", "svg")
X_BAND_GHZ = 9.67849
DIMER_WINDOW_T = 0.02


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _formats(text: str) -> tuple[str, ...]:
    fmts = tuple(f.strip() for f in text.split(",") if f.strip())
    bad = [f for f in fmts if f not in FORMATS]
    if bad or not fmts:
        raise argparse.ArgumentTypeError(f"formats must be drawn from {','.join(FORMATS)}")
    return fmts


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected two level indices, e.g. 12,9") from None
    return a, b


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--params", help="SystemParams JSON file (default: Si:Bi)")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--formats", type=_formats, default=("csv", "json"), help="comma list of csv,json,svg")

    p = _Parser(prog="sibi", description="Donor spin levels, EPR lines and resonances.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("levels", parents=[common], help="energy levels versus field")
    s.add_argument("--Bmin", type=float, default=0.0)
    s.add_argument("--Bmax", type=float, default=0.6)
    s.add_argument("--points", type=int, default=601)

    s = sub.add_parser("spectrum", parents=[common], help="field-swept line list and spectrum")
    s.add_argument("--frequency", type=float, default=X_BAND_GHZ, help="microwave frequency, GHz")
    s.add_argument("--Bmin", type=float, default=0.0)
    s.add_argument("--Bmax", type=float, default=0.6)
    s.add_argument("--fwhm", type=float, default=0.42, help="Gaussian FWHM, mT")
    s.add_argument("--points", type=int, default=12001, help="spectrum axis points")
    s.add_argument("--mode", choices=("absorption", "derivative"), default="absorption")
    s.add_argument("--forbidden", action="store_true", help="include forbidden and generic lines")
    s.add_argument("--transition", type=_pair, help="restrict to one transition, e.g. 12,9")

    s = sub.add_parser("resonances", parents=[common], help="cancellation fields and extrema")
    s.add_argument("--Bmin", type=float, default=0.0)
    s.add_argument("--Bmax", type=float, default=0.6)
    s.add_argument("--allowed-only", action="store_true", help="skip extrema of forbidden lines")

    s = sub.add_parser("dimer", parents=[common], help="exchange-coupled donor pairs")
    s.add_argument("--J", type=float, default=0.5, help="exchange for the single-pair spectrum, GHz")
    s.add_argument("--Jmean", type=float, default=0.3, help="ensemble mean J, GHz")
    s.add_argument("--Jsigma", type=float, default=0.3, help="ensemble standard deviation of J, GHz")
    s.add_argument("--nodes", type=int, default=33, help="quadrature nodes for the J average")
    s.add_argument("--no-ensemble", action="store_true")
    s.add_argument("--frequency", type=float, default=X_BAND_GHZ)
    s.add_argument(
        "--window",
        default="resonance",
        help="'resonance' (allowed line nearest the m=-(I-1/2) cancellation field), "
        "'off' (highest-field allowed line) or Bmin,Bmax in tesla",
    )
    s.add_argument("--fwhm", type=float, default=0.42)
    s.add_argument("--mode", choices=("absorption", "derivative"), default="absorption")

    s = sub.add_parser("qubit", parents=[common], help="two-qubit transition strengths")
    s.add_argument("--Bmin", type=float, default=0.0)
    s.add_argument("--Bmax", type=float, default=0.6)
    s.add_argument("--points", type=int, default=61)
    return p


# ----------------------------------------------------------------- helpers


def _load_params(path: str | None) -> SystemParams:
    if path is None:
        return SystemParams.si_bi()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IOError(f"cannot read parameter file: {exc}") from exc
    return SystemParams.from_json(text)


def _check_range(lo: float, hi: float, what: str = "field") -> None:
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo < 0 or hi <= lo:
        raise ParameterError(f"invalid {what} range [{lo}, {hi}]")


def _positive(value: float, name: str) -> None:
    if not (math.isfinite(value) and value > 0):
        raise ParameterError(f"{name} must be positive, got {value}")


def _table(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([f"{v:.9g}" if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


class Outputs:
    """Collects files in memory; nothing touches disk until ``flush``."""

    def __init__(self, out: Path, formats):
        self.out, self.formats, self.files = out, formats, {}

    def add(self, name: str, fmt: str, text: str):
        if fmt in self.formats:
            self.files[f"{name}.{fmt}"] = text

    def flush(self) -> list[Path]:
        self.out.mkdir(parents=True, exist_ok=True)
        written = []
        for name in sorted(self.files):
            path = self.out / name
            path.write_text(self.files[name])
            written.append(path)
        return written


def _prepare_out(out: str) -> Path:
    path = Path(out)
    if path.exists() and not path.is_dir():
        raise IOError(f"output path {path} is not a directory")
    probe = path
    while not probe.exists():
        probe = probe.parent
    if not os.access(probe, os.W_OK):
        raise IOError(f"output directory {path} is not writable")
    return path


def _spectrum_plot(spec: SpectrumGrid, title: str, marks=()) -> str:
    x = spec.axis * (1e3 if spec.axis_kind == "field" else 1.0)
    plot = Plot(title, "B (mT)" if spec.axis_kind == "field" else "f (GHz)", f"{spec.mode} (arb. units)")
    plot.add(x, spec.signal)
    for pos, label in marks:
        plot.mark(pos * 1e3, label)
    return plot.render()


# ---------------------------------------------------------------- commands


def cmd_levels(args, params: SystemParams, out: Outputs):
    _check_range(args.Bmin, args.Bmax)
    if args.points < 2:
        raise ParameterError("need at least two field points")
    B = np.linspace(args.Bmin, args.Bmax, args.points)
    w = B * params.gamma_e / params.A
    labels = all_labels(params)
    E = np.column_stack([energy_array(params, lab, w) for lab in labels])
    n = len(labels)
    header = ["B_T"] + [f"E{k}" for k in range(1, n + 1)]
    out.add("levels", "csv", _table(header, ([float(b)] + [float(e) for e in row] for b, row in zip(B, E))))
    label_rows = []
    for k, lab in enumerate(labels, 1):
        ms, mi = asymptotic_label(params, lab)
        label_rows.append([k, lab.branch, lab.m, ms, mi])
    out.add("levels_labels", "csv", _table(["index", "branch", "m", "m_s", "m_I"], label_rows))
    out.add(
        "levels",
        "json",
        _json(
            {
                "params": params.to_dict(),
                "units": {"B": "T", "E": "GHz"},
                "B_T": [float(f"{b:.9g}") for b in B],
                "levels": [
                    {
                        "index": k,
                        "branch": row[1],
                        "m": row[2],
                        "m_s": row[3],
                        "m_I": row[4],
                        "E_GHz": [float(f"{e:.9g}") for e in E[:, k - 1]],
                    }
                    for k, row in enumerate(label_rows, 1)
                ],
            }
        ),
    )
    plot = Plot("Energy levels", "B (T)", "E (GHz)")
    for k in range(n):
        plot.add(B, E[:, k], f"|{k + 1}>" if k + 1 in (10, 20) else "", color="#1f77b4" if k < n // 2 else "#d62728")
    out.add("levels", "svg", plot.render())


def cmd_spectrum(args, params: SystemParams, out: Outputs):
    _check_range(args.Bmin, args.Bmax)
    _positive(args.frequency, "frequency")
    shape = LineShape(args.fwhm)
    transitions = None
    if args.transition:
        transitions = [Transition.between(params, *args.transition)]
    axis = np.linspace(args.Bmin, args.Bmax, args.points)
    step = axis[1] - axis[0]
    if step >= shape.fwhm_on("field") / 4:
        raise UnderResolvedGrid(f"--points too small: step {step * 1e3:.3g} mT is not below fwhm/4")
    lines = resonance_fields(params, args.frequency, (args.Bmin, args.Bmax), args.forbidden, transitions)
    lines.metadata["params_digest"] = params_digest(params)
    spec = synthesize(lines, axis, shape, args.mode, warn_clipped=False)
    spec.metadata["params_digest"] = params_digest(params)
    out.add("lines", "csv", lines.to_csv())
    out.add("lines", "json", lines.to_json() + "\n")
    out.add("spectrum", "csv", spec.to_csv())
    out.add("spectrum", "json", spec.to_json() + "\n")
    out.add("spectrum", "svg", _spectrum_plot(spec, f"{args.frequency:g} GHz, {args.mode}"))
    return lines


def cmd_resonances(args, params: SystemParams, out: Outputs):
    _check_range(args.Bmin, args.Bmax)
    rows = []
    for r in cancellation_fields(params):
        rows.append(["cancellation", r.k, "", r.B, r.omega0_tilde, "", "", "", ""])
    for r in all_extrema(params, (args.Bmin, args.Bmax), include_forbidden=not args.allowed_only):
        i, j = r.transition.indices(params)
        rows.append([r.kind, "", f"{i}->{j}", r.B, r.omega0_tilde, r.frequency, r.residual, r.cos_upper, r.cos_lower])
    header = ["kind", "k", "transition", "B_T", "omega0_tilde", "f_GHz", "residual", "cos_upper", "cos_lower"]
    out.add("resonances", "csv", _table(header, rows))
    out.add("resonances", "json", _json({"params": params.to_dict(), "rows": [dict(zip(header, r)) for r in rows]}))
    return rows


def _dimer_window(params: SystemParams, spec: str, f_mw: float):
    if spec in ("resonance", "off"):
        lines = resonance_fields(params, f_mw, (0.0, max(1.0, 2 * f_mw / params.gamma_e)))
        if not len(lines):
            raise ParameterError(f"no allowed line at {f_mw} GHz")
        if spec == "off":
            centre = float(lines.positions.max())
        else:
            target = cancellation_fields(params)[-2].B
            centre = float(lines.positions[np.argmin(np.abs(lines.positions - target))])
        return max(0.0, centre - DIMER_WINDOW_T), centre + DIMER_WINDOW_T
    try:
        lo, hi = (float(x) for x in spec.split(","))
    except ValueError:
        raise ParameterError(f"--window must be 'resonance', 'off' or Bmin,Bmax; got {spec!r}") from None
    _check_range(lo, hi)
    return lo, hi


def cmd_dimer(args, params: SystemParams, out: Outputs):
    from .dimer import JDistribution, dimer_lines, ensemble_spectrum

    if not math.isfinite(args.J):
        raise ParameterError("--J must be finite")
    _positive(args.frequency, "frequency")
    shape = LineShape(args.fwhm)
    dist = None if args.no_ensemble else JDistribution(args.Jmean, args.Jsigma, args.nodes)
    lo, hi = _dimer_window(params, args.window, args.frequency)
    step = shape.fwhm_on("field") / 8
    axis = np.linspace(lo, hi, int(math.ceil((hi - lo) / step)) + 1)
    pad = 6 * shape.sigma_on("field")
    grid_pts = int(math.ceil((hi - lo + 2 * pad) / 5e-4)) + 1
    lines = dimer_lines(params, args.J, args.frequency, (max(0.0, lo - pad), hi + pad), points=grid_pts)
    lines.metadata["params_digest"] = params_digest(params)
    single = synthesize(lines, axis, shape, args.mode, warn_clipped=False)
    out.add("dimer_lines", "csv", lines.to_csv())
    out.add("dimer_lines", "json", lines.to_json() + "\n")
    out.add("dimer_spectrum", "csv", single.to_csv())
    out.add("dimer_spectrum", "json", single.to_json() + "\n")
    out.add("dimer_spectrum", "svg", _spectrum_plot(single, f"pair spectrum, J = {args.J:g} GHz"))
    result = {"window_T": [lo, hi], "single": single}
    if dist is not None:
        ens = ensemble_spectrum(params, dist, args.frequency, axis, shape, args.mode)
        if args.mode == "absorption":
            feat = feature_width(ens, (lo, hi), envelope=True)
            ens.metadata["feature_fwhm_mT"] = None if feat is None else round(feat.fwhm_mT(), 6)
        out.add("ensemble_spectrum", "csv", ens.to_csv())
        out.add("ensemble_spectrum", "json", ens.to_json() + "\n")
        title = f"J ensemble, mean {dist.mean:g}, sigma {dist.sigma:g} GHz"
        out.add("ensemble_spectrum", "svg", _spectrum_plot(ens, title))
        result["ensemble"] = ens
    return result


def cmd_qubit(args, params: SystemParams, out: Outputs):
    _check_range(args.Bmin, args.Bmax)
    if args.points < 2:
        raise ParameterError("need at least two field points")
    if params.m_max < 2:
        raise ParameterError("the two-qubit subset needs I >= 3/2")
    B = list(np.linspace(args.Bmin, args.Bmax, args.points))
    eq = cancellation_fields(params)[-2].B
    if args.Bmin <= eq <= args.Bmax and not any(abs(b - eq) < 1e-12 for b in B):
        B = sorted(B + [eq])
    reports = [qubit_report(params, params.field(b)) for b in B]
    header = ["B_T", "I_10_11", "I_12_9", "I_10_9", "I_12_11", "cos_theta_pair", "at_equality"]
    rows = [
        [r.B, r.electronic_10_11, r.electronic_12_9, r.nuclear_10_9, r.nuclear_12_11, r.cos_theta_pair, int(r.at_equality)]
        for r in reports
    ]
    out.add("qubit", "csv", _table(header, rows))
    out.add("qubit", "json", _json({"params": params.to_dict(), "equality_field_T": eq, "rows": [r.as_dict() for r in reports]}))
    plot = Plot("Two-qubit transition strengths", "B (T)", "relative intensity")
    Bs = np.array([r.B for r in reports])
    for key, label in (("10->11", "10-11"), ("12->9", "12-9"), ("10->9", "10-9"), ("12->11", "12-11")):
        plot.add(Bs, [r.as_dict()[key] for r in reports], label)
    plot.mark(eq, "equal strengths")
    out.add("qubit", "svg", plot.render())
    return reports


COMMANDS = {
    "levels": cmd_levels,
    "spectrum": cmd_spectrum,
    "resonances": cmd_resonances,
    "dimer": cmd_dimer,
    "qubit": cmd_qubit,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"sibi: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        params = _load_params(args.params)
        out_dir = _prepare_out(args.out)
    except ParameterError as exc:
        print(f"sibi: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"sibi: {exc}", file=sys.stderr)
        return EXIT_IO
    out = Outputs(out_dir, args.formats)
    try:
        COMMANDS[args.command](args, params, out)
    except ValueError as exc:  # ParameterError, UnderResolvedGrid and friends
        print(f"sibi: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        for path in out.flush():
            print(path)
    except OSError as exc:
        print(f"sibi: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
