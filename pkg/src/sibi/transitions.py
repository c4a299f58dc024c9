"""Transition frequencies, intensities, df/dB landscape and resonance fields.

Transitions connect a level of the m doublet to one of the m-1 doublet.
With c_m = cos(theta_m) (c = 1 for the two singlets) the four classes are

    allowed          (+,m) -> (-,m-1)   1/4 (1 + c_m)(1 + c_{m-1})
    forbidden_plus   (+,m) -> (+,m-1)   1/4 (1 + c_m)(1 - c_{m-1})
    forbidden_minus  (-,m-1) -> (-,m)   1/4 (1 - c_m)(1 + c_{m-1})
    generic          (-,m) -> (+,m-1)   1/4 (1 - c_m)(1 - c_{m-1})

Intensities are normalized so the high-field allowed line tends to 1, i.e.
I = 4 |<f|Sx|i>|^2.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .core import (
    Label,
    build_full_hamiltonian,
    cos_array,
    diagonalize_full,
    effective_branch,
    electron_operators,
    energy_array,
    index_of_label,
    label_of_index,
    normalize_label,
    slope_array,
)
from .params import FieldPoint, ParameterError, SystemParams

KINDS = ("allowed", "forbidden_plus", "forbidden_minus", "generic")
B_XTOL = 1e-12
DEFAULT_SCAN_POINTS = 20000


@dataclass(frozen=True)
class Transition:
    """A pair of levels, read as ``from_level -> to_level`` (e.g. 12->9)."""

    from_level: Label
    to_level: Label
    kind: str

    @classmethod
    def between(cls, params: SystemParams, a, b, strict: bool = True) -> "Transition":
        """Build a transition from two labels or two 1-based level indices.

        With ``strict=False`` pairs with |delta m| != 1 are accepted as kind
        'none' (zero dipole intensity), e.g. for formal frequency differences.
        """
        a = label_of_index(params, a) if isinstance(a, (int, np.integer)) else normalize_label(params, a)
        b = label_of_index(params, b) if isinstance(b, (int, np.integer)) else normalize_label(params, b)
        if abs(abs(a.m - b.m) - 1) > 1e-12:
            if strict:
                raise ParameterError(f"{a} -> {b} violates the delta m = +-1 selection rule")
            return cls(a, b, "none")
        hi, lo = (a, b) if a.m > b.m else (b, a)
        kind = {
            ("+", "-"): "allowed",
            ("+", "+"): "forbidden_plus",
            ("-", "-"): "forbidden_minus",
            ("-", "+"): "generic",
        }[effective_branch(hi), effective_branch(lo)]
        return cls(a, b, kind)

    @classmethod
    def allowed(cls, params: SystemParams, m) -> "Transition":
        return cls.between(params, ("+", m), ("-", m - 1))

    @classmethod
    def forbidden(cls, params: SystemParams, branch: str, m) -> "Transition":
        if branch == "+":
            return cls.between(params, ("+", m), ("+", m - 1))
        if branch == "-":
            return cls.between(params, ("-", m - 1), ("-", m))
        raise ParameterError(f"branch must be '+' or '-', got {branch!r}")

    @property
    def upper_m(self) -> float:
        return max(self.from_level.m, self.to_level.m)

    def indices(self, params: SystemParams) -> tuple[int, int]:
        return index_of_label(params, self.from_level), index_of_label(params, self.to_level)

    def name(self, params: SystemParams) -> str:
        i, j = self.indices(params)
        return f"{i}->{j}"


def all_transitions(params: SystemParams, include_forbidden: bool = True) -> list[Transition]:
    """Every delta m = +-1 transition, in canonical order (upper m, then kind)."""
    out = []
    for m in params.m_values()[1:]:
        candidates = [
            (("+", m), ("-", m - 1)),
            (("+", m), ("+", m - 1)),
            (("-", m - 1), ("-", m)),
            (("-", m), ("+", m - 1)),
        ]
        if not include_forbidden:
            candidates = candidates[:1]
        for a, b in candidates:
            try:
                # (+,-M) and (-,+M) do not exist: the singlets close those classes
                out.append(Transition.between(params, a, b))
            except ParameterError:
                continue
    return out


# ------------------------------------------------------------- frequencies


def _w(params: SystemParams, B) -> np.ndarray:
    return np.asarray(B, dtype=float) * params.gamma_e / params.A


def energy_difference(params: SystemParams, t: Transition, B) -> np.ndarray:
    """E_from - E_to (GHz), vectorized over B (tesla)."""
    w = _w(params, B)
    return energy_array(params, t.from_level, w) - energy_array(params, t.to_level, w)


def transition_frequency(params: SystemParams, t: Transition, field: FieldPoint) -> float:
    return float(abs(energy_difference(params, t, field.B)))


def frequency_array(params: SystemParams, t: Transition, B) -> np.ndarray:
    return np.abs(energy_difference(params, t, B))


def dfdB_array(params: SystemParams, t: Transition, B) -> np.ndarray:
    """d|E_from - E_to|/dB in GHz/T, vectorized over B."""
    w = _w(params, B)
    diff = energy_array(params, t.from_level, w) - energy_array(params, t.to_level, w)
    slope = slope_array(params, t.from_level, w) - slope_array(params, t.to_level, w)
    return np.where(diff >= 0, slope, -slope)


def dfdB(params: SystemParams, t: Transition, field: FieldPoint) -> float:
    return float(dfdB_array(params, t, field.B))


# ------------------------------------------------------------- intensities


def _signed_cos(params, label, w):
    # +c for '+' levels, -c for '-' levels (singlets: c = 1)
    c = cos_array(params, label, w)
    return c if effective_branch(label) == "+" else -c


def intensity_array(params: SystemParams, t: Transition, B) -> np.ndarray:
    if t.kind == "none":
        return np.zeros_like(np.asarray(B, dtype=float))
    w = _w(params, B)
    hi, lo = (t.from_level, t.to_level) if t.from_level.m > t.to_level.m else (t.to_level, t.from_level)
    # the m-1 partner enters with the opposite sign convention
    return 0.25 * (1 + _signed_cos(params, hi, w)) * (1 - _signed_cos(params, lo, w))


def intensity(params: SystemParams, t: Transition, field: FieldPoint) -> float:
    return float(intensity_array(params, t, field.B))


def allowed_intensity(params: SystemParams, m, field: FieldPoint) -> float:
    return intensity(params, Transition.allowed(params, m), field)


def forbidden_intensity(params: SystemParams, branch: str, m, field: FieldPoint) -> float:
    """1/4 (1 +- c_m)(1 -+ c_{m-1}); zero when a singlet makes the line vanish."""
    for mm in (m, m - 1):
        normalize_label(params, ("+" if mm > 0 else "-", mm))
    try:
        t = Transition.forbidden(params, branch, m)
    except ParameterError:
        # the class would need a singlet on the wrong branch: no such line
        return 0.0
    return intensity(params, t, field)


def numeric_states(params: SystemParams, field: FieldPoint) -> dict:
    """Numerically diagonalized eigenvectors keyed by adiabatic label.

    Labels are assigned from each eigenvector's m-block and its energy rank
    inside the block, without using the analytic formulas.
    """
    H = build_full_hamiltonian(params, field)
    E, V = diagonalize_full(H)
    by_block: dict = {}
    for k in range(len(E)):
        m = float(H.block_m[np.argmax(np.abs(V[:, k]))])
        by_block.setdefault(m, []).append(k)
    states = {}
    for m, cols in by_block.items():
        cols = sorted(cols, key=lambda k: E[k])
        if len(cols) == 1:
            states[Label("singlet", m)] = V[:, cols[0]]
        else:
            states[Label("-", m)] = V[:, cols[0]]
            states[Label("+", m)] = V[:, cols[1]]
    return states


def generic_intensity(params: SystemParams, i, j, field: FieldPoint) -> float:
    """4 |<j|Sx|i>|^2 from numerically diagonalized eigenvectors.

    ``i`` and ``j`` may be level indices, labels or ``EigenLevel`` objects.
    """

    def as_label(x):
        if hasattr(x, "label"):
            return x.label
        if isinstance(x, (int, np.integer)):
            return label_of_index(params, x)
        return normalize_label(params, x)

    states = numeric_states(params, field)
    _, sp = electron_operators(params)
    sx = 0.5 * (sp + sp.T)
    amp = states[as_label(j)] @ sx @ states[as_label(i)]
    return float(4 * amp * amp)


# ---------------------------------------------------------- resonance points


@dataclass(frozen=True)
class ResonancePoint:
    """A cancellation resonance or a df/dB = 0 extremum.

    ``residual`` is the exact stationarity condition
    s_f c_f - s_t c_t - 2 delta (m_f - m_t) / (1 + delta), zero at an extremum.
    ``cos_relation`` is the delta-free form c_m + c_{m-1} (minima) or
    c_m - c_{m-1} (maxima), which vanishes only as delta -> 0.
    """

    kind: str  # 'cancellation', 'minimum', 'maximum'
    B: float
    omega0_tilde: float
    transition: Transition | None = None
    k: float | None = None
    frequency: float | None = None
    residual: float | None = None
    cos_relation: float | None = None
    cos_upper: float | None = None
    cos_lower: float | None = None


def cancellation_fields(params: SystemParams) -> list[ResonancePoint]:
    """Fields where m = -w (1 + delta), k = -m = 0 .. I + 1/2."""
    out = []
    for m in params.m_values():
        if m > 0:
            continue
        k = -m + 0.0  # avoid -0.0 for m = 0
        w = k / (1 + params.delta)
        fp = FieldPoint.from_omega0_tilde(params, w)
        out.append(ResonancePoint("cancellation", fp.B, w, k=k))
    return sorted(out, key=lambda r: r.k)


def _stationarity(params: SystemParams, t: Transition, B: float):
    w = float(_w(params, B))
    sf = float(_signed_cos(params, t.from_level, w))
    st = float(_signed_cos(params, t.to_level, w))
    dm = t.from_level.m - t.to_level.m
    residual = sf - st - 2 * params.delta * dm / (1 + params.delta)
    hi, lo = (t.from_level, t.to_level) if t.from_level.m > t.to_level.m else (t.to_level, t.from_level)
    c_hi = float(cos_array(params, hi, w))
    c_lo = float(cos_array(params, lo, w))
    same = effective_branch(hi) == effective_branch(lo)
    relation = c_hi - c_lo if same else c_hi + c_lo
    return residual, relation, c_hi, c_lo, same


def _check_range(B_range):
    lo, hi = map(float, B_range)
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo < 0 or hi <= lo:
        raise ParameterError(f"invalid field range {B_range}")
    return lo, hi


def find_extrema(
    params: SystemParams,
    t: Transition,
    B_range,
    points: int = DEFAULT_SCAN_POINTS,
    classify_tol: float = 1e-6,
) -> list[ResonancePoint]:
    """All df/dB = 0 points of a transition inside ``B_range``.

    Sign changes of the analytic derivative on a dense grid are refined by
    bracketing. Sum-type lines (levels on opposite branches) have minima,
    difference-type lines maxima; the stationarity condition is checked at
    each root.
    """
    lo, hi = _check_range(B_range)
    grid = np.linspace(lo, hi, points)
    d = dfdB_array(params, t, grid)
    out = []
    for k in np.flatnonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0):
        B0 = brentq(lambda b: float(dfdB_array(params, t, b)), grid[k], grid[k + 1], xtol=B_XTOL, rtol=4 * np.finfo(float).eps)
        residual, relation, c_hi, c_lo, same = _stationarity(params, t, B0)
        if abs(residual) > classify_tol:
            raise RuntimeError(f"extremum of {t} at B={B0} fails stationarity ({residual:.2e})")
        out.append(
            ResonancePoint(
                "maximum" if same else "minimum",
                B0,
                float(_w(params, B0)),
                transition=t,
                frequency=float(frequency_array(params, t, B0)),
                residual=residual,
                cos_relation=relation,
                cos_upper=c_hi,
                cos_lower=c_lo,
            )
        )
    return out


def all_extrema(params: SystemParams, B_range, include_forbidden: bool = True) -> list[ResonancePoint]:
    out = []
    for t in all_transitions(params, include_forbidden):
        out.extend(find_extrema(params, t, B_range))
    return sorted(out, key=lambda r: r.B)


# ----------------------------------------------------------------- line list


@dataclass(frozen=True)
class Line:
    position: float  # tesla for field-swept lists, GHz for frequency lists
    intensity: float
    source: str
    target: str
    kind: str
    flag: str = ""
    transition: Transition | None = None


@dataclass
class LineList:
    """Resonance lines at a fixed microwave frequency (``axis='field'``) or
    at a fixed field (``axis='frequency'``)."""

    lines: list
    f_mw: float | None = None
    B: float | None = None
    axis: str = "field"
    metadata: dict = dc_field(default_factory=dict)

    def __len__(self):
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    @property
    def positions(self) -> np.ndarray:
        return np.array([ln.position for ln in self.lines])

    @property
    def intensities(self) -> np.ndarray:
        return np.array([ln.intensity for ln in self.lines])

    def select(self, lo: float, hi: float) -> "LineList":
        keep = [ln for ln in self.lines if lo <= ln.position <= hi]
        return LineList(keep, self.f_mw, self.B, self.axis, dict(self.metadata))

    def __add__(self, other: "LineList") -> "LineList":
        if self.axis != other.axis:
            raise ValueError("cannot merge field and frequency line lists")
        return LineList(self.lines + other.lines, self.f_mw, self.B, self.axis, dict(self.metadata))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["B_T" if self.axis == "field" else "f_GHz", "intensity", "from", "to", "kind"])
        for ln in self.lines:
            w.writerow([f"{ln.position:.9g}", f"{ln.intensity:.9g}", ln.source, ln.target, ln.kind])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "axis": self.axis,
            "f_mw_GHz": self.f_mw,
            "B_T": self.B,
            "metadata": self.metadata,
            "lines": [
                {
                    "position": float(f"{ln.position:.9g}"),
                    "intensity": float(f"{ln.intensity:.9g}"),
                    "from": ln.source,
                    "to": ln.target,
                    "kind": ln.kind,
                    "flag": ln.flag,
                }
                for ln in self.lines
            ],
        }
        return json.dumps(doc, indent=2)


def _roots_on_breakpoints(fun, pts, vals, xtol):
    roots = []
    for k in range(len(pts) - 1):
        a, b = vals[k], vals[k + 1]
        if a == 0.0:
            roots.append(pts[k])
        elif a * b < 0:
            roots.append(brentq(fun, pts[k], pts[k + 1], xtol=xtol, rtol=4 * np.finfo(float).eps))
    if vals[-1] == 0.0:
        roots.append(pts[-1])
    return roots


def transition_roots(
    params: SystemParams, t: Transition, f_mw: float, B_range, points: int = DEFAULT_SCAN_POINTS
) -> list[float]:
    """All B in ``B_range`` with frequency(B) = f_mw, ascending.

    The scan grid is augmented with the transition's extrema so each
    interval is monotone: double roots near a minimum cannot be missed.
    """
    lo, hi = _check_range(B_range)
    grid = np.linspace(lo, hi, points)
    ext = [r.B for r in find_extrema(params, t, (lo, hi), points)]
    pts = np.unique(np.concatenate([grid, ext]))
    vals = frequency_array(params, t, pts) - f_mw

    def fun(b):
        return float(frequency_array(params, t, b)) - f_mw

    return _roots_on_breakpoints(fun, pts, vals, B_XTOL)


def resonance_fields(
    params: SystemParams,
    f_mw: float,
    B_range=(0.0, 0.6),
    include_forbidden: bool = False,
    transitions: Sequence[Transition] | None = None,
    points: int = DEFAULT_SCAN_POINTS,
) -> LineList:
    """Field-swept line list at microwave frequency ``f_mw`` (GHz)."""
    if not (math.isfinite(f_mw) and f_mw > 0):
        raise ParameterError(f"microwave frequency must be positive, got {f_mw}")
    lo, hi = _check_range(B_range)
    if transitions is None:
        transitions = all_transitions(params, include_forbidden)
    lines = []
    edge_tol = 10 * (hi - lo) / points
    for t in transitions:
        i, j = t.indices(params)
        for B0 in transition_roots(params, t, f_mw, (lo, hi), points):
            flag = "edge" if min(B0 - lo, hi - B0) < edge_tol else ""
            lines.append(
                Line(B0, float(intensity_array(params, t, B0)), str(i), str(j), t.kind, flag, t)
            )
    return LineList(lines, f_mw=f_mw, axis="field", metadata={"B_range_T": [lo, hi]})


# ------------------------------------------------------------- qubit report


@dataclass(frozen=True)
class QubitReport:
    """Strengths of the four transitions of the |9>,|10>,|11>,|12> two-qubit subset.

    Electronic flips: 10->11 and 12->9. Nuclear-like flips: 10->9 and 12->11.
    """

    B: float
    electronic_10_11: float
    electronic_12_9: float
    nuclear_10_9: float
    nuclear_12_11: float
    cos_theta_anchor: float  # cos(theta) of the |10> singlet, always 1
    cos_theta_pair: float  # cos(theta) of the doublet holding |9>, |11>
    equality_field: float
    at_equality: bool

    def as_dict(self) -> dict:
        return {
            "B_T": self.B,
            "10->11": self.electronic_10_11,
            "12->9": self.electronic_12_9,
            "10->9": self.nuclear_10_9,
            "12->11": self.nuclear_12_11,
            "theta_anchor_rad": math.acos(min(1.0, self.cos_theta_anchor)),
            "theta_pair_rad": math.acos(max(-1.0, min(1.0, self.cos_theta_pair))),
            "equality_field_T": self.equality_field,
            "at_equality": self.at_equality,
        }


def qubit_transitions(params: SystemParams) -> dict:
    M = params.m_max
    s0 = ("singlet", -M)  # |10>: (0)e(0)n
    n1 = ("-", -M + 1)  # |9>
    e1 = ("+", -M + 1)  # |11>
    b1 = ("+", -M + 2)  # |12>
    return {
        "10->11": Transition.between(params, s0, e1),
        "12->9": Transition.between(params, b1, n1),
        "10->9": Transition.between(params, s0, n1),
        "12->11": Transition.between(params, b1, e1),
    }


def qubit_report(params: SystemParams, field: FieldPoint, tol: float = 1e-9) -> QubitReport:
    if params.m_max < 2:
        raise ParameterError("the four-level qubit subset needs I >= 3/2")
    ts = qubit_transitions(params)
    k = params.m_max - 1
    eq = FieldPoint.from_omega0_tilde(params, k / (1 + params.delta)).B
    c_pair = float(cos_array(params, ("+", -k), field.omega0_tilde))
    return QubitReport(
        field.B,
        intensity(params, ts["10->11"], field),
        intensity(params, ts["12->9"], field),
        intensity(params, ts["10->9"], field),
        intensity(params, ts["12->11"], field),
        1.0,
        c_pair,
        eq,
        abs(c_pair) < tol,
    )
