import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

from sibi.core import label_of_index
from sibi.params import FieldPoint, ParameterError, SystemParams
from sibi.transitions import (
    Transition,
    all_extrema,
    all_transitions,
    allowed_intensity,
    cancellation_fields,
    dfdB,
    find_extrema,
    forbidden_intensity,
    frequency_array,
    generic_intensity,
    intensity,
    qubit_report,
    resonance_fields,
    transition_frequency,
)

from conftest import system_params

X_BAND = 9.67849


def test_transition_census(sibi):
    ts = all_transitions(sibi)
    assert len(ts) == 36
    kinds = [t.kind for t in ts]
    assert kinds.count("allowed") == 10
    assert kinds.count("forbidden_plus") == 9 and kinds.count("forbidden_minus") == 9
    assert kinds.count("generic") == 8
    assert len(all_transitions(sibi, include_forbidden=False)) == 10
    assert len(all_transitions(SystemParams.si_p())) == 4


def test_transition_kinds_from_labels(sibi):
    assert Transition.between(sibi, 11, 10).kind == "allowed"
    assert Transition.between(sibi, 12, 9).kind == "allowed"
    assert Transition.between(sibi, 12, 11).kind == "forbidden_plus"
    assert Transition.between(sibi, 10, 9).kind == "forbidden_minus"
    assert Transition.between(sibi, 9, 12).kind == "allowed"
    assert Transition.between(sibi, 5, 14).kind == "generic"
    with pytest.raises(ParameterError):
        Transition.between(sibi, 12, 10)  # delta m = 2
    assert Transition.between(sibi, 12, 10, strict=False).kind == "none"


def test_zero_field_allowed_frequencies(sibi):
    # F = 5 -> F = 4 lines sit at 5A; the (+,-4) -> singlet line stays inside F = 5
    f = sorted(transition_frequency(sibi, t, sibi.field(0.0)) for t in all_transitions(sibi, include_forbidden=False))
    assert f[0] == pytest.approx(0.0, abs=1e-12)
    assert f[1:] == pytest.approx([5 * sibi.A] * 9, abs=1e-9)


def test_clock_transition_frequency(sibi):
    t = Transition.between(sibi, 12, 9)
    f = transition_frequency(sibi, t, sibi.field(0.188))
    # delta-free closed form at the stationary point w = 25/7
    w = 25 / 7
    R = lambda m: math.hypot(m + w, math.sqrt(25 - m * m))  # noqa: E731
    assert f == pytest.approx(sibi.A / 2 * (R(-3) + R(-4)), abs=5e-3)


def test_high_field_slope_tends_to_gamma(sibi):
    t = Transition.between(sibi, 11, 10)
    assert dfdB(sibi, t, sibi.field(500.0)) == pytest.approx(sibi.gamma_e, rel=1e-4)


@given(st.floats(0.0, 6.0))
def test_singlet_pair_slope_is_linear(B):
    p = SystemParams.si_bi()
    t = Transition.between(p, 20, 10, strict=False)
    assert abs(dfdB(p, t, p.field(B))) == pytest.approx(p.gamma_e * (1 - 9 * p.delta), rel=1e-14)


@given(system_params(), st.floats(0.01, 6.0), st.data())
def test_dfdB_matches_finite_difference(p, B, data):
    t = data.draw(st.sampled_from(all_transitions(p)))
    h = 1e-6
    f = lambda b: transition_frequency(p, t, p.field(b))  # noqa: E731
    fd = (f(B + h) - f(B - h)) / (2 * h)
    assert dfdB(p, t, p.field(B)) == pytest.approx(fd, rel=1e-6, abs=1e-5)


@given(system_params(), st.floats(0.0, 6.0), st.data())
def test_generic_intensity_matches_closed_forms(p, B, data):
    t = data.draw(st.sampled_from(all_transitions(p)))
    fp = p.field(B)
    i, j = t.indices(p)
    assert generic_intensity(p, i, j, fp) == pytest.approx(intensity(p, t, fp), abs=1e-10)


@given(system_params(), st.floats(0.0, 6.0))
def test_intensity_sum_rule(p, B):
    # sum over pairs of 4|<j|Sx|i>|^2 equals 2 Tr(Sx^2) = D/2
    fp = p.field(B)
    total = sum(intensity(p, t, fp) for t in all_transitions(p))
    assert total == pytest.approx(p.dim / 2, abs=1e-10)


def test_generic_selection_rules(sibi):
    fp = sibi.field(0.21)
    assert generic_intensity(sibi, 12, 12, fp) == 0.0
    assert generic_intensity(sibi, 12, 10, fp) == pytest.approx(0.0, abs=1e-30)
    eq = FieldPoint.from_omega0_tilde(sibi, 4 / (1 + sibi.delta))
    assert generic_intensity(sibi, 11, 10, eq) == pytest.approx(0.5, abs=1e-12)


def test_allowed_intensity_examples(sibi):
    assert allowed_intensity(sibi, 0, sibi.field(1e4)) == pytest.approx(1.0, abs=1e-6)
    k4 = FieldPoint.from_omega0_tilde(sibi, 4 / (1 + sibi.delta))
    assert allowed_intensity(sibi, -4, k4) == pytest.approx(0.5, abs=1e-12)
    p0 = SystemParams(delta=0.0)
    assert allowed_intensity(p0, 0, p0.field(0.0)) == pytest.approx(0.2, abs=1e-15)
    with pytest.raises(ParameterError):
        allowed_intensity(sibi, -5, k4)
    with pytest.raises(ParameterError):
        allowed_intensity(sibi, 6, k4)


def test_forbidden_intensity_examples(sibi):
    for branch in "+-":
        assert forbidden_intensity(sibi, branch, 1, sibi.field(1e4)) < 1e-6
    k4 = FieldPoint.from_omega0_tilde(sibi, 4 / (1 + sibi.delta))
    assert forbidden_intensity(sibi, "-", -4, k4) == pytest.approx(0.5, abs=1e-12)
    assert forbidden_intensity(sibi, "-", -4, k4) == pytest.approx(allowed_intensity(sibi, -4, k4), abs=1e-12)
    # (+,-5) does not exist, so the plus-branch line into the -5 singlet vanishes
    assert forbidden_intensity(sibi, "+", -4, k4) == 0.0
    with pytest.raises(ParameterError):
        forbidden_intensity(sibi, "+", 7, k4)


@given(st.sampled_from(["+", "-"]), st.integers(-3, 4))
def test_forbidden_intensity_high_field_form(branch, m):
    # at large w the forbidden strength approaches (M^2 - m'^2) / (4 (w + m')^2),
    # m' being the doublet whose small mixing carries the line
    p = SystemParams.si_bi()
    B = 2000.0
    fp = p.field(B)
    m_mixed = m - 1 if branch == "+" else m
    if abs(m_mixed) >= p.m_max:
        return
    x = m_mixed + fp.omega0_tilde * (1 + p.delta)
    target = (p.m_max**2 - m_mixed**2) / (4 * x * x)
    assert forbidden_intensity(p, branch, m, fp) == pytest.approx(target, rel=1e-3)


def test_cancellation_fields(sibi):
    pts = cancellation_fields(sibi)
    assert [r.k for r in pts] == [0, 1, 2, 3, 4, 5]
    assert pts[0].B == 0.0 and math.copysign(1, pts[0].B) == 1
    for r in pts:
        assert r.B == pytest.approx(r.k * sibi.A / ((1 + sibi.delta) * sibi.gamma_e), rel=1e-14)
        if 0 < r.k < 5:
            c = FieldPoint.from_field(sibi, r.B)
            assert -r.k == pytest.approx(-c.omega0_tilde * (1 + sibi.delta), abs=1e-12)
    assert [round(r.B, 3) for r in pts[1:]] == [0.053, 0.105, 0.158, 0.211, 0.263]


def test_clock_minimum(sibi):
    (r,) = find_extrema(sibi, Transition.between(sibi, 12, 9), (0.1, 0.3))
    assert r.kind == "minimum"
    assert r.B == pytest.approx(0.188, abs=1e-3)
    assert abs(dfdB(sibi, r.transition, sibi.field(r.B))) < 1e-6
    assert r.frequency == pytest.approx(5.217, abs=5e-3)
    assert abs(r.residual) < 1e-9
    # sum-type relation c_m + c_{m-1} only approximately zero because delta > 0
    assert abs(r.cos_relation) < 1e-3


def test_frequency_maximum(sibi):
    (r,) = find_extrema(sibi, Transition.between(sibi, 12, 11), (0.3, 0.45))
    assert r.kind == "maximum"
    assert r.B == pytest.approx(0.368, abs=5e-3)
    assert r.omega0_tilde == pytest.approx(7, abs=0.05)


def test_extrema_delta_free_limit():
    p = SystemParams(delta=0.0)
    (r,) = find_extrema(p, Transition.between(p, 12, 11), (0.3, 0.45))
    assert r.omega0_tilde == pytest.approx(7.0, abs=1e-9)
    assert r.cos_upper == pytest.approx(1 / math.sqrt(2), abs=1e-9)
    assert r.cos_lower == pytest.approx(1 / math.sqrt(2), abs=1e-9)
    (r,) = find_extrema(p, Transition.between(p, 12, 9), (0.1, 0.3))
    assert r.omega0_tilde == pytest.approx(25 / 7, abs=1e-9)
    assert r.cos_upper + r.cos_lower == pytest.approx(0.0, abs=1e-12)


def test_all_extrema_sorted_and_stationary(sibi):
    pts = all_extrema(sibi, (0.0, 0.6))
    assert [r.B for r in pts] == sorted(r.B for r in pts)
    for r in pts:
        assert abs(dfdB(sibi, r.transition, sibi.field(r.B))) < 1e-6


def test_x_band_line_list(sibi):
    lines = resonance_fields(sibi, X_BAND, (0.05, 0.6))
    assert len(lines) == 10
    assert max(lines.positions) == pytest.approx(0.566, abs=2e-3)
    for ln in lines:
        f = transition_frequency(sibi, ln.transition, sibi.field(ln.position))
        assert abs(f - X_BAND) < 1e-6
        assert 0 <= ln.intensity <= 1


def test_x_band_highest_line_closed_form(sibi):
    # 10 -> 11: f / A = (R_-4 - 5 + w - w delta) / 2
    d, A = sibi.delta, sibi.A

    def g(w):
        R = math.hypot(-4 + w * (1 + d), 3.0)
        return 0.5 * (R - 5 + w - w * d) - X_BAND / A

    w = brentq(g, 1, 20, xtol=1e-14)
    B = w * A / sibi.gamma_e
    top = max(resonance_fields(sibi, X_BAND, (0.05, 0.6)).positions)
    assert top == pytest.approx(B, abs=1e-9)


def test_double_root_below_clock_frequency(sibi):
    t = Transition.between(sibi, 12, 9)
    lines = resonance_fields(sibi, 5.5, (0.0, 0.6), transitions=[t])
    assert len(lines) == 2
    assert lines.positions[0] < 0.188 < lines.positions[1]
    assert len(resonance_fields(sibi, 5.2, (0.0, 0.6), transitions=[t])) == 0


def test_line_list_serialization(sibi):
    lines = resonance_fields(sibi, X_BAND, (0.05, 0.6))
    text = lines.to_csv().splitlines()
    assert text[0] == "B_T,intensity,from,to,kind"
    assert len(text) == 11
    doc = json.loads(lines.to_json())
    assert doc["f_mw_GHz"] == X_BAND and len(doc["lines"]) == 10


def test_resonance_fields_validation(sibi):
    with pytest.raises(ParameterError):
        resonance_fields(sibi, -1.0)
    with pytest.raises(ParameterError):
        resonance_fields(sibi, X_BAND, (0.5, 0.1))


def test_qubit_report(sibi):
    eq = cancellation_fields(sibi)[4].B
    r = qubit_report(sibi, sibi.field(eq))
    assert r.at_equality and r.equality_field == eq
    assert r.electronic_10_11 == pytest.approx(0.5, abs=1e-12)
    assert r.nuclear_10_9 == pytest.approx(0.5, abs=1e-12)
    hi = qubit_report(sibi, sibi.field(50.0))
    assert hi.nuclear_10_9 < 1e-3 and hi.nuclear_12_11 < 1e-3
    assert hi.electronic_10_11 > 0.999 and hi.electronic_12_9 > 0.999
    with pytest.raises(ParameterError):
        qubit_report(SystemParams.si_p(), sibi.field(0.1))


def test_frequency_array_vectorized(sibi):
    t = Transition.between(sibi, 16, 5)
    B = np.linspace(0, 0.6, 5)
    f = frequency_array(sibi, t, B)
    assert np.allclose(f, [transition_frequency(sibi, t, sibi.field(b)) for b in B], atol=1e-13)
    assert label_of_index(sibi, 16).m - label_of_index(sibi, 5).m == 1
