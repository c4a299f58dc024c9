import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sibi.core import (
    Label,
    all_labels,
    asymptotic_label,
    bloch_cos,
    build_doublet,
    build_full_hamiltonian,
    cos_array,
    diagonalize_full,
    eigenenergy,
    energy_array,
    energy_slope,
    index_of_label,
    label_of_index,
    label_vector,
    level_ordering,
    normalize_label,
    slope_array,
)
from sibi.params import FieldPoint, ParameterError

from conftest import system_params

fields = st.floats(0.0, 6.0)


def dense_oracle(params, field):
    """Kronecker-built Hamiltonian solved by LAPACK, independent of the block code."""
    I = params.I_nuc
    n = params.I2 + 1
    m = I - np.arange(n)
    iz = np.diag(m)
    ip = np.zeros((n, n))
    for k in range(1, n):
        ip[k - 1, k] = math.sqrt(I * (I + 1) - m[k] * (m[k] + 1))
    sz = np.diag([0.5, -0.5])
    sp = np.array([[0.0, 1.0], [0.0, 0.0]])
    w0 = field.omega0
    H = (
        w0 * np.kron(sz, np.eye(n))
        - w0 * params.delta * np.kron(np.eye(2), iz)
        + params.A * (np.kron(sz, iz) + 0.5 * (np.kron(sp, ip.T) + np.kron(sp.T, ip)))
    )
    return np.linalg.eigvalsh(H)


@given(system_params(), fields)
def test_analytic_energies_match_dense_diagonalization(p, B):
    fp = p.field(B)
    analytic = np.sort([eigenenergy(p, lab, fp) for lab in all_labels(p)])
    assert np.max(np.abs(analytic - dense_oracle(p, fp))) < 1e-9 * p.A


@given(system_params(), fields)
def test_block_jacobi_matches_dense(p, B):
    fp = p.field(B)
    E, V = diagonalize_full(build_full_hamiltonian(p, fp))
    assert np.max(np.abs(E - dense_oracle(p, fp))) < 1e-9 * p.A
    assert np.allclose(V.T @ V, np.eye(p.dim), atol=1e-12)


@given(system_params(), fields)
def test_label_vectors_are_eigenvectors(p, B):
    fp = p.field(B)
    H = build_full_hamiltonian(p, fp).matrix
    for lab in all_labels(p):
        v = label_vector(p, lab, fp)
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-14)
        assert np.max(np.abs(H @ v - eigenenergy(p, lab, fp) * v)) < 1e-10 * p.A


@given(system_params(), fields, st.data())
def test_doublet_invariants(p, B, data):
    m = data.draw(st.sampled_from(p.m_values()))
    d = build_doublet(p, m, p.field(B))
    assert d.cos_theta**2 + d.sin_theta**2 == pytest.approx(1.0, abs=1e-14)
    assert d.a_plus**2 + d.b_plus**2 == pytest.approx(1.0, abs=1e-14)
    # the two eigenvectors are orthogonal
    assert d.a_plus * d.b_minus + d.b_plus * d.a_minus == pytest.approx(0.0, abs=1e-14)
    if d.singlet:
        assert (d.cos_theta, d.a_plus, d.b_plus) == (1.0, 1.0, 0.0)
    else:
        assert d.E_plus - d.E_minus == pytest.approx(p.A * d.R, rel=1e-12)
        assert d.a_plus**2 - d.b_plus**2 == pytest.approx(d.cos_theta, abs=1e-13)


def test_zero_field_has_two_multiplets(sibi):
    E = np.array([eigenenergy(sibi, lab, sibi.field(0.0)) for lab in all_labels(sibi)])
    upper = sibi.I_nuc * sibi.A / 2  # F = I + 1/2
    lower = -(sibi.I_nuc + 1) * sibi.A / 2  # F = I - 1/2
    assert np.sum(np.isclose(E, upper, atol=1e-12)) == 11
    assert np.sum(np.isclose(E, lower, atol=1e-12)) == 9


def test_zero_field_cosines_are_m_over_M(sibi):
    p = type(sibi)(delta=0.0)
    for m in p.m_values()[1:-1]:
        assert bloch_cos(p, Label("+", m), p.field(0.0)) == pytest.approx(m / 5, abs=1e-15)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_cancellation_makes_doublet_equal_weight(sibi, k):
    fp = FieldPoint.from_omega0_tilde(sibi, k / (1 + sibi.delta))
    d = build_doublet(sibi, -k, fp)
    assert abs(d.cos_theta) < 1e-14
    assert d.a_plus == pytest.approx(1 / math.sqrt(2), abs=1e-14)


@given(st.floats(1e-4, 6.0))
def test_level_order_is_field_independent(B):
    from sibi.params import SystemParams

    p = SystemParams.si_bi()
    levels = level_ordering(p, p.field(B))
    assert [lv.label for lv in levels] == all_labels(p)
    assert [lv.index for lv in levels] == list(range(1, 21))


def test_level_labels(sibi):
    assert label_of_index(sibi, 10) == Label("singlet", -5.0)
    assert label_of_index(sibi, 20) == Label("singlet", 5.0)
    assert label_of_index(sibi, 1) == Label("-", 4.0)
    assert label_of_index(sibi, 9) == Label("-", -4.0)
    assert label_of_index(sibi, 11) == Label("+", -4.0)
    assert label_of_index(sibi, 12) == Label("+", -3.0)
    for k in range(1, 21):
        assert index_of_label(sibi, label_of_index(sibi, k)) == k
    with pytest.raises(ParameterError):
        label_of_index(sibi, 21)


def test_asymptotic_labels_match_high_field_energies(sibi):
    fp = sibi.field(200.0)
    for lab in all_labels(sibi):
        ms, mi = asymptotic_label(sibi, lab)
        e0 = fp.omega0 * ms - fp.omega0 * sibi.delta * mi + sibi.A * ms * mi
        assert eigenenergy(sibi, lab, fp) == pytest.approx(e0, abs=5e-3 * sibi.A)


def test_normalize_label_rules(sibi):
    assert normalize_label(sibi, ("+", 5)) == Label("singlet", 5.0)
    assert normalize_label(sibi, ("-", -5)) == Label("singlet", -5.0)
    for bad in [("+", -5), ("-", 5), ("+", 6), ("+", 0.5), ("x", 1), ("singlet", 2)]:
        with pytest.raises(ParameterError):
            normalize_label(sibi, bad)


@given(system_params(), st.floats(0.01, 6.0), st.data())
def test_slopes_match_finite_differences(p, B, data):
    lab = data.draw(st.sampled_from(all_labels(p)))
    h = 1e-6
    fd = (eigenenergy(p, lab, p.field(B + h)) - eigenenergy(p, lab, p.field(B - h))) / (2 * h)
    assert energy_slope(p, lab, p.field(B)) == pytest.approx(fd, rel=1e-6, abs=1e-6)


@given(system_params(), st.lists(fields, min_size=1, max_size=8))
def test_vectorized_forms_agree(p, Bs):
    w = np.array(Bs) * p.gamma_e / p.A
    for lab in all_labels(p):
        E = energy_array(p, lab, w)
        S = slope_array(p, lab, w)
        C = cos_array(p, lab, w)
        for k, B in enumerate(Bs):
            fp = p.field(B)
            assert E[k] == pytest.approx(eigenenergy(p, lab, fp), abs=1e-12 * p.A)
            assert S[k] == pytest.approx(energy_slope(p, lab, fp), abs=1e-10)
            assert C[k] == pytest.approx(build_doublet(p, lab.m, fp).cos_theta, abs=1e-14)


def test_unmixed_singlets_are_straight_lines(sibi):
    B = np.linspace(0, 0.6, 7)
    w = B * sibi.gamma_e / sibi.A
    for k in (10, 20):
        E = energy_array(sibi, label_of_index(sibi, k), w)
        assert np.max(np.abs(np.diff(E, 2))) < 1e-12
