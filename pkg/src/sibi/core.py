"""Analytic doublet solution, level labels and the full product-basis Hamiltonian.

Because total m = m_s + m_I is conserved, the 2(2I+1) states split into
2x2 doublets ``{|+1/2, m-1/2>, |-1/2, m+1/2>}`` for |m| < I + 1/2 and two
unmixed singlets at m = +-(I + 1/2). Each doublet is a pseudo-spin in a field

    h_m = (A/2) [ x sigma_z + sqrt(M^2 - m^2) sigma_x - (1/2 + 2 m delta w) ]

with ``x = m + w (1 + delta)``, ``w = omega0 / A`` and ``M = I + 1/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .jacobi import check_symmetric, jacobi_eigh
from .params import FieldPoint, ParameterError, SystemParams

DEGENERACY_TOL = 1e-12  # relative to A


class Label(NamedTuple):
    """Adiabatic label (branch, m); branch is '+', '-' or 'singlet'."""

    branch: str
    m: float

    def __str__(self):
        return f"{self.branch},{_fmt_m(self.m)}"


def _fmt_m(m: float) -> str:
    return str(int(m)) if float(m).is_integer() else f"{int(round(2 * m))}/2"


def _check_m(params: SystemParams, m: float) -> float:
    m = float(m)
    k = m + params.m_max
    if abs(m) > params.m_max or abs(k - round(k)) > 1e-12:
        raise ParameterError(
            f"m = {m} is not an allowed total projection for I = {params.I_nuc}"
        )
    return float(round(k) - params.m_max)


def normalize_label(params: SystemParams, label) -> Label:
    """Accept ``(branch, m)`` tuples; singlets may be given with any branch."""
    branch, m = label
    m = _check_m(params, m)
    if abs(m) == params.m_max:
        if branch not in ("+", "-", "singlet"):
            raise ParameterError(f"bad branch {branch!r}")
        if branch == "+" and m < 0 or branch == "-" and m > 0:
            raise ParameterError(f"no ({branch}, {m}) state: |m| = I + 1/2 is a singlet")
        return Label("singlet", m)
    if branch not in ("+", "-"):
        raise ParameterError(f"doublet state needs branch '+' or '-', got {branch!r}")
    return Label(branch, m)


def effective_branch(label: Label) -> str:
    """Branch a singlet plays in the doublet formulas: +M acts as '+', -M as '-'."""
    if label.branch == "singlet":
        return "+" if label.m > 0 else "-"
    return label.branch


def asymptotic_label(params: SystemParams, label: Label) -> tuple[float, float]:
    """High-field product state (m_s, m_I) that the level connects to."""
    if effective_branch(label) == "+":
        return 0.5, label.m - 0.5
    return -0.5, label.m + 0.5


def all_labels(params: SystemParams) -> list[Label]:
    """Every level in canonical (high-field energy) order, lowest first."""
    M = params.m_max
    lower = [Label("-", m) for m in reversed(params.m_values()) if abs(m) < M]
    upper = [Label("+", m) for m in params.m_values() if abs(m) < M]
    return lower + [Label("singlet", -M)] + upper + [Label("singlet", M)]


@dataclass(frozen=True)
class BlochDoublet:
    """Solution of one m-subspace.

    Eigenvectors in the basis (|+1/2, m-1/2>, |-1/2, m+1/2>):
    ``|+,m> = a_plus |+1/2,m-1/2> + b_plus |-1/2,m+1/2>`` and
    ``|-,m> = a_minus |-1/2,m+1/2> + b_minus |+1/2,m-1/2>``.
    For singlets cos_theta = 1, a = 1, b = 0 and E_plus = E_minus.
    """

    m: float
    R: float
    cos_theta: float
    sin_theta: float
    a_plus: float
    b_plus: float
    a_minus: float
    b_minus: float
    E_plus: float
    E_minus: float
    singlet: bool = False

    @property
    def theta(self) -> float:
        return math.atan2(self.sin_theta, self.cos_theta)


def singlet_energy(params: SystemParams, m: float, field: FieldPoint) -> float:
    s = 1.0 if m > 0 else -1.0
    I = params.I_nuc
    return s * field.omega0 / 2 - s * I * field.omega0 * params.delta + I * params.A / 2


def build_doublet(params: SystemParams, m: float, field: FieldPoint) -> BlochDoublet:
    m = _check_m(params, m)
    A, d, w = params.A, params.delta, field.omega0_tilde
    x = m + w * (1 + d)
    shift = -0.5 * (1 + 4 * w * m * d)
    if abs(m) == params.m_max:
        E = singlet_energy(params, m, field)
        return BlochDoublet(m, abs(x), 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, E, E, singlet=True)
    s = math.sqrt(params.m_max**2 - m * m)
    R = math.hypot(x, s)
    c, sn = x / R, s / R
    # take the larger half-angle factor from its square root and the smaller
    # from sin(theta) = 2ab, so neither suffers cancellation as |c| -> 1
    if c >= 0:
        a = math.sqrt((1 + c) / 2)
        b = sn / (2 * a)
    else:
        b = math.sqrt((1 - c) / 2)
        a = sn / (2 * b)
    return BlochDoublet(
        m, R, c, sn, a, b, a, -b,
        A / 2 * (shift + R),
        A / 2 * (shift - R),
    )


def eigenenergy(params: SystemParams, level, field: FieldPoint) -> float:
    """Energy (GHz) of a level given by its adiabatic label."""
    label = normalize_label(params, level)
    if label.branch == "singlet":
        return singlet_energy(params, label.m, field)
    dbl = build_doublet(params, label.m, field)
    return dbl.E_plus if label.branch == "+" else dbl.E_minus


def bloch_cos(params: SystemParams, label: Label, field: FieldPoint) -> float:
    return build_doublet(params, label.m, field).cos_theta


def energy_slope(params: SystemParams, level, field: FieldPoint) -> float:
    """dE/dB in GHz/T, from dR/dw = (1 + delta) cos(theta)."""
    label = normalize_label(params, level)
    A, d, g = params.A, params.delta, params.gamma_e
    if label.branch == "singlet":
        s = 1.0 if label.m > 0 else -1.0
        return g * s * (0.5 - params.I_nuc * d)
    c = bloch_cos(params, label, field)
    sign = 1.0 if label.branch == "+" else -1.0
    dE_dw = A / 2 * (-2 * label.m * d + sign * (1 + d) * c)
    return dE_dw * g / A


# ---------------------------------------------------------------- full matrix


def spin_matrices(j: float):
    """(jz, j+) for spin j in the basis m = j, j-1, ..., -j."""
    n = int(round(2 * j)) + 1
    m = j - np.arange(n)
    jz = np.diag(m)
    jp = np.zeros((n, n))
    for k in range(1, n):
        jp[k - 1, k] = math.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    return jz, jp


@dataclass(frozen=True)
class FullHamiltonian:
    """Dense Hamiltonian in the product basis |m_s, m_I> (m_s major)."""

    matrix: np.ndarray
    basis: tuple  # ((m_s, m_I), ...)
    block_m: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def product_basis(params: SystemParams):
    I = params.I_nuc
    return tuple((ms, I - k) for ms in (0.5, -0.5) for k in range(params.I2 + 1))


def electron_operators(params: SystemParams):
    """(Sz, S+) on the full monomer space."""
    sz, sp = spin_matrices(0.5)
    e = np.eye(params.I2 + 1)
    return np.kron(sz, e), np.kron(sp, e)


def build_full_hamiltonian(params: SystemParams, field: FieldPoint) -> FullHamiltonian:
    sz, sp = spin_matrices(0.5)
    iz, ip = spin_matrices(params.I_nuc)
    es, ei = np.eye(2), np.eye(params.I2 + 1)
    w0 = field.omega0
    sdoti = np.kron(sz, iz) + 0.5 * (np.kron(sp, ip.T) + np.kron(sp.T, ip))
    H = w0 * np.kron(sz, ei) - w0 * params.delta * np.kron(es, iz) + params.A * sdoti
    basis = product_basis(params)
    block_m = np.array([ms + mi for ms, mi in basis])
    return FullHamiltonian(H, basis, block_m)


def diagonalize_full(H) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors (columns) of a Hamiltonian.

    A ``FullHamiltonian`` is solved block by block in its conserved-m
    subspaces; a bare symmetric array is solved as a single dense block.
    """
    if isinstance(H, FullHamiltonian):
        mat, blocks = H.matrix, H.block_m
    else:
        mat = np.asarray(H, dtype=float)
        blocks = np.zeros(mat.shape[0])
    check_symmetric(mat)
    n = mat.shape[0]
    energies = np.empty(n)
    vectors = np.zeros((n, n))
    col = 0
    for m in np.unique(blocks):
        idx = np.flatnonzero(blocks == m)
        w, v = jacobi_eigh(mat[np.ix_(idx, idx)])
        k = len(idx)
        energies[col:col + k] = w
        vectors[idx, col:col + k] = v
        col += k
    order = np.argsort(energies, kind="stable")
    return energies[order], vectors[:, order]


def label_vector(params: SystemParams, level, field: FieldPoint) -> np.ndarray:
    """Analytic eigenvector of a labelled level in the product basis."""
    label = normalize_label(params, level)
    basis = product_basis(params)
    index = {b: i for i, b in enumerate(basis)}
    vec = np.zeros(len(basis))
    m = label.m
    if label.branch == "singlet":
        vec[index[asymptotic_label(params, label)]] = 1.0
        return vec
    dbl = build_doublet(params, m, field)
    up, dn = index[(0.5, m - 0.5)], index[(-0.5, m + 0.5)]
    if label.branch == "+":
        vec[up], vec[dn] = dbl.a_plus, dbl.b_plus
    else:
        vec[dn], vec[up] = dbl.a_minus, dbl.b_minus
    return vec


# ---------------------------------------------------------------- level order


@dataclass(frozen=True)
class EigenLevel:
    """One level with its three labellings at a given field."""

    index: int  # 1..D by increasing energy
    label: Label
    m_s: float
    m_I: float
    energy: float
    degenerate: bool = False

    @property
    def branch(self) -> str:
        return self.label.branch

    @property
    def m(self) -> float:
        return self.label.m


def level_ordering(params: SystemParams, field: FieldPoint) -> list[EigenLevel]:
    """Levels sorted by energy; exact ties fall back to canonical order and are flagged."""
    labels = all_labels(params)
    E = np.array([eigenenergy(params, lab, field) for lab in labels])
    order = sorted(range(len(labels)), key=lambda k: (E[k], k))
    tol = DEGENERACY_TOL * params.A
    sorted_E = E[order]
    levels = []
    for pos, k in enumerate(order):
        near = (pos > 0 and sorted_E[pos] - sorted_E[pos - 1] <= tol) or (
            pos + 1 < len(order) and sorted_E[pos + 1] - sorted_E[pos] <= tol
        )
        ms, mi = asymptotic_label(params, labels[k])
        levels.append(EigenLevel(pos + 1, labels[k], ms, mi, float(E[k]), bool(near)))
    return levels


def label_of_index(params: SystemParams, index: int) -> Label:
    """Adiabatic label of level |index> (1-based) for any B > 0."""
    labels = all_labels(params)
    if not 1 <= index <= len(labels):
        raise ParameterError(f"level index must be in 1..{len(labels)}, got {index}")
    return labels[index - 1]


def index_of_label(params: SystemParams, level) -> int:
    return all_labels(params).index(normalize_label(params, level)) + 1


# ------------------------------------------------------ vectorized over field


def cos_array(params: SystemParams, level, w) -> np.ndarray:
    """cos(theta) of a level's doublet for an array of rescaled fields w."""
    label = normalize_label(params, level)
    w = np.asarray(w, dtype=float)
    if label.branch == "singlet":
        return np.ones_like(w)
    x = label.m + w * (1 + params.delta)
    return x / np.hypot(x, math.sqrt(params.m_max**2 - label.m**2))


def energy_array(params: SystemParams, level, w) -> np.ndarray:
    """Energies (GHz) of a level for an array of rescaled fields w."""
    label = normalize_label(params, level)
    w = np.asarray(w, dtype=float)
    A, d = params.A, params.delta
    if label.branch == "singlet":
        s = 1.0 if label.m > 0 else -1.0
        return A * w * (s / 2 - s * params.I_nuc * d) + params.I_nuc * A / 2
    m = label.m
    x = m + w * (1 + d)
    R = np.hypot(x, math.sqrt(params.m_max**2 - m * m))
    sign = 1.0 if label.branch == "+" else -1.0
    return A / 2 * (-0.5 * (1 + 4 * w * m * d) + sign * R)


def slope_array(params: SystemParams, level, w) -> np.ndarray:
    """dE/dB (GHz/T) of a level for an array of rescaled fields w."""
    label = normalize_label(params, level)
    w = np.asarray(w, dtype=float)
    d, g = params.delta, params.gamma_e
    if label.branch == "singlet":
        s = 1.0 if label.m > 0 else -1.0
        return np.full_like(w, g * s * (0.5 - params.I_nuc * d))
    sign = 1.0 if label.branch == "+" else -1.0
    c = cos_array(params, label, w)
    return g / 2 * (-2 * label.m * d + sign * (1 + d) * c)
