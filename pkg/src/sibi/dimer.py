"""Two exchange-coupled donors.

    H = H_1 x 1 + 1 x H_2 + J (S1z S2z + (S1+ S2- + S1- S2+) / 2)

Total M = m_1 + m_2 is conserved, so H is assembled and diagonalized
directly in M blocks (sizes up to 38 for Si:Bi, 400 states in all).
Line intensities are 4 |<f|S1x + S2x|i>|^2 / D: every dimer state carries
population 1/D, so at J = 0 the dimer spectrum is twice the monomer one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, linear_sum_assignment
from scipy.special import roots_legendre

from .core import build_full_hamiltonian, electron_operators, label_vector
from .jacobi import jacobi_eigh
from .params import FieldPoint, ParameterError, SystemParams
from .spectrum import TRUNCATE_SIGMAS, LineShape, SpectrumGrid, ensemble_average, params_digest, synthesize
from .transitions import Line, LineList, Transition, _check_range

TRACK_OVERLAP_MIN = 0.7
DEFAULT_J_NODES = 33


@dataclass(frozen=True)
class DimerBlock:
    M: float
    pairs: np.ndarray  # (n, 2) indices into the monomer product basis
    matrix: np.ndarray


@dataclass(frozen=True)
class DimerSystem:
    params: SystemParams
    J: float
    field: FieldPoint
    blocks: tuple

    @property
    def dim(self) -> int:
        return sum(len(b.pairs) for b in self.blocks)

    def block(self, M: float) -> DimerBlock:
        for b in self.blocks:
            if b.M == M:
                return b
        raise KeyError(M)

    def dense(self) -> np.ndarray:
        """Scatter the blocks into a D^2 x D^2 matrix (index a * D + b)."""
        D = self.params.dim
        H = np.zeros((D * D, D * D))
        for b in self.blocks:
            idx = b.pairs[:, 0] * D + b.pairs[:, 1]
            H[np.ix_(idx, idx)] = b.matrix
        return H


class _Monomer:
    """Single-donor matrices in the product basis, reused across blocks."""

    def __init__(self, params: SystemParams, field: FieldPoint):
        full = build_full_hamiltonian(params, field)
        self.H = full.matrix
        self.m = full.block_m
        sz, sp = electron_operators(params)
        self.sz = np.diag(sz).copy()
        self.sp = sp
        self.sx = 0.5 * (sp + sp.T)


def block_pairs(params: SystemParams) -> dict:
    """Pairs (a, b) of monomer basis states grouped by total M, ascending."""
    from .core import product_basis

    m = np.array([ms + mi for ms, mi in product_basis(params)])
    D = len(m)
    groups: dict = {}
    for a in range(D):
        for b in range(D):
            groups.setdefault(float(m[a] + m[b]), []).append((a, b))
    return {M: np.array(groups[M]) for M in sorted(groups)}


def _block_matrix(mono: _Monomer, J: float, pairs: np.ndarray) -> np.ndarray:
    ia, ib = pairs[:, 0], pairs[:, 1]
    sa = ia[:, None] == ia[None, :]
    sb = ib[:, None] == ib[None, :]
    H = mono.H[np.ix_(ia, ia)] * sb + sa * mono.H[np.ix_(ib, ib)]
    if J:
        sp, sm = mono.sp, mono.sp.T
        flip = sp[np.ix_(ia, ia)] * sm[np.ix_(ib, ib)] + sm[np.ix_(ia, ia)] * sp[np.ix_(ib, ib)]
        H = H + J * np.diag(mono.sz[ia] * mono.sz[ib]) + 0.5 * J * flip
    return H


def build_dimer(params: SystemParams, J: float, field: FieldPoint) -> DimerSystem:
    if not math.isfinite(J):
        raise ParameterError(f"exchange coupling must be finite, got {J}")
    mono = _Monomer(params, field)
    blocks = tuple(
        DimerBlock(M, pairs, _block_matrix(mono, J, pairs))
        for M, pairs in block_pairs(params).items()
    )
    return DimerSystem(params, float(J), field, blocks)


def dense_dimer_hamiltonian(params: SystemParams, J: float, field: FieldPoint) -> np.ndarray:
    """Kronecker-product assembly of the full dimer matrix (independent of the blocks)."""
    H1 = build_full_hamiltonian(params, field).matrix
    sz, sp = electron_operators(params)
    e = np.eye(params.dim)
    return (
        np.kron(H1, e)
        + np.kron(e, H1)
        + J * (np.kron(sz, sz) + 0.5 * (np.kron(sp, sp.T) + np.kron(sp.T, sp)))
    )


def dimer_eigen(system: DimerSystem) -> dict:
    """Per-block ``(energies, vectors)`` from the Jacobi solver, keyed by M."""
    return {b.M: jacobi_eigh(b.matrix) for b in system.blocks}


def _cross_operator(op: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """<(a',b')| op x 1 + 1 x op |(a,b)> between two blocks."""
    ra, rb = rows[:, 0], rows[:, 1]
    ca, cb = cols[:, 0], cols[:, 1]
    return op[np.ix_(ra, ca)] * (rb[:, None] == cb[None, :]) + (ra[:, None] == ca[None, :]) * op[np.ix_(rb, cb)]


def _transition_blocks(system: DimerSystem, op: np.ndarray | None = None):
    """Yield (M, M+1, X) with X the S1x + S2x (or ``op``) matrix from block M to M+1."""
    if op is None:
        _, sp = electron_operators(system.params)
        op = 0.5 * (sp + sp.T)
    blocks = {b.M: b for b in system.blocks}
    for M in sorted(blocks):
        if M + 1 in blocks:
            yield M, M + 1, _cross_operator(op, blocks[M + 1].pairs, blocks[M].pairs)


def stick_spectrum(system: DimerSystem, op: np.ndarray | None = None, eig: dict | None = None):
    """All delta M = +1 dimer transitions: arrays (frequency, intensity, labels).

    Frequencies are |E_f - E_i| in GHz; labels are ('M:k', 'M+1:k') strings
    with k the energy rank inside the block.
    """
    eig = eig or dimer_eigen(system)
    D = system.params.dim
    freqs, ints, src, dst = [], [], [], []
    for M0, M1, X in _transition_blocks(system, op):
        (e0, v0), (e1, v1) = eig[M0], eig[M1]
        amp = v1.T @ X @ v0
        inten = 4 * amp * amp / D
        df = np.abs(e1[:, None] - e0[None, :])
        r, c = np.indices(inten.shape)
        freqs.append(df.ravel())
        ints.append(inten.ravel())
        src.extend(f"{_fmt(M0)}:{k}" for k in c.ravel())
        dst.extend(f"{_fmt(M1)}:{k}" for k in r.ravel())
    return np.concatenate(freqs), np.concatenate(ints), src, dst


def _fmt(M: float) -> str:
    return str(int(M)) if float(M).is_integer() else f"{int(round(2 * M))}/2"


def dimer_lines_at_field(
    params: SystemParams,
    J: float,
    B: float,
    f_range=None,
    min_intensity: float = 1e-12,
) -> LineList:
    """Frequency-domain line list of the dimer at fixed field B."""
    system = build_dimer(params, J, params.field(B))
    f, inten, src, dst = stick_spectrum(system)
    keep = inten > min_intensity
    if f_range is not None:
        keep &= (f >= f_range[0]) & (f <= f_range[1])
    order = np.lexsort((f, ~keep))[: int(keep.sum())]
    lines = [Line(float(f[k]), float(inten[k]), src[k], dst[k], "dimer") for k in order]
    return LineList(lines, B=float(B), axis="frequency", metadata={"J_GHz": float(J)})


def monitored_line(params: SystemParams, J: float, B: float, transition: Transition) -> LineList:
    """Dimer sub-lines descending from one monomer transition, at fixed field.

    Each dimer transition is weighted by 4 |<f|X_t|i>|^2 / D where X_t is the
    part of S1x + S2x that connects the two monomer levels of ``transition``.
    At J = 0 all weight sits at the monomer frequency; the total weight is
    independent of J.
    """
    system = build_dimer(params, J, params.field(B))
    f, inten, src, dst = stick_spectrum(system, _operator_source(params, transition)(B))
    keep = np.flatnonzero(inten > 1e-14)
    keep = keep[np.argsort(f[keep], kind="stable")]
    lines = [Line(float(f[k]), float(inten[k]), src[k], dst[k], "dimer") for k in keep]
    return LineList(lines, B=float(B), axis="frequency", metadata={"J_GHz": float(J)})


def splitting(lines: LineList, coverage: float = 0.5) -> float:
    """Width of the central interval holding ``coverage`` of the line weight.

    For a symmetric pair of equal lines this is their separation, for a
    single line it is zero. Weak satellites far from the main lines do not
    affect it as long as their total weight stays below (1 - coverage) / 2
    on either side.
    """
    if not 0 < coverage < 1:
        raise ValueError("coverage must lie in (0, 1)")
    x, w = lines.positions, lines.intensities
    if len(x) == 0 or w.sum() <= 0:
        return 0.0
    order = np.argsort(x, kind="stable")
    x, c = x[order], np.cumsum(w[order]) / w.sum()
    lo = x[np.searchsorted(c, (1 - coverage) / 2)]
    hi = x[min(np.searchsorted(c, (1 + coverage) / 2), len(x) - 1)]
    return float(hi - lo)


# ------------------------------------------------------- field-swept lines


@dataclass
class _Tracked:
    B: np.ndarray
    energies: dict  # M -> (G, n)
    slopes: dict  # M -> (G, n), dE/dB in GHz/T
    vectors: dict  # M -> list of (n, n) per grid point, columns tracked
    min_overlap: dict  # M -> float


def _zeeman_diag(params: SystemParams, pairs: np.ndarray) -> np.ndarray:
    """dH/dB of a dimer block; diagonal in the product basis."""
    from .core import product_basis

    d = np.array([params.gamma_e * (ms - params.delta * mi) for ms, mi in product_basis(params)])
    return d[pairs[:, 0]] + d[pairs[:, 1]]


class _BlockFamily:
    """Dimer blocks as affine functions of field: H_M(B) = H_M(0) + B diag(dz_M)."""

    def __init__(self, params: SystemParams, J: float):
        self.pairs = block_pairs(params)
        mono = _Monomer(params, params.field(0.0))
        self.base = {M: _block_matrix(mono, J, p) for M, p in self.pairs.items()}
        self.dz = {M: _zeeman_diag(params, p) for M, p in self.pairs.items()}

    def matrix(self, M: float, B: float) -> np.ndarray:
        h = self.base[M].copy()
        h[np.diag_indices_from(h)] += B * self.dz[M]
        return h

    def eigh(self, M: float, B: float, basis: np.ndarray | None = None):
        return jacobi_eigh(self.matrix(M, B), basis=basis)


def _track(family: _BlockFamily, grid: np.ndarray) -> _Tracked:
    Ms = sorted(family.pairs)
    pairs, dz = family.pairs, family.dz
    energies = {M: np.empty((len(grid), len(pairs[M]))) for M in Ms}
    slopes = {M: np.empty((len(grid), len(pairs[M]))) for M in Ms}
    vectors = {M: [] for M in Ms}
    min_ov = {M: 1.0 for M in Ms}
    for k, B in enumerate(grid):
        for M in Ms:
            prev = vectors[M][-1] if k else None
            e, v = family.eigh(M, B, prev)
            if k:
                ov = np.abs(prev.T @ v)
                row, col = linear_sum_assignment(-ov)
                perm = col[np.argsort(row)]
                e, v = e[perm], v[:, perm]
                min_ov[M] = min(min_ov[M], float(ov[np.arange(len(perm)), perm].min()))
                # fix signs so tracked vectors vary continuously
                v = v * np.where(np.sum(prev * v, axis=0) < 0, -1.0, 1.0)
            energies[M][k] = e
            slopes[M][k] = dz[M] @ (v * v)
            vectors[M].append(v)
    return _Tracked(grid, energies, slopes, vectors, min_ov)


def _solve_pair(family: _BlockFamily, M0, M1, B, ref0, ref1, basis0=None, basis1=None):
    """Energies and vectors of the states best overlapping the references."""
    e0, v0 = family.eigh(M0, B, basis0)
    e1, v1 = family.eigh(M1, B, basis1)
    k0 = int(np.argmax(np.abs(ref0 @ v0)))
    k1 = int(np.argmax(np.abs(ref1 @ v1)))
    return e0[k0], v0[:, k0], e1[k1], v1[:, k1]


def _hermite_root(a, b, ga, gb, sa, sb):
    """Root of the cubic Hermite interpolant of g on [a, b] (g(a) g(b) <= 0)."""
    h = b - a

    def p(x):
        t = (x - a) / h
        t2, t3 = t * t, t * t * t
        return (2 * t3 - 3 * t2 + 1) * ga + (t3 - 2 * t2 + t) * h * sa + (-2 * t3 + 3 * t2) * gb + (t3 - t2) * h * sb

    return brentq(p, a, b, xtol=1e-15 * max(1.0, abs(b)))


def dimer_lines(
    params: SystemParams,
    J: float,
    f_mw: float,
    B_range,
    points: int = 241,
    min_intensity: float = 1e-5,
    xtol: float = 1e-8,
    transition: Transition | None = None,
) -> LineList:
    """Field-swept dimer line list at microwave frequency ``f_mw``.

    Eigenstates are followed across a uniform field grid by maximal-overlap
    matching. Every tracked pair whose |E_f - E_i| crosses f_mw between grid
    points is refined on the re-diagonalized pair: a cubic Hermite estimate
    (exact Hellmann-Feynman slopes) is confirmed by a sign change across
    +-xtol, with a bracketing solve over the whole interval as fallback.
    Lines from blocks where a matched overlap fell below 0.7 are flagged
    'crossing'.

    With ``transition`` the lines are weighted by the part of S1x + S2x
    connecting that monomer pair (see ``monitored_line``).
    """
    if not (math.isfinite(f_mw) and f_mw > 0):
        raise ParameterError(f"microwave frequency must be positive, got {f_mw}")
    lo, hi = _check_range(B_range)
    grid = np.linspace(lo, hi, points)
    family = _BlockFamily(params, J)
    tr = _track(family, grid)
    pairs = family.pairs
    op_at = _operator_source(params, transition)
    D = params.dim
    lines = []
    for M0 in sorted(tr.energies):
        M1 = M0 + 1
        if M1 not in tr.energies:
            continue
        cross_at = lambda B: _cross_operator(op_at(B), pairs[M1], pairs[M0])  # noqa: E731
        X0 = cross_at(grid[0])
        if transition is None:
            Xs = [X0] * points
        else:
            Xs = [cross_at(B) for B in grid]
        inten = np.array([4 * (tr.vectors[M1][k].T @ Xs[k] @ tr.vectors[M0][k]) ** 2 / D for k in range(points)])
        dE = tr.energies[M1][:, :, None] - tr.energies[M0][:, None, :]
        sgn = np.where(dE >= 0, 1.0, -1.0)
        diff = np.abs(dE) - f_mw
        dslope = sgn * (tr.slopes[M1][:, :, None] - tr.slopes[M0][:, None, :])
        cross = np.sign(diff[:-1]) * np.sign(diff[1:]) <= 0
        flag = "crossing" if min(tr.min_overlap[M0], tr.min_overlap[M1]) < TRACK_OVERLAP_MIN else ""
        found = []
        for k, i1, i0 in zip(*np.nonzero(cross)):
            if diff[k, i1, i0] == 0 and k > 0:
                continue  # counted in the previous interval
            if max(inten[k, i1, i0], inten[k + 1, i1, i0]) < min_intensity:
                continue
            V0, V1 = tr.vectors[M0][k], tr.vectors[M1][k]
            ref0, ref1 = V0[:, i0], V1[:, i1]

            def g(B):
                e0, u0, e1, u1 = _solve_pair(family, M0, M1, B, ref0, ref1, V0, V1)
                return abs(e1 - e0) - f_mw, u0, u1

            a, b = grid[k], grid[k + 1]
            B0, u0, u1 = _refine(g, a, b, diff[k, i1, i0], diff[k + 1, i1, i0], dslope[k, i1, i0], dslope[k + 1, i1, i0], xtol)
            X = Xs[k] if transition is None else cross_at(B0)
            I0 = float(4 * (u1 @ X @ u0) ** 2 / D)
            found.append((float(B0), I0, i0, i1, ref0, ref1))
        lines.extend(_merge_degenerate(family, M0, M1, found, cross_at, D, flag, 10 * xtol))
    lines.sort(key=lambda ln: (ln.position, ln.source, ln.target))
    meta = {"J_GHz": float(J), "B_range_T": [lo, hi], "grid_points": points}
    if transition is not None:
        meta["monitored"] = transition.name(params)
    return LineList(lines, f_mw=float(f_mw), axis="field", metadata=meta)


def _merge_degenerate(family, M0, M1, found, cross_at, D, flag, btol, etol=1e-9):
    """Lines between degenerate levels, summed over the degenerate subspaces.

    Inside a degenerate subspace the eigenvector basis is arbitrary, so only
    the total intensity between two subspaces is meaningful. Each such
    group is emitted as a single line flagged 'degenerate'; other lines
    pass through unchanged.
    """
    out, done = [], set()
    order = sorted(range(len(found)), key=lambda n: found[n][0])
    for pos, n in enumerate(order):
        if n in done:
            continue
        cluster = [n]
        for m in order[pos + 1 :]:
            if found[m][0] - found[n][0] > btol:
                break
            cluster.append(m)
        B = float(np.mean([found[m][0] for m in cluster]))
        e0, v0 = family.eigh(M0, B)
        e1, v1 = family.eigh(M1, B)

        def group(e, k):
            return tuple(np.flatnonzero(np.abs(e - e[k]) <= etol * max(1.0, abs(e[k]))))

        keys = {}
        for m in cluster:
            _, _, _, _, ref0, ref1 = found[m]
            g0 = group(e0, int(np.argmax(np.abs(ref0 @ v0))))
            g1 = group(e1, int(np.argmax(np.abs(ref1 @ v1))))
            keys.setdefault((g0, g1), []).append(m)
        X = cross_at(B)
        for (g0, g1), members in keys.items():
            if len(g0) == 1 and len(g1) == 1:
                continue
            amp = v1[:, list(g1)].T @ X @ v0[:, list(g0)]
            total = float(4 * np.sum(amp * amp) / D)
            src = "+".join(str(found[m][2]) for m in sorted(members, key=lambda m: found[m][2]))
            dst = "+".join(str(found[m][3]) for m in sorted(members, key=lambda m: found[m][3]))
            B_line = float(np.mean([found[m][0] for m in members]))
            out.append(Line(B_line, total, f"{_fmt(M0)}:{src}", f"{_fmt(M1)}:{dst}", "dimer", flag or "degenerate"))
            done.update(members)
        for m in cluster:
            if m not in done:
                Bm, I0, i0, i1, _, _ = found[m]
                out.append(Line(Bm, I0, f"{_fmt(M0)}:{i0}", f"{_fmt(M1)}:{i1}", "dimer", flag))
                done.add(m)
    return out


def _refine(g, a, b, ga, gb, sa, sb, xtol):
    """Root of g in [a, b] to within xtol; returns (B, u0, u1) with the
    eigenvectors from the evaluation nearest the root."""
    if ga == 0 or gb == 0:
        B = a if ga == 0 else b
        return (B, *g(B)[1:])
    r = _hermite_root(a, b, ga, gb, sa, sb)
    lo, hi = max(a, r - xtol), min(b, r + xtol)
    vlo, vhi = g(lo), g(hi)
    if vlo[0] == 0 or vhi[0] == 0 or np.sign(vlo[0]) != np.sign(vhi[0]):
        t = 0.0 if vlo[0] == vhi[0] else vlo[0] / (vlo[0] - vhi[0])
        B = lo + t * (hi - lo)
        near = vlo if t <= 0.5 else vhi
        return (B, *near[1:])
    B = brentq(lambda x: g(x)[0], a, b, xtol=xtol)
    return (B, *g(B)[1:])


def _operator_source(params: SystemParams, transition: Transition | None):
    """Field -> single-donor operator used for line weights."""
    _, sp = electron_operators(params)
    sx = 0.5 * (sp + sp.T)
    if transition is None:
        return lambda B: sx

    def op(B):
        fp = params.field(B)
        u = label_vector(params, transition.from_level, fp)
        w = label_vector(params, transition.to_level, fp)
        x = float(w @ sx @ u)
        return x * (np.outer(w, u) + np.outer(u, w))

    return op


# ------------------------------------------------------------ J ensembles


@dataclass(frozen=True)
class JDistribution:
    """Gaussian distribution of J (GHz) truncated to J >= 0."""

    mean: float = 0.3
    sigma: float = 0.3
    nodes: int = DEFAULT_J_NODES

    def __post_init__(self):
        if not (math.isfinite(self.mean) and math.isfinite(self.sigma)) or self.sigma < 0:
            raise ParameterError("J distribution needs finite mean and sigma >= 0")
        if self.nodes < 1:
            raise ParameterError("at least one quadrature node is required")
        if self.sigma == 0 and self.mean < 0:
            raise ParameterError("a sharp J distribution must have mean >= 0")

    def quadrature(self) -> tuple[np.ndarray, np.ndarray]:
        """Gauss-Legendre nodes on [max(0, mean - 6 sigma), mean + 6 sigma],
        weighted by the Gaussian density and renormalized."""
        if self.sigma == 0:
            return np.array([float(self.mean)]), np.array([1.0])
        lo = max(0.0, self.mean - 6 * self.sigma)
        hi = self.mean + 6 * self.sigma
        if hi <= 0:
            raise ParameterError("J distribution has no mass at J >= 0")
        x, w = roots_legendre(self.nodes)
        J = lo + (hi - lo) * (x + 1) / 2
        w = w * (hi - lo) / 2 * np.exp(-0.5 * ((J - self.mean) / self.sigma) ** 2)
        return J, w / w.sum()


def dimer_spectrum(
    params: SystemParams,
    J: float,
    f_mw: float,
    axis,
    shape: LineShape = LineShape(),
    mode: str = "absorption",
    grid_step: float = 5e-4,
) -> SpectrumGrid:
    """Field-swept spectrum of a pair with exchange J on ``axis``.

    Lines are searched on a tracking grid of spacing ``grid_step`` (T) that
    covers the axis plus the lineshape tails.
    """
    axis = np.asarray(axis, dtype=float)
    pad = TRUNCATE_SIGMAS * shape.sigma_on("field")
    B_range = (max(0.0, axis[0] - pad), axis[-1] + pad)
    points = max(11, int(math.ceil((B_range[1] - B_range[0]) / grid_step)) + 1)
    lines = dimer_lines(params, J, f_mw, B_range, points=points).select(*B_range)
    return synthesize(lines, axis, shape, mode, warn_clipped=False)


def ensemble_spectrum(
    params: SystemParams,
    dist: JDistribution,
    f_mw: float,
    axis,
    shape: LineShape = LineShape(),
    mode: str = "absorption",
    grid_step: float = 5e-4,
) -> SpectrumGrid:
    """Field-swept spectrum averaged over the J distribution (nodes in fixed order)."""
    Js, ws = dist.quadrature()
    spectra = [dimer_spectrum(params, J, f_mw, axis, shape, mode, grid_step) for J in Js]
    out = ensemble_average(spectra, ws)
    for key in _PER_NODE_KEYS:
        out.metadata.pop(key, None)
    out.metadata.update(_ensemble_meta(params, dist, shape, f_mw_GHz=f_mw))
    return out


def ensemble_spectrum_at_field(
    params: SystemParams,
    dist: JDistribution,
    B: float,
    axis,
    shape: LineShape = LineShape(),
    mode: str = "absorption",
    transition: Transition | None = None,
) -> SpectrumGrid:
    """Frequency-swept spectrum at fixed field averaged over the J distribution.

    With ``transition`` only the sub-lines descending from that monomer line
    are included (see ``monitored_line``).
    """
    axis = np.asarray(axis, dtype=float)
    Js, ws = dist.quadrature()
    pad = TRUNCATE_SIGMAS * shape.sigma_on("frequency", params.gamma_e)
    spectra = []
    for J in Js:
        if transition is None:
            lines = dimer_lines_at_field(params, J, B)
        else:
            lines = monitored_line(params, J, B, transition)
        lines = lines.select(axis[0] - pad, axis[-1] + pad)
        spectra.append(synthesize(lines, axis, shape, mode, gamma_e=params.gamma_e, warn_clipped=False))
    out = ensemble_average(spectra, ws)
    for key in _PER_NODE_KEYS:
        out.metadata.pop(key, None)
    out.metadata.update(_ensemble_meta(params, dist, shape, B_T=B))
    if transition is not None:
        out.metadata["monitored"] = transition.name(params)
    return out


_PER_NODE_KEYS = ("J_GHz", "B_range_T", "grid_points", "clipped")


def _ensemble_meta(params, dist, shape, **extra) -> dict:
    meta = {
        "J_mean_GHz": dist.mean,
        "J_sigma_GHz": dist.sigma,
        "J_nodes": dist.nodes,
        "fwhm_mT": shape.fwhm_mT,
        "params_digest": params_digest(params),
    }
    meta.update(extra)
    return meta
