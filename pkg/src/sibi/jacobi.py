"""Cyclic Jacobi eigensolver for small dense real symmetric matrices.

Used for every block diagonalization in the package (monomer m-blocks of
size <= 2, dimer blocks up to 38 x 38). Deterministic: the rotation order is
fixed, so identical input gives bitwise-identical output.
"""

from __future__ import annotations

import numpy as np
from numba import njit

SYMMETRY_RTOL = 1e-12


@njit(cache=True)
def _cyclic_jacobi(a, tol, max_sweeps):
    n = a.shape[0]
    v = np.eye(n)
    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += a[i, j] * a[i, j]
    if fro == 0.0:
        return np.zeros(n), v, 0
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        if off <= tol * tol * fro:
            return np.diag(a).copy(), v, sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    return np.diag(a).copy(), v, max_sweeps


def check_symmetric(a: np.ndarray) -> None:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = max(np.abs(a).max(initial=0.0), 1.0)
    if np.abs(a - a.T).max(initial=0.0) > SYMMETRY_RTOL * scale:
        raise ValueError("matrix is not symmetric")


def jacobi_eigh(a: np.ndarray, tol: float = 1e-15, max_sweeps: int = 60, basis: np.ndarray | None = None):
    """Eigen-decomposition of a real symmetric matrix.

    Returns ``(w, v)`` with eigenvalues ascending and orthonormal eigenvectors
    in the columns of ``v``, as ``numpy.linalg.eigh`` does.

    ``basis`` is an optional orthogonal matrix of approximate eigenvectors
    (say from a neighbouring field point); the rotation then starts from
    ``basis.T @ a @ basis`` and needs far fewer sweeps.
    """
    a = np.array(a, dtype=float)
    check_symmetric(a)
    n = a.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0))
    if n == 1:
        return a[0].copy(), np.ones((1, 1))
    if basis is not None:
        a = basis.T @ a @ basis
    a = 0.5 * (a + a.T)
    w, v, sweeps = _cyclic_jacobi(a, tol, max_sweeps)
    if sweeps >= max_sweeps:
        raise RuntimeError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    if basis is not None:
        v = basis @ v
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]
