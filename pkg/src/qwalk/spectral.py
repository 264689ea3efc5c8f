"""Graph Laplacian and its full symmetric eigendecomposition."""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .errors import NumericalError, ParameterError
from .graphs import Graph

__all__ = [
    "Spectrum",
    "laplacian",
    "eigendecompose",
    "jacobi_eigh",
    "cluster_degeneracies",
    "default_degeneracy_tol",
]

MAX_SWEEPS = 100
OFFDIAG_RTOL = 1e-12


def laplacian(g: Graph) -> np.ndarray:
    """Dense Laplacian ``D - adjacency``; with unit coupling it is also the Hamiltonian."""
    a = -g.adjacency()
    a[np.diag_indices(g.n)] = g.degrees()
    return a


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues, orthonormal eigenvector columns and degeneracy classes."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    degeneracy_classes: tuple
    degeneracy_tol: float

    @property
    def n(self) -> int:
        return self.eigenvalues.size


@numba.njit(cache=True)
def _jacobi_sweeps(a, max_sweeps, rtol):
    n = a.shape[0]
    vt = np.eye(n)
    fro = np.sqrt(np.sum(a * a))
    off = 0.0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        off = np.sqrt(2.0 * off)
        if off <= rtol * fro:
            return vt, sweep, off
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    if k == p or k == q:
                        continue
                    akp = a[p, k]
                    akq = a[q, k]
                    nkp = c * akp - s * akq
                    nkq = s * akp + c * akq
                    a[p, k] = nkp
                    a[k, p] = nkp
                    a[q, k] = nkq
                    a[k, q] = nkq
                a[p, p] -= t * apq
                a[q, q] += t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vp = vt[p, k]
                    vq = vt[q, k]
                    vt[p, k] = c * vp - s * vq
                    vt[q, k] = s * vp + c * vq
    return vt, -1, off


def jacobi_eigh(a, max_sweeps: int = MAX_SWEEPS, rtol: float = OFFDIAG_RTOL):
    """Cyclic Jacobi diagonalization of a real symmetric matrix.

    Sweeps rotate every upper-triangular pair in row-major order until the
    off-diagonal Frobenius norm drops below ``rtol * ||A||_F``. Returns
    unsorted ``(eigenvalues, eigenvectors)`` with eigenvectors as columns.
    """
    work = np.array(a, dtype=np.float64, order="C", copy=True)
    if work.ndim != 2 or work.shape[0] != work.shape[1]:
        raise ParameterError("matrix must be square")
    if not np.array_equal(work, work.T):
        raise ParameterError("matrix must be symmetric")
    vt, sweeps, off = _jacobi_sweeps(work, max_sweeps, rtol)
    if sweeps < 0:
        raise NumericalError(f"Jacobi did not converge in {max_sweeps} sweeps; off-diagonal norm",
                             achieved=off)
    return np.diag(work).copy(), vt.T.copy()


def default_degeneracy_tol(eigenvalues: np.ndarray) -> float:
    top = float(eigenvalues[-1]) if eigenvalues.size else 0.0
    return 1e-8 * max(1.0, top)


def cluster_degeneracies(eigenvalues, tol: float) -> tuple:
    """Chain ascending eigenvalues whose neighbour gap is below ``tol``.

    Returns a tuple of index arrays covering ``0..N-1``.
    """
    e = np.asarray(eigenvalues, dtype=float)
    if e.size == 0:
        return ()
    if np.any(np.diff(e) < 0):
        raise ParameterError("eigenvalues must be ascending")
    breaks = np.flatnonzero(np.diff(e) >= tol) + 1
    return tuple(np.split(np.arange(e.size), breaks))


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # First component with magnitude above noise is made positive.
    big = np.abs(vectors) > 1e-12
    first = np.argmax(big, axis=0)
    signs = np.sign(vectors[first, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def eigendecompose(
    a,
    *,
    method: str = "jacobi",
    degeneracy_tol: float | None = None,
    max_sweeps: int = MAX_SWEEPS,
) -> Spectrum:
    """Full eigendecomposition of a symmetric Laplacian.

    ``method="jacobi"`` (default) is the in-house cyclic Jacobi solver;
    ``method="lapack"`` delegates to ``numpy.linalg.eigh`` for large matrices.
    Eigenvalues come out ascending, each eigenvector's first non-negligible
    component is positive, and ``degeneracy_tol`` defaults to
    ``1e-8 * max(1, E_max)``.
    """
    a = np.asarray(a, dtype=np.float64)
    if method == "jacobi":
        values, vectors = jacobi_eigh(a, max_sweeps=max_sweeps)
    elif method == "lapack":
        if not np.allclose(a, a.T, rtol=0, atol=0):
            raise ParameterError("matrix must be symmetric")
        values, vectors = np.linalg.eigh(a)
    else:
        raise ParameterError(f"unknown eigensolver {method!r}")
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = _fix_signs(vectors[:, order])
    tol = default_degeneracy_tol(values) if degeneracy_tol is None else float(degeneracy_tol)
    return Spectrum(values, vectors, cluster_degeneracies(values, tol), tol)
