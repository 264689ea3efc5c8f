"""Classical and quantum transport observables on a single graph.

All routines work from a :class:`~qwalk.spectral.Spectrum`; time is measured
in units of the inverse coupling (unit coupling on every edge).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .spectral import Spectrum

__all__ = [
    "TimeGrid",
    "TransitionSeries",
    "LongTimeMatrix",
    "linear_grid",
    "log_grid",
    "classical_transition",
    "quantum_transition",
    "avg_return_classical",
    "avg_return_quantum",
    "avg_amplitude_bound",
    "long_time_average",
    "plateau",
]

# Number of time points per vectorized block in the scalar observables.
_BLOCK = 512


@dataclass(frozen=True)
class TimeGrid:
    points: np.ndarray
    spacing: str = "custom"

    def __post_init__(self):
        pts = np.atleast_1d(np.asarray(self.points, dtype=float))
        if pts.ndim != 1 or pts.size == 0:
            raise ParameterError("time grid must be a non-empty 1-d array")
        if np.any(pts < 0) or not np.all(np.isfinite(pts)):
            raise ParameterError("times must be finite and non-negative")
        if np.any(np.diff(pts) <= 0):
            raise ParameterError("times must be strictly ascending")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.size

    def describe(self) -> dict:
        d = {"spacing": self.spacing, "num": int(self.points.size),
             "tmin": float(self.points[0]), "tmax": float(self.points[-1])}
        if self.spacing == "lin" and self.points.size > 1:
            d["step"] = float(self.points[1] - self.points[0])
        return d


def linear_grid(tmax: float = 20.0, step: float = 0.05, tmin: float = 0.0) -> TimeGrid:
    """Uniform grid ``tmin, tmin + step, ...`` up to and including ``tmax``."""
    if step <= 0 or tmax <= tmin:
        raise ParameterError("need step > 0 and tmax > tmin")
    num = int(round((tmax - tmin) / step)) + 1
    return TimeGrid(tmin + step * np.arange(num), "lin")


def log_grid(tmin: float = 1e-2, tmax: float = 1e3, num: int = 600) -> TimeGrid:
    if not 0 < tmin < tmax or num < 2:
        raise ParameterError("need 0 < tmin < tmax and num >= 2")
    return TimeGrid(np.geomspace(tmin, tmax, num), "log")


@dataclass(frozen=True)
class TransitionSeries:
    """Values of one observable on a time grid.

    ``values`` has shape ``(T,)`` for node-averaged kinds and ``(T, N, N)``
    for full matrices, where ``values[t, k, j]`` is the probability to go
    from node ``j`` to node ``k``.
    """

    grid: TimeGrid
    kind: str
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def t(self) -> np.ndarray:
        return self.grid.points

    @property
    def is_scalar(self) -> bool:
        return self.values.ndim == 1


@dataclass(frozen=True)
class LongTimeMatrix:
    chi: np.ndarray

    @property
    def n(self) -> int:
        return self.chi.shape[0]

    @property
    def chi_bar(self) -> float:
        return float(np.trace(self.chi) / self.n)


def _as_grid(grid) -> TimeGrid:
    return grid if isinstance(grid, TimeGrid) else TimeGrid(grid)


def _nonnegative(e):
    # Laplacian is PSD; clipping roundoff negatives keeps every decay term monotone in t.
    return np.clip(e, 0.0, None)


def classical_transition(s: Spectrum, grid) -> TransitionSeries:
    """Full matrices ``exp(-tA)`` from the spectral sum."""
    grid = _as_grid(grid)
    q = s.eigenvectors
    decay = np.exp(-np.outer(grid.points, _nonnegative(s.eigenvalues)))
    values = np.einsum("kn,tn,jn->tkj", q, decay, q, optimize=True)
    return TransitionSeries(grid, "classical", values)


def quantum_transition(s: Spectrum, grid) -> TransitionSeries:
    """Full matrices ``|<k|exp(-itH)|j>|**2``."""
    grid = _as_grid(grid)
    q = s.eigenvectors
    phase = np.exp(-1j * np.outer(grid.points, s.eigenvalues))
    amp = np.einsum("kn,tn,jn->tkj", q, phase, q, optimize=True)
    return TransitionSeries(grid, "quantum", amp.real**2 + amp.imag**2)


def avg_return_classical(s: Spectrum, grid) -> TransitionSeries:
    """Node-averaged classical return probability; eigenvalues only."""
    grid = _as_grid(grid)
    values = np.exp(-np.outer(grid.points, _nonnegative(s.eigenvalues))).mean(axis=1)
    return TransitionSeries(grid, "classical", values)


def avg_return_quantum(s: Spectrum, grid) -> TransitionSeries:
    """Node-averaged quantum return probability.

    Uses only the diagonal amplitudes ``sum_n exp(-itE_n) |<j|q_n>|**2``.
    """
    grid = _as_grid(grid)
    weights = s.eigenvectors**2
    t = grid.points
    out = np.empty(t.size)
    for lo in range(0, t.size, _BLOCK):
        tb = t[lo:lo + _BLOCK]
        arg = np.outer(s.eigenvalues, tb)
        re = weights @ np.cos(arg)
        im = weights @ np.sin(arg)
        out[lo:lo + _BLOCK] = (re**2 + im**2).mean(axis=0)
    return TransitionSeries(grid, "quantum", out)


def avg_amplitude_bound(s: Spectrum, grid) -> TransitionSeries:
    """Eigenvalue-only lower bound ``|(1/N) sum_n exp(-itE_n)|**2``."""
    grid = _as_grid(grid)
    arg = np.outer(grid.points, s.eigenvalues)
    re = np.cos(arg).mean(axis=1)
    im = np.sin(arg).mean(axis=1)
    return TransitionSeries(grid, "quantum-amplitude-bound", re**2 + im**2)


def long_time_average(s: Spectrum) -> LongTimeMatrix:
    """Infinite-time average of the quantum transition matrix.

    Only pairs of eigenvectors with equal eigenvalues survive, so the result
    is the sum over degeneracy classes of the squared spectral projectors.
    """
    q = s.eigenvectors
    singles = [c[0] for c in s.degeneracy_classes if c.size == 1]
    q2 = q[:, singles] ** 2
    chi = q2 @ q2.T
    for c in s.degeneracy_classes:
        if c.size > 1:
            proj = q[:, c] @ q[:, c].T
            chi += proj**2
    return LongTimeMatrix(chi)


def plateau(series: TransitionSeries, fraction: float = 0.25) -> tuple[float, float]:
    """Mean and standard deviation over the last ``fraction`` of a scalar series."""
    if not series.is_scalar:
        raise ParameterError("plateau needs a node-averaged series")
    start = int(np.floor(len(series.grid) * (1 - fraction)))
    tail = series.values[start:]
    return float(tail.mean()), float(tail.std())
