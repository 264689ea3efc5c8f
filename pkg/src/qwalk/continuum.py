"""Infinite-network limit: semicircle spectral density and power-law efficiency.

Averages against the semicircle are computed with the substitution
``E = kbar + 2*sigma*cos(theta)``, which maps the density onto the weight
``(2/pi) sin(theta)**2`` on ``[0, pi]``; Gauss-Chebyshev nodes of the second
kind integrate that weight exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ParameterError
from .transport import TimeGrid, TransitionSeries, linear_grid

__all__ = [
    "semicircle_density",
    "semicircle_cdf",
    "er_sigma",
    "chebyshev_u_rule",
    "semicircle_average",
    "continuum_classical",
    "continuum_amplitude",
    "extract_local_maxima",
    "PowerLawFit",
    "fit_power_law",
    "is_exponential_decay",
    "EfficiencyReport",
    "compare_efficiency",
]

MIN_NODES = 2048
_BLOCK = 256


def _sigma(kbar, sigma):
    if kbar <= 0:
        raise ParameterError(f"average degree must be positive, got {kbar}")
    s = math.sqrt(kbar) if sigma is None else float(sigma)
    if s <= 0:
        raise ParameterError("sigma must be positive")
    return s


def er_sigma(n: int, p: float) -> float:
    """Semicircle width for G(n, p): ``sqrt(n p (1 - p))``."""
    return math.sqrt(n * p * (1 - p))


def semicircle_density(kbar: float, E, sigma: float | None = None):
    """Semicircle density centred at ``kbar``; sparse form ``sigma**2 = kbar`` by default."""
    s = _sigma(kbar, sigma)
    E = np.asarray(E, dtype=float)
    u2 = 4 * s * s - (E - kbar) ** 2
    out = np.where(u2 > 0, np.sqrt(np.clip(u2, 0, None)) / (2 * np.pi * s * s), 0.0)
    return out if out.ndim else float(out)


def semicircle_cdf(kbar: float, E, sigma: float | None = None):
    s = _sigma(kbar, sigma)
    u = np.clip((np.asarray(E, dtype=float) - kbar) / (2 * s), -1.0, 1.0)
    return 0.5 + (u * np.sqrt(1 - u * u) + np.arcsin(u)) / np.pi


def chebyshev_u_rule(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes ``x_i`` and weights ``w_i`` with ``sum(w) == 1`` for the semicircle weight on [-1, 1]."""
    theta = np.arange(1, m + 1) * np.pi / (m + 1)
    return np.cos(theta), 2.0 / (m + 1) * np.sin(theta) ** 2


def semicircle_average(f, kbar: float, sigma: float | None = None, nodes: int = MIN_NODES) -> float:
    """Integral of ``f(E) rho(E) dE`` for a vectorized callable ``f``."""
    s = _sigma(kbar, sigma)
    x, w = chebyshev_u_rule(nodes)
    return float(w @ f(kbar + 2 * s * x))


def _node_count(s, tmax):
    return max(MIN_NODES, math.ceil(8 * s * tmax))


def _classical_sum(x, w, s, t):
    # exp(-t E) = exp(-t E_min) * exp(-2 s t (1 + x)); the bracket never overflows.
    out = np.empty(t.size)
    for lo in range(0, t.size, _BLOCK):
        tb = t[lo:lo + _BLOCK]
        out[lo:lo + _BLOCK] = np.exp(-2 * s * np.outer(tb, 1 + x)) @ w
    return out


def _amplitude_sum(x, w, s, t):
    # Amplitude with the carrier exp(-i kbar t) removed; the modulus is unaffected.
    re = np.empty(t.size)
    im = np.empty(t.size)
    for lo in range(0, t.size, _BLOCK):
        arg = 2 * s * np.outer(t[lo:lo + _BLOCK], x)
        re[lo:lo + _BLOCK] = np.cos(arg) @ w
        im[lo:lo + _BLOCK] = -(np.sin(arg) @ w)
    return re, im


def continuum_classical(
    kbar: float, grid, sigma: float | None = None, rtol: float = 1e-8
) -> TransitionSeries:
    """Classical return probability ``int exp(-tE) rho(E) dE`` of the infinite network.

    The rule is evaluated with ``M`` and ``2M`` nodes; disagreement beyond
    ``rtol`` raises :class:`NumericalError`.
    """
    s = _sigma(kbar, sigma)
    grid = grid if isinstance(grid, TimeGrid) else TimeGrid(grid)
    t = grid.points
    m = _node_count(s, t[-1])
    coarse = _classical_sum(*chebyshev_u_rule(m), s, t)
    fine = _classical_sum(*chebyshev_u_rule(2 * m), s, t)
    err = np.abs(coarse - fine) / fine
    if err.max() > rtol:
        raise NumericalError(f"classical quadrature missed rtol={rtol:g}", achieved=float(err.max()))
    with np.errstate(under="ignore"):
        values = np.exp(-(kbar - 2 * s) * t) * fine
    return TransitionSeries(grid, "classical", values, {"kbar": kbar, "sigma": s})


def continuum_amplitude(
    kbar: float, grid, sigma: float | None = None, rtol: float = 1e-6, atol: float = 1e-14
) -> TransitionSeries:
    """Squared modulus of ``int exp(-itE) rho(E) dE``, the continuum amplitude bound."""
    s = _sigma(kbar, sigma)
    grid = grid if isinstance(grid, TimeGrid) else TimeGrid(grid)
    t = grid.points
    m = _node_count(s, t[-1])
    re0, im0 = _amplitude_sum(*chebyshev_u_rule(m), s, t)
    re1, im1 = _amplitude_sum(*chebyshev_u_rule(2 * m), s, t)
    mod = np.hypot(re1, im1)
    err = np.hypot(re0 - re1, im0 - im1)
    bad = err > rtol * mod + atol
    if np.any(bad):
        raise NumericalError(f"amplitude quadrature missed rtol={rtol:g}",
                             achieved=float(np.max(err / np.maximum(mod, atol))))
    return TransitionSeries(grid, "quantum-amplitude-bound", re1**2 + im1**2,
                            {"kbar": kbar, "sigma": s})


def extract_local_maxima(series: TransitionSeries, period: float | None = None):
    """Interior samples strictly larger than both neighbours, as ``[(t, value), ...]``.

    ``period`` is the oscillation period the grid must resolve with at least
    ten samples; it defaults to ``pi / (2 sigma)`` when the series carries a
    semicircle width in its metadata.
    """
    if not series.is_scalar:
        raise ParameterError("local maxima need a scalar series")
    t = series.t
    v = series.values
    if period is None and "sigma" in series.meta:
        period = np.pi / (2 * series.meta["sigma"])
    if period is not None and t.size > 1:
        step = np.diff(t).max()
        if step > period / 10:
            raise ParameterError(
                f"grid step {step:.3g} under-resolves period {period:.3g}; "
                f"need step <= {period / 10:.3g}")
    idx = np.flatnonzero((v[1:-1] > v[:-2]) & (v[1:-1] > v[2:])) + 1
    return [(float(t[i]), float(v[i])) for i in idx]


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    prefactor: float
    fit_window: tuple
    residual: float

    def __call__(self, t):
        return self.prefactor * np.asarray(t, dtype=float) ** self.exponent

    def as_dict(self) -> dict:
        return {"exponent": self.exponent, "prefactor": self.prefactor,
                "residual": self.residual, "window": list(self.fit_window)}


def _window_points(points, window):
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    lo, hi = window
    if not lo < hi:
        raise ParameterError("fit window needs t_lo < t_hi")
    sel = pts[(pts[:, 0] >= lo) & (pts[:, 0] <= hi)]
    if len(sel) < 5:
        raise ParameterError(f"need at least 5 points in window {window}, got {len(sel)}")
    if np.any(sel[:, 1] <= 0):
        raise ParameterError("power-law fit needs positive values")
    return sel[:, 0], sel[:, 1]


def fit_power_law(points, window=(10.0, 100.0)) -> PowerLawFit:
    """Least-squares line through ``(log t, log value)`` for points inside ``window``."""
    t, v = _window_points(points, window)
    x, y = np.log(t), np.log(v)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    with np.errstate(over="ignore"):
        prefactor = float(np.exp(intercept))
    return PowerLawFit(float(slope), prefactor, (float(window[0]), float(window[1])),
                       float(np.sqrt(np.mean(resid**2))))


def is_exponential_decay(points, window=(10.0, 100.0), loglog_min: float = 0.1,
                         semilog_max: float = 0.02) -> bool:
    """True when no power law fits but ``log value`` is close to linear in ``t``.

    The log-log RMS residual must exceed ``loglog_min``; the semi-log RMS
    residual, divided by the standard deviation of ``log value`` over the
    window, must stay below ``semilog_max``.
    """
    t, v = _window_points(points, window)
    y = np.log(v)
    loglog = fit_power_law(np.column_stack([t, v]), window).residual
    coef = np.polyfit(t, y, 1)
    semilog = np.sqrt(np.mean((y - np.polyval(coef, t)) ** 2))
    spread = y.std()
    return bool(loglog > loglog_min and spread > 0 and semilog / spread < semilog_max)


@dataclass(frozen=True)
class EfficiencyReport:
    kbar: float
    classical: TransitionSeries
    amplitude: TransitionSeries
    maxima: list
    classical_fit: PowerLawFit
    maxima_fit: PowerLawFit
    classical_exponential: bool
    more_efficient: str

    def as_dict(self) -> dict:
        return {"kbar": self.kbar, "classical_fit": self.classical_fit.as_dict(),
                "maxima_fit": self.maxima_fit.as_dict(),
                "classical_exponential": self.classical_exponential,
                "more_efficient": self.more_efficient}


def efficiency_grid(kbar: float, tmax: float = 100.0, sigma: float | None = None) -> TimeGrid:
    """Linear grid fine enough (20 samples per period) for maxima extraction."""
    s = _sigma(kbar, sigma)
    step = min(0.01, np.pi / (2 * s) / 20)
    return linear_grid(tmax, step)


def compare_efficiency(kbar: float, grid=None, window=(10.0, 100.0)) -> EfficiencyReport:
    """Classical decay versus the quantum amplitude envelope for one ``kbar``.

    The process that decays to the lower value at the end of ``window`` is
    called more efficient; the quantum side is represented by the power-law
    envelope through its local maxima.
    """
    grid = efficiency_grid(kbar, window[1]) if grid is None else grid
    classical = continuum_classical(kbar, grid)
    amplitude = continuum_amplitude(kbar, grid)
    maxima = extract_local_maxima(amplitude)
    cpoints = np.column_stack([classical.t, classical.values])
    cwin = cpoints[cpoints[:, 1] > 0]
    classical_fit = fit_power_law(cwin, window)
    maxima_fit = fit_power_law(maxima, window)
    t_end = window[1]
    p_end = float(np.interp(t_end, classical.t, classical.values))
    winner = "classical" if p_end < maxima_fit(t_end) else "quantum"
    return EfficiencyReport(kbar, classical, amplitude, maxima, classical_fit, maxima_fit,
                            is_exponential_decay(cwin, window), winner)
