"""Ensemble averages over independent random-graph realizations and parameter scans."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .continuum import PowerLawFit, fit_power_law
from .errors import GenerationError, ParameterError
from .graphs import RNG_ALGORITHM, GraphModelParams, derive_seed, generate_model
from .spectral import eigendecompose, laplacian
from .transport import (
    TimeGrid,
    avg_return_classical,
    avg_return_quantum,
    linear_grid,
    long_time_average,
)

__all__ = [
    "EnsembleConfig",
    "RunManifest",
    "EnsembleResult",
    "run_ensemble",
    "ChiHistogram",
    "chi_distribution",
    "ExponentialFit",
    "fit_exponential",
    "ScanResult",
    "scan_chi_vs_degree",
    "scan_chi_vs_size",
    "edge_removal_scan",
]

OFFDIAG_RANGE = (0.005, 0.015)
DIAG_RANGE = (0.02, 0.1)


@dataclass(frozen=True)
class EnsembleConfig:
    """One ensemble run. ``params.seed`` is the master seed.

    ``grid=None`` skips the time series and computes only long-time averages.
    """

    params: GraphModelParams
    realizations: int = 100
    grid: TimeGrid | None = field(default_factory=linear_grid)
    degeneracy_tol: float | None = None
    require_connected: bool = False
    eig_method: str = "jacobi"
    workers: int = 1

    def validate(self) -> "EnsembleConfig":
        self.params.validate()
        if int(self.realizations) != self.realizations or self.realizations < 1:
            raise ParameterError("realizations must be a positive integer")
        if int(self.workers) != self.workers or self.workers < 1:
            raise ParameterError("workers must be a positive integer")
        if self.degeneracy_tol is not None and self.degeneracy_tol <= 0:
            raise ParameterError("degeneracy tolerance must be positive")
        return self


@dataclass
class RunManifest:
    master_seed: int
    rng_algorithm: str
    rng_version: str
    model: dict
    realizations: int
    tolerances: dict
    grid: dict | None
    require_connected: bool
    eig_method: str
    derived_seeds: list
    resample_counts: list
    wall_clock_s: float
    artifact_version: str = __version__

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class EnsembleResult:
    grid: TimeGrid | None
    mean_pbar: np.ndarray | None
    mean_pibar: np.ndarray | None
    mean_chi: np.ndarray
    mean_chi_bar: float
    per_realization_chi_bar: np.ndarray
    manifest: RunManifest

    @property
    def n(self) -> int:
        return self.mean_chi.shape[0]

    @property
    def chi_bar_std(self) -> float:
        x = self.per_realization_chi_bar
        return float(x.std(ddof=1)) if x.size > 1 else 0.0


def _realize(task):
    params, seed, points, tol, require_connected, method = task
    g, resamples = generate_model(params, seed, require_connected=require_connected)
    spec = eigendecompose(laplacian(g), method=method, degeneracy_tol=tol)
    chi = long_time_average(spec)
    pbar = pibar = None
    if points is not None:
        pbar = avg_return_classical(spec, points).values
        pibar = avg_return_quantum(spec, points).values
    return pbar, pibar, chi.chi, chi.chi_bar, resamples


def run_ensemble(cfg: EnsembleConfig) -> EnsembleResult:
    """Average return probabilities and long-time matrices over ``cfg.realizations`` graphs.

    Realization ``r`` uses seed ``derive_seed(master, r)``. Results are
    accumulated in realization order whatever the worker count, so the output
    is bit-identical for any ``cfg.workers``.
    """
    cfg.validate()
    start = time.perf_counter()
    R = int(cfg.realizations)
    seeds = [derive_seed(cfg.params.seed, r) for r in range(R)]
    points = None if cfg.grid is None else cfg.grid.points
    tasks = [(cfg.params, s, points, cfg.degeneracy_tol, cfg.require_connected, cfg.eig_method)
             for s in seeds]

    sum_pbar = sum_pibar = sum_chi = None
    chi_bars = np.empty(R)
    resamples = []
    pool = ProcessPoolExecutor(cfg.workers) if cfg.workers > 1 and R > 1 else None
    try:
        results = pool.map(_realize, tasks) if pool else map(_realize, tasks)
        try:
            for r, (pbar, pibar, chi, chi_bar, nres) in enumerate(results):
                if sum_chi is None:
                    sum_chi = chi.copy()
                    if pbar is not None:
                        sum_pbar, sum_pibar = pbar.copy(), pibar.copy()
                else:
                    sum_chi += chi
                    if pbar is not None:
                        sum_pbar += pbar
                        sum_pibar += pibar
                chi_bars[r] = chi_bar
                resamples.append(nres)
        except GenerationError as exc:
            failed = len(resamples)
            raise GenerationError(f"realization {failed}: {exc}", attempts=exc.attempts) from exc
    finally:
        if pool:
            pool.shutdown(cancel_futures=True)

    manifest = RunManifest(
        master_seed=int(cfg.params.seed),
        rng_algorithm=RNG_ALGORITHM,
        rng_version=f"numpy {np.__version__}",
        model=cfg.params.as_dict(),
        realizations=R,
        tolerances={"degeneracy_tol": cfg.degeneracy_tol, "jacobi_offdiag_rtol": 1e-12},
        grid=None if cfg.grid is None else cfg.grid.describe(),
        require_connected=cfg.require_connected,
        eig_method=cfg.eig_method,
        derived_seeds=[str(s) for s in seeds],
        resample_counts=resamples,
        wall_clock_s=time.perf_counter() - start,
    )
    return EnsembleResult(
        grid=cfg.grid,
        mean_pbar=None if sum_pbar is None else sum_pbar / R,
        mean_pibar=None if sum_pibar is None else sum_pibar / R,
        mean_chi=sum_chi / R,
        mean_chi_bar=float(np.sum(chi_bars) / R),
        per_realization_chi_bar=chi_bars,
        manifest=manifest,
    )


@dataclass(frozen=True)
class ChiHistogram:
    """Histograms of off-diagonal and diagonal long-time averages.

    ``*_below`` / ``*_above`` count entries outside the binned range, so
    counts plus both tails always total ``N(N-1)`` and ``N`` respectively.
    """

    offdiag_edges: np.ndarray
    offdiag_counts: np.ndarray
    offdiag_below: int
    offdiag_above: int
    diag_edges: np.ndarray
    diag_counts: np.ndarray
    diag_below: int
    diag_above: int


def _hist(values, bins, rng):
    lo, hi = rng
    if not hi > lo:
        raise ParameterError(f"empty histogram range {rng}")
    counts, edges = np.histogram(values, bins=bins, range=(lo, hi))
    return edges, counts, int(np.sum(values < lo)), int(np.sum(values > hi))


def chi_distribution(result, bins: int = 50, offdiag_range=OFFDIAG_RANGE,
                     diag_range=DIAG_RANGE) -> ChiHistogram:
    """Histogram ``<chi_kj>`` entries; accepts an :class:`EnsembleResult` or a matrix."""
    chi = result.mean_chi if isinstance(result, EnsembleResult) else np.asarray(result)
    if bins < 1:
        raise ParameterError("bins must be positive")
    off = ~np.eye(chi.shape[0], dtype=bool)
    return ChiHistogram(*_hist(chi[off], bins, offdiag_range), *_hist(np.diag(chi), bins, diag_range))


@dataclass(frozen=True)
class ExponentialFit:
    beta: float
    prefactor: float
    fit_window: tuple
    residual: float

    def as_dict(self) -> dict:
        return {"beta": self.beta, "prefactor": self.prefactor, "residual": self.residual,
                "window": list(self.fit_window)}


def fit_exponential(x, y, window=(0, 200)) -> ExponentialFit:
    """Least squares on ``(x, log y)`` giving ``y ~ prefactor * exp(-beta x)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sel = (x >= window[0]) & (x <= window[1])
    if sel.sum() < 2:
        raise ParameterError(f"need at least 2 points in window {window}")
    slope, intercept = np.polyfit(x[sel], np.log(y[sel]), 1)
    resid = np.log(y[sel]) - (slope * x[sel] + intercept)
    return ExponentialFit(float(-slope), float(np.exp(intercept)), tuple(window),
                          float(np.sqrt(np.mean(resid**2))))


@dataclass
class ScanResult:
    """Rows ``{"model", <parameter>, "chi_bar", "chi_bar_std", "realizations"}`` plus fits."""

    parameter: str
    rows: list
    fits: dict
    manifests: list

    def column(self, model: str, key: str = "chi_bar") -> np.ndarray:
        return np.array([r[key] for r in self.rows if r["model"] == model])


def _scan_point(params, realizations, workers, eig_method):
    cfg = EnsembleConfig(params, realizations, grid=None, workers=workers, eig_method=eig_method)
    return run_ensemble(cfg)


def scan_chi_vs_degree(n: int, degrees, realizations: int = 100, seed: int = 0, *,
                       workers: int = 1, eig_method: str = "jacobi") -> ScanResult:
    """``<chi_bar>`` against degree for ER (``p = k/(n-1)``) and uniform-degree graphs."""
    rows, manifests = [], []
    for i, k in enumerate(degrees):
        for j, model in enumerate(("er", "config")):
            s = derive_seed(seed, i, j)
            if model == "er":
                params = GraphModelParams("er", n, p=k / (n - 1), seed=s)
            else:
                params = GraphModelParams("config", n, k=int(k), seed=s)
            res = _scan_point(params.validate(), realizations, workers, eig_method)
            rows.append({"model": model, "degree": k, "chi_bar": res.mean_chi_bar,
                         "chi_bar_std": res.chi_bar_std, "realizations": realizations})
            manifests.append(res.manifest.as_dict())
    return ScanResult("degree", rows, {}, manifests)


def scan_chi_vs_size(sizes, degree: int = 50, realizations: int = 100, seed: int = 0, *,
                     workers: int = 1, eig_method: str = "jacobi") -> ScanResult:
    """``<chi_bar>`` against network size at fixed degree, with log-log slope per model."""
    sizes = list(sizes)
    if any(n <= degree for n in sizes):
        raise ParameterError(f"every size must exceed the degree {degree}")
    rows, manifests = [], []
    for i, n in enumerate(sizes):
        for j, model in enumerate(("er", "config")):
            s = derive_seed(seed, i, j)
            if model == "er":
                params = GraphModelParams("er", n, p=degree / (n - 1), seed=s)
            else:
                params = GraphModelParams("config", n, k=degree, seed=s)
            res = _scan_point(params.validate(), realizations, workers, eig_method)
            rows.append({"model": model, "n": n, "chi_bar": res.mean_chi_bar,
                         "chi_bar_std": res.chi_bar_std, "realizations": realizations})
            manifests.append(res.manifest.as_dict())
    fits: dict[str, PowerLawFit] = {}
    window = (min(sizes), max(sizes))
    for model in ("er", "config"):
        pts = [(r["n"], r["chi_bar"]) for r in rows if r["model"] == model]
        fits[model] = fit_power_law(pts, window)
    return ScanResult("n", rows, fits, manifests)


def edge_removal_scan(n: int, m_values, realizations: int = 100, seed: int = 0, *,
                      fit_window=(0, 200), workers: int = 1,
                      eig_method: str = "jacobi") -> ScanResult:
    """``<chi_bar>`` on complete graphs with ``m`` random edges removed, with exponential fit."""
    rows, manifests = [], []
    for i, m in enumerate(m_values):
        params = GraphModelParams("complete-minus-m", n, m=int(m), seed=derive_seed(seed, i))
        res = _scan_point(params.validate(), realizations, workers, eig_method)
        rows.append({"model": "complete-minus-m", "m": int(m), "chi_bar": res.mean_chi_bar,
                     "chi_bar_std": res.chi_bar_std, "realizations": realizations})
        manifests.append(res.manifest.as_dict())
    ms = [r["m"] for r in rows]
    fit = fit_exponential(ms, [r["chi_bar"] for r in rows], fit_window)
    return ScanResult("m", rows, {"complete-minus-m": fit}, manifests)
