"""Config handling, output rendering and per-figure reproduction pipelines."""

from __future__ import annotations

import numpy as np

from . import __version__
from .continuum import compare_efficiency, continuum_amplitude, continuum_classical
from .ensemble import (
    DIAG_RANGE,
    OFFDIAG_RANGE,
    EnsembleConfig,
    EnsembleResult,
    ScanResult,
    chi_distribution,
    edge_removal_scan,
    run_ensemble,
    scan_chi_vs_degree,
    scan_chi_vs_size,
)
from .errors import ParameterError
from .graphs import GraphModelParams, derive_seed
from .io import csv_text, dump_json, write_outputs
from .transport import TimeGrid, linear_grid, log_grid

__all__ = [
    "ENSEMBLE_DEFAULTS",
    "FIGURES",
    "grid_from_dict",
    "ensemble_config_from_dict",
    "ensemble_files",
    "scan_files",
    "reproduce_figure",
    "continuum_series",
]

ENSEMBLE_DEFAULTS = {
    "model": "er",
    "n": 100,
    "p": None,
    "k": None,
    "m": None,
    "seed": 0,
    "realizations": 100,
    "grid": {"spacing": "lin", "tmax": 20.0, "step": 0.05},
    "degeneracy_tol": None,
    "require_connected": False,
    "eig_method": "jacobi",
    "workers": 1,
    "bins": 50,
    "offdiag_range": list(OFFDIAG_RANGE),
    "diag_range": list(DIAG_RANGE),
}

FIGURES = ("fig1a", "fig1b", "fig2a", "fig2b", "fig2c", "fig3", "fig4", "fig5a", "fig5b", "fig6")


def grid_from_dict(d: dict | None) -> TimeGrid | None:
    if d is None:
        return None
    spacing = d.get("spacing", "lin")
    if spacing == "lin":
        return linear_grid(d.get("tmax", 20.0), d.get("step", 0.05), d.get("tmin", 0.0))
    if spacing == "log":
        return log_grid(d.get("tmin", 1e-2), d.get("tmax", 1e3), int(d.get("num", 600)))
    raise ParameterError(f"unknown grid spacing {spacing!r}")


def ensemble_config_from_dict(d: dict) -> tuple[EnsembleConfig, dict]:
    """Merge ``d`` over the defaults and validate; returns the config and the merged dict."""
    unknown = set(d) - set(ENSEMBLE_DEFAULTS)
    if unknown:
        raise ParameterError(f"unknown config keys: {sorted(unknown)}")
    merged = {**ENSEMBLE_DEFAULTS, **d}
    params = GraphModelParams(merged["model"], merged["n"], p=merged["p"], k=merged["k"],
                              m=merged["m"], seed=int(merged["seed"]))
    cfg = EnsembleConfig(
        params=params,
        realizations=merged["realizations"],
        grid=grid_from_dict(merged["grid"]),
        degeneracy_tol=merged["degeneracy_tol"],
        require_connected=bool(merged["require_connected"]),
        eig_method=merged["eig_method"],
        workers=int(merged["workers"]),
    ).validate()
    for key in ("offdiag_range", "diag_range"):
        lo, hi = merged[key]
        if not hi > lo:
            raise ParameterError(f"{key} must be non-empty, got {merged[key]}")
    if int(merged["bins"]) < 1:
        raise ParameterError("bins must be positive")
    return cfg, merged


def _chi_rows(chi):
    n = chi.shape[0]
    k, j = np.indices((n, n))
    return zip(k.ravel().tolist(), j.ravel().tolist(), chi.ravel().tolist())


def _hist_rows(h, prefix=()):
    rows = []
    for part in ("offdiag", "diag"):
        edges = getattr(h, f"{part}_edges")
        counts = getattr(h, f"{part}_counts")
        rows.append((*prefix, part, -np.inf, edges[0], getattr(h, f"{part}_below")))
        rows += [(*prefix, part, lo, hi, c) for lo, hi, c in zip(edges[:-1], edges[1:], counts)]
        rows.append((*prefix, part, edges[-1], np.inf, getattr(h, f"{part}_above")))
    return rows


def _hist_text(rows, prefix_header=()):
    header = ",".join((*prefix_header, "part", "bin_lo", "bin_hi", "count"))
    lines = [header]
    for *labels, lo, hi, count in rows:
        lines.append(",".join([*map(str, labels), _fmt_edge(lo), _fmt_edge(hi), str(int(count))]))
    return "\n".join(lines) + "\n"


def _fmt_edge(x):
    return "inf" if x == np.inf else "-inf" if x == -np.inf else f"{float(x):.17g}"


def ensemble_files(result: EnsembleResult, merged: dict) -> dict:
    """Render ``series.csv``, ``chi.csv``, ``chi_hist.csv`` and ``manifest.json``."""
    files = {}
    if result.grid is not None:
        files["series.csv"] = csv_text(
            ["t", "mean_pbar", "mean_pibar"],
            zip(result.grid.points.tolist(), result.mean_pbar.tolist(), result.mean_pibar.tolist()))
    files["chi.csv"] = csv_text(["k", "j", "chi"], _chi_rows(result.mean_chi))
    h = chi_distribution(result, merged["bins"], tuple(merged["offdiag_range"]),
                         tuple(merged["diag_range"]))
    files["chi_hist.csv"] = _hist_text(_hist_rows(h))
    manifest = result.manifest.as_dict()
    manifest["config"] = dict(merged)
    manifest["mean_chi_bar"] = result.mean_chi_bar
    files["manifest.json"] = dump_json(manifest)
    return files


def scan_files(scan: ScanResult, config: dict) -> dict:
    param = scan.parameter
    rows = [(r["model"], r[param], r["chi_bar"], r["chi_bar_std"], r["realizations"])
            for r in scan.rows]
    text = ",".join(["model", param, "chi_bar", "chi_bar_std", "realizations"]) + "\n"
    text += "".join(f"{m},{p!s},{c:.17g},{s:.17g},{r}\n" for m, p, c, s, r in rows)
    fits = {model: fit.as_dict() for model, fit in scan.fits.items()}
    manifest = {"config": config, "artifact_version": __version__, "points": scan.manifests}
    return {"scan.csv": text, "fit.json": dump_json(fits), "manifest.json": dump_json(manifest)}


def _series_table(columns: dict) -> str:
    names = list(columns)
    return csv_text(names, zip(*(np.asarray(columns[c]).tolist() for c in names)))


def _fig1(model, realizations, seed, workers):
    cols, manifests = {}, []
    for i, k in enumerate((10, 20, 30)):
        extra = {"p": k / 99} if model == "er" else {"k": k}
        cfg, merged = ensemble_config_from_dict(
            {"model": model, "n": 100, "seed": derive_seed(seed, i), "realizations": realizations,
             "workers": workers, **extra})
        res = run_ensemble(cfg)
        cols.setdefault("t", res.grid.points)
        cols[f"mean_pbar_k{k}"] = res.mean_pbar
        cols[f"mean_pibar_k{k}"] = res.mean_pibar
        manifests.append({**res.manifest.as_dict(), "config": merged})
    return {"series.csv": _series_table(cols), "manifest.json": dump_json({"runs": manifests})}


def _fig2(kbars):
    files, fits = {}, {}
    for kbar in kbars:
        rep = compare_efficiency(kbar)
        files[f"series_k{kbar}.csv"] = _series_table(
            {"t": rep.classical.t, "pbar": rep.classical.values, "alpha2": rep.amplitude.values})
        files[f"maxima_k{kbar}.csv"] = csv_text(["t", "alpha2"], rep.maxima)
        fits[f"k{kbar}"] = rep.as_dict()
    files["fit.json"] = dump_json(fits)
    files["manifest.json"] = dump_json({"kbar": list(kbars), "grid": "linear, 20 samples/period",
                                        "artifact_version": __version__})
    return files


def _fig34(realizations, seed, workers, want_matrix):
    files, hist_rows, manifests = {}, [], []
    for j, model in enumerate(("er", "config")):
        for i, k in enumerate((10, 20, 30)):
            extra = {"p": k / 99} if model == "er" else {"k": k}
            cfg, merged = ensemble_config_from_dict(
                {"model": model, "n": 100, "seed": derive_seed(seed, j, i), "grid": None,
                 "realizations": realizations, "workers": workers, **extra})
            res = run_ensemble(cfg)
            if want_matrix:
                files[f"chi_{model}_k{k}.csv"] = csv_text(["k", "j", "chi"], _chi_rows(res.mean_chi))
            hist_rows += _hist_rows(chi_distribution(res), (model, k))
            manifests.append({**res.manifest.as_dict(), "config": merged})
    if not want_matrix:
        files["chi_hist.csv"] = _hist_text(hist_rows, ("model", "degree"))
    files["manifest.json"] = dump_json({"runs": manifests})
    return files


def reproduce_figure(figure_id: str, outdir, *, realizations: int = 100, seed: int = 0,
                     workers: int = 1) -> list:
    """Compute and write the plot-ready data of one figure with its standard parameters."""
    if figure_id not in FIGURES:
        raise ParameterError(f"unknown figure {figure_id!r}; expected one of {FIGURES}")
    common = {"realizations": realizations, "seed": seed, "workers": workers}
    if figure_id == "fig1a":
        files = _fig1("er", realizations, seed, workers)
    elif figure_id == "fig1b":
        files = _fig1("config", realizations, seed, workers)
    elif figure_id == "fig2a":
        files = _fig2((4,))
    elif figure_id == "fig2b":
        files = _fig2((9,))
    elif figure_id == "fig2c":
        files = _fig2((16, 64))
    elif figure_id in ("fig3", "fig4"):
        files = _fig34(realizations, seed, workers, figure_id == "fig3")
    elif figure_id == "fig5a":
        degrees = [10, 20, 30, 40, 50, 60, 70, 80, 90, 99]
        files = scan_files(scan_chi_vs_degree(100, degrees, realizations, seed, workers=workers),
                           {"n": 100, "degrees": degrees, **common})
    elif figure_id == "fig5b":
        sizes = [60, 80, 100, 150, 200, 300]
        files = scan_files(scan_chi_vs_size(sizes, 50, realizations, seed, workers=workers),
                           {"sizes": sizes, "degree": 50, **common})
    else:
        m_values = list(range(0, 201, 25)) + list(range(300, 2001, 100))
        files = scan_files(edge_removal_scan(100, m_values, realizations, seed, workers=workers),
                           {"n": 100, "m_values": m_values, "fit_window": [0, 200], **common})
    return write_outputs(files, outdir)


def continuum_series(kbar: float, kind: str, grid: TimeGrid, sigma=None):
    if kind == "classical":
        return continuum_classical(kbar, grid, sigma)
    if kind == "amplitude":
        return continuum_amplitude(kbar, grid, sigma)
    raise ParameterError(f"unknown continuum kind {kind!r}")
