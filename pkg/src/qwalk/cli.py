"""``qwalk`` command-line interface.

Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .continuum import extract_local_maxima, fit_power_law
from .ensemble import edge_removal_scan, run_ensemble, scan_chi_vs_degree, scan_chi_vs_size
from .errors import GenerationError, NumericalError, ParameterError
from .graphs import GraphModelParams, generate_model
from .io import (
    atomic_write,
    csv_text,
    dump_json,
    load_json,
    read_graph,
    read_series_csv,
    write_graph,
    write_outputs,
)
from .pipelines import (
    FIGURES,
    continuum_series,
    ensemble_config_from_dict,
    ensemble_files,
    reproduce_figure,
    scan_files,
)
from .spectral import eigendecompose, laplacian
from .transport import (
    TimeGrid,
    TransitionSeries,
    avg_amplitude_bound,
    avg_return_classical,
    avg_return_quantum,
    classical_transition,
    linear_grid,
    log_grid,
    long_time_average,
    quantum_transition,
)

log = logging.getLogger("qwalk")

EXIT_USAGE, EXIT_NUMERICAL, EXIT_IO = 2, 3, 4


@dataclass
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)
    output: str | None = None
    workers: int = 1
    verbosity: int = 0


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _window(text):
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    return lo, hi


def _default_workers():
    try:
        return max(1, int(os.environ.get("QWALK_WORKERS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=None,
                        help="worker processes (default: $QWALK_WORKERS or 1)")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="qwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a graph file")
    p.add_argument("--model", required=True, choices=["er", "config", "complete-minus-m",
                                                      "cycle", "complete"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--require-connected", action="store_true")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="Laplacian eigenvalues")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--vectors", help="also write eigenvectors (row-major) to this CSV")
    p.add_argument("--method", choices=["jacobi", "lapack"], default="jacobi")

    p = sub.add_parser("evolve", parents=[common], help="transition probabilities in time")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--kind", choices=["classical", "quantum", "bound"], required=True)
    _grid_args(p)
    p.add_argument("--full-matrix", action="store_true")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("longtime", parents=[common], help="long-time average matrix")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--tol", type=float, help="degeneracy tolerance")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("ensemble", parents=[common], help="ensemble-averaged run")
    p.add_argument("--config", help="JSON run configuration (a manifest.json also works)")
    p.add_argument("--model", choices=["er", "config", "complete-minus-m", "cycle", "complete"])
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--realizations", type=int)
    p.add_argument("--require-connected", action="store_true", default=None)
    p.add_argument("-o", "--output", required=True, help="output directory")

    p = sub.add_parser("scan", parents=[common], help="parameter scans of <chi_bar>")
    p.add_argument("kind", choices=["degree", "size", "edge-removal"])
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--degrees", type=_int_list, default=[10, 20, 30, 40, 50, 60, 70, 80, 90])
    p.add_argument("--sizes", type=_int_list, default=[60, 80, 100, 150, 200, 300])
    p.add_argument("--degree", type=int, default=50)
    p.add_argument("--m-values", type=_int_list, default=list(range(0, 201, 25)))
    p.add_argument("--window", type=_window, default=(0.0, 200.0),
                   help="exponential fit window for edge-removal (LO:HI)")
    p.add_argument("--realizations", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, help="output directory")

    p = sub.add_parser("continuum", parents=[common], help="infinite-network return probability")
    p.add_argument("--kbar", type=float, required=True)
    p.add_argument("--sigma", type=float)
    p.add_argument("--kind", choices=["classical", "amplitude"], required=True)
    _grid_args(p, default="log")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("fit", parents=[common], help="power-law fit of a series CSV")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--window", type=_window, default=(10.0, 100.0))
    p.add_argument("--maxima", action="store_true", help="fit only the local maxima")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("figure", parents=[common], help="data for one figure")
    p.add_argument("figure_id", choices=FIGURES)
    p.add_argument("--realizations", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, help="output directory")
    return parser


def _grid_args(p, default="lin"):
    p.add_argument("--grid", choices=["lin", "log"], default=default)
    p.add_argument("--tmax", type=float)
    p.add_argument("--tmin", type=float)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--num", type=int, default=600)


def _make_grid(ns) -> TimeGrid:
    if ns.grid == "lin":
        return linear_grid(ns.tmax if ns.tmax is not None else 20.0, ns.step,
                           ns.tmin if ns.tmin is not None else 0.0)
    return log_grid(ns.tmin if ns.tmin is not None else 1e-2,
                    ns.tmax if ns.tmax is not None else 1e3, ns.num)


def parse_cli(argv) -> RunConfig:
    """Parse and validate ``argv``; raises ``ParameterError`` for constraint violations."""
    ns = build_parser().parse_args(argv)
    workers = ns.workers if ns.workers is not None else _default_workers()
    if workers < 1:
        raise ParameterError("--workers must be at least 1")
    cfg = RunConfig(ns.command, output=ns.output, workers=workers, verbosity=ns.verbose)
    opts = cfg.options
    cmd = ns.command
    if cmd == "gen":
        opts["params"] = GraphModelParams(ns.model, ns.n, p=ns.p, k=ns.k, m=ns.m,
                                          seed=ns.seed).validate()
        opts["require_connected"] = ns.require_connected
    elif cmd == "spectrum":
        opts.update(input=ns.input, vectors=ns.vectors, method=ns.method)
    elif cmd == "evolve":
        if ns.kind == "bound" and ns.full_matrix:
            raise ParameterError("--full-matrix is not available for --kind bound")
        opts.update(input=ns.input, kind=ns.kind, grid=_make_grid(ns), full_matrix=ns.full_matrix)
    elif cmd == "longtime":
        if ns.tol is not None and ns.tol <= 0:
            raise ParameterError("--tol must be positive")
        opts.update(input=ns.input, tol=ns.tol)
    elif cmd == "ensemble":
        data = {}
        if ns.config:
            data = load_json(ns.config)
            data = dict(data.get("config", data))
        if "workers" not in data or ns.workers is not None:
            data["workers"] = workers
        for key in ("model", "n", "p", "k", "m", "seed", "realizations", "require_connected"):
            value = getattr(ns, key)
            if value is not None:
                data[key] = value
        ens, merged = ensemble_config_from_dict(data)
        opts.update(config=ens, merged=merged)
    elif cmd == "scan":
        if ns.realizations < 1:
            raise ParameterError("--realizations must be positive")
        opts.update(kind=ns.kind, n=ns.n, degrees=ns.degrees, sizes=ns.sizes, degree=ns.degree,
                    m_values=ns.m_values, window=ns.window, realizations=ns.realizations,
                    seed=ns.seed)
        if ns.kind == "size" and any(n <= ns.degree for n in ns.sizes):
            raise ParameterError(f"every size must exceed --degree {ns.degree}")
    elif cmd == "continuum":
        if ns.kbar <= 0:
            raise ParameterError("--kbar must be positive")
        opts.update(kbar=ns.kbar, sigma=ns.sigma, kind=ns.kind, grid=_make_grid(ns))
    elif cmd == "fit":
        opts.update(input=ns.input, window=ns.window, maxima=ns.maxima)
    elif cmd == "figure":
        if ns.realizations < 1:
            raise ParameterError("--realizations must be positive")
        opts.update(figure_id=ns.figure_id, realizations=ns.realizations, seed=ns.seed)
    return cfg


def _scalar_csv(series: TransitionSeries) -> str:
    return csv_text(["t", "value"], zip(series.t.tolist(), series.values.tolist()))


def _matrix_csv(series: TransitionSeries) -> str:
    t = series.t
    n = series.values.shape[1]
    ti, k, j = np.indices((t.size, n, n))
    return csv_text(["t", "k", "j", "value"],
                    zip(t[ti.ravel()].tolist(), k.ravel().tolist(), j.ravel().tolist(),
                        series.values.ravel().tolist()))


def execute(cfg: RunConfig) -> None:
    o = cfg.options
    cmd = cfg.command
    if cmd == "gen":
        g, resamples = generate_model(o["params"], o["params"].seed,
                                      require_connected=o["require_connected"])
        log.info("generated %d edges (%d resamples)", g.num_edges, resamples)
        write_graph(g, cfg.output)
    elif cmd == "spectrum":
        spec = eigendecompose(laplacian(read_graph(o["input"])), method=o["method"])
        atomic_write(cfg.output, csv_text(["index", "eigenvalue"],
                                          enumerate(spec.eigenvalues.tolist())))
        if o["vectors"]:
            q = spec.eigenvectors
            header = ["node"] + [f"q{i}" for i in range(q.shape[1])]
            atomic_write(o["vectors"], csv_text(header, ([i, *row] for i, row in
                                                         enumerate(q.tolist()))))
    elif cmd == "evolve":
        spec = eigendecompose(laplacian(read_graph(o["input"])))
        grid = o["grid"]
        if o["full_matrix"]:
            fn = classical_transition if o["kind"] == "classical" else quantum_transition
            text = _matrix_csv(fn(spec, grid))
        else:
            fn = {"classical": avg_return_classical, "quantum": avg_return_quantum,
                  "bound": avg_amplitude_bound}[o["kind"]]
            text = _scalar_csv(fn(spec, grid))
        atomic_write(cfg.output, text)
    elif cmd == "longtime":
        spec = eigendecompose(laplacian(read_graph(o["input"])), degeneracy_tol=o["tol"])
        chi = long_time_average(spec).chi
        n = chi.shape[0]
        k, j = np.indices((n, n))
        atomic_write(cfg.output, csv_text(["k", "j", "chi"], zip(k.ravel().tolist(),
                                                                 j.ravel().tolist(),
                                                                 chi.ravel().tolist())))
    elif cmd == "ensemble":
        result = run_ensemble(o["config"])
        write_outputs(ensemble_files(result, o["merged"]), cfg.output)
    elif cmd == "scan":
        common = dict(workers=cfg.workers)
        if o["kind"] == "degree":
            scan = scan_chi_vs_degree(o["n"], o["degrees"], o["realizations"], o["seed"], **common)
            conf = {"n": o["n"], "degrees": o["degrees"]}
        elif o["kind"] == "size":
            scan = scan_chi_vs_size(o["sizes"], o["degree"], o["realizations"], o["seed"], **common)
            conf = {"sizes": o["sizes"], "degree": o["degree"]}
        else:
            scan = edge_removal_scan(o["n"], o["m_values"], o["realizations"], o["seed"],
                                     fit_window=o["window"], **common)
            conf = {"n": o["n"], "m_values": o["m_values"], "fit_window": list(o["window"])}
        conf.update(kind=o["kind"], realizations=o["realizations"], seed=o["seed"])
        write_outputs(scan_files(scan, conf), cfg.output)
    elif cmd == "continuum":
        series = continuum_series(o["kbar"], o["kind"], o["grid"], o["sigma"])
        atomic_write(cfg.output, _scalar_csv(series))
    elif cmd == "fit":
        _, body = read_series_csv(o["input"])
        points = body[:, :2]
        if o["maxima"]:
            series = TransitionSeries(TimeGrid(points[:, 0]), "input", points[:, 1])
            points = extract_local_maxima(series)
        fit = fit_power_law(points, o["window"])
        atomic_write(cfg.output, dump_json(fit.as_dict()))
    elif cmd == "figure":
        reproduce_figure(o["figure_id"], cfg.output, realizations=o["realizations"],
                         seed=o["seed"], workers=cfg.workers)


def main(argv=None) -> int:
    try:
        cfg = parse_cli(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ParameterError as exc:
        print(f"qwalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qwalk: error: {exc}", file=sys.stderr)
        return EXIT_IO
    logging.basicConfig(level=logging.WARNING - 10 * min(cfg.verbosity, 2),
                        format="%(levelname)s %(message)s")
    try:
        execute(cfg)
    except ParameterError as exc:
        print(f"qwalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, GenerationError) as exc:
        print(f"qwalk: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"qwalk: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
