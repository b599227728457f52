"""Command-line surface: generate, cluster, benchmark, metrics.

Exit codes: 0 success, 1 usage error, 2 runtime error. An optional
key=value config file supplies defaults for any flag; flags given on the
command line win. All outputs are deterministic for a fixed invocation
(timestamps are confined to the meta field of JSON outputs).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from types import SimpleNamespace

import numpy as np

from .bench import METHODS, run_benchmark
from .driver import run, run_ssc_baseline
from .fileio import (
    parse_config,
    read_labels,
    read_matrix,
    write_benchmark,
    write_labels,
    write_matrix,
    write_result,
)
from .metrics import misclassification
from .model import HyperParams, ValidationError
from .synth import generate_subspaces, sample_points


@dataclass(frozen=True)
class RunConfig:
    """Resolved configuration of one cluster invocation."""

    input: str
    out: str
    clusters: int
    method: str
    normalize: bool
    params: HyperParams


def _bool(s):
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _int_list(s):
    return [int(tok) for tok in s.split(",") if tok.strip() != ""]


def _float_list(s):
    return [float(tok) for tok in s.split(",") if tok.strip() != ""]


def _str_list(s):
    return [tok.strip() for tok in s.split(",") if tok.strip() != ""]


_HYPER = {
    "alpha": (float, 40.0, "sparsity scale divisor: lambda0 = mu / alpha"),
    "ratio": (float, 0.125, "lambda0 / lambda1 ratio"),
    "tmax": (int, 10, "iteration cap"),
    "tol": (float, 1e-6, "solver sweep tolerance"),
    "sweeps": (int, 1000, "solver sweep cap"),
    "restarts": (int, 20, "k-means restarts"),
    "seed": (int, 0, "random seed"),
    "mode": (str, "incremental", "spectral mode: full or incremental"),
}

_SCHEMAS = {
    "generate": {
        "clusters": (int, None, "number of subspaces"),
        "ambient": (int, 200, "ambient dimension"),
        "dim": (int, 10, "subspace dimension"),
        "intersect": (float, 0.5, "intersection ratio s/d in [0, 1)"),
        "points": (int, 100, "points per subspace"),
        "seed": (int, 0, "random seed"),
        "out": (str, None, "output directory for X.csv and labels.csv"),
    },
    "cluster": {
        "input": (str, None, "matrix CSV, rows = dimensions, columns = points"),
        "clusters": (int, None, "number of clusters"),
        "method": (str, "pssc", "pssc or ssc"),
        "out": (str, None, "output JSON path"),
        "normalize": (_bool, True, "scale columns to unit length"),
        **_HYPER,
    },
    "benchmark": {
        "clusters": (_int_list, None, "comma-separated C values"),
        "intersect": (_float_list, None, "comma-separated intersection ratios"),
        "trials": (int, 20, "trials per cell"),
        "methods": (_str_list, list(METHODS), "comma-separated methods"),
        "ambient": (int, 200, "ambient dimension"),
        "dim": (int, 10, "subspace dimension"),
        "points": (int, 100, "points per subspace"),
        "trace_tmax": (int, 0, "record fixed-length traces of this many iterations"),
        "workers": (int, 1, "thread count"),
        "out": (str, None, "output directory"),
        **_HYPER,
    },
    "metrics": {
        "pred": (str, None, "predicted labels file"),
        "truth": (str, None, "true labels file"),
        "clusters": (int, None, "number of clusters"),
    },
}

_REQUIRED = {
    "generate": ("clusters", "out"),
    "cluster": ("input", "clusters", "out"),
    "benchmark": ("clusters", "intersect", "out"),
    "metrics": ("pred", "truth", "clusters"),
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="probssc",
        description="Probabilistic sparse subspace clustering with delayed association.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    help_lines = {
        "generate": "draw a synthetic union of intersecting subspaces",
        "cluster": "cluster a matrix file",
        "benchmark": "run the synthetic benchmark grid",
        "metrics": "score predicted labels against truth",
    }
    for name, schema in _SCHEMAS.items():
        p = sub.add_parser(name, help=help_lines[name])
        p.add_argument("--config", default=None, help="key=value defaults file")
        for dest, (conv, default, help_text) in schema.items():
            flag = "--" + dest.replace("_", "-")
            if conv is _bool:
                p.add_argument(
                    "--no-" + dest, dest=dest, action="store_const", const=False,
                    default=None, help=f"disable: {help_text}",
                )
            else:
                metavar = dest.upper()
                p.add_argument(flag, dest=dest, type=str, default=None,
                               metavar=metavar, help=f"{help_text} (default {default})")
    return parser


def _resolve(parser, args):
    """Merge command line, config file, and hard defaults; convert types."""
    schema = _SCHEMAS[args.command]
    config = parse_config(args.config) if args.config else {}
    for key in config:
        if key not in schema:
            parser.error(f"unknown config key {key!r}")
    out = {}
    for dest, (conv, default, _) in schema.items():
        raw = getattr(args, dest)
        source = "flag"
        if raw is None and dest in config:
            raw, source = config[dest], "config"
        if raw is None:
            out[dest] = default
            continue
        if isinstance(raw, bool):
            out[dest] = raw
            continue
        try:
            out[dest] = conv(raw)
        except ValueError:
            parser.error(f"invalid value for --{dest.replace('_', '-')} "
                         f"(from {source}): {raw!r}")
    for dest in _REQUIRED[args.command]:
        if out[dest] is None:
            parser.error(f"--{dest.replace('_', '-')} is required")
    return SimpleNamespace(command=args.command, **out)


def _params_from(ns):
    return HyperParams(
        alpha=ns.alpha,
        lambda_ratio=ns.ratio,
        t_max=ns.tmax,
        solver_tol=ns.tol,
        solver_max_sweeps=ns.sweeps,
        kmeans_restarts=ns.restarts,
        seed=ns.seed,
        spectral_mode=ns.mode,
    )


def _cmd_generate(ns):
    dim = ns.dim
    s = int(round(ns.intersect * dim))
    model_seed = np.random.SeedSequence(entropy=ns.seed, spawn_key=(0,))
    points_seed = np.random.SeedSequence(entropy=ns.seed, spawn_key=(1,))
    model = generate_subspaces(ns.clusters, ns.ambient, dim, s, model_seed,
                               n_points=ns.points)
    X, truth = sample_points(model, points_seed)
    out = Path(ns.out)
    out.mkdir(parents=True, exist_ok=True)
    write_matrix(out / "X.csv", X)
    write_labels(out / "labels.csv", truth)
    print(f"wrote {out / 'X.csv'} ({X.shape[0]}x{X.shape[1]}) and {out / 'labels.csv'}")
    return 0


def _cmd_cluster(ns):
    cfg = RunConfig(input=ns.input, out=ns.out, clusters=ns.clusters,
                    method=ns.method, normalize=ns.normalize,
                    params=_params_from(ns))
    if cfg.method not in METHODS:
        raise ValidationError(f"unknown method {cfg.method!r}")
    X = read_matrix(cfg.input)
    if cfg.method == "pssc":
        res = run(X, cfg.clusters, cfg.params, normalize=cfg.normalize)
    else:
        res = run_ssc_baseline(X, cfg.clusters, cfg.params, normalize=cfg.normalize)
    write_result(cfg.out, res)
    print(f"wrote {cfg.out} (iterations={res.iterations}, stop={res.stop_reason})")
    return 0


def _cmd_benchmark(ns):
    table = run_benchmark(
        ns.clusters, ns.intersect, ns.trials, ns.seed,
        params=_params_from(ns), methods=tuple(ns.methods),
        ambient=ns.ambient, dim=ns.dim, points_per=ns.points,
        trace_tmax=ns.trace_tmax, workers=ns.workers,
    )
    out = write_benchmark(ns.out, table)
    print(f"wrote benchmark bundle to {out}")
    return 0


def _cmd_metrics(ns):
    pred = read_labels(ns.pred)
    truth = read_labels(ns.truth)
    err = misclassification(pred, truth, ns.clusters)
    print(f"misclassification={err:.17g}")
    return 0


_DISPATCH = {
    "generate": _cmd_generate,
    "cluster": _cmd_cluster,
    "benchmark": _cmd_benchmark,
    "metrics": _cmd_metrics,
}


def cli_main(argv=None):
    """Entry point returning the exit code (0 ok, 1 usage, 2 runtime)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.error("a command is required")
        ns = _resolve(parser, args)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return _DISPATCH[ns.command](ns)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
