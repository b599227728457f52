"""Benchmark grid over synthetic intersecting-subspace models.

Every (C, intersection ratio, trial) cell draws one model and one sample,
then runs every requested method on the identical data with the identical
clustering seed, so method columns are paired. Seeds derive from
(base_seed, C, ratio, trial, role) through named SeedSequence spawn keys:

    role 0  model bases
    role 1  point sample
    role 2  clustering runs (shared by all methods)
    role 3  unconstrained fixed-length trace runs

which makes every trial reproducible in isolation and the full table
independent of scheduling, worker count, and completion order.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .driver import run, run_ssc_baseline
from .metrics import misclassification, ssr_error
from .model import HyperParams, ValidationError
from .synth import generate_subspaces, sample_points

_ROLE_MODEL = 0
_ROLE_POINTS = 1
_ROLE_CLUSTER = 2
_ROLE_TRACE = 3

METHODS = ("pssc", "ssc")


@dataclass(frozen=True)
class CellResult:
    """Aggregates for one (C, ratio, method) cell.

    errors, ssr, iterations hold one entry per completed trial (failed
    trials are excluded and counted in `failures`). kappa_traces and
    error_traces are (trials, trace_tmax) arrays from the unconstrained
    fixed-length runs, present only for method pssc when traces were
    requested.
    """

    C: int
    ratio: float
    method: str
    trial_ids: np.ndarray
    errors: np.ndarray
    ssr: np.ndarray
    iterations: np.ndarray
    mean_error: float
    median_error: float
    mean_ssr: float
    kappa_traces: np.ndarray | None
    error_traces: np.ndarray | None
    failures: int


@dataclass(frozen=True)
class BenchmarkTable:
    """All cells of one benchmark run plus the configuration that
    produced them."""

    cells: tuple
    trials: int
    base_seed: int
    params: HyperParams
    methods: tuple
    trace_tmax: int
    failure_log: tuple

    def cell(self, C, ratio, method):
        for c in self.cells:
            if c.C == C and c.method == method and _permille(c.ratio) == _permille(ratio):
                return c
        raise KeyError(f"no cell (C={C}, ratio={ratio}, method={method})")


def _permille(ratio):
    return int(round(float(ratio) * 1000))


def _cell_seed(base_seed, C, ratio, trial, role):
    return np.random.SeedSequence(
        entropy=base_seed, spawn_key=(C, _permille(ratio), trial, role)
    )


def _run_seed(base_seed, C, ratio, trial, role):
    return int(_cell_seed(base_seed, C, ratio, trial, role).generate_state(1)[0])


def _trial_job(base_seed, C, ratio, trial, params, methods, ambient, dim,
               points_per, trace_tmax):
    """One trial of one cell: draw data once, run every method on it.
    Returns {method: (error, ssr, iterations)} plus optional traces."""
    s = int(round(ratio * dim))
    model = generate_subspaces(C, ambient, dim, s,
                               _cell_seed(base_seed, C, ratio, trial, _ROLE_MODEL),
                               n_points=points_per)
    X, truth = sample_points(model, _cell_seed(base_seed, C, ratio, trial, _ROLE_POINTS))
    run_params = dataclasses.replace(
        params, seed=_run_seed(base_seed, C, ratio, trial, _ROLE_CLUSTER)
    )
    out = {}
    for method in methods:
        if method == "pssc":
            res = run(X, C, run_params)
        elif method == "ssc":
            res = run_ssc_baseline(X, C, run_params)
        else:
            raise ValidationError(f"unknown method {method!r}")
        out[method] = (
            misclassification(res.labels, truth, C),
            ssr_error(res.Z, truth, C),
            res.iterations,
        )
    traces = None
    if trace_tmax > 0 and "pssc" in methods:
        trace_params = dataclasses.replace(
            params,
            seed=_run_seed(base_seed, C, ratio, trial, _ROLE_TRACE),
            t_max=trace_tmax,
        )
        res = run(X, C, trace_params, early_stop=False)
        N = X.shape[1]
        kappa = np.array([rec.kappa / N for rec in res.history])
        err = np.array([misclassification(rec.labels, truth, C) for rec in res.history])
        traces = (kappa, err)
    return out, traces


def run_benchmark(C_values, ratios, trials, base_seed, params=None,
                  methods=METHODS, ambient=200, dim=10, points_per=100,
                  trace_tmax=0, workers=1):
    """Run the full grid and aggregate per-cell statistics.

    Parameters
    ----------
    C_values : iterable of int
    ratios : iterable of float
        Intersection ratios s/d in [0, 1); s = round(ratio * dim).
    trials : int
        Independent model+sample draws per cell.
    base_seed : int
        Root entropy for all derived seeds.
    params : HyperParams, optional
        Per-run seeds are substituted per trial; other fields pass
        through.
    methods : iterable of str
        Any of "pssc", "ssc"; all methods see identical data per trial.
    ambient, dim, points_per : int
        Model dimensions n, d, and points per subspace.
    trace_tmax : int
        When > 0, each trial also runs the pssc variant with stopping
        disabled for exactly trace_tmax iterations and records per-
        iteration uncertain fractions and errors.
    workers : int
        Thread count; results are identical for any value.

    Returns
    -------
    BenchmarkTable
    """
    C_values = [int(C) for C in C_values]
    ratios = [float(r) for r in ratios]
    methods = tuple(methods)
    if not C_values or not ratios or not methods or trials < 1:
        raise ValidationError("benchmark grid is empty")
    for m in methods:
        if m not in METHODS:
            raise ValidationError(f"unknown method {m!r}")
    if params is None:
        params = HyperParams()

    jobs = [(C, ratio, trial) for C in C_values for ratio in ratios
            for trial in range(trials)]

    def work(job):
        C, ratio, trial = job
        return _trial_job(base_seed, C, ratio, trial, params, methods,
                          ambient, dim, points_per, trace_tmax)

    index = {job: k for k, job in enumerate(jobs)}
    results = [None] * len(jobs)
    if workers <= 1:
        for k, job in enumerate(jobs):
            try:
                results[k] = work(job)
            except Exception as exc:  # recorded per trial below
                results[k] = exc
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(work, job) for job in jobs]
            for k, fut in enumerate(futures):
                try:
                    results[k] = fut.result()
                except Exception as exc:  # recorded per trial below
                    results[k] = exc

    cells = []
    failure_log = []
    for C in C_values:
        for ratio in ratios:
            per_method = {m: {"err": [], "ssr": [], "iters": []} for m in methods}
            kappa_rows, err_rows = [], []
            completed = []
            failures = 0
            for trial in range(trials):
                res = results[index[(C, ratio, trial)]]
                if isinstance(res, Exception):
                    failures += 1
                    failure_log.append((C, ratio, trial, repr(res)))
                    continue
                completed.append(trial)
                out, traces = res
                for m in methods:
                    e, s_, it = out[m]
                    per_method[m]["err"].append(e)
                    per_method[m]["ssr"].append(s_)
                    per_method[m]["iters"].append(it)
                if traces is not None:
                    kappa_rows.append(traces[0])
                    err_rows.append(traces[1])
            for m in methods:
                err = np.array(per_method[m]["err"])
                ssr = np.array(per_method[m]["ssr"])
                its = np.array(per_method[m]["iters"], dtype=np.int64)
                has_traces = m == "pssc" and kappa_rows
                cells.append(CellResult(
                    C=C, ratio=ratio, method=m,
                    trial_ids=np.array(completed, dtype=np.int64),
                    errors=err, ssr=ssr, iterations=its,
                    mean_error=float(err.mean()) if err.size else float("nan"),
                    median_error=float(np.median(err)) if err.size else float("nan"),
                    mean_ssr=float(ssr.mean()) if ssr.size else float("nan"),
                    kappa_traces=np.vstack(kappa_rows) if has_traces else None,
                    error_traces=np.vstack(err_rows) if has_traces else None,
                    failures=failures,
                ))
    return BenchmarkTable(
        cells=tuple(cells), trials=trials, base_seed=base_seed, params=params,
        methods=methods, trace_tmax=trace_tmax, failure_log=tuple(failure_log),
    )
