"""
Command pipelines behind the ``mink`` CLI.

Each ``cmd_*`` takes a ``RunConfig``, loads (or computes) the Jacobi matrix it needs,
runs one analysis and writes a TSV table or a JSON summary. All of them return the
process exit code.
"""
import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

import config
from analysis.asymptotics import cusp_validation, lambda_asymptotic, weight_ratio_residual
from analysis.fitting import power_law_fit
from analysis.invariants import run_invariant_suite
from analysis.nevai import nevai_diagnostics
from analysis.regularity import regularity_report
from analysis.zeros import discrepancy, zero_comparison
from db.jacobi_cache import default_cache_path, file_sha256, load_jacobi, save_jacobi
from jacobi.matrix import JacobiMatrix
from measure.minkowski import minkowski_q_exact, q_graph_approx
from quadrature.christoffel import christoffel_sweep
from quadrature.gauss import gauss_rule
from quadrature.hausdorff import REFERENCE_DIMENSION, hausdorff_bounds
from utils.errors import EXIT_OK, EXIT_PARTIAL, CacheMissingError, DataError, DomainError
from utils.helpers import emit, parse_grid, parse_int_list, parse_rational, render_json, render_tsv
from workflow.fixpoint import FixpointConfig, fixpoint_solve

logger = logging.getLogger(__name__)

FORMATS = ("tsv", "json")


@dataclass
class RunConfig:
    """
    Everything a command needs; validated before any computation starts.

    ``j`` and ``k`` accept the list syntax of ``parse_int_list``; ``x`` a rational "p/q"
    or decimal literal; ``grid`` the "start:stop:step" syntax of ``parse_grid``.
    """

    command: str
    n: Optional[int] = None
    j: Optional[str] = None
    q: Optional[int] = None
    k: Optional[str] = None
    x: Optional[str] = None
    eps: float = config.DEFAULT_EPS
    iters: Optional[int] = None
    grid: Optional[str] = None
    max_order: Optional[int] = None
    cache: Optional[str] = None
    out: Optional[str] = None
    fmt: str = "tsv"
    compute: bool = False
    seed: int = 0
    table: str = "orders"

    def __post_init__(self):
        if self.fmt not in FORMATS:
            raise DomainError(f"format must be one of {FORMATS}, got '{self.fmt}'")
        if self.table not in ("orders", "series"):
            raise DomainError(f"table must be 'orders' or 'series', got '{self.table}'")
        if self.out not in (None, "-"):
            directory = os.path.dirname(os.path.abspath(self.out))
            if not os.path.isdir(directory):
                raise OSError(f"output directory does not exist: {directory}")
        if self.grid is not None:
            parse_grid(self.grid)
        if self.eps <= 0:
            raise DomainError(f"eps must be positive, got {self.eps}")

    @property
    def cache_path(self) -> str:
        return self.cache or default_cache_path()

    def orders(self, default: List[int]) -> List[int]:
        return parse_int_list(self.j) if self.j is not None else default

    def params(self) -> Dict[str, Any]:
        """Parameters echoed into report headers; paths are left out so outputs are portable."""
        keys = ("n", "j", "q", "k", "x", "eps", "iters", "grid", "max_order", "seed")
        return {key: getattr(self, key) for key in keys if getattr(self, key) is not None}


def compute_jacobi(n: int, eps: float, iters: Optional[int]) -> Tuple[JacobiMatrix, Any, FixpointConfig]:
    """Run the fixed-point driver from the Jacobi matrix of Lebesgue measure."""
    cfg = FixpointConfig(n_target=n, eps=eps, max_iters=iters)
    J, report = fixpoint_solve(cfg, JacobiMatrix.uniform(cfg.working_size))
    return J, report, cfg


def _cache_metadata(report, cfg: FixpointConfig) -> Dict[str, Any]:
    return {
        "n_target": cfg.n_target,
        "working_size": cfg.working_size,
        "iterations": report.iterations,
        "eps": f"{cfg.eps:g}",
        "converged": int(report.converged),
    }


def _save_cache(path: str, J: JacobiMatrix, report, cfg: FixpointConfig) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    save_jacobi(path, J, _cache_metadata(report, cfg))


def resolve_jacobi(run: RunConfig, rows_needed: int) -> Tuple[JacobiMatrix, Optional[str]]:
    """
    Load the cached matrix restricted to its trusted rows, computing it under --compute.

    Returns:
        tuple: (JacobiMatrix with at least ``rows_needed`` rows, sha256 of the cache file).

    Raises:
        CacheMissingError: The cache is absent or too small and --compute was not given.
    """
    path = run.cache_path
    if os.path.exists(path):
        J, metadata = load_jacobi(path)
        trusted = min(J.n, int(metadata.get("n_target", J.n - 1)) + 1)
        if metadata.get("converged") == "0":
            logger.warning(f"Jacobi cache {path} holds a partially converged matrix")
        if trusted >= rows_needed:
            return J.truncated(trusted), file_sha256(path)
        if not run.compute:
            raise CacheMissingError(
                f"cache {path} trusts {trusted} rows but {rows_needed} are needed; "
                f"run `mink jacobi --n {rows_needed}` or pass --compute"
            )
    elif not run.compute:
        raise CacheMissingError(f"no Jacobi cache at {path}; run `mink jacobi --n {rows_needed}` or pass --compute")
    n_target = max(rows_needed, run.n or 0)
    logger.info(f"Computing the Jacobi matrix with n_target={n_target}")
    J, report, cfg = compute_jacobi(n_target, run.eps, run.iters)
    _save_cache(path, J, report, cfg)
    return J.truncated(n_target + 1), file_sha256(path)


def _write(run: RunConfig, columns, rows, summary: Dict[str, Any], sha: Optional[str]) -> None:
    if run.fmt == "json":
        summary = dict(summary)
        summary.update({"command": run.command, "version": config.VERSION, "cache_sha256": sha,
                        "params": run.params()})
        emit(render_json(summary), run.out)
    else:
        emit(render_tsv(run.command, columns, rows, run.params(), sha), run.out)


def _fit_or_none(xs, ys) -> Optional[Dict[str, float]]:
    xs, ys = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
    if xs.size < 2 or np.any(ys <= 0):
        return None
    A, B, residual = power_law_fit(xs, ys)
    return {"A": A, "B": B, "residual": residual}


def _invariant_flags(run: RunConfig, J: JacobiMatrix) -> Dict[str, bool]:
    return run_invariant_suite(J, seed=run.seed).as_flags()


def cmd_jacobi(run: RunConfig) -> int:
    """
    Compute (or revalidate) the cached fixed point and report its convergence trace.

    A cache already converged to at least ``n`` rows is checked with one more iteration
    and left untouched when it passes.
    """
    if run.n is None or run.n < 1:
        raise DomainError("jacobi needs --n >= 1")
    path = run.cache_path
    if os.path.exists(path):
        J_cached, metadata = load_jacobi(path)
        if metadata.get("converged") == "1" and int(metadata.get("n_target", 0)) >= run.n:
            cfg = FixpointConfig(n_target=int(metadata["n_target"]), eps=run.eps, max_iters=1, stat_window=0)
            if J_cached.n >= cfg.working_size:
                _, check = fixpoint_solve(cfg, J_cached)
                if check.converged:
                    logger.info(f"Jacobi cache {path} is a validated fixed point; nothing to do")
                    summary = {"converged": True, "iterations": 0, "n_target": cfg.n_target,
                               "a_head": J_cached.a[: min(5, J_cached.n - 1)]}
                    _write(run, ("iteration", "converged_rank", "delta_sum", "delta_max"), [], summary,
                           file_sha256(path))
                    return EXIT_OK
            logger.info(f"Jacobi cache {path} failed revalidation; recomputing")

    J, report, cfg = compute_jacobi(run.n, run.eps, run.iters)
    _save_cache(path, J, report, cfg)
    sha = file_sha256(path)
    rows = [
        (i + 1, rank, float(np.sum(d)), float(np.max(d)) if d.size else 0.0)
        for i, (rank, d) in enumerate(zip(report.converged_rank, report.deltas))
    ]
    summary = {
        "converged": report.converged,
        "iterations": report.iterations,
        "n_target": cfg.n_target,
        "working_size": cfg.working_size,
        "final_rank": report.converged_rank[-1] if report.converged_rank else 0,
        "spot_check_failures": report.spot_check_failures,
        "a_head": J.a[: min(5, J.n - 1)],
    }
    if report.error_std is not None:
        summary["error_std"] = report.error_std[: cfg.n_target]
        summary["error_std_max"] = float(np.max(summary["error_std"]))
    _write(run, ("iteration", "converged_rank", "delta_sum", "delta_max"), rows, summary, sha)
    return EXIT_OK if report.converged else EXIT_PARTIAL


def cmd_q(run: RunConfig) -> int:
    """Q at a point (exact for rationals), or the level-n polyline through Φ^n of the diagonal."""
    columns = ("x", "q", "q_exact")
    if run.n is not None:
        points = q_graph_approx(run.n)
        rows = [(x, float(y), y) for x, y in points]
        _write(run, columns, rows, {"level": run.n, "vertices": len(points)}, None)
        return EXIT_OK
    if run.x is None:
        raise DomainError("q needs --x or --n")
    x = parse_rational(run.x)
    if not 0 <= x <= 1:
        raise DomainError(f"x must lie in [0,1], got {x}")
    exact = minkowski_q_exact(x)
    value = float(exact)
    _write(run, columns, [(x, value, exact)], {"x": x, "q": value, "q_exact": exact}, None)
    return EXIT_OK


def cmd_zeros(run: RunConfig) -> int:
    orders = run.orders([8, 16, 32, 64])
    J, sha = resolve_jacobi(run, max(orders))
    rows, per_order = [], []
    for j in orders:
        report = zero_comparison(J, j)
        per_order.append({"j": j, "U": report.U, "V": report.V})
        for l in range(j):
            rows.append((j, l + 1, report.zeros[l], report.chebyshev[l], report.zero_differences[l],
                         report.angles[l], report.uniform_angles[l], report.angle_differences[l]))
    summary = {
        "orders": per_order,
        "fit_U": _fit_or_none([o["j"] for o in per_order], [o["U"] for o in per_order]),
        "fit_V": _fit_or_none([o["j"] for o in per_order], [o["V"] for o in per_order]),
        "invariants": _invariant_flags(run, J),
    }
    columns = ("j", "l", "zeta", "theta", "theta_minus_zeta", "psi", "phi", "phi_minus_psi")
    _write(run, columns, rows, summary, sha)
    return EXIT_OK


def cmd_discrepancy(run: RunConfig) -> int:
    orders = run.orders([16, 32, 64])
    J, sha = resolve_jacobi(run, max(orders))
    rows = []
    for j in orders:
        D = discrepancy(zero_comparison(J, j).angles)
        rows.append((j, D, 1.0 / j, D >= 1.0 / j - 1e-12))
    summary = {
        "orders": [{"j": r[0], "D": r[1], "lower_bound_holds": r[3]} for r in rows],
        "fit": _fit_or_none([r[0] for r in rows], [r[1] for r in rows]),
        "invariants": _invariant_flags(run, J),
    }
    _write(run, ("j", "discrepancy", "one_over_j", "lower_bound_holds"), rows, summary, sha)
    return EXIT_OK


def cmd_christoffel(run: RunConfig) -> int:
    """
    log λ_j on a grid, with the Farey-point asymptotic Λ_j(q; x - 1/q) alongside.

    Λ is reported where 0 < x - 1/q < 1/2 and NaN elsewhere; q defaults to 4.
    """
    orders = run.orders([64])
    grid = parse_grid(run.grid or "0:1:0.01")
    if grid[0] < 0.0 or grid[-1] > 1.0:
        raise DomainError("christoffel grid must lie inside [0,1]")
    q = run.q or 4
    J, sha = resolve_jacobi(run, max(orders))
    rows = []
    for j in orders:
        state = christoffel_sweep(J, grid, j)
        for x, log_kernel, renorm in zip(grid, state.log_kernel, state.renormalizations):
            y = x - 1.0 / q
            overlay = lambda_asymptotic(q, y, j).total if 0.0 < y < 0.5 else None
            rows.append((j, x, -log_kernel, log_kernel, overlay, int(renorm)))
    summary = {"orders": orders, "q": q, "points": int(grid.size)}
    columns = ("j", "x", "log_christoffel", "log_kernel", "lambda_asymptotic", "renormalizations")
    _write(run, columns, rows, summary, sha)
    return EXIT_OK


def cmd_hausdorff(run: RunConfig) -> int:
    max_order = run.max_order or 8
    J, sha = resolve_jacobi(run, max_order + 2)
    rows, brackets = [], []
    for j in range(2, max_order + 1):
        bounds = hausdorff_bounds(J, j)
        contains = bounds.contains(REFERENCE_DIMENSION)
        rows.append((j, bounds.dim_lower, bounds.dim_upper, bounds.gap,
                     bounds.first_formula, bounds.second_formula, contains))
        brackets.append({"j": j, "lower": bounds.dim_lower, "upper": bounds.dim_upper, "contains_reference": contains})
    summary = {"reference": REFERENCE_DIMENSION, "brackets": brackets, "invariants": _invariant_flags(run, J)}
    columns = ("j", "dim_lower", "dim_upper", "gap", "first_formula", "second_formula", "contains_reference")
    _write(run, columns, rows, summary, sha)
    return EXIT_OK


def cmd_nevai(run: RunConfig) -> int:
    """Per-order σ_j comparisons (``--table orders``) or the coefficient series (``--table series``)."""
    orders = run.orders([16, 32, 64])
    J, sha = resolve_jacobi(run, max(orders))
    diag = nevai_diagnostics(J, orders)
    if run.table == "series":
        columns = ("l", "a_l", "sigma1", "sigma2", "sigma3", "envelope")
        a = J.a[: diag.index.size]
        rows = list(zip(diag.index, a, diag.sigma1, diag.sigma2, diag.sigma3, diag.envelope))
    else:
        columns = ("j", "s_max", "sigma0", "hutchinson", "mass_defect")
        rows = list(zip(diag.orders, diag.s_max, diag.sigma0, diag.hutchinson, diag.mass_defect))
    summary = {
        "orders": diag.orders,
        "hutchinson": diag.hutchinson,
        "sigma0": diag.sigma0,
        "series_final": {
            "sigma1": diag.sigma1[-1], "sigma2": diag.sigma2[-1], "sigma3": diag.sigma3[-1],
        },
        "fit_hutchinson": _fit_or_none(diag.orders, diag.hutchinson),
        "max_mass_defect": float(np.max(diag.mass_defect)),
        "invariants": _invariant_flags(run, J),
    }
    _write(run, columns, rows, summary, sha)
    return EXIT_OK


def cmd_asymptotics(run: RunConfig) -> int:
    orders = run.orders([64])
    j = max(orders)
    q = run.q or 2
    ks = parse_int_list(run.k) if run.k is not None else list(range(0, 6))
    J, sha = resolve_jacobi(run, j)
    rule = gauss_rule(J, j)
    table = cusp_validation(J, j, q, ks, rule=rule)
    rows = []
    for row in table:
        d = row.decomposition
        rows.append((q, row.interval.k, row.interval.left, row.interval.right, row.y, row.count,
                     row.observed if not row.empty else None,
                     row.mean_neg_log_weight if not row.empty else None, d.bound_lower, d.bound_upper, -d.total,
                     row.within_lower, row.within_upper, row.relative_deviation))
    summary = {
        "j": j,
        "q": q,
        "slack": config.CUSP_SLACK,
        "all_within": all(r.within_lower and r.within_upper is not False for r in table if not r.empty),
        "empty_intervals": [r.interval.k for r in table if r.empty],
        "max_relative_deviation": max((r.relative_deviation for r in table if not r.empty), default=None),
        "weight_ratio_residual_quarter": weight_ratio_residual(rule, (Fraction(1, 4), Fraction(3, 4))),
        "invariants": _invariant_flags(run, J),
    }
    columns = ("q", "k", "left", "right", "y", "count", "observed",
               "mean_neg_log_weight", "bound_lower", "bound_upper",
               "minus_lambda", "within_lower", "within_upper", "relative_deviation")
    _write(run, columns, rows, summary, sha)
    return EXIT_OK


def cmd_regularity(run: RunConfig) -> int:
    j_max = max(run.orders([64]))
    J, sha = resolve_jacobi(run, j_max + 1)
    report = regularity_report(J, j_max)
    rows = list(zip(report.j, J.a[:j_max], report.gamma, report.delta, report.sigma3))
    fit = None
    if report.fit is not None:
        A, B, residual = report.fit
        fit = {"A": A, "B": B, "residual": residual, "window": list(report.fit_window)}
    summary = {"j_max": j_max, "capacity": report.capacity, "fit": fit, "gamma_final": report.gamma[-1],
               "invariants": _invariant_flags(run, J)}
    _write(run, ("j", "a_j", "gamma", "delta", "sigma3"), rows, summary, sha)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "jacobi": cmd_jacobi,
    "q": cmd_q,
    "zeros": cmd_zeros,
    "discrepancy": cmd_discrepancy,
    "christoffel": cmd_christoffel,
    "hausdorff": cmd_hausdorff,
    "nevai": cmd_nevai,
    "asymptotics": cmd_asymptotics,
    "regularity": cmd_regularity,
}


def run_command(run: RunConfig) -> int:
    try:
        handler = COMMANDS[run.command]
    except KeyError as e:
        raise DataError(f"unknown command '{run.command}'") from e
    logger.info(f"Running '{run.command}'")
    code = handler(run)
    logger.info(f"'{run.command}' finished with exit code {code}")
    return code
