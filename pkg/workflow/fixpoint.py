"""
Fixed-point iteration of the Möbius-IFS operator on Jacobi matrices.

One application of ``t_map`` pushes the measure forward through M1 and M2 (each a Lanczos
run on the operator (aJ + b)(cJ + d)^-1) and averages the two results with the map
probabilities (a Lanczos run on diag(J1, J2)). ``fixpoint_solve`` repeats it from a
starting matrix until the converged rank reaches the requested size.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

import config
from jacobi.lanczos import lanczos_tridiagonalize
from jacobi.matrix import JacobiMatrix
from jacobi.tridiag import tridiagonal_eigenvalues, tridiagonal_solve
from measure.moebius import M1, M2, MoebiusMap
from utils.errors import DataError, DomainError

logger = logging.getLogger(__name__)


def default_buffer(n_target: int) -> int:
    """Extra truncation rows; never fewer than a tenth of the working size."""
    return max(config.MIN_BUFFER, 16, -(-n_target // 4))


def default_max_iters(n_target: int) -> int:
    return min(config.MAX_ITERS_CAP, max(100, int(math.ceil(10.0 * n_target ** 0.7))))


@dataclass
class FixpointConfig:
    """
    Settings of the fixed-point driver.

    Attributes:
        n_target: Number of coefficients a_1..a_n that must converge.
        buffer: Extra rows carried so that the contaminated Lanczos tail stays outside
            the reported range; defaults to ``default_buffer(n_target)``.
        eps: Threshold on the cumulative change defining the converged rank.
        max_iters: Iteration cap; defaults to ``default_max_iters(n_target)``.
        probabilities: Map probabilities (ρ1, ρ2).
        parallel: Run the two pushforwards on two threads.
        stat_window: Extra iterations sampled after convergence for ``error_std``; 0 skips them.
    """

    n_target: int
    buffer: Optional[int] = None
    eps: float = config.DEFAULT_EPS
    max_iters: Optional[int] = None
    probabilities: Tuple[float, float] = (0.5, 0.5)
    parallel: bool = config.PARALLEL_PUSHFORWARD
    log_every: int = config.LOG_EVERY
    stat_window: int = config.STAT_WINDOW

    def __post_init__(self):
        if self.n_target < 1:
            raise DomainError(f"n_target must be >= 1, got {self.n_target}")
        if self.buffer is None:
            self.buffer = default_buffer(self.n_target)
        if self.max_iters is None:
            self.max_iters = default_max_iters(self.n_target)
        if self.buffer < 0:
            raise DomainError(f"buffer must be >= 0, got {self.buffer}")
        if self.eps <= 0:
            raise DomainError(f"eps must be positive, got {self.eps}")
        if self.stat_window < 0 or self.stat_window == 1:
            raise DomainError(f"stat_window must be 0 or at least 2, got {self.stat_window}")
        rho1, rho2 = self.probabilities
        if rho1 <= 0 or rho2 <= 0 or abs(rho1 + rho2 - 1.0) > 1e-14:
            raise DomainError(f"probabilities must be positive and sum to 1, got {self.probabilities}")

    @property
    def working_size(self) -> int:
        return self.n_target + self.buffer


@dataclass
class ConvergenceReport:
    """
    Per-iteration record of a fixed-point run.

    ``deltas[n]`` holds |a^{n+1}_j - a^n_j| over the compared rows (index 0 is a_1), and
    ``converged_rank[n]`` the largest N whose cumulative change is within eps. After
    convergence ``error_std`` holds the per-row spread s_j of a further ``stat_window`` iterates.
    """

    n_target: int
    eps: float
    deltas: List[np.ndarray] = field(default_factory=list)
    converged_rank: List[int] = field(default_factory=list)
    error_std: Optional[np.ndarray] = None
    converged: bool = False
    spot_check_failures: int = 0

    @property
    def iterations(self) -> int:
        return len(self.converged_rank)

    def delta_trace(self, j: int) -> np.ndarray:
        """Δ^n_j over all iterations (NaN where row j was not compared)."""
        return np.array([d[j - 1] if j - 1 < d.size else np.nan for d in self.deltas])


def converged_rank(deltas: np.ndarray, eps: float) -> int:
    """N_ε = max{N : Σ_{j<=N} Δ_j <= ε}."""
    within = np.cumsum(deltas) <= eps
    if within.all():
        return int(deltas.size)
    return int(np.argmin(within))


def _moebius_operator(J: JacobiMatrix, moebius: MoebiusMap):
    a, b, c, d = (float(v) for v in (moebius.num_a, moebius.num_b, moebius.den_c, moebius.den_d))

    def apply(v: np.ndarray) -> np.ndarray:
        w = tridiagonal_solve(J, (c, d), v)
        return a * J.matvec(w) + b * w

    return apply


def moebius_pushforward(J: JacobiMatrix, moebius: MoebiusMap, K: int) -> JacobiMatrix:
    """
    Jacobi matrix of the pushforward of the measure of J through a Möbius map.

    Args:
        J: Input Jacobi matrix of size N.
        moebius: Map whose pole lies outside [0,1].
        K: Output size, at most N.

    Returns:
        JacobiMatrix: First K coefficients of the spectral measure of (aJ+b)(cJ+d)^-1 at e_0.
    """
    if not moebius.pole_outside_unit_interval():
        raise DomainError(f"map {moebius} has a pole on [0,1]")
    if not 1 <= K <= J.n:
        raise DomainError(f"pushforward size K={K} must lie in 1..{J.n}")
    start = np.zeros(J.n)
    start[0] = 1.0
    result = lanczos_tridiagonalize(_moebius_operator(J, moebius), start, K)
    if result.breakdown:
        logger.debug(f"moebius_pushforward: breakdown at {result.steps} of {K}")
    return result.jacobi


def jacobi_average(J1: JacobiMatrix, J2: JacobiMatrix, rho: Tuple[float, float], K: int) -> JacobiMatrix:
    """
    Jacobi matrix of ρ1·μ1 + ρ2·μ2 from the Jacobi matrices of μ1 and μ2.

    K may reach N1 + N2 (the dimension of the block operator); the result is shorter when
    the combined measure has fewer distinct support points.
    """
    rho1, rho2 = rho
    if rho1 <= 0 or rho2 <= 0 or abs(rho1 + rho2 - 1.0) > 1e-14:
        raise DomainError(f"averaging weights must be positive and sum to 1, got {rho}")
    n1, n2 = J1.n, J2.n
    if not 1 <= K <= n1 + n2:
        raise DomainError(f"average size K={K} must lie in 1..{n1 + n2}")

    def apply(v: np.ndarray) -> np.ndarray:
        return np.concatenate((J1.matvec(v[:n1]), J2.matvec(v[n1:])))

    start = np.zeros(n1 + n2)
    start[0] = math.sqrt(rho1)
    start[n1] = math.sqrt(rho2)
    result = lanczos_tridiagonalize(apply, start, K)
    if result.breakdown:
        logger.debug(f"jacobi_average: breakdown at {result.steps} of {K}")
    return result.jacobi


def t_map(J: JacobiMatrix, cfg: FixpointConfig) -> JacobiMatrix:
    """
    One application of the IFS operator: J(η) ↦ J(ρ1·M1*η + ρ2·M2*η).

    The pushforwards keep the input size N; the average is truncated at
    min(2N, cfg.working_size), so small starting matrices grow toward the working size.
    """
    size = J.n
    if cfg.parallel:
        with ThreadPoolExecutor(max_workers=2) as pool:
            first = pool.submit(moebius_pushforward, J, M1, size)
            second = pool.submit(moebius_pushforward, J, M2, size)
            J1, J2 = first.result(), second.result()
    else:
        J1 = moebius_pushforward(J, M1, size)
        J2 = moebius_pushforward(J, M2, size)
    K = min(J1.n + J2.n, cfg.working_size)
    return jacobi_average(J1, J2, cfg.probabilities, K)


def _spot_check(J: JacobiMatrix, block: int = 8) -> bool:
    nodes = tridiagonal_eigenvalues(J, min(block, J.n))
    return bool(nodes[0] >= -1e-12 and nodes[-1] <= 1.0 + 1e-12)


def fixpoint_solve(cfg: FixpointConfig, initial: JacobiMatrix) -> Tuple[JacobiMatrix, ConvergenceReport]:
    """
    Iterate ``t_map`` until the converged rank reaches ``cfg.n_target``.

    Args:
        cfg: Driver settings.
        initial: Starting Jacobi matrix of size >= cfg.working_size.

    Returns:
        tuple: (last iterate at working size, convergence report). When max_iters is
        exhausted the report has ``converged = False`` and the iterate is partial.
    """
    if initial.n < cfg.working_size:
        raise DomainError(
            f"initial matrix of size {initial.n} is smaller than n_target + buffer = {cfg.working_size}"
        )
    trusted = cfg.working_size - max(16, cfg.working_size // 10)
    compare = max(1, min(cfg.working_size - 1, max(trusted, cfg.n_target)))
    required = min(cfg.n_target, compare)
    report = ConvergenceReport(n_target=cfg.n_target, eps=cfg.eps)
    current = initial.truncated(cfg.working_size)
    logger.info(
        f"fixpoint_solve: n_target={cfg.n_target}, working size {cfg.working_size}, "
        f"eps={cfg.eps:g}, max_iters={cfg.max_iters}"
    )
    for iteration in range(1, cfg.max_iters + 1):
        following = t_map(current, cfg)
        if following.n < cfg.working_size:
            raise DataError(f"iterate {iteration} collapsed to size {following.n}")
        deltas = np.abs(following.a[:compare] - current.a[:compare])
        rank = converged_rank(deltas, cfg.eps)
        report.deltas.append(deltas)
        report.converged_rank.append(rank)
        if not _spot_check(following):
            report.spot_check_failures += 1
            logger.warning(f"fixpoint_solve: iterate {iteration} has leading eigenvalues outside [0,1]")
        current = following
        if iteration % cfg.log_every == 0:
            logger.info(f"fixpoint_solve: iteration {iteration}, converged rank {rank}")
        if rank >= required:
            report.converged = True
            logger.info(f"fixpoint_solve: converged after {iteration} iterations (rank {rank})")
            if cfg.stat_window:
                report.error_std = error_statistics(current, cfg, cfg.stat_window)
                logger.info(f"fixpoint_solve: max spread {report.error_std.max():.3e} over {cfg.stat_window} iterates")
            break
    else:
        logger.warning(
            f"fixpoint_solve: no convergence within {cfg.max_iters} iterations, "
            f"rank {report.converged_rank[-1] if report.converged_rank else 0}"
        )
    return current, report


def error_statistics(J_fixed: JacobiMatrix, cfg: FixpointConfig, extra_iters: int) -> np.ndarray:
    """
    Sample standard deviation s_j of a_j over further iterations at the fixed point.

    The deviation is deliberately not divided by sqrt(extra_iters - 1): it measures the
    spread of single iterates, not of their mean.

    Returns:
        np.ndarray: s_1..s_n over the compared rows.
    """
    if extra_iters < 2:
        raise DomainError(f"error_statistics needs at least 2 extra iterations, got {extra_iters}")
    size = min(J_fixed.n, cfg.working_size)
    current = J_fixed.truncated(size)
    rows = max(1, size - max(16, size // 10))
    samples = np.empty((extra_iters, rows))
    for it in range(extra_iters):
        current = t_map(current, cfg)
        samples[it] = current.a[:rows]
    return samples.std(axis=0, ddof=1)
