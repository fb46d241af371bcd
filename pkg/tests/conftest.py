import os

import pytest

from db.jacobi_cache import default_cache_path, load_jacobi
from jacobi.matrix import JacobiMatrix
from utils.errors import CacheMissingError
from workflow.fixpoint import FixpointConfig, fixpoint_solve

# Table 1 reference values, from an independent high-precision moment computation
REFERENCE_A = {
    1: 0.20230293232998066551,
    10: 0.21507056222832743181,
    20: 0.22445857780685732313,
    30: 0.22151652145038000730,
    40: 0.23642320488855968894,
}


def _solve(n_target: int, eps: float, max_iters: int):
    cfg = FixpointConfig(n_target=n_target, eps=eps, max_iters=max_iters)
    J, report = fixpoint_solve(cfg, JacobiMatrix.uniform(cfg.working_size))
    return J, report, cfg


@pytest.fixture(scope="session")
def minkowski_run():
    """Fixed point with 64 converged coefficients; (J at working size, report, cfg)."""
    return _solve(64, 1e-12, 1500)


@pytest.fixture(scope="session")
def minkowski_jacobi(minkowski_run):
    """Trusted rows only: b_0..b_64 and a_1..a_64."""
    J, _, cfg = minkowski_run
    return J.truncated(cfg.n_target + 1)


@pytest.fixture(scope="session")
def minkowski_jacobi_large():
    J, report, cfg = _solve(192, 1e-10, 4000)
    assert report.converged
    return J.truncated(cfg.n_target + 1)


SCALE_ORDER = 2048


@pytest.fixture(scope="session")
def minkowski_jacobi_cached():
    """
    Converged matrix with at least 2049 trusted rows, read from the cache.

    The run takes hours, so it is never computed here: build it once with
    ``python main.py jacobi --n 2048`` (or point MINK_SCALE_CACHE at such a file).
    """
    path = os.getenv("MINK_SCALE_CACHE") or default_cache_path()
    try:
        J, metadata = load_jacobi(path)
    except CacheMissingError:
        pytest.skip(f"no Jacobi cache at {path}")
    n_target = int(metadata.get("n_target", 0))
    if metadata.get("converged") != "1" or n_target < SCALE_ORDER:
        pytest.skip(f"cache {path} holds n_target={n_target}, converged={metadata.get('converged')}")
    return J.truncated(n_target + 1)
