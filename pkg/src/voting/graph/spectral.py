"""Expansion parameter of the simple random walk.

P = D^-1 A is similar to N = D^-1/2 A D^-1/2, so both share a spectrum and N
is symmetric. N has top eigenvalue 1 with eigenvector u ∝ sqrt(deg); the
expansion is lambda = max(|lambda_2|, |lambda_n|).

Small graphs use a dense symmetric eigendecomposition. Large graphs use
power iteration against u, once on (I + N)/2 for lambda_2 and once on
(I - N)/2 for lambda_n, stopping on the residual ||N x - mu x|| which bounds
the eigenvalue error of the symmetric operator.
"""

import math
from typing import Literal, Optional

import numpy as np
from scipy import linalg, sparse
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from config.settings import settings
from src.voting.errors import Disconnected, NoConvergence
from src.voting.graph.core import Graph
from src.voting.state.schemas import SpectralSummary
from src.voting.utils.logging_config import get_logger

logger = get_logger(__name__)

Method = Literal["auto", "dense", "power", "lanczos"]


def normalized_adjacency(g: Graph) -> sparse.csr_array:
    """N = D^-1/2 A D^-1/2 as a float sparse matrix."""
    inv_sqrt = 1.0 / np.sqrt(g.deg.astype(np.float64))
    scale = sparse.dia_array((inv_sqrt[np.newaxis, :], [0]), shape=(g.n, g.n))
    return sparse.csr_array(scale @ g.adjacency.astype(np.float64) @ scale)


def stationary_direction(g: Graph) -> np.ndarray:
    u = np.sqrt(g.deg.astype(np.float64))
    return u / np.linalg.norm(u)


def expansion(
    g: Graph,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    method: Method = "auto",
    seed: int = 0,
) -> SpectralSummary:
    """SpectralSummary of g with certified error ``tol``.

    Raises:
        NoConvergence: iterative solver used ``max_iter`` iterations.
        Disconnected: lambda_2 is 1 within ``tol``.
    """
    tol = settings.spectral_tol if tol is None else tol
    max_iter = settings.spectral_max_iter if max_iter is None else max_iter
    if tol <= 0:
        raise ValueError("tol must be positive")
    if method == "auto":
        method = "dense" if g.n <= settings.dense_limit else settings.large_method

    if g.n == 1:
        # A single vertex has no non-trivial eigenvalue.
        lambda2 = lambda_n = 0.0
        achieved, iterations, method = 0.0, 0, "dense"
    elif method == "dense":
        lambda2, lambda_n, achieved = _dense(g)
        iterations = 0
    elif method == "power":
        lambda2, lambda_n, achieved, iterations = _power(g, tol, max_iter, seed)
    else:
        lambda2, lambda_n, achieved, iterations = _lanczos(g, tol, max_iter)

    if lambda2 >= 1.0 - max(tol, achieved):
        raise Disconnected("second eigenvalue is 1", lambda2=lambda2, name=g.name)

    lam = min(1.0, max(abs(lambda2), abs(lambda_n)))
    summary = SpectralSummary(
        lam=lam,
        lambda2=lambda2,
        lambda_n=lambda_n,
        method=method,
        tol=achieved,
        iterations=iterations,
        spectral_gap=1.0 - lambda2,
    )
    logger.info(
        "spectral_summary_computed",
        name=g.name, n=g.n, method=method, lam=lam, tol=achieved, iterations=iterations,
    )
    return summary


def expected_gnp_lambda(n: int, p: float) -> float:
    """Reference scale 1/sqrt(np) of lambda for G(n, p)."""
    return 1.0 / math.sqrt(n * p)


# === SOLVERS ===

def _dense(g: Graph) -> tuple[float, float, float]:
    mat = normalized_adjacency(g).toarray()
    w = linalg.eigh(mat, eigvals_only=True)
    # eigh is backward stable: error is a small multiple of eps * ||N||, ||N|| = 1
    achieved = float(16 * g.n * np.finfo(np.float64).eps)
    return float(w[-2]), float(w[0]), achieved


def _power(g: Graph, tol: float, max_iter: int, seed: int) -> tuple[float, float, float, int]:
    mat = normalized_adjacency(g)
    u = stationary_direction(g)
    rng = np.random.default_rng(seed)
    lambda2, res2, it2 = _deflated_power(mat, u, +1.0, tol, max_iter, rng)
    lambda_n, resn, itn = _deflated_power(mat, u, -1.0, tol, max_iter, rng)
    return lambda2, lambda_n, max(res2, resn), it2 + itn


def _deflated_power(
    mat: sparse.csr_array,
    u: np.ndarray,
    sign: float,
    tol: float,
    max_iter: int,
    rng: np.random.Generator,
) -> tuple[float, float, int]:
    """Power iteration on (I + sign*N)/2 restricted to u's complement.

    Returns the Rayleigh quotient of N, its residual and the iteration count.
    """
    x = rng.normal(size=u.shape[0])
    x -= (u @ x) * u
    x /= np.linalg.norm(x)

    for iteration in range(1, max_iter + 1):
        y = mat @ x
        mu = float(x @ y)
        residual = float(np.linalg.norm(y - mu * x))
        if residual < tol:
            return mu, residual, iteration

        z = 0.5 * (x + sign * y)
        z -= (u @ z) * u
        norm = np.linalg.norm(z)
        if norm == 0.0:
            # x lies in the eigenspace of -sign; restart from a fresh direction
            z = rng.normal(size=u.shape[0])
            z -= (u @ z) * u
            norm = np.linalg.norm(z)
        x = z / norm

    logger.warning("power_iteration_exhausted", max_iter=max_iter, residual=residual, end=sign)
    raise NoConvergence(
        "power iteration did not reach tolerance", max_iter=max_iter, residual=residual
    )


def _lanczos(g: Graph, tol: float, max_iter: int) -> tuple[float, float, float, int]:
    mat = normalized_adjacency(g)
    u = stationary_direction(g)
    calls = 0

    def deflated(x: np.ndarray) -> np.ndarray:
        nonlocal calls
        calls += 1
        x = np.ravel(x)
        y = mat @ x
        # u is sent to -1, at or below every other eigenvalue of N
        return np.asarray(y - 2.0 * (u @ x) * u)

    op = LinearOperator((g.n, g.n), matvec=deflated, dtype=np.float64)
    try:
        top_vals, top_vecs = eigsh(op, k=1, which="LA", tol=tol, maxiter=max_iter)
        low_vals, low_vecs = eigsh(mat, k=1, which="SA", tol=tol, maxiter=max_iter)
    except ArpackNoConvergence as exc:
        raise NoConvergence("Lanczos did not converge", max_iter=max_iter) from exc

    lambda2, lambda_n = float(top_vals[0]), float(low_vals[0])
    residual = max(
        float(np.linalg.norm(mat @ top_vecs[:, 0] - lambda2 * top_vecs[:, 0])),
        float(np.linalg.norm(mat @ low_vecs[:, 0] - lambda_n * low_vecs[:, 0])),
    )
    return lambda2, lambda_n, residual, calls
