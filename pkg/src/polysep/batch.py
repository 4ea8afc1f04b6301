"""Batch Det-Max baselines: the log-det objective, PMF, and LD-InfoMax.

Both solvers are projected-gradient methods on the n x t output matrix with
columns constrained to the presumed source polytope; they serve as offline
correctness and performance references for the online network.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .domains import SourceDomainSpec, project_euclidean
from .exceptions import DivergenceError

__all__ = ["LogDet", "BatchResult", "logdet_correlation", "pmf_fit",
           "ldinfomax_fit", "ldinfomax_objective", "ldinfomax_grad"]


class LogDet(NamedTuple):
    value: float
    rank_deficient: bool


@dataclass
class BatchResult:
    """Outputs of a batch fit: estimates, factors, and the objective trace."""

    y: np.ndarray
    objective_trace: list[float]
    iterations: int
    h: np.ndarray | None = None          # PMF mixing factor, m x n
    w: np.ndarray | None = None          # LD-InfoMax separator, n x m
    ridge_fallbacks: int = 0


def logdet_correlation(y) -> LogDet:
    """ln det(Y Y^T) through a Cholesky factorization.

    Rank-deficient Y yields ``(-inf, True)`` rather than an exception; any
    regularization is the caller's business.
    """
    y = np.asarray(y, dtype=float)
    gram = y @ y.T
    try:
        chol = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError:
        return LogDet(-np.inf, True)
    diag = np.diag(chol)
    if np.any(diag <= 0) or not np.all(np.isfinite(diag)):
        return LogDet(-np.inf, True)
    return LogDet(float(2.0 * np.log(diag).sum()), False)


def _project_columns(spec, y):
    out = np.empty_like(y)
    for j in range(y.shape[1]):
        out[:, j] = project_euclidean(spec, y[:, j])
    return out


def _signal_subspace_init(x, n, rng):
    """Start Y from a randomly rotated orthonormal basis of the top signal subspace."""
    _, _, vt = np.linalg.svd(x, full_matrices=False)
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return q @ vt[:n, :]


def pmf_fit(x, spec: SourceDomainSpec, iters: int = 2000, lr: float = 1e-3,
            rng: np.random.Generator | None = None, penalty: float = 10.0,
            max_backtracks: int = 12) -> BatchResult:
    """Polytopic factorization X ~ H Y by penalized projected gradient ascent.

    Alternates (a) an ascent step on Y of
    ln det(Y Y^T) - (penalty/2) ||H Y - X||_F^2, i.e.
    Y += lr (2 (Y Y^T)^{-1} Y - penalty * H^T (H Y - X)); (b) columnwise
    Euclidean projection onto the polytope; (c) the exact least-squares
    refresh H = X Y^T (Y Y^T)^{-1}. The step is halved (up to
    ``max_backtracks`` times) whenever the penalized objective drops. The
    recorded trace holds ln det(Y Y^T) per iteration.
    """
    x = np.asarray(x, dtype=float)
    rng = np.random.default_rng() if rng is None else rng
    n, t = spec.n, x.shape[1]
    ridge_events = 0

    def gram_inv(y):
        nonlocal ridge_events
        gram = y @ y.T
        try:
            return np.linalg.inv(gram)
        except np.linalg.LinAlgError:
            ridge_events += 1
            warnings.warn("singular Y Y^T in PMF step; adding 1e-8 ridge",
                          RuntimeWarning, stacklevel=2)
            return np.linalg.inv(gram + 1e-8 * np.eye(n))

    y = _project_columns(spec, _signal_subspace_init(x, n, rng))
    h = x @ y.T @ gram_inv(y)

    def penalized(yy, hh):
        return logdet_correlation(yy).value - 0.5 * penalty * float(np.sum((hh @ yy - x) ** 2))

    trace = []
    step = lr
    obj = penalized(y, h)
    for _ in range(iters):
        grad = 2.0 * gram_inv(y) @ y - penalty * h.T @ (h @ y - x)
        for bt in range(max_backtracks + 1):
            y_new = _project_columns(spec, y + step * grad)
            obj_new = penalized(y_new, h)
            if obj_new >= obj or bt == max_backtracks:
                break
            step *= 0.5
        y = y_new
        if not np.all(np.isfinite(y)):
            raise DivergenceError("PMF iterate became non-finite", iteration=len(trace))
        h = x @ y.T @ gram_inv(y)
        obj = penalized(y, h)
        trace.append(logdet_correlation(y).value)
    return BatchResult(y=y, h=h, objective_trace=trace, iterations=iters,
                       ridge_fallbacks=ridge_events)


def _centered(mat):
    return mat - mat.mean(axis=1, keepdims=True)


def ldinfomax_objective(y, x, eps_reg: float) -> float:
    """J = (1/2) ln det(R_y + eps I) - (1/2) ln det(R_y - R_yx (eps I + R_x)^{-1} R_yx^T + eps I)

    with mean-removed sample covariances R_y, R_yx, R_x.
    """
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    t = y.shape[1]
    yc, xc = _centered(y), _centered(x)
    r_y = (yc @ yc.T) / t
    r_yx = (yc @ xc.T) / t
    r_x = (xc @ xc.T) / t
    eye_y = np.eye(y.shape[0])
    k = np.linalg.solve(eps_reg * np.eye(x.shape[0]) + r_x, r_yx.T)
    sign1, logdet1 = np.linalg.slogdet(r_y + eps_reg * eye_y)
    sign2, logdet2 = np.linalg.slogdet(r_y - r_yx @ k + eps_reg * eye_y)
    if sign1 <= 0 or sign2 <= 0:
        raise DivergenceError("LD-InfoMax objective lost positive definiteness")
    return 0.5 * float(logdet1 - logdet2)


def ldinfomax_grad(y, x, eps_reg: float) -> np.ndarray:
    """Analytic gradient of :func:`ldinfomax_objective` with respect to Y.

    With centering matrix C, K = (eps I + R_x)^{-1} and
    E = R_y - R_yx K R_yx^T + eps I:
    grad = (1/t) [ (R_y + eps I)^{-1} Y - E^{-1} (Y - R_yx K X) ] C.
    """
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    t = y.shape[1]
    yc, xc = _centered(y), _centered(x)
    r_y = (yc @ yc.T) / t
    r_yx = (yc @ xc.T) / t
    r_x = (xc @ xc.T) / t
    eye_y = np.eye(y.shape[0])
    kxt = np.linalg.solve(eps_reg * np.eye(x.shape[0]) + r_x, r_yx.T)  # K R_yx^T
    e = r_y - r_yx @ kxt + eps_reg * eye_y
    term1 = np.linalg.solve(r_y + eps_reg * eye_y, y)
    term2 = np.linalg.solve(e, y - kxt.T @ x)
    grad = (term1 - term2) / t
    return _centered(grad)


def ldinfomax_fit(x, spec: SourceDomainSpec, iters: int = 1500, lr: float = 50.0,
                  eps_reg: float = 1e-3, rng: np.random.Generator | None = None) -> BatchResult:
    """Maximize the log-det mutual information by projected gradient ascent on Y.

    Steps decay as lr / sqrt(k + 1); every step is followed by columnwise
    projection onto the polytope. The trace records the objective per
    iteration. The returned ``w`` is the LMMSE separator
    R_yx (eps I + R_x)^{-1} of the final outputs.
    """
    if eps_reg <= 0:
        raise ValueError("eps_reg must be positive")
    x = np.asarray(x, dtype=float)
    rng = np.random.default_rng() if rng is None else rng
    n, t = spec.n, x.shape[1]
    y = _project_columns(spec, 0.25 * (rng.random((n, t)) - 0.5))
    trace = []
    for k in range(iters):
        step = lr / np.sqrt(k + 1.0)
        y = y + step * ldinfomax_grad(y, x, eps_reg)
        if not np.all(np.isfinite(y)):
            raise DivergenceError("LD-InfoMax iterate became non-finite", iteration=k)
        y = _project_columns(spec, y)
        trace.append(ldinfomax_objective(y, x, eps_reg))
    yc, xc = _centered(y), _centered(x)
    r_yx = (yc @ xc.T) / t
    r_x = (xc @ xc.T) / t
    w = np.linalg.solve(eps_reg * np.eye(x.shape[0]) + r_x, r_yx.T).T
    return BatchResult(y=y, w=w, objective_trace=trace, iterations=iters)
