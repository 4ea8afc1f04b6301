"""Online Det-Max network with two weighted-similarity-matching layers.

Per sample, recurrent neural dynamics settle a hidden vector h and an output
y (kept inside the presumed source domain by its activation), after which the
four synaptic matrices follow exponential-forgetting Hebbian updates and the
two diagonal gain vectors follow their homeostatic rule. Output-layer
structure is dictated by the domain: box domains use clipping activations,
L1-constrained domains add inhibitory neurons whose activations threshold the
outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .domains import DomainKind, SourceDomainSpec, contains, project_euclidean
from .exceptions import DivergenceError

__all__ = [
    "WsmHyper",
    "WsmState",
    "NeuralTrace",
    "gamma_sq_complement",
    "neural_step_size",
    "output_scale",
    "descent_direction_h",
    "descent_direction_u",
    "apply_output_activation",
    "run_neural_dynamics",
    "update_gains",
    "update_synapses",
    "train_online",
    "separator_matrix",
    "cost_quadratic",
    "grad_h_cost",
    "grad_y_cost",
]


@dataclass(frozen=True)
class WsmHyper:
    """Hyperparameters for the online network.

    ``forget_nu``/``forget_floor`` drive the schedule
    1 - gamma^2(t) = max(nu / (1 + ln(1 + t)), floor). ``mu_d1``/``mu_d2``
    are the gain-update time constants (an explicit Euler step of size
    ``step_scale / mu`` is taken per sample). ``lr_*`` set the neural
    iteration step max(lr_base / (1 + tau * lr_decay), lr_floor).
    """

    beta: float = 0.5
    lambda_sm: float = 1.0 - 1e-5
    forget_nu: float = 0.25
    forget_floor: float = 0.001
    mu_d1: float = 1.0
    mu_d2: float = 100.0
    d1_range: tuple[float, float] = (1e-6, 1e6)
    d2_range: tuple[float, float] = (1.0, 1.001)
    tau_max: int = 750
    eps: float = 1e-6
    lr_base: float = 0.75
    lr_decay: float = 0.005
    lr_floor: float = 0.05
    hidden_clip: float = 10.0
    # zero-init of v/u/a per sample is the default; warm start reuses the
    # previous sample's h, y as the starting point
    warm_start: bool = False
    # step_scale policy for the per-sample gain update: "forgetting" ties it
    # to 1 - gamma^2(t), "constant" uses 1.0
    gain_step: str = "forgetting"
    # anti-windup: rebuild the voltages from the clipped h/y after each
    # iteration so saturated units do not accumulate drive they cannot express
    resubstitute: bool = False

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must lie in [0, 1]")
        if not 0.0 <= self.lambda_sm <= 1.0:
            raise ValueError("lambda_sm must lie in [0, 1]")
        if not 0.0 < self.forget_floor <= self.forget_nu:
            raise ValueError("need 0 < forget_floor <= forget_nu")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        for name, rng_ in (("d1_range", self.d1_range), ("d2_range", self.d2_range)):
            lo, hi = rng_
            if not (0 < lo <= hi):
                raise ValueError(f"{name} must be a nonempty positive interval")
        if self.gain_step not in ("forgetting", "constant"):
            raise ValueError(f"unknown gain_step policy {self.gain_step!r}")


@dataclass
class WsmState:
    """Learned network quantities. Diagonals d1/d2 are stored as vectors.

    The lateral matrices stay symmetric (updates are symmetrized); derived
    quantities like diag(M_H) are recomputed on demand, never cached.
    """

    w_hx: np.ndarray
    w_yh: np.ndarray
    m_h: np.ndarray
    m_y: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    t: int = 0

    def __post_init__(self):
        n, m = self.w_hx.shape
        if self.w_yh.shape != (n, n) or self.m_h.shape != (n, n) or self.m_y.shape != (n, n):
            raise ValueError("inconsistent state shapes")
        if self.d1.shape != (n,) or self.d2.shape != (n,):
            raise ValueError("gain diagonals must be length-n vectors")
        if np.any(self.d1 <= 0) or np.any(self.d2 <= 0):
            raise ValueError("gain diagonals must be strictly positive")

    @property
    def n(self) -> int:
        return self.w_hx.shape[0]

    @property
    def m(self) -> int:
        return self.w_hx.shape[1]

    def copy(self) -> "WsmState":
        return WsmState(self.w_hx.copy(), self.w_yh.copy(), self.m_h.copy(),
                        self.m_y.copy(), self.d1.copy(), self.d2.copy(), self.t)


@dataclass(frozen=True)
class NeuralTrace:
    """Final iterates of one sample's neural dynamics."""

    h: np.ndarray
    y: np.ndarray
    v: np.ndarray
    u: np.ndarray
    lagrange: np.ndarray
    iters: int
    converged: bool


def gamma_sq_complement(hyper: WsmHyper, t: int) -> float:
    """Scheduled 1 - gamma^2 at sample index t (1-based): max(nu/(1+ln(1+t)), floor)."""
    if t < 1:
        raise ValueError(f"sample index must be >= 1, got {t}")
    return max(hyper.forget_nu / (1.0 + math.log(1.0 + t)), hyper.forget_floor)


def neural_step_size(hyper: WsmHyper, tau: int) -> float:
    """Step size of neural iteration tau: max(lr_base/(1 + tau*lr_decay), lr_floor)."""
    if tau < 0:
        raise ValueError(f"iteration count must be >= 0, got {tau}")
    return max(hyper.lr_base / (1.0 + tau * hyper.lr_decay), hyper.lr_floor)


def output_scale(spec: SourceDomainSpec, hyper: WsmHyper) -> float:
    """Scale on the output-layer drive: 1 for box-only named kinds,
    lambda_sm * (1 - beta) for the thresholded (sparse/simplex/general) ones."""
    if spec.kind in (DomainKind.ANTISPARSE, DomainKind.NONNEG_ANTISPARSE):
        return 1.0
    return hyper.lambda_sm * (1.0 - hyper.beta)


def _gamma_bar(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    gamma = np.diag(m).copy()
    return gamma, m - np.diag(gamma)


def descent_direction_h(state: WsmState, x, h, y, hyper: WsmHyper, v=None) -> np.ndarray:
    """Right-hand side of the hidden-layer voltage dynamics.

    Returns -v - lambda_sm * [((1-b) Mbar_H + b D1 Mbar_H D1) h
    - b D1 W_HX x - (1-b) W_YH^T D2 y]; when ``v`` is not supplied it is
    reconstructed from h as ((1-b) Gamma_H + b D1 Gamma_H D1) h.
    """
    beta, lam = hyper.beta, hyper.lambda_sm
    gam_h, mbar_h = _gamma_bar(state.m_h)
    d1, d2 = state.d1, state.d2
    if v is None:
        v = ((1.0 - beta) * gam_h + beta * d1 * gam_h * d1) * h
    drive = ((1.0 - beta) * (mbar_h @ h) + beta * d1 * (mbar_h @ (d1 * h))
             - beta * d1 * (state.w_hx @ x)
             - (1.0 - beta) * (state.w_yh.T @ (d2 * y)))
    return -v - lam * drive


def descent_direction_u(state: WsmState, h, y, hyper: WsmHyper,
                        domain_scale: float, u=None) -> np.ndarray:
    """Right-hand side of the output-layer dynamics: -u + s (W_YH h - Mbar_Y D2 y).

    ``domain_scale`` is :func:`output_scale` for the domain; ``u`` defaults to
    its substitution value s * Gamma_Y * D2 * y.
    """
    gam_y, mbar_y = _gamma_bar(state.m_y)
    if u is None:
        u = domain_scale * gam_y * state.d2 * y
    return -u + domain_scale * (state.w_yh @ h - mbar_y @ (state.d2 * y))


def _soft_threshold(x: np.ndarray, thresh) -> np.ndarray:
    return np.sign(x) * np.maximum(np.abs(x) - thresh, 0.0)


def apply_output_activation(spec: SourceDomainSpec, u, gamma_y, d2,
                            hyper: WsmHyper, lagrange) -> np.ndarray:
    """Map output voltages to domain-respecting outputs.

    Box kinds clip u_i / (Gamma_Y,ii D2,ii). Thresholded kinds rescale by
    lambda_sm (1-beta) and soft-threshold (ReLU for nonnegative coordinates)
    at the sum of the inhibitory activations over the groups containing each
    coordinate; general-kind coordinates in no group fall back to clipping.
    """
    u = np.asarray(u, dtype=float)
    gamma_y = np.asarray(gamma_y, dtype=float)
    d2 = np.asarray(d2, dtype=float)
    if np.any(gamma_y <= 0) or np.any(d2 <= 0):
        raise ValueError("gamma_y and d2 must be strictly positive")
    scale = output_scale(spec, hyper)
    ylin = u / (scale * gamma_y * d2)
    groups = spec.groups()
    lagrange = np.asarray(lagrange, dtype=float).reshape(-1)
    if len(lagrange) != len(groups):
        raise ValueError(f"expected {len(groups)} inhibitory activations, got {len(lagrange)}")
    if not groups:
        lo = np.where(spec.is_nonneg, 0.0, -1.0)
        return np.clip(ylin, lo, 1.0)
    thresh = np.zeros(spec.n)
    in_group = np.zeros(spec.n, dtype=bool)
    for lam_k, g in zip(lagrange, groups):
        thresh[list(g)] += lam_k
        in_group[list(g)] = True
    nonneg = spec.is_nonneg
    out = np.where(nonneg, np.maximum(ylin - thresh, 0.0), _soft_threshold(ylin, thresh))
    free = ~in_group
    if free.any():
        lo = np.where(nonneg, 0.0, -1.0)
        out[free] = np.clip(ylin[free], lo[free], 1.0)
    return out


def _spec_group_arrays(spec: SourceDomainSpec) -> tuple[np.ndarray, np.ndarray]:
    groups = spec.groups()
    offsets = np.zeros(len(groups) + 1, dtype=np.int64)
    idx = []
    for k, g in enumerate(groups):
        idx.extend(g)
        offsets[k + 1] = len(idx)
    return offsets, np.asarray(idx, dtype=np.int64)


@njit(cache=True)
def _dynamics_kernel(a_h, b_x, b_y, h_den, w_yh, mbar_y_d2, u_den, out_scale,
                     nonneg, in_group, grp_off, grp_idx, rectify, resub,
                     tau_max, eps, lr_base, lr_decay, lr_floor, hidden_clip,
                     v, u, h, y, a_lam):
    n = h_den.shape[0]
    n_groups = grp_off.shape[0] - 1
    lam = np.zeros(n_groups)
    for k in range(n_groups):
        lam[k] = max(a_lam[k], 0.0) if rectify else a_lam[k]
    thresh = np.zeros(n)
    v_prev = v.copy()
    u_prev = u.copy()
    iters = 0
    converged = False
    bad_iter = -1
    for tau in range(tau_max):
        eta = lr_base / (1.0 + tau * lr_decay)
        if eta < lr_floor:
            eta = lr_floor
        # hidden layer voltage step and activation
        dv = -v - (a_h @ h - b_x - b_y @ y)
        for i in range(n):
            v[i] = v[i] + eta * dv[i]
            hi = v[i] / h_den[i]
            if hi > hidden_clip:
                hi = hidden_clip
            elif hi < -hidden_clip:
                hi = -hidden_clip
            h[i] = hi
        # output layer voltage step
        du = -u + out_scale * (w_yh @ h - mbar_y_d2 @ y)
        for i in range(n):
            u[i] = u[i] + eta * du[i]
        # output activation with current inhibitory levels
        for i in range(n):
            thresh[i] = 0.0
        for k in range(n_groups):
            for j in range(grp_off[k], grp_off[k + 1]):
                thresh[grp_idx[j]] += lam[k]
        for i in range(n):
            yl = u[i] / u_den[i]
            if in_group[i]:
                if nonneg[i]:
                    yi = yl - thresh[i]
                    y[i] = yi if yi > 0.0 else 0.0
                else:
                    mag = abs(yl) - thresh[i]
                    y[i] = (mag if mag > 0.0 else 0.0) * (1.0 if yl >= 0.0 else -1.0)
            else:
                if nonneg[i]:
                    y[i] = min(max(yl, 0.0), 1.0)
                else:
                    y[i] = min(max(yl, -1.0), 1.0)
        # inhibitory neurons integrate their group's constraint violation
        for k in range(n_groups):
            viol = -1.0
            for j in range(grp_off[k], grp_off[k + 1]):
                yi = y[grp_idx[j]]
                viol += yi if nonneg[grp_idx[j]] else abs(yi)
            a_lam[k] += eta * (-a_lam[k] + viol + lam[k])
            lam[k] = max(a_lam[k], 0.0) if rectify else a_lam[k]
        if resub:
            for i in range(n):
                v[i] = h_den[i] * h[i]
                u[i] = u_den[i] * y[i]
        iters = tau + 1
        finite = True
        for i in range(n):
            if not (np.isfinite(v[i]) and np.isfinite(u[i])):
                finite = False
        if not finite:
            bad_iter = iters
            break
        # stop when both voltages have settled in relative terms
        nv = 0.0
        dnv = 0.0
        nu_ = 0.0
        dnu = 0.0
        for i in range(n):
            nv += v[i] * v[i]
            dnv += (v[i] - v_prev[i]) ** 2
            nu_ += u[i] * u[i]
            dnu += (u[i] - u_prev[i]) ** 2
            v_prev[i] = v[i]
            u_prev[i] = u[i]
        nv = np.sqrt(nv)
        dnv = np.sqrt(dnv)
        nu_ = np.sqrt(nu_)
        dnu = np.sqrt(dnu)
        v_ok = (dnv <= eps * nv) if nv >= 1e-12 else (dnv <= eps)
        u_ok = (dnu <= eps * nu_) if nu_ >= 1e-12 else (dnu <= eps)
        if v_ok and u_ok:
            converged = True
            break
    return iters, converged, bad_iter, lam


def _dynamics_setup(state: WsmState, x, hyper: WsmHyper, spec: SourceDomainSpec):
    beta, lam = hyper.beta, hyper.lambda_sm
    d1, d2 = state.d1, state.d2
    gam_h, mbar_h = _gamma_bar(state.m_h)
    gam_y, mbar_y = _gamma_bar(state.m_y)
    scale = output_scale(spec, hyper)
    a_h = lam * ((1.0 - beta) * mbar_h + beta * (np.outer(d1, d1) * mbar_h))
    b_x = lam * beta * (d1 * (state.w_hx @ x))
    b_y = lam * (1.0 - beta) * (state.w_yh.T * d2[None, :])
    h_den = lam * gam_h * ((1.0 - beta) + beta * d1 ** 2)
    mbar_y_d2 = mbar_y * d2[None, :]
    u_den = scale * gam_y * d2
    return a_h, b_x, b_y, h_den, mbar_y_d2, u_den, scale


def run_neural_dynamics(state: WsmState, x, hyper: WsmHyper, spec: SourceDomainSpec,
                        h0=None, y0=None) -> NeuralTrace:
    """Settle h and y for one input by Euler-iterating the network dynamics.

    Voltages (and inhibitory activations, where the domain has L1 groups)
    start at zero unless ``hyper.warm_start`` and a previous (h0, y0) pair are
    given. Iteration stops when the relative change of both voltage vectors
    drops below ``hyper.eps`` (absolute below 1e-12 norm), or at tau_max.
    If the settled output misses domain membership at 1e-9 (the inhibitory
    constraints are only exact in the limit) it is nudged back by Euclidean
    projection. Raises :class:`DivergenceError` on non-finite values.
    """
    x = np.ascontiguousarray(x, dtype=float)
    n = state.n
    if x.shape != (state.m,):
        raise ValueError(f"expected a length-{state.m} input, got {x.shape}")
    a_h, b_x, b_y, h_den, mbar_y_d2, u_den, scale = _dynamics_setup(state, x, hyper, spec)
    grp_off, grp_idx = _spec_group_arrays(spec)
    n_groups = len(grp_off) - 1
    in_group = np.zeros(n, dtype=np.bool_)
    if n_groups:
        in_group[grp_idx] = True
    nonneg = spec.is_nonneg
    v = np.zeros(n)
    u = np.zeros(n)
    h = np.zeros(n)
    y = np.zeros(n)
    a_lam = np.zeros(n_groups)
    if hyper.warm_start and h0 is not None and y0 is not None:
        h = np.asarray(h0, dtype=float).copy()
        y = np.asarray(y0, dtype=float).copy()
        v = h_den * h
        u = u_den * y
    iters, converged, bad_iter, lam_out = _dynamics_kernel(
        a_h, b_x, b_y, h_den, state.w_yh, mbar_y_d2, u_den, scale,
        nonneg, in_group, grp_off, grp_idx,
        spec.kind is not DomainKind.UNIT_SIMPLEX, hyper.resubstitute,
        hyper.tau_max, hyper.eps, hyper.lr_base, hyper.lr_decay, hyper.lr_floor,
        hyper.hidden_clip, v, u, h, y, a_lam)
    if bad_iter >= 0:
        raise DivergenceError(
            f"neural dynamics produced non-finite values at iteration {bad_iter}",
            iteration=bad_iter)
    if not contains(spec, y, 1e-9):
        y = project_euclidean(spec, y)
    return NeuralTrace(h=h, y=y, v=v, u=u, lagrange=lam_out,
                       iters=int(iters), converged=bool(converged))


def update_synapses(state: WsmState, h, x, y, gamma_sq: float) -> WsmState:
    """Exponentially-forgetting Hebbian update of all four synaptic matrices.

    M_H <- g^2 M_H + (1-g^2) h h^T and likewise for W_HX, W_YH, M_Y; the
    lateral matrices are re-symmetrized to keep roundoff from accumulating.
    """
    if not 0.0 < gamma_sq < 1.0:
        raise ValueError(f"gamma_sq must lie in (0, 1), got {gamma_sq}")
    g2, c = gamma_sq, 1.0 - gamma_sq
    state.m_h *= g2
    state.m_h += c * np.outer(h, h)
    state.m_h = 0.5 * (state.m_h + state.m_h.T)
    state.w_hx *= g2
    state.w_hx += c * np.outer(h, x)
    state.m_y *= g2
    state.m_y += c * np.outer(y, y)
    state.m_y = 0.5 * (state.m_y + state.m_y.T)
    state.w_yh *= g2
    state.w_yh += c * np.outer(y, h)
    return state


def update_gains(state: WsmState, hyper: WsmHyper, step_scale: float) -> WsmState:
    """One explicit Euler step of the homeostatic gain dynamics.

    dD_{1,ii} = -(step_scale / mu_d1) [ lambda_sm beta (||M_H i,:||^2_{D1}
    - ||W_HX i,:||^2) + (1 - lambda_sm) / D_{1,ii} ], then clipped into
    d1_range; layer 2 is analogous with lambda_sm (1 - beta). The gain 1/D
    rises when recent input activation outweighs output activation.
    """
    lam, beta = hyper.lambda_sm, hyper.beta
    wnorm1 = (state.m_h ** 2) @ state.d1          # ||M_H i,:||^2 weighted by D1
    fnorm1 = np.einsum("ij,ij->i", state.w_hx, state.w_hx)
    grad1 = lam * beta * (wnorm1 - fnorm1) + (1.0 - lam) / state.d1
    state.d1 = np.clip(state.d1 - (step_scale / hyper.mu_d1) * grad1, *hyper.d1_range)
    wnorm2 = (state.m_y ** 2) @ state.d2
    fnorm2 = np.einsum("ij,ij->i", state.w_yh, state.w_yh)
    grad2 = lam * (1.0 - beta) * (wnorm2 - fnorm2) + (1.0 - lam) / state.d2
    state.d2 = np.clip(state.d2 - (step_scale / hyper.mu_d2) * grad2, *hyper.d2_range)
    return state


def separator_matrix(state: WsmState, hyper: WsmHyper) -> np.ndarray:
    """Overall linear map x -> y implied by the unconstrained fixed point.

    Solving the settled dynamics for h and y without activations gives
    y = D2^{-1} M_Y^{-1} W_YH h and
    [b D1 M_H D1 + (1-b) M_H - (1-b) W_YH^T M_Y^{-1} W_YH] h = b D1 W_HX x
    (the lambda_sm factors cancel). Useful for scoring and for applying a
    trained network to fresh mixtures.
    """
    beta = hyper.beta
    d1, d2 = state.d1, state.d2
    myinv_wyh = np.linalg.solve(state.m_y, state.w_yh)
    p = (beta * (np.outer(d1, d1) * state.m_h) + (1.0 - beta) * state.m_h
         - (1.0 - beta) * state.w_yh.T @ myinv_wyh)
    wl1 = np.linalg.solve(p, beta * (d1[:, None] * state.w_hx))
    wl2 = myinv_wyh / d2[:, None]
    return wl2 @ wl1


def cost_quadratic(state: WsmState, x, h, y, hyper: WsmHyper) -> float:
    """Sample cost C(h, y): the h/y-dependent part of the online objective.

    C = beta c1 + (1-beta) c2 with
    c1 = 2 h^T D1 M_H D1 h - 4 h^T D1 W_HX x,
    c2 = 2 y^T D2 M_Y D2 y - 4 y^T D2 W_YH h + 2 h^T M_H h.
    """
    beta = hyper.beta
    d1h = state.d1 * h
    d2y = state.d2 * y
    c1 = 2.0 * d1h @ (state.m_h @ d1h) - 4.0 * d1h @ (state.w_hx @ x)
    c2 = (2.0 * d2y @ (state.m_y @ d2y) - 4.0 * d2y @ (state.w_yh @ h)
          + 2.0 * h @ (state.m_h @ h))
    return float(beta * c1 + (1.0 - beta) * c2)


def grad_h_cost(state: WsmState, x, h, y, hyper: WsmHyper) -> np.ndarray:
    """Analytic gradient of :func:`cost_quadratic` with respect to h."""
    beta = hyper.beta
    return 4.0 * ((1.0 - beta) * (state.m_h @ h)
                  + beta * state.d1 * (state.m_h @ (state.d1 * h))
                  - beta * state.d1 * (state.w_hx @ x)
                  - (1.0 - beta) * (state.w_yh.T @ (state.d2 * y)))


def grad_y_cost(state: WsmState, x, h, y, hyper: WsmHyper) -> np.ndarray:
    """Analytic gradient of :func:`cost_quadratic` with respect to y."""
    beta = hyper.beta
    return 4.0 * (1.0 - beta) * (state.d2 * (state.m_y @ (state.d2 * y))
                                 - state.d2 * (state.w_yh @ h))


def train_online(X, spec: SourceDomainSpec, hyper: WsmHyper, init_state: WsmState,
                 callback=None, callback_period: int = 1000,
                 skip_divergent: bool = False):
    """Train the network over the columns of X, returning (state, Y, diagnostics).

    Per sample: evaluate the forgetting schedule, settle the neural dynamics,
    record the output, then apply the synaptic and gain updates. ``callback``
    (if given) receives ``(sample_index, state_copy)`` every
    ``callback_period`` samples and once more at the end. Divergent samples
    raise :class:`DivergenceError` carrying the sample index, unless
    ``skip_divergent`` is set, in which case the sample is recorded as zero
    output and skipped for learning.
    """
    X = np.ascontiguousarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != init_state.m:
        raise ValueError(f"expected an {init_state.m} x t mixture matrix, got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("mixtures must be finite")
    state = init_state.copy()
    n, t = state.n, X.shape[1]
    Y = np.zeros((n, t))
    iters = np.zeros(t, dtype=int)
    converged = np.zeros(t, dtype=bool)
    skipped = []
    h_prev = None
    y_prev = None
    for j in range(t):
        t_abs = state.t + 1
        gc = gamma_sq_complement(hyper, t_abs)
        gamma_sq = 1.0 - gc
        try:
            trace = run_neural_dynamics(state, X[:, j], hyper, spec,
                                        h0=h_prev, y0=y_prev)
        except DivergenceError as err:
            err.sample = j
            if not skip_divergent:
                raise
            skipped.append(j)
            state.t = t_abs
            continue
        Y[:, j] = trace.y
        iters[j] = trace.iters
        converged[j] = trace.converged
        h_prev, y_prev = trace.h, trace.y
        update_synapses(state, trace.h, X[:, j], trace.y, gamma_sq)
        step_scale = gc if hyper.gain_step == "forgetting" else 1.0
        update_gains(state, hyper, step_scale)
        state.t = t_abs
        if callback is not None and (j + 1) % callback_period == 0:
            callback(j + 1, state.copy())
    if callback is not None and t % callback_period != 0 and t > 0:
        callback(t, state.copy())
    diagnostics = {
        "iters": iters,
        "converged": converged,
        "skipped_samples": skipped,
        "final_gamma_sq_complement": gamma_sq_complement(hyper, state.t) if state.t else None,
    }
    return state, Y, diagnostics
