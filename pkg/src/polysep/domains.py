"""Identifiable source polytopes: membership, projection, sampling, scattering.

A source domain is either one of five named polytopes (the unit l-inf ball,
its nonnegative restriction, the unit l1 ball, its nonnegative restriction,
the unit simplex) or a general polytope assembled from per-coordinate box
bounds plus L1 bounds on index subsets. All named kinds except the simplex
are instances of the general form; the simplex carries an equality constraint
and is handled separately throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .exceptions import ProjectionDidNotConverge, RejectionCapExceeded

__all__ = [
    "DomainKind",
    "SourceDomainSpec",
    "antisparse",
    "nonneg_antisparse",
    "sparse",
    "nonneg_sparse",
    "unit_simplex",
    "general",
    "contains",
    "project_euclidean",
    "sample_uniform",
    "scatter_diagnostic",
    "project_l1_ball",
    "project_simplex",
]

DEFAULT_MEMBERSHIP_TOL = 1e-9


class DomainKind(str, Enum):
    ANTISPARSE = "antisparse"
    NONNEG_ANTISPARSE = "nonneg_antisparse"
    SPARSE = "sparse"
    NONNEG_SPARSE = "nonneg_sparse"
    UNIT_SIMPLEX = "unit_simplex"
    GENERAL = "general"


@dataclass(frozen=True)
class SourceDomainSpec:
    """Presumed source polytope.

    ``signed_set``/``nonneg_set``/``sparsity_groups`` only apply to the
    GENERAL kind; indices are 0-based internally (the CLI config format uses
    1-based lists). Signed coordinates live in [-1, 1], nonnegative ones in
    [0, 1], and each sparsity group imposes an L1 bound of 1 on its subvector.
    """

    n: int
    kind: DomainKind
    signed_set: tuple[int, ...] = ()
    nonneg_set: tuple[int, ...] = ()
    sparsity_groups: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"ambient dimension must be positive, got {self.n}")
        if self.kind is not DomainKind.GENERAL:
            if self.signed_set or self.nonneg_set or self.sparsity_groups:
                raise ValueError("index sets are only meaningful for the general kind")
            return
        signed = frozenset(self.signed_set)
        nonneg = frozenset(self.nonneg_set)
        if signed & nonneg:
            raise ValueError("signed and nonnegative index sets must be disjoint")
        if signed | nonneg != frozenset(range(self.n)):
            raise ValueError("signed and nonnegative sets must partition 0..n-1")
        for g in self.sparsity_groups:
            if len(g) < 2:
                # a singleton L1 bound duplicates the box bound
                raise ValueError(f"sparsity group {g} must have at least 2 elements")
            if len(set(g)) != len(g):
                raise ValueError(f"sparsity group {g} has repeated indices")
            if not set(g) <= set(range(self.n)):
                raise ValueError(f"sparsity group {g} has out-of-range indices")

    @property
    def is_nonneg(self) -> np.ndarray:
        """Boolean mask of coordinates constrained to [0, 1]."""
        mask = np.zeros(self.n, dtype=bool)
        if self.kind in (DomainKind.NONNEG_ANTISPARSE, DomainKind.NONNEG_SPARSE,
                         DomainKind.UNIT_SIMPLEX):
            mask[:] = True
        elif self.kind is DomainKind.GENERAL:
            mask[list(self.nonneg_set)] = True
        return mask

    def groups(self) -> tuple[tuple[int, ...], ...]:
        """Active L1 groups, with the named sparse kinds normalized to one global group."""
        if self.kind in (DomainKind.SPARSE, DomainKind.NONNEG_SPARSE):
            return (tuple(range(self.n)),)
        if self.kind is DomainKind.GENERAL:
            return self.sparsity_groups
        return ()

    def to_general(self) -> "SourceDomainSpec":
        """Rewrite a named kind in the general box/group-L1 form.

        The unit simplex is excluded: it carries an equality constraint the
        general form cannot express.
        """
        if self.kind is DomainKind.GENERAL:
            return self
        if self.kind is DomainKind.UNIT_SIMPLEX:
            raise ValueError("the unit simplex has no general-form equivalent")
        every = tuple(range(self.n))
        nonneg = self.kind in (DomainKind.NONNEG_ANTISPARSE, DomainKind.NONNEG_SPARSE)
        groups = self.groups()
        return SourceDomainSpec(
            n=self.n,
            kind=DomainKind.GENERAL,
            signed_set=() if nonneg else every,
            nonneg_set=every if nonneg else (),
            sparsity_groups=groups,
        )


def antisparse(n: int) -> SourceDomainSpec:
    return SourceDomainSpec(n, DomainKind.ANTISPARSE)


def nonneg_antisparse(n: int) -> SourceDomainSpec:
    return SourceDomainSpec(n, DomainKind.NONNEG_ANTISPARSE)


def sparse(n: int) -> SourceDomainSpec:
    return SourceDomainSpec(n, DomainKind.SPARSE)


def nonneg_sparse(n: int) -> SourceDomainSpec:
    return SourceDomainSpec(n, DomainKind.NONNEG_SPARSE)


def unit_simplex(n: int) -> SourceDomainSpec:
    return SourceDomainSpec(n, DomainKind.UNIT_SIMPLEX)


def general(n, signed_set=(), nonneg_set=(), sparsity_groups=()) -> SourceDomainSpec:
    return SourceDomainSpec(
        n,
        DomainKind.GENERAL,
        signed_set=tuple(sorted(signed_set)),
        nonneg_set=tuple(sorted(nonneg_set)),
        sparsity_groups=tuple(tuple(g) for g in sparsity_groups),
    )


def _check_vector(spec: SourceDomainSpec, v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (spec.n,):
        raise ValueError(f"expected a length-{spec.n} vector, got shape {v.shape}")
    return v


def contains(spec: SourceDomainSpec, s, tol: float = DEFAULT_MEMBERSHIP_TOL) -> bool:
    """True iff every defining inequality of the polytope holds within ``tol``."""
    s = _check_vector(spec, s)
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    if spec.kind is DomainKind.UNIT_SIMPLEX:
        return bool(np.all(s >= -tol) and abs(s.sum() - 1.0) <= tol)
    nonneg = spec.is_nonneg
    lo = np.where(nonneg, 0.0, -1.0)
    if np.any(s < lo - tol) or np.any(s > 1.0 + tol):
        return False
    for g in spec.groups():
        if np.abs(s[list(g)]).sum() > 1.0 + tol:
            return False
    return True


def project_l1_ball(v: np.ndarray, radius: float = 1.0) -> np.ndarray:
    """Euclidean projection onto the L1 ball, by sorting (Duchi et al.)."""
    a = np.abs(v)
    if a.sum() <= radius:
        return v.astype(float, copy=True)
    u = np.sort(a)[::-1]
    css = np.cumsum(u) - radius
    idx = np.arange(1, len(u) + 1)
    rho = np.nonzero(u > css / idx)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.sign(v) * np.maximum(a - theta, 0.0)


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the unit simplex, by sorting."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, len(u) + 1)
    rho = np.nonzero(u > css / idx)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def _project_nonneg_l1(v: np.ndarray) -> np.ndarray:
    # projection onto {s >= 0, sum(s) <= 1}: clip, then shift only if the
    # clipped point still overshoots the L1 facet
    w = np.maximum(v, 0.0)
    if w.sum() <= 1.0:
        return w
    return project_simplex(v)


def _box_clip(spec: SourceDomainSpec, v: np.ndarray) -> np.ndarray:
    lo = np.where(spec.is_nonneg, 0.0, -1.0)
    return np.clip(v, lo, 1.0)


def project_euclidean(spec: SourceDomainSpec, v, *, max_sweeps: int = 500,
                      residual: float = 1e-9) -> np.ndarray:
    """Euclidean projection of ``v`` onto the polytope.

    Named kinds use exact closed/sort-based formulas. The general kind
    alternates projections onto the coordinate box and each group's L1 ball
    with Dykstra corrections; after the sweep residual drops below
    ``residual`` a final monotone cleanup pass (group projections, then box
    clip -- both only shrink coordinate magnitudes) makes the returned point
    exactly feasible. Raises :class:`ProjectionDidNotConverge` carrying the
    cleaned last iterate if the sweep cap is hit first.
    """
    v = _check_vector(spec, v)
    kind = spec.kind
    if kind is DomainKind.ANTISPARSE:
        return np.clip(v, -1.0, 1.0)
    if kind is DomainKind.NONNEG_ANTISPARSE:
        return np.clip(v, 0.0, 1.0)
    if kind is DomainKind.SPARSE:
        return project_l1_ball(v)
    if kind is DomainKind.NONNEG_SPARSE:
        return _project_nonneg_l1(v)
    if kind is DomainKind.UNIT_SIMPLEX:
        return project_simplex(v)

    groups = [np.asarray(g, dtype=int) for g in spec.groups()]
    x = v.copy()
    # one correction vector per constraint set: the box plus each group
    corrections = [np.zeros(spec.n) for _ in range(len(groups) + 1)]
    converged = False
    change = np.inf
    for _ in range(max_sweeps):
        x_prev = x.copy()
        for ci, g in enumerate(groups):
            z = x.copy()
            z[g] = z[g] + corrections[ci][g]
            proj = z.copy()
            proj[g] = project_l1_ball(z[g])
            corrections[ci] = z - proj
            x = proj
        z = x + corrections[-1]
        proj = _box_clip(spec, z)
        corrections[-1] = z - proj
        x = proj
        change = float(np.max(np.abs(x - x_prev))) if spec.n else 0.0
        if change <= residual:
            converged = True
            break

    cleaned = x.copy()
    for g in groups:
        cleaned[g] = project_l1_ball(cleaned[g])
    cleaned = _box_clip(spec, cleaned)
    if not converged:
        raise ProjectionDidNotConverge(
            f"alternating projection did not reach residual {residual:g} "
            f"in {max_sweeps} sweeps (last change {change:g})",
            last_iterate=cleaned,
            residual=change,
        )
    return cleaned


def _project_columns(spec, cols, **kwargs):
    out = np.empty_like(cols, dtype=float)
    for j in range(cols.shape[1]):
        out[:, j] = project_euclidean(spec, cols[:, j], **kwargs)
    return out


def sample_uniform(spec: SourceDomainSpec, count: int, rng: np.random.Generator,
                   *, max_attempt_factor: int = 1000) -> np.ndarray:
    """Draw ``count`` source vectors from the domain, one per column.

    Box kinds are i.i.d. coordinatewise uniform. L1-ball kinds draw uniform
    box samples and project them (the generator used for the sparse
    experiments; mass accumulates on the facets, which is intentional). The
    simplex uses exponential spacings, i.e. a flat Dirichlet. The general
    kind rejection-samples from its bounding box.
    """
    if count < 1:
        raise ValueError("count must be positive")
    n, kind = spec.n, spec.kind
    if kind is DomainKind.ANTISPARSE:
        return rng.uniform(-1.0, 1.0, size=(n, count))
    if kind is DomainKind.NONNEG_ANTISPARSE:
        return rng.uniform(0.0, 1.0, size=(n, count))
    if kind is DomainKind.SPARSE:
        raw = rng.uniform(-1.0, 1.0, size=(n, count))
        return _project_columns(spec, raw)
    if kind is DomainKind.NONNEG_SPARSE:
        raw = rng.uniform(0.0, 1.0, size=(n, count))
        return _project_columns(spec, raw)
    if kind is DomainKind.UNIT_SIMPLEX:
        e = rng.exponential(1.0, size=(n, count))
        return e / e.sum(axis=0, keepdims=True)

    lo = np.where(spec.is_nonneg, 0.0, -1.0)
    out = np.empty((n, count))
    filled = 0
    attempts = 0
    cap = max_attempt_factor * count
    while filled < count:
        batch = min(max(count - filled, 64), cap - attempts)
        if batch <= 0:
            rate = filled / attempts if attempts else 0.0
            raise RejectionCapExceeded(
                f"rejection sampler exceeded {cap} attempts "
                f"(estimated acceptance rate {rate:.3g})",
                acceptance_rate=rate,
            )
        cand = rng.uniform(lo[:, None], 1.0, size=(n, batch))
        attempts += batch
        ok = np.ones(batch, dtype=bool)
        for g in spec.groups():
            ok &= np.abs(cand[list(g), :]).sum(axis=0) <= 1.0
        take = min(int(ok.sum()), count - filled)
        if take:
            out[:, filled:filled + take] = cand[:, np.nonzero(ok)[0][:take]]
            filled += take
    return out


# MVIE of the unit l-inf ball is the unit ball; of the unit l1 ball the ball
# of radius 1/sqrt(n)
_MVIE_RADIUS = {
    DomainKind.ANTISPARSE: lambda n: 1.0,
    DomainKind.SPARSE: lambda n: 1.0 / np.sqrt(n),
}


def scatter_diagnostic(spec: SourceDomainSpec, S, directions: int,
                       rng: np.random.Generator) -> float:
    """Sampled-direction evidence of sufficient scattering.

    Returns ``min_d [ support of conv(S) along d  -  MVIE radius ]`` over
    ``directions`` random unit directions. A positive margin is necessary
    (never sufficient) evidence that the convex hull of the sample columns
    contains the domain's maximum-volume inscribed ball. Only the kinds with
    an analytic spherical MVIE are supported.
    """
    if spec.kind not in _MVIE_RADIUS:
        raise ValueError(f"scatter diagnostic is only defined for antisparse/sparse "
                         f"domains, not {spec.kind.value}")
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != spec.n:
        raise ValueError(f"expected an {spec.n} x t sample matrix, got {S.shape}")
    if S.shape[1] < spec.n + 1:
        raise ValueError(f"need at least n+1 = {spec.n + 1} samples, got {S.shape[1]}")
    if directions < 1:
        raise ValueError("directions must be positive")
    r = _MVIE_RADIUS[spec.kind](spec.n)
    d = rng.standard_normal((directions, spec.n))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    support = (d @ S).max(axis=1)
    return float(np.min(support - r))
