"""Small input-validation helpers shared by the estimator front end."""

from __future__ import annotations

import numpy as np

__all__ = ["check_samples_matrix", "check_random_state", "as_domain"]


def check_samples_matrix(x, *, name="X", min_samples=1) -> np.ndarray:
    """Validate an (n_samples, n_features) float matrix, rejecting non-finite entries."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {x.shape}")
    if x.shape[0] < min_samples:
        raise ValueError(f"{name} needs at least {min_samples} samples, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite values")
    return x


def check_random_state(random_state) -> np.random.Generator:
    """Coerce None / int seed / Generator into a numpy Generator."""
    if isinstance(random_state, np.random.Generator):
        return random_state
    return np.random.default_rng(random_state)


def as_domain(domain, n: int):
    """Coerce a domain argument (spec object or kind name) to a spec of dimension n."""
    from .domains import DomainKind, SourceDomainSpec

    if isinstance(domain, SourceDomainSpec):
        if domain.n != n:
            raise ValueError(f"domain has dimension {domain.n}, expected {n}")
        return domain
    kind = DomainKind(domain)
    if kind is DomainKind.GENERAL:
        raise ValueError("general domains must be passed as a SourceDomainSpec")
    return SourceDomainSpec(n, kind)
