"""Named hyperparameter presets and state initializers for the online network.

Each preset bundles the hyperparameters and initial synapse/gain values used
in one of the reported experiments. Synapse matrices start either at
identity or at row-normalized random values; gains start at the listed
multiples of identity and stay clipped inside the listed ranges.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .domains import DomainKind
from .wsm import WsmHyper, WsmState

__all__ = ["WsmPreset", "PRESETS", "make_state", "get_preset"]


@dataclass(frozen=True)
class WsmPreset:
    """Initial values plus hyperparameters for one experiment setup."""

    name: str
    hyper: WsmHyper
    d1_init: float
    d2_init: float
    m_h_init: float
    m_y_init: float
    w_init: str = "identity"        # "identity" | "random_rows"
    w_row_norm: float = 0.0033
    default_kind: DomainKind | None = None

    def with_overrides(self, **hyper_overrides) -> "WsmPreset":
        return replace(self, hyper=replace(self.hyper, **hyper_overrides))


def _p(name, kind, *, d1, d2, mu_d1, mu_d2, lambda_sm, nu, floor=0.001,
       m_h, m_y, w_init="identity", w_row_norm=0.0033,
       lr=(0.75, 0.005, 0.05), tau_max=750,
       d1_range=(0.2, 1e6), d2_range=(0.2, 5.0)) -> WsmPreset:
    hyper = WsmHyper(
        beta=0.5,
        lambda_sm=lambda_sm,
        forget_nu=nu,
        forget_floor=floor,
        mu_d1=mu_d1,
        mu_d2=mu_d2,
        d1_range=d1_range,
        d2_range=d2_range,
        tau_max=tau_max,
        lr_base=lr[0],
        lr_decay=lr[1],
        lr_floor=lr[2],
    )
    return WsmPreset(name=name, hyper=hyper, d1_init=d1, d2_init=d2,
                     m_h_init=m_h, m_y_init=m_y, w_init=w_init,
                     w_row_norm=w_row_norm, default_kind=kind)


PRESETS: dict[str, WsmPreset] = {
    # five correlated nonnegative uniform sources, 10x5 mixing, 30 dB
    "nonneg-antisparse-copula": _p(
        "nonneg-antisparse-copula", DomainKind.NONNEG_ANTISPARSE,
        d1=1.0, d2=1.0, mu_d1=1.0, mu_d2=1e-2, lambda_sm=1 - 1e-5, nu=0.1,
        m_h=2.0, m_y=1.0, tau_max=500),
    # four correlated signed uniform sources, 8x4 mixing, 30 dB
    "antisparse-copula": _p(
        "antisparse-copula", DomainKind.ANTISPARSE,
        d1=1.0, d2=1.0, mu_d1=1.125, mu_d2=0.2, lambda_sm=1 - 5e-5, nu=0.6,
        m_h=2.0, m_y=1.0, tau_max=750),
    # five sparse sources (uniform box projected to the l1 ball), 10x5 mixing
    "sparse": _p(
        "sparse", DomainKind.SPARSE,
        d1=8.0, d2=1.0, mu_d1=20.0, mu_d2=1e-2, lambda_sm=1 - 1e-5, nu=0.25,
        m_h=0.02, m_y=0.02, w_init="random_rows",
        lr=(0.5, 0.0, 0.05), tau_max=750,
        d1_range=(1e-6, 1e6), d2_range=(1.0, 1.001)),
    "nonneg-sparse": _p(
        "nonneg-sparse", DomainKind.NONNEG_SPARSE,
        d1=4.0, d2=1.0, mu_d1=15.0, mu_d2=1e-2, lambda_sm=1 - 1e-4, nu=0.25,
        m_h=0.02, m_y=0.02, w_init="random_rows",
        lr=(0.5, 0.005, 0.2), tau_max=750,
        d1_range=(1e-6, 1e6), d2_range=(1.0, 1.001)),
    # no experiment pinned simplex settings; mirrors nonneg-sparse, whose
    # domain the simplex is a face of
    "simplex": _p(
        "simplex", DomainKind.UNIT_SIMPLEX,
        d1=4.0, d2=1.0, mu_d1=15.0, mu_d2=1e-2, lambda_sm=1 - 1e-4, nu=0.25,
        m_h=0.02, m_y=0.02, w_init="random_rows",
        lr=(0.5, 0.005, 0.2), tau_max=750,
        d1_range=(1e-6, 1e6), d2_range=(1.0, 1.001)),
    # three sources on the heterogeneous example polytope, 6x3 mixing
    "mixed-d6": _p(
        "mixed-d6", DomainKind.GENERAL,
        d1=4.0, d2=1.0, mu_d1=5.725, mu_d2=1e-2, lambda_sm=1 - 1e-4, nu=0.25,
        m_h=0.02, m_y=0.02, w_init="random_rows",
        lr=(0.5, 0.0, 0.05), tau_max=750,
        d1_range=(1e-6, 1e6), d2_range=(1.0, 1.001)),
    # three signed plus two nonnegative box coordinates, 10x5 mixing
    "mixed-antisparse": _p(
        "mixed-antisparse", DomainKind.GENERAL,
        d1=1.0, d2=1.0, mu_d1=1.125, mu_d2=0.1, lambda_sm=1 - 5e-5, nu=0.4,
        m_h=2.0, m_y=1.0, tau_max=750,
        d1_range=(0.2, 1e6), d2_range=(0.5, 5.0)),
    # one nonnegative box coordinate plus a sparse 4-subvector, 10x5 mixing
    "mixed-sparse-nnanti": _p(
        "mixed-sparse-nnanti", DomainKind.GENERAL,
        d1=8.0, d2=1.0, mu_d1=6.0, mu_d2=0.1, lambda_sm=1 - 1e-4, nu=0.25,
        m_h=0.02, m_y=0.02, w_init="random_rows",
        lr=(0.5, 0.005, 0.01), tau_max=750,
        d1_range=(1e-6, 1e6), d2_range=(1.0, 5.0)),
    # five 4-PAM symbol streams treated as antisparse up to scale, 10x5 mixing
    "4pam": _p(
        "4pam", DomainKind.ANTISPARSE,
        d1=0.5, d2=0.5, mu_d1=1e-2, mu_d2=1e-2, lambda_sm=1 - 5e-3,
        nu=0.3, floor=0.05,
        m_h=2.0, m_y=1.0, w_init="random_rows", w_row_norm=0.005,
        lr=(0.5, 0.005, 0.01), tau_max=750,
        d1_range=(0.2, 1e6), d2_range=(0.2, 25.0)),
}


def get_preset(name: str) -> WsmPreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {sorted(PRESETS)}") from None


def make_state(preset: WsmPreset, n: int, m: int,
               rng: np.random.Generator | None = None) -> WsmState:
    """Build the initial network state for ``n`` sources and ``m`` mixtures."""
    if preset.w_init == "identity":
        w_hx = np.eye(n, m)
        w_yh = np.eye(n)
    elif preset.w_init == "random_rows":
        if rng is None:
            raise ValueError(f"preset {preset.name!r} needs an rng for its random init")
        w_hx = rng.standard_normal((n, m))
        w_hx *= preset.w_row_norm / np.linalg.norm(w_hx, axis=1, keepdims=True)
        w_yh = rng.standard_normal((n, n))
        w_yh *= preset.w_row_norm / np.linalg.norm(w_yh, axis=1, keepdims=True)
    else:
        raise ValueError(f"unknown w_init {preset.w_init!r}")
    return WsmState(
        w_hx=w_hx,
        w_yh=w_yh,
        m_h=preset.m_h_init * np.eye(n),
        m_y=preset.m_y_init * np.eye(n),
        d1=np.full(n, float(preset.d1_init)),
        d2=np.full(n, float(preset.d2_init)),
    )
