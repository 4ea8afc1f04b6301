"""Synthetic sources, mixing matrices, and noisy mixtures.

Columns are samples throughout: sources are n x t, mixtures m x t.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import stats

__all__ = [
    "ToeplitzKind",
    "RangeKind",
    "CopulaConfig",
    "MixtureDataset",
    "calibration_matrix",
    "sample_copula_t",
    "sample_4pam",
    "random_mixing_matrix",
    "mix_and_corrupt",
]

PAM_SYMBOLS = np.array([-3.0, -1.0, 1.0, 3.0])


class ToeplitzKind(str, Enum):
    CONSTANT_ROW = "constant"   # first row [1, rho, rho, ...]
    POWER_ROW = "power"         # first row [1, rho, rho^2, ...]


class RangeKind(str, Enum):
    ZERO_ONE = "zero_one"
    SYMMETRIC_ONE = "symmetric_one"


@dataclass(frozen=True)
class MixtureDataset:
    """Sources S (n x t), mixing A (m x n), observations X (m x t)."""

    s: np.ndarray
    a: np.ndarray
    x: np.ndarray
    snr_db: float | None = None
    seed: int | None = None

    def __post_init__(self):
        n, t = self.s.shape
        m, n2 = self.a.shape
        if n2 != n or self.x.shape != (m, t):
            raise ValueError(
                f"inconsistent shapes: S {self.s.shape}, A {self.a.shape}, X {self.x.shape}")
        if m < n:
            raise ValueError(f"need at least as many mixtures as sources (m={m} < n={n})")

    @property
    def n(self) -> int:
        return self.s.shape[0]

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def t(self) -> int:
        return self.s.shape[1]


@dataclass(frozen=True)
class CopulaConfig:
    """Correlated-uniform sources via a Student-t copula.

    The calibration matrix is Toeplitz with first row [1, rho, rho, ...]
    (constant) or [1, rho, rho^2, ...] (power). ``dof`` is the Student-t
    degrees of freedom; the experiments never pinned it, so it is an explicit
    knob here.
    """

    n: int
    t: int
    rho: float
    toeplitz_kind: ToeplitzKind = ToeplitzKind.CONSTANT_ROW
    range_kind: RangeKind = RangeKind.ZERO_ONE
    dof: float = 4.0

    def __post_init__(self):
        if not 0.0 <= self.rho < 1.0:
            raise ValueError(f"rho must lie in [0, 1), got {self.rho}")
        if self.dof <= 0:
            raise ValueError("degrees of freedom must be positive")
        if self.n < 1 or self.t < 1:
            raise ValueError("n and t must be positive")
        _cholesky_or_raise(calibration_matrix(self))


def calibration_matrix(cfg: CopulaConfig) -> np.ndarray:
    first = np.empty(cfg.n)
    first[0] = 1.0
    if cfg.toeplitz_kind is ToeplitzKind.CONSTANT_ROW:
        first[1:] = cfg.rho
    else:
        first[1:] = cfg.rho ** np.arange(1, cfg.n)
    idx = np.abs(np.subtract.outer(np.arange(cfg.n), np.arange(cfg.n)))
    return first[idx]


def _cholesky_or_raise(r: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(r)
    except np.linalg.LinAlgError:
        for k in range(1, r.shape[0] + 1):
            if np.linalg.det(r[:k, :k]) <= 0:
                raise ValueError(
                    f"calibration matrix is not positive definite: "
                    f"leading minor of order {k} is non-positive") from None
        raise


def sample_copula_t(cfg: CopulaConfig, rng: np.random.Generator) -> np.ndarray:
    """Draw n x t copula-T sources with exactly uniform marginals.

    A multivariate Student-t draw with the calibration correlation is pushed
    through the univariate t CDF coordinatewise, then affinely mapped onto the
    requested range. Correlation of the resulting uniforms differs from the
    calibration rho (it survives the monotone CDF only in rank terms).
    """
    chol = _cholesky_or_raise(calibration_matrix(cfg))
    g = rng.standard_normal((cfg.n, cfg.t))
    w = rng.chisquare(cfg.dof, size=cfg.t)
    z = (chol @ g) / np.sqrt(w / cfg.dof)
    u = stats.t.cdf(z, df=cfg.dof)
    if cfg.range_kind is RangeKind.ZERO_ONE:
        return u
    return 2.0 * u - 1.0


def sample_4pam(n: int, t: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. uniform 4-PAM symbols from {-3, -1, +1, +3}, n x t."""
    return PAM_SYMBOLS[rng.integers(0, 4, size=(n, t))]


def random_mixing_matrix(m: int, n: int, rng: np.random.Generator,
                         max_retries: int = 16) -> np.ndarray:
    """i.i.d. standard normal m x n mixing matrix, re-drawn if rank deficient."""
    if m < n:
        raise ValueError(f"need m >= n, got m={m}, n={n}")
    for _ in range(max_retries):
        a = rng.standard_normal((m, n))
        if np.linalg.svd(a, compute_uv=False)[-1] > 1e-8:
            return a
    raise RuntimeError(f"failed to draw a rank-{n} mixing matrix in {max_retries} tries")


def mix_and_corrupt(s, a, snr_db: float | None, rng: np.random.Generator,
                    seed: int | None = None) -> MixtureDataset:
    """Mix sources and add i.i.d. normal noise at the requested SNR.

    The noise variance is set against the mixture power averaged over all
    m*t entries, with one sigma shared across channels. ``snr_db=None``
    means exact noiseless mixing; an all-zero mixture also yields zero noise
    (avoids the 0 * inf corner).
    """
    s = np.asarray(s, dtype=float)
    a = np.asarray(a, dtype=float)
    if a.shape[1] != s.shape[0]:
        raise ValueError(f"mixing matrix {a.shape} does not accept sources {s.shape}")
    clean = a @ s
    if snr_db is None:
        return MixtureDataset(s=s, a=a, x=clean, snr_db=None, seed=seed)
    power = float(np.mean(clean ** 2))
    sigma2 = power * 10.0 ** (-snr_db / 10.0)
    noise = np.sqrt(sigma2) * rng.standard_normal(clean.shape)
    return MixtureDataset(s=s, a=a, x=clean + noise, snr_db=float(snr_db), seed=seed)
