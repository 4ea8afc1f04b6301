"""Output-to-source alignment and SINR/SNR scoring."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

__all__ = ["EvalReport", "pearson_matrix", "best_match", "sinr_db", "SINR_CAP_DB"]

# exact recovery would be +inf dB; cap keeps CSV outputs finite
SINR_CAP_DB = 150.0


@dataclass(frozen=True)
class EvalReport:
    """Matched permutation/scales plus per-source SNR and overall SINR.

    ``permutation[i]`` is the output row matched to source i; ``scales[i]``
    the least-squares gain on that output (sign handling is folded into the
    scale, which may be negative).
    """

    permutation: np.ndarray
    scales: np.ndarray
    per_source_snr_db: np.ndarray
    overall_sinr_db: float
    pearson: np.ndarray

    def csv_row(self) -> list:
        return [float(self.overall_sinr_db)] + [float(v) for v in self.per_source_snr_db]


def pearson_matrix(a, b=None) -> np.ndarray:
    """Sample Pearson coefficients between the rows of ``a`` and ``b``.

    Rows with zero variance contribute 0.0 entries rather than NaN.
    """
    a = np.asarray(a, dtype=float)
    b = a if b is None else np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[1]:
        raise ValueError(f"row matrices must share the sample axis, got {a.shape} and {b.shape}")
    ac = a - a.mean(axis=1, keepdims=True)
    bc = b - b.mean(axis=1, keepdims=True)
    na = np.linalg.norm(ac, axis=1)
    nb = np.linalg.norm(bc, axis=1)
    denom = np.outer(na, nb)
    with np.errstate(invalid="ignore", divide="ignore"):
        c = np.where(denom > 0, (ac @ bc.T) / np.where(denom > 0, denom, 1.0), 0.0)
    return c


def best_match(s, y) -> tuple[np.ndarray, np.ndarray]:
    """Optimal assignment of outputs to sources plus least-squares scales.

    The permutation maximizes the summed absolute Pearson correlation
    (Hungarian assignment); the scale for source i is
    <s_i, y_pi(i)> / ||y_pi(i)||^2, zero for an all-zero output.
    """
    s = np.asarray(s, dtype=float)
    y = np.asarray(y, dtype=float)
    if s.shape != y.shape or s.ndim != 2:
        raise ValueError(f"S and Y must be equal-shape n x t matrices, got {s.shape}, {y.shape}")
    if s.shape[1] < 2:
        raise ValueError("need at least two samples to correlate")
    corr = np.abs(pearson_matrix(s, y))
    rows, cols = linear_sum_assignment(-corr)
    perm = np.empty(s.shape[0], dtype=int)
    perm[rows] = cols
    matched = y[perm, :]
    norms = np.einsum("ij,ij->i", matched, matched)
    inner = np.einsum("ij,ij->i", s, matched)
    scales = np.where(norms > 0, inner / np.where(norms > 0, norms, 1.0), 0.0)
    return perm, scales


def sinr_db(s, y) -> EvalReport:
    """Score outputs against sources after optimal matching and scaling.

    Per-source SNR_i = 10 log10(||s_i||^2 / ||s_i - scale_i * y_pi(i)||^2);
    the overall SINR pools signal and residual powers across sources. Exact
    recovery is capped at +150 dB.
    """
    s = np.asarray(s, dtype=float)
    y = np.asarray(y, dtype=float)
    perm, scales = best_match(s, y)
    resid = s - scales[:, None] * y[perm, :]
    sig_pow = np.einsum("ij,ij->i", s, s)
    res_pow = np.einsum("ij,ij->i", resid, resid)
    exact = res_pow <= 0
    with np.errstate(divide="ignore"):
        per_source = 10.0 * np.log10(sig_pow / np.where(exact, 1.0, res_pow))
    per_source[exact] = SINR_CAP_DB
    per_source = np.minimum(per_source, SINR_CAP_DB)
    total_res = float(res_pow.sum())
    total_sig = float(sig_pow.sum())
    if total_res > 0:
        overall = min(10.0 * np.log10(total_sig / total_res), SINR_CAP_DB)
    else:
        overall = SINR_CAP_DB
    return EvalReport(
        permutation=perm,
        scales=scales,
        per_source_snr_db=per_source,
        overall_sinr_db=float(overall),
        pearson=pearson_matrix(s, y),
    )
