"""Blind source separation on identifiable polytopes.

Online Det-Max networks built from weighted-similarity-matching constraints,
batch Det-Max baselines, synthetic correlated-source generators, and SINR
scoring, with an sklearn-style estimator front end.
"""

from . import batch, domains, metrics, presets, synth, wsm
from .domains import (
    DomainKind,
    SourceDomainSpec,
    antisparse,
    contains,
    general,
    nonneg_antisparse,
    nonneg_sparse,
    project_euclidean,
    sample_uniform,
    scatter_diagnostic,
    sparse,
    unit_simplex,
)
from .estimators import LdInfoMax, PmfDetMax, WsmDetMax
from .metrics import EvalReport, best_match, pearson_matrix, sinr_db
from .presets import PRESETS, WsmPreset, get_preset, make_state
from .synth import CopulaConfig, MixtureDataset, mix_and_corrupt, random_mixing_matrix, sample_4pam, sample_copula_t
from .wsm import NeuralTrace, WsmHyper, WsmState, run_neural_dynamics, separator_matrix, train_online

__version__ = "0.1.0"

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
    "CopulaConfig",
    "MixtureDataset",
    "sample_copula_t",
    "sample_4pam",
    "random_mixing_matrix",
    "mix_and_corrupt",
    "WsmHyper",
    "WsmState",
    "NeuralTrace",
    "run_neural_dynamics",
    "train_online",
    "separator_matrix",
    "WsmPreset",
    "PRESETS",
    "get_preset",
    "make_state",
    "EvalReport",
    "best_match",
    "sinr_db",
    "pearson_matrix",
    "WsmDetMax",
    "PmfDetMax",
    "LdInfoMax",
    "batch",
    "domains",
    "metrics",
    "presets",
    "synth",
    "wsm",
]
