"""Sklearn-style estimators wrapping the online network and batch solvers.

These follow the usual (n_samples, n_features) orientation and transpose at
the boundary; the functional core works on column-sample matrices.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import batch as _batch
from . import wsm as _wsm
from .presets import get_preset, make_state
from .validation import as_domain, check_random_state, check_samples_matrix

__all__ = ["WsmDetMax", "PmfDetMax", "LdInfoMax"]


class _SeparatorMixin(TransformerMixin):
    def _check_fitted(self):
        if getattr(self, "separator_", None) is None:
            raise NotFittedError(f"{type(self).__name__} is not fitted yet")

    def transform(self, X):
        """Apply the learned linear separator; rows are samples."""
        self._check_fitted()
        X = check_samples_matrix(X)
        if X.shape[1] != self.separator_.shape[1]:
            raise ValueError(f"X has {X.shape[1]} features, separator expects "
                             f"{self.separator_.shape[1]}")
        return (self.separator_ @ X.T).T


class WsmDetMax(_SeparatorMixin, BaseEstimator):
    """Online Det-Max WSM network as a transformer.

    Parameters
    ----------
    n_sources : int
        Number of latent sources to extract.
    domain : str or SourceDomainSpec
        Presumed source polytope; a kind name covers the named domains.
    preset : str
        Named hyperparameter preset (see ``polysep.presets.PRESETS``).
    hyper_overrides : dict, optional
        Field overrides applied on top of the preset's hyperparameters.
    random_state : int, Generator or None
        Drives the random synapse initialization of presets that use one.

    Attributes
    ----------
    state_ : WsmState
        Learned synapses and gains.
    separator_ : ndarray of shape (n_sources, n_features)
        Linear map implied by the trained network's fixed point.
    online_outputs_ : ndarray of shape (n_samples, n_sources)
        Outputs emitted while training ran over the fit data.
    """

    def __init__(self, n_sources, domain="antisparse", preset="nonneg-antisparse-copula",
                 hyper_overrides=None, random_state=None):
        self.n_sources = n_sources
        self.domain = domain
        self.preset = preset
        self.hyper_overrides = hyper_overrides
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_samples_matrix(X, min_samples=1)
        spec = as_domain(self.domain, self.n_sources)
        preset = get_preset(self.preset)
        if self.hyper_overrides:
            preset = preset.with_overrides(**self.hyper_overrides)
        rng = check_random_state(self.random_state)
        state0 = make_state(preset, spec.n, X.shape[1], rng)
        state, outputs, diags = _wsm.train_online(X.T, spec, preset.hyper, state0)
        self.state_ = state
        self.hyper_ = preset.hyper
        self.online_outputs_ = outputs.T
        self.diagnostics_ = diags
        self.separator_ = _wsm.separator_matrix(state, preset.hyper)
        return self


class PmfDetMax(_SeparatorMixin, BaseEstimator):
    """Batch polytopic factorization X^T ~ H Y with a Det-Max objective.

    After ``fit``, ``sources_`` holds the fitted (n_samples, n_sources)
    estimates and ``separator_`` the pseudo-inverse of the mixing factor.
    """

    def __init__(self, n_sources, domain="antisparse", n_iter=2000, lr=1e-3,
                 penalty=10.0, random_state=None):
        self.n_sources = n_sources
        self.domain = domain
        self.n_iter = n_iter
        self.lr = lr
        self.penalty = penalty
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_samples_matrix(X, min_samples=self.n_sources)
        spec = as_domain(self.domain, self.n_sources)
        rng = check_random_state(self.random_state)
        result = _batch.pmf_fit(X.T, spec, iters=self.n_iter, lr=self.lr,
                                rng=rng, penalty=self.penalty)
        self.result_ = result
        self.sources_ = result.y.T
        self.mixing_ = result.h
        self.separator_ = np.linalg.pinv(result.h)
        self.objective_trace_ = result.objective_trace
        return self


class LdInfoMax(_SeparatorMixin, BaseEstimator):
    """Batch log-det information maximization under domain constraints."""

    def __init__(self, n_sources, domain="antisparse", n_iter=1500, lr=50.0,
                 eps_reg=1e-3, random_state=None):
        self.n_sources = n_sources
        self.domain = domain
        self.n_iter = n_iter
        self.lr = lr
        self.eps_reg = eps_reg
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_samples_matrix(X, min_samples=self.n_sources)
        spec = as_domain(self.domain, self.n_sources)
        rng = check_random_state(self.random_state)
        result = _batch.ldinfomax_fit(X.T, spec, iters=self.n_iter, lr=self.lr,
                                      eps_reg=self.eps_reg, rng=rng)
        self.result_ = result
        self.sources_ = result.y.T
        self.separator_ = result.w
        self.objective_trace_ = result.objective_trace
        return self
