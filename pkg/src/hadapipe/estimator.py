"""Scikit-learn facade over the single-pixel acquisition model.

The transformer maps flattened images to bucket-measurement vectors against
a chosen pattern ordering, and inverts them with the differential
correlation formula, so the simulation composes with sklearn pipelines and
model selection tooling.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .errors import ContractError
from .ordering import (
    OrderingScheme,
    mpcgi_sequence,
    natural_sequence,
    rd_sequence,
)

_SEQUENCE_BUILDERS = {
    "natural": natural_sequence,
    "mpcgi": mpcgi_sequence,
    "rd": rd_sequence,
}


class GhostImagingTransformer(TransformerMixin, BaseEstimator):
    """Single-pixel measurement operator as a transformer.

    Parameters
    ----------
    level : resolution exponent; images are 2^level x 2^level.
    scheme : 'natural', 'mpcgi' or 'rd' pattern ordering.
    sampling_ratio : fraction of the full 4^level sequence to measure.
    noise_sigma : additive Gaussian noise on each bucket value.
    random_state : seed for the noise stream.

    After ``fit``, ``patterns_`` holds the +1/-1 measurement patterns with
    shape (n_measurements_, side_, side_).  ``transform`` returns one bucket
    vector per sample; ``inverse_transform`` applies the differential
    correlation reconstruction.
    """

    def __init__(self, level=3, scheme="mpcgi", sampling_ratio=1.0,
                 noise_sigma=0.0, random_state=0):
        self.level = level
        self.scheme = scheme
        self.sampling_ratio = sampling_ratio
        self.noise_sigma = noise_sigma
        self.random_state = random_state

    def fit(self, X=None, y=None):
        if self.scheme not in _SEQUENCE_BUILDERS:
            raise ContractError(f"unknown scheme {self.scheme!r}")
        if not 0 < self.sampling_ratio <= 1:
            raise ContractError("sampling_ratio must lie in (0, 1]")
        if self.noise_sigma < 0:
            raise ContractError("noise_sigma must be nonnegative")
        seq = _SEQUENCE_BUILDERS[self.scheme](self.level)
        total = len(seq.items)
        n_meas = max(1, round(self.sampling_ratio * total))
        self.side_ = seq.display_side
        self.n_features_in_ = self.side_ * self.side_
        self.n_measurements_ = n_meas
        self.patterns_ = seq.dense_stack()[:n_meas]
        if X is not None:
            X = check_array(X)
            if X.shape[1] != self.n_features_in_:
                raise ContractError(
                    f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return self

    def _flat_patterns(self):
        return self.patterns_.reshape(self.n_measurements_, -1).astype(np.float64)

    def transform(self, X):
        """Bucket vectors, one row per flattened image."""
        check_is_fitted(self, "patterns_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ContractError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        buckets = X @ self._flat_patterns().T
        if self.noise_sigma > 0:
            for i in range(buckets.shape[0]):
                for m in range(buckets.shape[1]):
                    rng = np.random.default_rng((self.random_state, i, m + 1))
                    buckets[i, m] += rng.normal(0.0, self.noise_sigma)
        return buckets

    def inverse_transform(self, B):
        """Differential correlation reconstruction of each bucket vector."""
        check_is_fitted(self, "patterns_")
        B = check_array(B)
        if B.shape[1] != self.n_measurements_:
            raise ContractError(
                f"B has {B.shape[1]} measurements, expected {self.n_measurements_}")
        flat = self._flat_patterns()
        m = self.n_measurements_
        i_mean = flat.mean(axis=0)
        out = np.empty((B.shape[0], self.n_features_in_), dtype=np.float64)
        for i in range(B.shape[0]):
            b = B[i].astype(np.float64)
            out[i] = (b @ flat) / m - b.mean() * i_mean
        return out
