"""Comparison systems: majority class, single-feature models, Naive Bayes.

Every model here exposes the same surface as the boosted-tree classifier
(fit / predict / predict_proba / classes_ / to_json_dict), which keeps the
evaluation harness model-agnostic.
"""

from __future__ import annotations

import warnings

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .errors import (
    DegenerateDataError,
    DimensionMismatchError,
    EmptyInputError,
    InvalidParamsError,
    LengthMismatchError,
    OutOfRangeSentimentError,
)
from .gbt import GBTClassifier

KIND_MAJORITY = "majority"
KIND_WORDCOUNT = "wordcount"
KIND_SENTIMENT = "sentiment"
KIND_NAIVE_BAYES = "naive_bayes"

_VAR_FLOOR = 1e-9
_ALPHA = 1.0  # Laplace smoothing for Bernoulli counts and class priors


def train_majority(y) -> "MajorityClassifier":
    return MajorityClassifier().fit(None, y)


class MajorityClassifier(BaseEstimator):
    """Always predicts the modal training class; ties go to the lower id."""

    def fit(self, X, y) -> "MajorityClassifier":
        y = np.asarray(y, dtype=np.int64)
        if y.size == 0:
            raise EmptyInputError("majority baseline needs at least one label")
        classes, counts = np.unique(y, return_counts=True)
        # np.unique sorts ascending and argmax takes the first maximum,
        # which is exactly the tie rule.
        self.classes_ = classes
        self.majority_ = int(classes[np.argmax(counts)])
        return self

    def _check_fitted(self):
        if not hasattr(self, "majority_"):
            raise NotFittedError("MajorityClassifier is not fitted")

    def predict(self, X) -> np.ndarray:
        self._check_fitted()
        n = len(X)
        return np.full(n, self.majority_, dtype=np.int64)

    def predict_proba(self, X) -> np.ndarray:
        self._check_fitted()
        n = len(X)
        proba = np.zeros((n, len(self.classes_)))
        proba[:, int(np.searchsorted(self.classes_, self.majority_))] = 1.0
        return proba

    def to_json_dict(self) -> dict:
        self._check_fitted()
        return {
            "kind": KIND_MAJORITY,
            "classes": [int(c) for c in self.classes_],
            "majority": self.majority_,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "MajorityClassifier":
        model = cls()
        model.classes_ = np.array(sorted(int(c) for c in data["classes"]))
        model.majority_ = int(data["majority"])
        return model


class SingleFeatureBaseline(BaseEstimator):
    """Boosted trees over a single scalar column (text length or sentiment).

    The sentiment variant enforces the [-1, 1] input contract at both fit
    and predict time; the value itself is produced upstream and arrives as
    document metadata.
    """

    def __init__(self, kind: str = KIND_WORDCOUNT, gbt_params: dict | None = None):
        self.kind = kind
        self.gbt_params = gbt_params

    def _column(self, X) -> np.ndarray:
        col = np.asarray(X, dtype=np.float64)
        if col.ndim == 2:
            if col.shape[1] != 1:
                raise DimensionMismatchError(
                    f"single-feature baseline got {col.shape[1]} columns"
                )
            col = col[:, 0]
        if self.kind == KIND_SENTIMENT and col.size:
            lo, hi = float(col.min()), float(col.max())
            if lo < -1.0 or hi > 1.0:
                raise OutOfRangeSentimentError(
                    f"sentiment values must lie in [-1, 1], saw [{lo}, {hi}]"
                )
        return col

    def fit(self, X, y) -> "SingleFeatureBaseline":
        if self.kind not in (KIND_WORDCOUNT, KIND_SENTIMENT):
            raise InvalidParamsError(f"unknown single-feature kind {self.kind!r}")
        col = self._column(X)
        y = np.asarray(y, dtype=np.int64)
        if col.shape[0] != y.shape[0]:
            raise LengthMismatchError(
                f"{col.shape[0]} feature values for {y.shape[0]} labels"
            )
        params = dict(self.gbt_params or {})
        self.gbt_ = GBTClassifier(**params)
        feature_name = "word_count" if self.kind == KIND_WORDCOUNT else "sentiment"
        self.gbt_.fit(col.reshape(-1, 1), y, feature_names=[feature_name])
        self.classes_ = self.gbt_.classes_
        return self

    def _check_fitted(self):
        if not hasattr(self, "gbt_"):
            raise NotFittedError("SingleFeatureBaseline is not fitted")

    def predict(self, X) -> np.ndarray:
        self._check_fitted()
        return self.gbt_.predict(self._column(X).reshape(-1, 1))

    def predict_proba(self, X) -> np.ndarray:
        self._check_fitted()
        return self.gbt_.predict_proba(self._column(X).reshape(-1, 1))

    def to_json_dict(self) -> dict:
        self._check_fitted()
        return {"kind": self.kind, "gbt": self.gbt_.to_json_dict()}

    @classmethod
    def from_json_dict(cls, data: dict) -> "SingleFeatureBaseline":
        model = cls(kind=data["kind"])
        model.gbt_ = GBTClassifier.from_json_dict(data["gbt"])
        model.classes_ = model.gbt_.classes_
        return model


def train_single_feature(X_scalar, y, kind: str) -> SingleFeatureBaseline:
    return SingleFeatureBaseline(kind=kind).fit(X_scalar, y)


class NaiveBayesClassifier(BaseEstimator):
    """Hybrid Bernoulli/Gaussian Naive Bayes.

    Columns whose training values are all 0/1 get Bernoulli likelihoods
    with Laplace smoothing; the rest get Gaussians with a variance floor.
    The feature space mixes binary presence features with normalized real
    fractions, so neither pure variant fits on its own.
    """

    def fit(self, X, y) -> "NaiveBayesClassifier":
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2:
            raise InvalidParamsError("X must be a 2-d matrix")
        y = np.asarray(y, dtype=np.int64)
        if X.shape[0] != y.shape[0]:
            raise LengthMismatchError(
                f"X has {X.shape[0]} rows but y has {y.shape[0]} labels"
            )
        if X.shape[0] == 0:
            raise DegenerateDataError("no training examples")
        self.classes_ = np.unique(y)
        if len(self.classes_) == 1:
            warnings.warn(
                "training data has a single class; posterior is constant",
                stacklevel=2,
            )
        n, d = X.shape
        K = len(self.classes_)
        self.n_features_ = d
        self.binary_cols_ = np.all((X == 0.0) | (X == 1.0), axis=0)

        self.log_prior_ = np.zeros(K)
        self.theta_ = np.zeros((K, d))  # Bernoulli P(x=1|c), unused for Gaussian cols
        self.mean_ = np.zeros((K, d))
        self.var_ = np.ones((K, d))
        for k, cls in enumerate(self.classes_):
            rows = X[y == cls]
            n_k = rows.shape[0]
            self.log_prior_[k] = np.log((n_k + _ALPHA) / (n + _ALPHA * K))
            self.theta_[k] = (rows.sum(axis=0) + _ALPHA) / (n_k + 2.0 * _ALPHA)
            self.mean_[k] = rows.mean(axis=0)
            self.var_[k] = np.maximum(rows.var(axis=0), _VAR_FLOOR)
        return self

    def _check_fitted(self):
        if not hasattr(self, "classes_"):
            raise NotFittedError("NaiveBayesClassifier is not fitted")

    def _log_posterior(self, X) -> np.ndarray:
        self._check_fitted()
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.shape[1] != self.n_features_:
            raise DimensionMismatchError(
                f"input has {X.shape[1]} features, model expects {self.n_features_}"
            )
        b = self.binary_cols_
        out = np.tile(self.log_prior_, (X.shape[0], 1))
        for k in range(len(self.classes_)):
            if np.any(b):
                theta = self.theta_[k, b]
                xb = X[:, b]
                out[:, k] += xb @ np.log(theta) + (1.0 - xb) @ np.log(1.0 - theta)
            if np.any(~b):
                mu = self.mean_[k, ~b]
                var = self.var_[k, ~b]
                xg = X[:, ~b]
                out[:, k] += np.sum(
                    -0.5 * np.log(2.0 * np.pi * var) - (xg - mu) ** 2 / (2.0 * var),
                    axis=1,
                )
        return out

    def predict(self, X) -> np.ndarray:
        log_post = self._log_posterior(X)
        return self.classes_[np.argmax(log_post, axis=1)]

    def predict_proba(self, X) -> np.ndarray:
        log_post = self._log_posterior(X)
        shifted = log_post - log_post.max(axis=1, keepdims=True)
        e = np.exp(shifted)
        return e / e.sum(axis=1, keepdims=True)

    def to_json_dict(self) -> dict:
        self._check_fitted()
        return {
            "kind": KIND_NAIVE_BAYES,
            "classes": [int(c) for c in self.classes_],
            "n_features": self.n_features_,
            "binary_cols": [bool(v) for v in self.binary_cols_],
            "log_prior": [float(v) for v in self.log_prior_],
            "theta": [[float(v) for v in row] for row in self.theta_],
            "mean": [[float(v) for v in row] for row in self.mean_],
            "var": [[float(v) for v in row] for row in self.var_],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "NaiveBayesClassifier":
        model = cls()
        model.classes_ = np.array([int(c) for c in data["classes"]])
        model.n_features_ = int(data["n_features"])
        model.binary_cols_ = np.array(data["binary_cols"], dtype=bool)
        model.log_prior_ = np.array(data["log_prior"], dtype=np.float64)
        model.theta_ = np.array(data["theta"], dtype=np.float64)
        model.mean_ = np.array(data["mean"], dtype=np.float64)
        model.var_ = np.array(data["var"], dtype=np.float64)
        return model


def train_naive_bayes(X, y) -> NaiveBayesClassifier:
    return NaiveBayesClassifier().fit(X, y)
