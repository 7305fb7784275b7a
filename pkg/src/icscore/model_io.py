"""Versioned JSON envelope shared by every model kind, plus a factory.

Artifacts are written with sorted keys and carry no timestamps, so a rerun
with identical inputs produces byte-identical files.
"""

from __future__ import annotations

import json

from .baselines import (
    KIND_MAJORITY,
    KIND_NAIVE_BAYES,
    KIND_SENTIMENT,
    KIND_WORDCOUNT,
    MajorityClassifier,
    NaiveBayesClassifier,
    SingleFeatureBaseline,
)
from .errors import InvalidParamsError
from .gbt import MODEL_FORMAT_VERSION, GBTClassifier

KIND_GBT = "gbt"

MODEL_KINDS = (KIND_GBT, KIND_MAJORITY, KIND_WORDCOUNT, KIND_SENTIMENT, KIND_NAIVE_BAYES)

SCALAR_KINDS = (KIND_WORDCOUNT, KIND_SENTIMENT)


def make_model(kind: str, params: dict | None = None):
    params = dict(params or {})
    if kind == KIND_GBT:
        return GBTClassifier(**params)
    if kind == KIND_MAJORITY:
        return MajorityClassifier()
    if kind in SCALAR_KINDS:
        return SingleFeatureBaseline(kind=kind, gbt_params=params)
    if kind == KIND_NAIVE_BAYES:
        return NaiveBayesClassifier()
    raise InvalidParamsError(f"unknown model kind {kind!r}; choose from {MODEL_KINDS}")


def fit_model(model, X, y, feature_names=None, space_ref: str = ""):
    """Fit any model kind; only the tree ensemble records feature names."""
    if isinstance(model, GBTClassifier):
        return model.fit(X, y, feature_names=feature_names, space_ref=space_ref)
    return model.fit(X, y)


def model_to_envelope(model) -> dict:
    payload = model.to_json_dict()
    payload.setdefault("format_version", MODEL_FORMAT_VERSION)
    return payload


def model_from_envelope(data: dict):
    version = data.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise InvalidParamsError(f"unsupported model format version {version!r}")
    kind = data.get("kind")
    if kind == KIND_GBT:
        return GBTClassifier.from_json_dict(data)
    if kind == KIND_MAJORITY:
        return MajorityClassifier.from_json_dict(data)
    if kind in SCALAR_KINDS:
        return SingleFeatureBaseline.from_json_dict(data)
    if kind == KIND_NAIVE_BAYES:
        return NaiveBayesClassifier.from_json_dict(data)
    raise InvalidParamsError(f"unknown model kind {kind!r} in artifact")


def save_model(model, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_envelope(model), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path: str):
    with open(path, encoding="utf-8") as fh:
        return model_from_envelope(json.load(fh))
