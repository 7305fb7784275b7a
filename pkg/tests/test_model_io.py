"""Model envelope serialization across every model kind."""

import numpy as np
import pytest

from icscore.errors import InvalidParamsError
from icscore.model_io import (
    MODEL_KINDS,
    fit_model,
    load_model,
    make_model,
    model_from_envelope,
    model_to_envelope,
    save_model,
)


def fit_kind(kind):
    rng = np.random.default_rng(0)
    if kind in ("wordcount", "sentiment"):
        X = np.linspace(-0.9, 0.9, 12).reshape(-1, 1)
        params = dict(n_rounds=3, max_depth=1, subsample=1.0, min_child_weight=0.0)
    else:
        X = rng.normal(size=(12, 3))
        params = dict(n_rounds=3, max_depth=2, subsample=1.0) if kind == "gbt" else {}
    y = np.array([1] * 6 + [2] * 6)
    model = make_model(kind, params)
    fit_model(model, X, y)
    return model, X


@pytest.mark.parametrize("kind", sorted(MODEL_KINDS))
def test_round_trip_every_kind(kind, tmp_path):
    model, X = fit_kind(kind)
    path = str(tmp_path / "model.json")
    save_model(model, path)
    back = load_model(path)
    assert type(back) is type(model)
    assert np.array_equal(back.predict(X), model.predict(X))
    assert back.predict_proba(X) == pytest.approx(model.predict_proba(X), rel=1e-12)


def test_save_is_byte_stable(tmp_path):
    model, X = fit_kind("gbt")
    p1, p2 = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    save_model(model, p1)
    save_model(model, p2)
    assert open(p1, "rb").read() == open(p2, "rb").read()


def test_envelope_validation():
    model, _ = fit_kind("majority")
    env = model_to_envelope(model)
    assert env["kind"] == "majority"
    assert env["format_version"] == 1
    env["format_version"] = 7
    with pytest.raises(InvalidParamsError):
        model_from_envelope(env)
    with pytest.raises(InvalidParamsError):
        model_from_envelope({"kind": "quantum", "format_version": 1})
    with pytest.raises(InvalidParamsError):
        make_model("quantum", {})
