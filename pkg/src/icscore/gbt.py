"""Multiclass gradient-boosted regression trees, written from scratch.

Training follows the classic second-order boosting recipe with a softmax
objective. Per round and per class k, with current probabilities p:

    gradient  g_i = p_ik - 1[y_i = k]
    hessian   h_i = p_ik (1 - p_ik)

and one depth-bounded regression tree per class is fit to (g, h) on a row
subsample by exact greedy split search. Split gain and node values use the
standard regularized forms

    gain  = 1/2 (GL^2/(HL+lam) + GR^2/(HR+lam) - G^2/(H+lam))
    value = -G/(H+lam)

Trees store raw (unshrunk) values; the learning rate is applied when
scores are assembled, so the class raw score is sum_t lr * tree_t(x).
Routing rule everywhere: x[feature] < threshold goes left.

Every node, internal ones included, keeps its value: per-prediction
attribution walks the decision path and credits lr * (value(child) -
value(parent)) to the split feature, and the sum of the shrunken root
values is the bias term. That makes bias + sum(contributions) equal the
raw score exactly, up to float addition order.

Subsampling is drawn from a counter-based generator keyed by
(seed, round, class) so results never depend on call order.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .errors import (
    DegenerateDataError,
    DimensionMismatchError,
    InvalidParamsError,
    LengthMismatchError,
    UnknownClassError,
)

MODEL_FORMAT_VERSION = 1


class _Tree:
    """One regression tree as parallel arrays; slot 0 is the root.

    ``feature[i] == -1`` marks a leaf. ``value`` is populated for every
    node because attribution needs internal expectations, not only leaves.
    """

    __slots__ = ("feature", "threshold", "left", "right", "value", "gain")

    def __init__(self, feature, threshold, left, right, value, gain):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)
        self.gain = np.asarray(gain, dtype=np.float64)

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Raw leaf value per row, vectorized over the batch."""
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = self.feature[node] >= 0
        while np.any(active):
            rows = np.nonzero(active)[0]
            cur = node[rows]
            go_left = X[rows, self.feature[cur]] < self.threshold[cur]
            node[rows] = np.where(go_left, self.left[cur], self.right[cur])
            active = self.feature[node] >= 0
        return self.value[node]

    def to_nested(self, feature_names: list[str]) -> dict:
        def build(slot: int) -> dict:
            if self.feature[slot] < 0:
                return {"value": float(self.value[slot])}
            return {
                "feature": feature_names[self.feature[slot]],
                "threshold": float(self.threshold[slot]),
                "gain": float(self.gain[slot]),
                "value": float(self.value[slot]),
                "left": build(int(self.left[slot])),
                "right": build(int(self.right[slot])),
            }

        return build(0)

    @classmethod
    def from_nested(cls, node: dict, name_to_idx: dict[str, int]) -> "_Tree":
        feature, threshold, left, right, value, gain = [], [], [], [], [], []

        def build(nd: dict) -> int:
            slot = len(feature)
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            value.append(float(nd["value"]))
            gain.append(0.0)
            if "feature" in nd:
                feature[slot] = name_to_idx[nd["feature"]]
                threshold[slot] = float(nd["threshold"])
                gain[slot] = float(nd.get("gain", 0.0))
                left[slot] = build(nd["left"])
                right[slot] = build(nd["right"])
            return slot

        build(node)
        return cls(feature, threshold, left, right, value, gain)


def _build_tree(
    X: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    max_depth: int,
    reg_lambda: float,
    min_child_weight: float,
) -> _Tree:
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    value: list[float] = []
    gain: list[float] = []

    def new_node(G: float, H: float) -> int:
        slot = len(feature)
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(-G / (H + reg_lambda))
        gain.append(0.0)
        return slot

    def grow(rows: np.ndarray, depth: int, slot: int) -> None:
        if depth >= max_depth or rows.size < 2:
            return
        g_node = g[rows]
        h_node = h[rows]
        G = float(g_node.sum())
        H = float(h_node.sum())
        parent_score = G * G / (H + reg_lambda)
        best_gain = 0.0
        best_feat = -1
        best_thr = 0.0
        for j in range(X.shape[1]):
            xj = X[rows, j]
            order = np.argsort(xj, kind="stable")
            xs = xj[order]
            if xs[0] == xs[-1]:
                continue
            gs = np.cumsum(g_node[order])
            hs = np.cumsum(h_node[order])
            cut = np.nonzero(xs[:-1] < xs[1:])[0]  # left block = [0..i]
            GL = gs[cut]
            HL = hs[cut]
            GR = G - GL
            HR = H - HL
            ok = (HL >= min_child_weight) & (HR >= min_child_weight)
            if not np.any(ok):
                continue
            gains = 0.5 * (
                GL * GL / (HL + reg_lambda)
                + GR * GR / (HR + reg_lambda)
                - parent_score
            )
            gains[~ok] = -np.inf
            jbest = int(np.argmax(gains))
            if gains[jbest] > best_gain:
                i = cut[jbest]
                thr = (xs[i] + xs[i + 1]) / 2.0
                if not xs[i] < thr:  # midpoint collapsed onto the lower value
                    thr = float(xs[i + 1])
                best_gain = float(gains[jbest])
                best_feat = j
                best_thr = float(thr)
        if best_feat < 0:
            return
        go_left = X[rows, best_feat] < best_thr
        rows_l = rows[go_left]
        rows_r = rows[~go_left]
        GL = float(g[rows_l].sum())
        HL = float(h[rows_l].sum())
        slot_l = new_node(GL, HL)
        slot_r = new_node(G - GL, H - HL)
        feature[slot] = best_feat
        threshold[slot] = best_thr
        gain[slot] = best_gain
        left[slot] = slot_l
        right[slot] = slot_r
        grow(rows_l, depth + 1, slot_l)
        grow(rows_r, depth + 1, slot_r)

    all_rows = np.arange(X.shape[0])
    root = new_node(float(g.sum()), float(h.sum()))
    grow(all_rows, 0, root)
    return _Tree(feature, threshold, left, right, value, gain)


def _softmax(raw: np.ndarray) -> np.ndarray:
    shifted = raw - raw.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


@dataclass
class Attribution:
    """Decomposition of one class raw score into per-feature credits."""

    class_id: int
    bias: float
    contributions: dict[str, float] = field(default_factory=dict)

    @property
    def total(self) -> float:
        return self.bias + sum(self.contributions.values())


class GBTClassifier(BaseEstimator):
    """Softmax gradient-boosted trees over a fixed feature space.

    One tree per class per round; n_rounds counts rounds, so the ensemble
    holds n_rounds * n_classes trees. Deterministic for fixed
    (data, params, seed).
    """

    def __init__(
        self,
        n_rounds: int = 500,
        max_depth: int = 6,
        learning_rate: float = 0.1,
        subsample: float = 0.8,
        min_child_weight: float = 1.0,
        reg_lambda: float = 1.0,
        seed: int = 0,
    ):
        self.n_rounds = n_rounds
        self.max_depth = max_depth
        self.learning_rate = learning_rate
        self.subsample = subsample
        self.min_child_weight = min_child_weight
        self.reg_lambda = reg_lambda
        self.seed = seed

    def _validate_params_strict(self) -> None:
        if self.n_rounds < 0:
            raise InvalidParamsError(f"n_rounds must be >= 0, got {self.n_rounds}")
        if self.max_depth < 1:
            raise InvalidParamsError(f"max_depth must be >= 1, got {self.max_depth}")
        if not 0.0 < self.subsample <= 1.0:
            raise InvalidParamsError(
                f"subsample must be in (0, 1], got {self.subsample}"
            )
        if self.learning_rate <= 0.0:
            raise InvalidParamsError(
                f"learning_rate must be > 0, got {self.learning_rate}"
            )
        if self.reg_lambda < 0.0:
            raise InvalidParamsError(f"lambda must be >= 0, got {self.reg_lambda}")
        if self.min_child_weight < 0.0:
            raise InvalidParamsError(
                f"min_child_weight must be >= 0, got {self.min_child_weight}"
            )

    def fit(self, X, y, feature_names=None, space_ref: str = ""):
        self._validate_params_strict()
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
        if X.shape[0] < 2:
            raise DegenerateDataError("need at least 2 training examples")
        if not np.all(np.isfinite(X)):
            raise InvalidParamsError("X contains non-finite values")

        if feature_names is None:
            feature_names = [f"f{j}" for j in range(X.shape[1])]
        if len(feature_names) != X.shape[1]:
            raise LengthMismatchError(
                f"{len(feature_names)} feature names for {X.shape[1]} columns"
            )
        self.feature_names_ = list(feature_names)
        self.n_features_ = X.shape[1]
        self.space_ref_ = space_ref
        self.classes_ = np.unique(y)

        if len(self.classes_) < 2:
            warnings.warn(
                "training data has a single class; returning a constant model",
                stacklevel=2,
            )
            self.trees_ = {int(self.classes_[0]): []}
            self.train_loss_ = []
            return self

        n, _ = X.shape
        K = len(self.classes_)
        class_index = {int(c): k for k, c in enumerate(self.classes_)}
        y_idx = np.array([class_index[int(v)] for v in y])
        onehot = np.zeros((n, K))
        onehot[np.arange(n), y_idx] = 1.0

        F = np.zeros((n, K), dtype=np.float64)
        trees: dict[int, list[_Tree]] = {int(c): [] for c in self.classes_}
        losses: list[float] = []
        m = max(1, int(round(self.subsample * n)))

        for rnd in range(self.n_rounds):
            P = _softmax(F)
            for k, cls in enumerate(self.classes_):
                g = P[:, k] - onehot[:, k]
                h = P[:, k] * (1.0 - P[:, k])
                if m < n:
                    rng = np.random.default_rng(
                        np.random.SeedSequence((self.seed, rnd, k))
                    )
                    rows = rng.choice(n, size=m, replace=False)
                    rows.sort()
                else:
                    rows = np.arange(n)
                tree = _build_tree(
                    X[rows],
                    g[rows],
                    h[rows],
                    self.max_depth,
                    self.reg_lambda,
                    self.min_child_weight,
                )
                trees[int(cls)].append(tree)
                F[:, k] += self.learning_rate * tree.apply(X)
            P = _softmax(F)
            p_true = np.clip(P[np.arange(n), y_idx], 1e-15, 1.0)
            losses.append(float(-np.mean(np.log(p_true))))

        self.trees_ = trees
        self.train_loss_ = losses
        return self

    def _check_fitted(self) -> None:
        if not hasattr(self, "trees_"):
            raise NotFittedError("this GBTClassifier is not fitted; call fit() first")

    def _check_matrix(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.shape[1] != self.n_features_:
            raise DimensionMismatchError(
                f"input has {X.shape[1]} features, model expects {self.n_features_}"
            )
        return X

    def raw_scores(self, X) -> np.ndarray:
        """Per-class raw score matrix: sum of shrunken tree outputs."""
        self._check_fitted()
        X = self._check_matrix(X)
        K = len(self.classes_)
        raw = np.zeros((X.shape[0], K), dtype=np.float64)
        for k, cls in enumerate(self.classes_):
            for tree in self.trees_[int(cls)]:
                raw[:, k] += self.learning_rate * tree.apply(X)
        return raw

    def predict_proba(self, X) -> np.ndarray:
        return _softmax(self.raw_scores(X))

    def predict(self, X) -> np.ndarray:
        proba = self.predict_proba(X)
        # argmax takes the first maximum, and classes_ ascends, so ties
        # resolve toward the lower class id.
        return self.classes_[np.argmax(proba, axis=1)]

    def explain(self, x, class_id: int | None = None) -> Attribution:
        """Path attribution for one input and one class."""
        self._check_fitted()
        x = np.asarray(x, dtype=np.float64).reshape(-1)
        if x.shape[0] != self.n_features_:
            raise DimensionMismatchError(
                f"input has {x.shape[0]} features, model expects {self.n_features_}"
            )
        if class_id is None:
            class_id = int(self.predict(x.reshape(1, -1))[0])
        if class_id not in self.trees_:
            raise UnknownClassError(f"model has no class {class_id}")
        lr = self.learning_rate
        bias = 0.0
        contrib: dict[str, float] = {}
        for tree in self.trees_[class_id]:
            bias += lr * tree.value[0]
            slot = 0
            while tree.feature[slot] >= 0:
                feat = int(tree.feature[slot])
                nxt = (
                    int(tree.left[slot])
                    if x[feat] < tree.threshold[slot]
                    else int(tree.right[slot])
                )
                name = self.feature_names_[feat]
                contrib[name] = contrib.get(name, 0.0) + lr * (
                    tree.value[nxt] - tree.value[slot]
                )
                slot = nxt
        return Attribution(class_id=class_id, bias=bias, contributions=contrib)

    def feature_importance(self) -> dict[str, float]:
        """Mean split gain per feature over every split in the ensemble."""
        self._check_fitted()
        totals: dict[str, float] = {}
        counts: dict[str, int] = {}
        for tree_list in self.trees_.values():
            for tree in tree_list:
                for slot in range(tree.n_nodes):
                    j = int(tree.feature[slot])
                    if j < 0:
                        continue
                    name = self.feature_names_[j]
                    totals[name] = totals.get(name, 0.0) + float(tree.gain[slot])
                    counts[name] = counts.get(name, 0) + 1
        return {name: totals[name] / counts[name] for name in totals}

    def to_json_dict(self) -> dict:
        self._check_fitted()
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "kind": "gbt",
            "params": {
                "n_rounds": self.n_rounds,
                "max_depth": self.max_depth,
                "learning_rate": self.learning_rate,
                "subsample": self.subsample,
                "min_child_weight": self.min_child_weight,
                "lambda": self.reg_lambda,
                "seed": self.seed,
            },
            "classes": [int(c) for c in self.classes_],
            "feature_names": list(self.feature_names_),
            "feature_space_ref": self.space_ref_,
            "train_loss": [float(v) for v in self.train_loss_],
            "trees": {
                str(cls): [t.to_nested(self.feature_names_) for t in tree_list]
                for cls, tree_list in sorted(self.trees_.items())
            },
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "GBTClassifier":
        params = data["params"]
        model = cls(
            n_rounds=params["n_rounds"],
            max_depth=params["max_depth"],
            learning_rate=params["learning_rate"],
            subsample=params["subsample"],
            min_child_weight=params["min_child_weight"],
            reg_lambda=params["lambda"],
            seed=params["seed"],
        )
        model.feature_names_ = list(data["feature_names"])
        model.n_features_ = len(model.feature_names_)
        model.space_ref_ = data.get("feature_space_ref", "")
        model.classes_ = np.array(sorted(int(c) for c in data["classes"]))
        model.train_loss_ = [float(v) for v in data.get("train_loss", [])]
        name_to_idx = {n: i for i, n in enumerate(model.feature_names_)}
        model.trees_ = {
            int(cls): [_Tree.from_nested(nd, name_to_idx) for nd in tree_list]
            for cls, tree_list in data["trees"].items()
        }
        return model
