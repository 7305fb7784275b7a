"""Metrics, confusion matrices, aggregation schemes, CV and heldout protocols.

All metrics are implemented here directly. Per-class F1 with a zero
denominator is defined as 0, and the weighted average weights each class
by its true support.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .conllu import ParsedDocument
from .errors import (
    BadLabelError,
    EmptyInputError,
    InvalidParamsError,
    LengthMismatchError,
    MissingScoresError,
    TooFewExamplesError,
    UnknownLabelError,
)
from .features import DocumentVectorizer
from .model_io import SCALAR_KINDS, fit_model, make_model


def _paired(y_true, y_pred) -> tuple[np.ndarray, np.ndarray]:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape[0] != y_pred.shape[0]:
        raise LengthMismatchError(
            f"{y_true.shape[0]} true labels vs {y_pred.shape[0]} predictions"
        )
    if y_true.shape[0] == 0:
        raise EmptyInputError("no labels to score")
    return y_true, y_pred


def per_class_prf(
    y_true, y_pred, classes: Sequence[int] | None = None
) -> dict[int, dict[str, float]]:
    y_true, y_pred = _paired(y_true, y_pred)
    if classes is None:
        classes = sorted(set(y_true.tolist()) | set(y_pred.tolist()))
    out: dict[int, dict[str, float]] = {}
    for cls in classes:
        tp = int(np.sum((y_true == cls) & (y_pred == cls)))
        fp = int(np.sum((y_true != cls) & (y_pred == cls)))
        fn = int(np.sum((y_true == cls) & (y_pred != cls)))
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = (
            2.0 * precision * recall / (precision + recall)
            if precision + recall
            else 0.0
        )
        out[int(cls)] = {
            "precision": precision,
            "recall": recall,
            "f1": f1,
            "support": tp + fn,
        }
    return out


def weighted_f1(y_true, y_pred) -> float:
    stats = per_class_prf(y_true, y_pred)
    total = sum(s["support"] for s in stats.values())
    return sum(s["f1"] * s["support"] for s in stats.values()) / total


def mse(y_true, y_pred) -> float:
    y_true, y_pred = _paired(y_true, y_pred)
    diff = y_true.astype(np.float64) - y_pred.astype(np.float64)
    return float(np.mean(diff * diff))


def confusion_matrix(y_true, y_pred, classes: Sequence[int]) -> np.ndarray:
    """counts[i, j] = examples with true classes[i] predicted classes[j]."""
    y_true, y_pred = _paired(y_true, y_pred)
    index = {int(c): i for i, c in enumerate(classes)}
    mat = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        if int(t) not in index:
            raise UnknownLabelError(f"true label {t} not in class list {list(classes)}")
        if int(p) not in index:
            raise UnknownLabelError(f"predicted label {p} not in class list {list(classes)}")
        mat[index[int(t)], index[int(p)]] += 1
    return mat


@dataclass(frozen=True)
class AggregationScheme:
    """Band -> group mapping. Band 1 is always alone in its group."""

    id: str
    mapping: dict[int, int]
    group_names: dict[int, str]

    def groups(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.mapping.values())))


SEVEN = AggregationScheme(
    id="seven",
    mapping={b: b for b in range(1, 8)},
    group_names={b: str(b) for b in range(1, 8)},
)

FOUR = AggregationScheme(
    id="four",
    mapping={1: 1, 2: 2, 3: 2, 4: 3, 5: 3, 6: 4, 7: 4},
    group_names={1: "1", 2: "2-3", 3: "4-5", 4: "6-7"},
)

THREE = AggregationScheme(
    id="three",
    mapping={1: 1, 2: 2, 3: 2, 4: 2, 5: 2, 6: 3, 7: 3},
    group_names={1: "1", 2: "2-5", 3: "6-7"},
)

SCHEMES = {"seven": SEVEN, "four": FOUR, "three": THREE}


def get_scheme(scheme: str | AggregationScheme) -> AggregationScheme:
    if isinstance(scheme, AggregationScheme):
        return scheme
    try:
        return SCHEMES[scheme]
    except KeyError:
        raise InvalidParamsError(
            f"unknown aggregation scheme {scheme!r}; choose from {sorted(SCHEMES)}"
        ) from None


def aggregate_labels(y: Iterable[int], scheme: str | AggregationScheme) -> list[int]:
    sch = get_scheme(scheme)
    out = []
    for v in y:
        v = int(v)
        if v not in sch.mapping:
            raise BadLabelError(f"band label {v} outside 1..7")
        out.append(sch.mapping[v])
    return out


@dataclass
class EvalReport:
    scheme: str
    model_desc: str
    classes: list[int]
    class_names: list[str]
    per_class: dict[int, dict[str, float]]
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float
    mse: float
    confusion: np.ndarray
    n: int

    def to_json_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "model_desc": self.model_desc,
            "classes": self.classes,
            "class_names": self.class_names,
            "per_class": {
                str(cls): self.per_class[cls] for cls in self.classes
            },
            "weighted_precision": self.weighted_precision,
            "weighted_recall": self.weighted_recall,
            "weighted_f1": self.weighted_f1,
            "mse": self.mse,
            "confusion": self.confusion.tolist(),
            "n": self.n,
        }

    def to_text(self) -> str:
        """Aligned classification-report table plus the error summary."""
        rows = []
        header = f"{'':>12}  {'precision':>9}  {'recall':>9}  {'f1-score':>9}  {'support':>8}"
        rows.append(header)
        rows.append("")
        for cls, name in zip(self.classes, self.class_names):
            s = self.per_class[cls]
            rows.append(
                f"{name:>12}  {s['precision']:>9.3f}  {s['recall']:>9.3f}"
                f"  {s['f1']:>9.3f}  {int(s['support']):>8d}"
            )
        rows.append("")
        rows.append(
            f"{'weighted avg':>12}  {self.weighted_precision:>9.3f}"
            f"  {self.weighted_recall:>9.3f}  {self.weighted_f1:>9.3f}  {self.n:>8d}"
        )
        rows.append("")
        rows.append(f"mse: {self.mse:.4f}")
        if self.model_desc:
            rows.append(f"model: {self.model_desc}")
        rows.append(f"scheme: {self.scheme}")
        return "\n".join(rows) + "\n"

    def confusion_csv(self) -> str:
        """Rows are true classes, columns are predicted classes."""
        lines = ["true\\pred," + ",".join(self.class_names)]
        for i, name in enumerate(self.class_names):
            lines.append(name + "," + ",".join(str(int(v)) for v in self.confusion[i]))
        return "\n".join(lines) + "\n"


def build_report(
    y_true,
    y_pred,
    classes: Sequence[int] | None = None,
    scheme: str | AggregationScheme = SEVEN,
    model_desc: str = "",
) -> EvalReport:
    sch = get_scheme(scheme)
    y_true, y_pred = _paired(y_true, y_pred)
    if classes is None:
        classes = sorted(set(y_true.tolist()) | set(y_pred.tolist()))
    classes = [int(c) for c in classes]
    stats = per_class_prf(y_true, y_pred, classes)
    total = sum(stats[c]["support"] for c in classes)
    w_p = sum(stats[c]["precision"] * stats[c]["support"] for c in classes) / total
    w_r = sum(stats[c]["recall"] * stats[c]["support"] for c in classes) / total
    w_f = sum(stats[c]["f1"] * stats[c]["support"] for c in classes) / total
    return EvalReport(
        scheme=sch.id,
        model_desc=model_desc,
        classes=classes,
        class_names=[sch.group_names.get(c, str(c)) for c in classes],
        per_class=stats,
        weighted_precision=w_p,
        weighted_recall=w_r,
        weighted_f1=w_f,
        mse=mse(y_true, y_pred),
        confusion=confusion_matrix(y_true, y_pred, classes),
        n=int(total),
    )


@dataclass
class ModelSpec:
    """What to train: model kind + params, and how to vectorize documents.

    Scalar baselines (wordcount, sentiment) force the vectorizer down to
    their single family: they are defined as single-feature models.
    """

    model: str = "gbt"
    model_params: dict = field(default_factory=dict)
    vectorizer_params: dict = field(default_factory=dict)

    def build_vectorizer(self) -> DocumentVectorizer:
        params = dict(self.vectorizer_params)
        if self.model in SCALAR_KINDS:
            params["families"] = (self.model,)
        return DocumentVectorizer(**params)

    def build_model(self):
        return make_model(self.model, self.model_params)

    @property
    def desc(self) -> str:
        fams = self.vectorizer_params.get("families")
        if self.model in SCALAR_KINDS:
            fams = (self.model,)
        fam_str = "+".join(fams) if fams else "default-families"
        return f"{self.model} [{fam_str}]"


def _labels_of(docs: Sequence[ParsedDocument]) -> list[int]:
    labels = []
    for doc in docs:
        if doc.label is None:
            raise BadLabelError(f"document {doc.doc_id!r} has no `# ic` label")
        labels.append(doc.label)
    return labels


def kfold_indices(y: Sequence[int], k: int, seed: int) -> list[np.ndarray]:
    """Deterministic shuffled fold assignment.

    Stratified when every class has at least k members: within each class
    (classes in ascending order, one shared generator) members are
    permuted and dealt round-robin with a running fold counter. Otherwise
    plain: a single permutation dealt as permutation[i::k].
    """
    y = np.asarray(y, dtype=np.int64)
    n = y.shape[0]
    rng = np.random.default_rng(seed)
    classes, counts = np.unique(y, return_counts=True)
    folds: list[list[int]] = [[] for _ in range(k)]
    if np.all(counts >= k):
        cursor = 0
        for cls in classes:
            members = np.nonzero(y == cls)[0]
            members = members[rng.permutation(members.shape[0])]
            for idx in members:
                folds[cursor % k].append(int(idx))
                cursor += 1
    else:
        perm = rng.permutation(n)
        for i in range(k):
            folds[i] = [int(v) for v in perm[i::k]]
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


@dataclass
class FoldResult:
    report: EvalReport
    space: "object"
    model: "object"
    test_indices: np.ndarray


@dataclass
class CVResult:
    mean_f1: float
    std_f1: float
    mean_mse: float
    pooled_confusion: np.ndarray
    classes: list[int]
    class_names: list[str]
    folds: list[FoldResult]
    scheme: str
    model_desc: str

    def to_json_dict(self) -> dict:
        return {
            "mean_f1": self.mean_f1,
            "std_f1": self.std_f1,
            "mean_mse": self.mean_mse,
            "pooled_confusion": self.pooled_confusion.tolist(),
            "classes": self.classes,
            "class_names": self.class_names,
            "scheme": self.scheme,
            "model_desc": self.model_desc,
            "folds": [f.report.to_json_dict() for f in self.folds],
        }


def _fit_fold(train_docs, y_train, spec: ModelSpec):
    vec = spec.build_vectorizer().fit(train_docs)
    space = vec.space_
    X = vec.transform(train_docs)
    model = spec.build_model()
    fit_model(
        model,
        X,
        y_train,
        feature_names=list(space.feature_ids),
        space_ref=space.fingerprint(),
    )
    return vec, space, model


def kfold_cv(
    docs: Sequence[ParsedDocument],
    k: int,
    spec: ModelSpec,
    seed: int = 0,
    scheme: str | AggregationScheme = SEVEN,
) -> CVResult:
    """k-fold CV with the feature space refit inside every fold.

    Refitting per fold is what keeps the subtree vocabulary leak-free: a
    path that only occurs in a fold's validation split can never enter
    that fold's space.
    """
    sch = get_scheme(scheme)
    docs = list(docs)
    if k < 2:
        raise InvalidParamsError(f"k must be >= 2, got {k}")
    if len(docs) < k:
        raise TooFewExamplesError(f"{len(docs)} documents for {k} folds")
    y = aggregate_labels(_labels_of(docs), sch)
    y = np.asarray(y, dtype=np.int64)
    classes = sorted(set(int(v) for v in y))
    folds = kfold_indices(y, k, seed)

    results: list[FoldResult] = []
    for test_idx in folds:
        test_mask = np.zeros(len(docs), dtype=bool)
        test_mask[test_idx] = True
        train_docs = [d for d, m in zip(docs, test_mask) if not m]
        test_docs = [d for d, m in zip(docs, test_mask) if m]
        vec, space, model = _fit_fold(train_docs, y[~test_mask], spec)
        y_pred = model.predict(vec.transform(test_docs))
        report = build_report(
            y[test_mask], y_pred, classes=classes, scheme=sch, model_desc=spec.desc
        )
        results.append(
            FoldResult(report=report, space=space, model=model, test_indices=test_idx)
        )

    f1s = [r.report.weighted_f1 for r in results]
    mses = [r.report.mse for r in results]
    pooled = np.sum([r.report.confusion for r in results], axis=0)
    return CVResult(
        mean_f1=float(np.mean(f1s)),
        std_f1=float(np.std(f1s)),
        mean_mse=float(np.mean(mses)),
        pooled_confusion=pooled,
        classes=classes,
        class_names=[sch.group_names.get(c, str(c)) for c in classes],
        folds=results,
        scheme=sch.id,
        model_desc=spec.desc,
    )


def heldout_eval(
    train_docs: Sequence[ParsedDocument],
    test_docs: Sequence[ParsedDocument],
    spec: ModelSpec,
    scheme: str | AggregationScheme = SEVEN,
) -> EvalReport:
    sch = get_scheme(scheme)
    train_docs = list(train_docs)
    test_docs = list(test_docs)
    if not test_docs:
        raise EmptyInputError("heldout test corpus is empty")
    y_train = np.asarray(aggregate_labels(_labels_of(train_docs), sch), dtype=np.int64)
    y_test = np.asarray(aggregate_labels(_labels_of(test_docs), sch), dtype=np.int64)
    vec, space, model = _fit_fold(train_docs, y_train, spec)
    y_pred = model.predict(vec.transform(test_docs))
    classes = sorted(
        set(y_train.tolist()) | set(y_test.tolist()) | set(int(v) for v in y_pred)
    )
    return build_report(
        y_test, y_pred, classes=classes, scheme=sch, model_desc=spec.desc
    )


def load_prediction_file(path: str) -> dict[str, int]:
    """Read `doc_id,score` rows; real-valued scores are floored.

    A header row of exactly `doc_id,score` is tolerated.
    """
    preds: dict[str, int] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or (row[0] == "doc_id" and not preds):
                continue
            if len(row) != 2:
                raise InvalidParamsError(
                    f"prediction rows must be doc_id,score; got {row!r}"
                )
            preds[row[0]] = math.floor(float(row[1]))
    return preds


def evaluate_predictions(
    docs: Sequence[ParsedDocument],
    preds: dict[str, int],
    scheme: str | AggregationScheme = SEVEN,
    model_desc: str = "external predictions",
) -> EvalReport:
    """Score an external prediction map against labeled documents."""
    sch = get_scheme(scheme)
    y_true_raw = _labels_of(docs)
    y_pred_raw = []
    for doc in docs:
        if doc.doc_id not in preds:
            raise MissingScoresError(f"no prediction for document {doc.doc_id!r}")
        y_pred_raw.append(preds[doc.doc_id])
    y_true = aggregate_labels(y_true_raw, sch)
    y_pred = aggregate_labels(y_pred_raw, sch)
    classes = sorted(set(y_true) | set(y_pred))
    return build_report(y_true, y_pred, classes=classes, scheme=sch, model_desc=model_desc)
