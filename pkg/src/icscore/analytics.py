"""Corpus-scale scoring and the aggregate analyses over scored records.

Scoring streams: documents are pulled from an iterator in fixed-size
chunks, vectorized and classified as matrices, and emitted as records, so
memory stays bounded by the chunk size regardless of corpus size. A
document that fails vectorization is logged and skipped; it never aborts
the run.

Aggregations are built on mergeable accumulators (counts, sums, sums of
squares, tallies), so sharded or chunked processing reproduces the
single-pass numbers exactly.
"""

from __future__ import annotations

import json
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np

from .conllu import ParsedDocument, parse_conllu
from .errors import DimensionMismatchError, InvalidParamsError, MissingScoresError
from .features import DocumentVectorizer

logger = logging.getLogger(__name__)

DEFAULT_GROUP_BY = ("community", "kind")

_LETTER_LABELS = "MFEDCBAZYXWVUTSRQPON"

HALF_UP = "half_up"
HALF_EVEN = "half_even"


@dataclass(frozen=True, slots=True)
class ScoredRecord:
    doc_id: str
    community: str
    kind: str
    word_count: int
    ic: int
    proba: tuple[float, ...]
    community_score: int | None = None

    def to_json_dict(self) -> dict:
        return {
            "id": self.doc_id,
            "community": self.community,
            "kind": self.kind,
            "word_count": self.word_count,
            "ic": self.ic,
            "proba": list(self.proba),
            "community_score": self.community_score,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ScoredRecord":
        score = data.get("community_score")
        return cls(
            doc_id=str(data["id"]),
            community=str(data.get("community", "")),
            kind=str(data.get("kind", "POST")).upper(),
            word_count=int(data["word_count"]),
            ic=int(data["ic"]),
            proba=tuple(float(v) for v in data["proba"]),
            community_score=None if score is None else int(score),
        )


def _record_from_doc(doc: ParsedDocument, ic: int, proba: np.ndarray) -> ScoredRecord:
    raw_score = doc.meta.get("community_score")
    community_score = None
    if raw_score is not None:
        try:
            community_score = int(raw_score)
        except ValueError:
            logger.warning(
                "document %s: non-integer community_score %r ignored",
                doc.doc_id,
                raw_score,
            )
    return ScoredRecord(
        doc_id=doc.doc_id,
        community=doc.meta.get("community", ""),
        kind=doc.meta.get("kind", "POST").upper(),
        word_count=doc.word_count,
        ic=ic,
        proba=tuple(float(v) for v in proba),
        community_score=community_score,
    )


def _chunks(docs: Iterable[ParsedDocument], size: int) -> Iterator[list[ParsedDocument]]:
    chunk: list[ParsedDocument] = []
    for doc in docs:
        chunk.append(doc)
        if len(chunk) >= size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def score_chunk(
    docs: Sequence[ParsedDocument], model, vectorizer: DocumentVectorizer
) -> list[ScoredRecord]:
    """Score one batch; falls back to per-document mode if the batch fails
    so a single bad document costs only itself."""
    try:
        X = vectorizer.transform(docs)
        preds = model.predict(X)
        probas = model.predict_proba(X)
    except Exception:
        records = []
        for doc in docs:
            try:
                x = vectorizer.transform([doc])
                ic = int(model.predict(x)[0])
                records.append(_record_from_doc(doc, ic, model.predict_proba(x)[0]))
            except Exception as exc:
                logger.warning("skipping document %s: %s", doc.doc_id, exc)
        return records
    return [
        _record_from_doc(doc, int(ic), proba)
        for doc, ic, proba in zip(docs, preds, probas)
    ]


def score_corpus(
    docs: Iterable[ParsedDocument],
    model,
    vectorizer: DocumentVectorizer,
    chunk_size: int = 512,
) -> Iterator[ScoredRecord]:
    if chunk_size < 1:
        raise InvalidParamsError(f"chunk_size must be >= 1, got {chunk_size}")
    space = vectorizer._check_fitted()
    model_dim = getattr(model, "n_features_", None)
    if model_dim is not None and model_dim != space.dimension:
        raise DimensionMismatchError(
            f"model expects {model_dim} features but space has {space.dimension}"
        )
    for chunk in _chunks(docs, chunk_size):
        yield from score_chunk(chunk, model, vectorizer)


def _group_key(record: ScoredRecord, by: Sequence[str]) -> tuple[str, ...]:
    return tuple(str(getattr(record, f)) for f in by)


class DistributionAccumulator:
    """Per-group tallies of predicted bands; merge is plain addition."""

    def __init__(self, by: Sequence[str] = DEFAULT_GROUP_BY):
        self.by = tuple(by)
        self.tallies: dict[tuple[str, ...], Counter] = {}

    def add(self, record: ScoredRecord) -> None:
        key = _group_key(record, self.by)
        self.tallies.setdefault(key, Counter())[record.ic] += 1

    def merge(self, other: "DistributionAccumulator") -> None:
        for key, tally in other.tallies.items():
            self.tallies.setdefault(key, Counter()).update(tally)

    def finalize(self) -> dict[tuple[str, ...], dict[int, float]]:
        out = {}
        for key, tally in sorted(self.tallies.items()):
            total = sum(tally.values())
            out[key] = {band: tally[band] / total for band in sorted(tally)}
        return out


def ic_distribution(
    records: Iterable[ScoredRecord], by: Sequence[str] = DEFAULT_GROUP_BY
) -> dict[tuple[str, ...], dict[int, float]]:
    """Probability mass over predicted bands, per group; masses sum to 1."""
    acc = DistributionAccumulator(by)
    for rec in records:
        acc.add(rec)
    return acc.finalize()


def length_bin(
    word_count: int, log_base: str | float = "e", rounding: str = HALF_UP
) -> int:
    """Bin index = rounded log of the word count.

    The log base and the rounding rule are configuration, not ground
    truth; both are recorded in emitted metadata. half_up rounds .5 away
    from zero on the positive axis (floor(x + 0.5)); half_even defers to
    Python's banker's rounding.
    """
    if word_count < 1:
        raise InvalidParamsError(f"word_count must be >= 1, got {word_count}")
    if log_base == "e":
        value = math.log(word_count)
    else:
        value = math.log(word_count) / math.log(float(log_base))
    if rounding == HALF_UP:
        return int(math.floor(value + 0.5))
    if rounding == HALF_EVEN:
        return round(value)
    raise InvalidParamsError(f"unknown rounding mode {rounding!r}")


@dataclass(frozen=True, slots=True)
class BinnedStat:
    bin: int
    mean_ic: float
    ci95_halfwidth: float
    n: int


class BinnedMeansAccumulator:
    """Per (group, bin): count, sum, sum of squares. Mergeable."""

    def __init__(
        self,
        by: Sequence[str] = DEFAULT_GROUP_BY,
        log_base: str | float = "e",
        rounding: str = HALF_UP,
    ):
        self.by = tuple(by)
        self.log_base = log_base
        self.rounding = rounding
        self.cells: dict[tuple[tuple[str, ...], int], list[float]] = {}
        self.excluded_zero_length = 0

    def add(self, record: ScoredRecord) -> None:
        if record.word_count < 1:
            self.excluded_zero_length += 1
            return
        b = length_bin(record.word_count, self.log_base, self.rounding)
        cell = self.cells.setdefault((_group_key(record, self.by), b), [0.0, 0.0, 0.0])
        cell[0] += 1
        cell[1] += record.ic
        cell[2] += record.ic * record.ic

    def merge(self, other: "BinnedMeansAccumulator") -> None:
        self.excluded_zero_length += other.excluded_zero_length
        for key, cell in other.cells.items():
            mine = self.cells.setdefault(key, [0.0, 0.0, 0.0])
            for i in range(3):
                mine[i] += cell[i]

    def finalize(self) -> dict[tuple[str, ...], list[BinnedStat]]:
        out: dict[tuple[str, ...], list[BinnedStat]] = {}
        for (group, b), (n, s, ss) in sorted(self.cells.items()):
            n_int = int(n)
            mean = s / n
            if n_int > 1:
                # Sample variance via the sum-of-squares identity.
                var = max(0.0, (ss - n * mean * mean) / (n - 1.0))
                half = 1.96 * math.sqrt(var / n)
            else:
                half = 0.0
            out.setdefault(group, []).append(
                BinnedStat(bin=b, mean_ic=mean, ci95_halfwidth=half, n=n_int)
            )
        return out


def length_binned_means(
    records: Iterable[ScoredRecord],
    by: Sequence[str] = DEFAULT_GROUP_BY,
    log_base: str | float = "e",
    rounding: str = HALF_UP,
) -> tuple[dict[tuple[str, ...], list[BinnedStat]], int]:
    """Mean predicted band per length bin, with the zero-length count."""
    acc = BinnedMeansAccumulator(by, log_base, rounding)
    for rec in records:
        acc.add(rec)
    return acc.finalize(), acc.excluded_zero_length


@dataclass(frozen=True, slots=True)
class LetterValue:
    label: str
    depth: float
    lower: float
    upper: float


@dataclass(frozen=True, slots=True)
class BandBox:
    band: int
    n: int
    letter_values: tuple[LetterValue, ...]


@dataclass(frozen=True)
class GroupScoreSummary:
    boxes: dict[int, BandBox]
    slope: float
    intercept: float
    n: int


def _value_at_depth(sorted_vals: Sequence[float], depth: float) -> float:
    base = math.floor(depth)
    if depth == base:
        return float(sorted_vals[base - 1])
    return (float(sorted_vals[base - 1]) + float(sorted_vals[base])) / 2.0


def letter_values(values: Sequence[float]) -> tuple[LetterValue, ...]:
    """Letter-value depths: d1 = (1+n)/2, then d <- (1+floor(d))/2.

    The median is always emitted; deeper letters are emitted while the
    tail group they summarize still holds at least 8 points
    (floor(depth) >= 8). Suited to long-tailed data where quartiles
    flatten everything into one box.
    """
    vals = sorted(float(v) for v in values)
    n = len(vals)
    if n == 0:
        return ()
    out: list[LetterValue] = []
    depth = (1 + n) / 2.0
    median = _value_at_depth(vals, depth)
    out.append(LetterValue(label="M", depth=depth, lower=median, upper=median))
    level = 1
    while True:
        depth = (1 + math.floor(depth)) / 2.0
        if math.floor(depth) < 8:
            break
        label = (
            _LETTER_LABELS[level]
            if level < len(_LETTER_LABELS)
            else f"L{level}"
        )
        out.append(
            LetterValue(
                label=label,
                depth=depth,
                lower=_value_at_depth(vals, depth),
                upper=_value_at_depth(vals, n + 1 - depth),
            )
        )
        level += 1
    return tuple(out)


def ols_fit(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Least-squares line y = slope*x + intercept.

    A constant x column has no defined slope; by convention the fit is the
    horizontal line through the mean.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape[0] != y.shape[0] or x.shape[0] == 0:
        raise InvalidParamsError("ols_fit needs equal-length non-empty vectors")
    x_mean = float(x.mean())
    y_mean = float(y.mean())
    sxx = float(((x - x_mean) ** 2).sum())
    if sxx == 0.0:
        return 0.0, y_mean
    sxy = float(((x - x_mean) * (y - y_mean)).sum())
    slope = sxy / sxx
    return slope, y_mean - slope * x_mean


def score_percentiles(
    records: Iterable[ScoredRecord], by: Sequence[str] = DEFAULT_GROUP_BY
) -> dict[tuple[str, ...], GroupScoreSummary]:
    """Letter-value boxes of community score per band, plus the score-on-band
    regression line, per group. Records without a score are left out; if no
    record anywhere carries one, that is an error, not an empty answer."""
    per_group: dict[tuple[str, ...], dict[int, list[float]]] = {}
    scored_any = False
    for rec in records:
        if rec.community_score is None:
            continue
        scored_any = True
        key = _group_key(rec, by)
        per_group.setdefault(key, {}).setdefault(rec.ic, []).append(
            float(rec.community_score)
        )
    if not scored_any:
        raise MissingScoresError("no record carries a community_score")
    out: dict[tuple[str, ...], GroupScoreSummary] = {}
    for key in sorted(per_group):
        bands = per_group[key]
        xs: list[float] = []
        ys: list[float] = []
        boxes: dict[int, BandBox] = {}
        for band in sorted(bands):
            scores = bands[band]
            boxes[band] = BandBox(
                band=band, n=len(scores), letter_values=letter_values(scores)
            )
            xs.extend([float(band)] * len(scores))
            ys.extend(scores)
        slope, intercept = ols_fit(xs, ys)
        out[key] = GroupScoreSummary(
            boxes=boxes, slope=slope, intercept=intercept, n=len(xs)
        )
    return out


def write_scored_jsonl(records: Iterable[ScoredRecord], sink: TextIO) -> int:
    n = 0
    for rec in records:
        sink.write(json.dumps(rec.to_json_dict(), sort_keys=True) + "\n")
        n += 1
    return n


def read_scored_jsonl(path: str) -> list[ScoredRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(ScoredRecord.from_json_dict(json.loads(line)))
    return records


def iter_docs_jsonl(path: str) -> Iterator[ParsedDocument]:
    """Documents from JSONL records carrying inline CoNLL-U.

    Record fields: id, community, kind, community_score, and either
    `conllu` (inline text) or `text_ref` (path to a CoNLL-U file holding
    that document). Record fields win over meta comments in the payload.
    """
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            data = json.loads(line)
            if "conllu" in data:
                payload = data["conllu"]
            elif "text_ref" in data:
                with open(data["text_ref"], encoding="utf-8") as ref:
                    payload = ref.read()
            else:
                raise InvalidParamsError(
                    f"record at line {lineno} has neither conllu nor text_ref"
                )
            docs = parse_conllu(payload)
            if len(docs) != 1:
                raise InvalidParamsError(
                    f"record at line {lineno} holds {len(docs)} documents, expected 1"
                )
            doc = docs[0]
            if "id" in data:
                doc.doc_id = str(data["id"])
            for key in ("community", "kind", "community_score"):
                if data.get(key) is not None:
                    doc.meta[key] = str(data[key])
            yield doc


def distribution_csv(dist: dict[tuple[str, ...], dict[int, float]], by: Sequence[str]) -> str:
    lines = [",".join(by) + ",band,mass"]
    for key in sorted(dist):
        for band in sorted(dist[key]):
            lines.append(",".join(key) + f",{band},{dist[key][band]!r}")
    return "\n".join(lines) + "\n"


def binned_means_csv(
    stats: dict[tuple[str, ...], list[BinnedStat]], by: Sequence[str]
) -> str:
    lines = [",".join(by) + ",bin,mean_ic,ci95_halfwidth,n"]
    for key in sorted(stats):
        for st in stats[key]:
            lines.append(
                ",".join(key) + f",{st.bin},{st.mean_ic!r},{st.ci95_halfwidth!r},{st.n}"
            )
    return "\n".join(lines) + "\n"


def score_boxes_csv(
    summaries: dict[tuple[str, ...], GroupScoreSummary], by: Sequence[str]
) -> str:
    lines = [",".join(by) + ",band,letter,depth,lower,upper,n,slope,intercept"]
    for key in sorted(summaries):
        summary = summaries[key]
        for band in sorted(summary.boxes):
            box = summary.boxes[band]
            for lv in box.letter_values:
                lines.append(
                    ",".join(key)
                    + f",{band},{lv.label},{lv.depth!r},{lv.lower!r},{lv.upper!r}"
                    + f",{box.n},{summary.slope!r},{summary.intercept!r}"
                )
    return "\n".join(lines) + "\n"
