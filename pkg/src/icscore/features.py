"""Feature space fitting and deterministic document vectorization.

The full vector is a concatenation of family blocks in a fixed canonical
order: [vocabulary | liwc | pos | subtrees | wordcount | sentiment]. Ids
inside each block are sorted lexicographically (the two vocabulary summary
features has_diff/has_int sit at the end of their block). Families toggle
independently so ablations remove exactly one contiguous block.

Only the subtree family is data-dependent: its vocabulary is frozen at fit
time as the set of paths meeting the frequency threshold on the fitting
corpus. Everything else is fixed by the supplied lexicon, category
dictionary, and the 45-tag registry.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .conllu import ParsedDocument
from .errors import EmptyCorpusError, InvalidParamsError, SpaceMismatchError
from .lexicon import (
    EMPTY_CATEGORIES,
    EMPTY_LEXICON,
    HAS_DIFF,
    HAS_INT,
    CategoryDictionary,
    Lexicon,
    liwc_features,
    semantic_features,
)
from .postags import PENN_TAGS
from .syntax import (
    BINARY,
    SUBTREE_MODES,
    enumerate_subtree_paths,
    path_key,
    pos_distribution,
    subtree_feature_values,
)

logger = logging.getLogger(__name__)

SPACE_FORMAT_VERSION = 1

FAMILY_VOCABULARY = "vocabulary"
FAMILY_LIWC = "liwc"
FAMILY_POS = "pos"
FAMILY_SUBTREES = "subtrees"
FAMILY_WORDCOUNT = "wordcount"
FAMILY_SENTIMENT = "sentiment"

CANONICAL_FAMILIES = (
    FAMILY_VOCABULARY,
    FAMILY_LIWC,
    FAMILY_POS,
    FAMILY_SUBTREES,
    FAMILY_WORDCOUNT,
    FAMILY_SENTIMENT,
)

DEFAULT_FAMILIES = (FAMILY_VOCABULARY, FAMILY_LIWC, FAMILY_POS, FAMILY_SUBTREES)

OCCURRENCES = "occurrences"
DOCUMENTS = "documents"

WORD_COUNT_ID = "word_count"
SENTIMENT_ID = "sentiment"
SENTIMENT_META_KEY = "sentiment"


def _normalize_families(families: Sequence[str]) -> tuple[str, ...]:
    seen = set(families)
    unknown = seen - set(CANONICAL_FAMILIES)
    if unknown:
        raise InvalidParamsError(f"unknown feature families: {sorted(unknown)}")
    if not seen:
        raise InvalidParamsError("at least one feature family must be enabled")
    return tuple(f for f in CANONICAL_FAMILIES if f in seen)


@dataclass(frozen=True)
class FeatureSpace:
    """Frozen, ordered feature index plus the choices that produced it."""

    families: tuple[str, ...]
    semantic_ids: tuple[str, ...]
    liwc_ids: tuple[str, ...]
    pos_ids: tuple[str, ...]
    subtree_ids: tuple[str, ...]
    extra_ids: tuple[str, ...]
    subtree_freqs: dict[str, int]
    subtree_mode: str
    max_edges: int
    min_freq: int
    freq_counting: str

    @property
    def feature_ids(self) -> tuple[str, ...]:
        blocks = {
            FAMILY_VOCABULARY: self.semantic_ids,
            FAMILY_LIWC: self.liwc_ids,
            FAMILY_POS: self.pos_ids,
            FAMILY_SUBTREES: self.subtree_ids,
            FAMILY_WORDCOUNT: tuple(i for i in self.extra_ids if i == WORD_COUNT_ID),
            FAMILY_SENTIMENT: tuple(i for i in self.extra_ids if i == SENTIMENT_ID),
        }
        out: list[str] = []
        for fam in self.families:
            out.extend(blocks[fam])
        return tuple(out)

    @property
    def dimension(self) -> int:
        return len(self.feature_ids)

    def to_json_dict(self) -> dict:
        return {
            "format_version": SPACE_FORMAT_VERSION,
            "families": list(self.families),
            "semantic_ids": list(self.semantic_ids),
            "liwc_ids": list(self.liwc_ids),
            "pos_ids": list(self.pos_ids),
            "subtree_ids": list(self.subtree_ids),
            "subtree_freqs": dict(sorted(self.subtree_freqs.items())),
            "extra_ids": list(self.extra_ids),
            "subtree_mode": self.subtree_mode,
            "max_edges": self.max_edges,
            "min_freq": self.min_freq,
            "freq_counting": self.freq_counting,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "FeatureSpace":
        version = data.get("format_version")
        if version != SPACE_FORMAT_VERSION:
            raise InvalidParamsError(f"unsupported space format version {version!r}")
        return cls(
            families=tuple(data["families"]),
            semantic_ids=tuple(data["semantic_ids"]),
            liwc_ids=tuple(data["liwc_ids"]),
            pos_ids=tuple(data["pos_ids"]),
            subtree_ids=tuple(data["subtree_ids"]),
            extra_ids=tuple(data["extra_ids"]),
            subtree_freqs={k: int(v) for k, v in data["subtree_freqs"].items()},
            subtree_mode=data["subtree_mode"],
            max_edges=int(data["max_edges"]),
            min_freq=int(data["min_freq"]),
            freq_counting=data["freq_counting"],
        )

    def fingerprint(self) -> str:
        canonical = json.dumps(self.to_json_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "FeatureSpace":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))

    def subtree_vocab_lines(self) -> str:
        """One `key<TAB>training-frequency` line per retained path, sorted."""
        return "".join(
            f"{key}\t{self.subtree_freqs.get(key, 0)}\n" for key in self.subtree_ids
        )


def _semantic_block_ids(lexicon: Lexicon) -> tuple[str, ...]:
    return tuple(sorted(lexicon.feature_ids)) + (HAS_DIFF, HAS_INT)


def _liwc_block_ids(categories: CategoryDictionary) -> tuple[str, ...]:
    return tuple(sorted(categories.names))


def _validate_vectorizer_params(
    subtree_mode: str, max_edges: int, min_freq: int, freq_counting: str
) -> None:
    if subtree_mode not in SUBTREE_MODES:
        raise InvalidParamsError(f"unknown subtree mode {subtree_mode!r}")
    if max_edges < 1:
        raise InvalidParamsError(f"max_edges must be >= 1, got {max_edges}")
    if min_freq < 1:
        raise InvalidParamsError(f"min_freq must be >= 1, got {min_freq}")
    if freq_counting not in (OCCURRENCES, DOCUMENTS):
        raise InvalidParamsError(f"unknown freq_counting {freq_counting!r}")


class DocumentVectorizer(BaseEstimator, TransformerMixin):
    """Fit a FeatureSpace on training documents, then map documents to rows.

    fit() freezes the subtree vocabulary from the training corpus; every
    other block is known up front. transform() is pure given the fitted
    space, so train/score processes produce bit-identical rows for
    identical inputs.
    """

    def __init__(
        self,
        lexicon: Lexicon | None = None,
        categories: CategoryDictionary | None = None,
        families: Sequence[str] = DEFAULT_FAMILIES,
        subtree_mode: str = BINARY,
        max_edges: int = 5,
        min_freq: int = 5,
        freq_counting: str = OCCURRENCES,
    ):
        self.lexicon = lexicon
        self.categories = categories
        self.families = families
        self.subtree_mode = subtree_mode
        self.max_edges = max_edges
        self.min_freq = min_freq
        self.freq_counting = freq_counting

    def _resources(self) -> tuple[Lexicon, CategoryDictionary]:
        lex = self.lexicon if self.lexicon is not None else EMPTY_LEXICON
        cats = self.categories if self.categories is not None else EMPTY_CATEGORIES
        return lex, cats

    def fit(self, docs: Sequence[ParsedDocument], y=None) -> "DocumentVectorizer":
        families = _normalize_families(self.families)
        _validate_vectorizer_params(
            self.subtree_mode, self.max_edges, self.min_freq, self.freq_counting
        )
        docs = list(docs)
        if not docs:
            raise EmptyCorpusError("cannot fit a feature space on zero documents")
        lex, cats = self._resources()

        subtree_ids: tuple[str, ...] = ()
        subtree_freqs: dict[str, int] = {}
        if FAMILY_SUBTREES in families:
            freqs: dict[str, int] = {}
            for doc in docs:
                counts = enumerate_subtree_paths(doc, max_edges=self.max_edges)
                for labels, n in counts.items():
                    key = path_key(labels)
                    inc = n if self.freq_counting == OCCURRENCES else 1
                    freqs[key] = freqs.get(key, 0) + inc
            subtree_ids = tuple(
                sorted(k for k, n in freqs.items() if n >= self.min_freq)
            )
            subtree_freqs = {k: freqs[k] for k in subtree_ids}

        extra_ids: list[str] = []
        if FAMILY_WORDCOUNT in families:
            extra_ids.append(WORD_COUNT_ID)
        if FAMILY_SENTIMENT in families:
            extra_ids.append(SENTIMENT_ID)

        self.space_ = FeatureSpace(
            families=families,
            semantic_ids=_semantic_block_ids(lex) if FAMILY_VOCABULARY in families else (),
            liwc_ids=_liwc_block_ids(cats) if FAMILY_LIWC in families else (),
            pos_ids=tuple(sorted(PENN_TAGS)) if FAMILY_POS in families else (),
            subtree_ids=subtree_ids,
            extra_ids=tuple(extra_ids),
            subtree_freqs=subtree_freqs,
            subtree_mode=self.subtree_mode,
            max_edges=self.max_edges,
            min_freq=self.min_freq,
            freq_counting=self.freq_counting,
        )
        return self

    @classmethod
    def from_space(
        cls,
        space: FeatureSpace,
        lexicon: Lexicon | None = None,
        categories: CategoryDictionary | None = None,
    ) -> "DocumentVectorizer":
        """Rebind a previously fitted space to its matching resources.

        The space stores ids, not phrases, so scoring needs the original
        lexicon and category dictionary; a mismatch here would silently
        scramble columns, hence the strict checks.
        """
        vec = cls(
            lexicon=lexicon,
            categories=categories,
            families=space.families,
            subtree_mode=space.subtree_mode,
            max_edges=space.max_edges,
            min_freq=space.min_freq,
            freq_counting=space.freq_counting,
        )
        lex, cats = vec._resources()
        if FAMILY_VOCABULARY in space.families:
            if _semantic_block_ids(lex) != space.semantic_ids:
                raise SpaceMismatchError(
                    "lexicon feature ids do not match the loaded feature space"
                )
        if FAMILY_LIWC in space.families:
            if _liwc_block_ids(cats) != space.liwc_ids:
                raise SpaceMismatchError(
                    "category names do not match the loaded feature space"
                )
        vec.space_ = space
        return vec

    def _check_fitted(self) -> FeatureSpace:
        space = getattr(self, "space_", None)
        if space is None:
            raise NotFittedError(
                "this DocumentVectorizer is not fitted; call fit() first"
            )
        return space

    def transform(self, docs: Sequence[ParsedDocument]) -> np.ndarray:
        space = self._check_fitted()
        lex, cats = self._resources()
        rows = np.zeros((len(docs), space.dimension), dtype=np.float64)
        missing_sentiment = 0
        for i, doc in enumerate(docs):
            rows[i], missed = _fill_row(doc, space, lex, cats)
            missing_sentiment += missed
        if missing_sentiment:
            logger.warning(
                "%d document(s) missing meta.sentiment; slot filled with 0",
                missing_sentiment,
            )
        return rows

    def transform_one(self, doc: ParsedDocument) -> np.ndarray:
        return self.transform([doc])[0]


def _fill_row(
    doc: ParsedDocument,
    space: FeatureSpace,
    lex: Lexicon,
    cats: CategoryDictionary,
) -> tuple[np.ndarray, int]:
    parts: list[float] = []
    missing_sentiment = 0
    for fam in space.families:
        if fam == FAMILY_VOCABULARY:
            sem = semantic_features(doc, lex)
            parts.extend(float(sem[fid]) for fid in space.semantic_ids)
        elif fam == FAMILY_LIWC:
            liwc = liwc_features(doc, cats)
            parts.extend(float(liwc[name]) for name in space.liwc_ids)
        elif fam == FAMILY_POS:
            dist = pos_distribution(doc)
            parts.extend(dist[tag] for tag in space.pos_ids)
        elif fam == FAMILY_SUBTREES:
            vals = subtree_feature_values(
                doc, space.subtree_ids, mode=space.subtree_mode, max_edges=space.max_edges
            )
            parts.extend(vals[key] for key in space.subtree_ids)
        elif fam == FAMILY_WORDCOUNT:
            parts.append(float(doc.word_count))
        elif fam == FAMILY_SENTIMENT:
            raw = doc.meta.get(SENTIMENT_META_KEY)
            if raw is None:
                missing_sentiment = 1
                parts.append(0.0)
            else:
                parts.append(float(raw))
    return np.asarray(parts, dtype=np.float64), missing_sentiment


def fit_feature_space(corpus: Sequence[ParsedDocument], **params) -> FeatureSpace:
    return DocumentVectorizer(**params).fit(corpus).space_


def vectorize(
    doc: ParsedDocument,
    space: FeatureSpace,
    lexicon: Lexicon | None = None,
    categories: CategoryDictionary | None = None,
) -> np.ndarray:
    vec = DocumentVectorizer.from_space(space, lexicon=lexicon, categories=categories)
    return vec.transform_one(doc)


def write_matrix_csv(
    sink: TextIO,
    doc_ids: Iterable[str],
    labels: Iterable[int | None],
    matrix: np.ndarray,
    feature_ids: Sequence[str],
) -> None:
    """Feature matrix as CSV: doc_id, label, then one column per feature id."""
    sink.write("doc_id,label," + ",".join(feature_ids) + "\n")
    for doc_id, label, row in zip(doc_ids, labels, matrix):
        label_str = "" if label is None else str(label)
        sink.write(
            f"{doc_id},{label_str}," + ",".join(repr(float(v)) for v in row) + "\n"
        )
