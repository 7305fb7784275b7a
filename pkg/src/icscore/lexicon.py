"""Binary semantic features: keyword-lexicon matches and category-dictionary hits.

Two resources drive this module. The keyword lexicon maps lemma phrases to
feature ids prefixed ``dif_`` (differentiation) or ``int_`` (integration);
a match is presence-only and confined to a single sentence. The category
dictionary is the de-facto LIWC interchange layout: a ``%``-delimited header
of ``<id>\t<name>`` lines followed by ``word\t<id>,<id>`` member lines, with
a trailing ``*`` on a word meaning prefix match.

All outputs are 0/1. Counts are deliberately never exposed: presence-only
features cannot leak document length into the classifier.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .conllu import ParsedDocument
from .errors import (
    DuplicateFeatureIdError,
    EmptyPhraseError,
    LexiconFormatError,
    UnknownRoleError,
)

DIFFERENTIATION = "DIF"
INTEGRATION = "INT"

_ROLE_ALIASES = {
    "DIF": DIFFERENTIATION,
    "DIFFERENTIATION": DIFFERENTIATION,
    "INT": INTEGRATION,
    "INTEGRATION": INTEGRATION,
}

HAS_DIFF = "has_diff"
HAS_INT = "has_int"


@dataclass(frozen=True, slots=True)
class LexiconEntry:
    phrase: tuple[str, ...]
    role: str
    feature_id: str


@dataclass(frozen=True)
class Lexicon:
    entries: tuple[LexiconEntry, ...]

    @property
    def feature_ids(self) -> tuple[str, ...]:
        return tuple(e.feature_id for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


EMPTY_LEXICON = Lexicon(entries=())


def load_lexicon(source: str | TextIO) -> Lexicon:
    """Read ``<role>\t<feature_id>\t<lemma phrase>`` lines.

    Roles accept DIF/INT or their full spellings, case-insensitive. Blank
    lines and ``#`` comments are skipped. An empty file is a legal empty
    lexicon.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    entries: list[LexiconEntry] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(source, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        # Split on the newline-trimmed line, not the stripped one, so a
        # whitespace-only trailing field still counts toward the field tally.
        parts = raw.rstrip("\r\n").split("\t")
        if len(parts) != 3:
            raise LexiconFormatError(
                f"line {lineno}: expected 3 tab-separated fields, got {len(parts)}"
            )
        role_raw, feature_id, phrase_raw = (p.strip() for p in parts)
        role = _ROLE_ALIASES.get(role_raw.upper())
        if role is None:
            raise UnknownRoleError(f"line {lineno}: unknown role {role_raw!r}")
        if not feature_id:
            raise LexiconFormatError(f"line {lineno}: empty feature id")
        if feature_id in seen:
            raise DuplicateFeatureIdError(
                f"line {lineno}: duplicate feature id {feature_id!r}"
            )
        phrase = tuple(phrase_raw.lower().split())
        if not phrase:
            raise EmptyPhraseError(f"line {lineno}: empty phrase for {feature_id!r}")
        seen.add(feature_id)
        entries.append(LexiconEntry(phrase=phrase, role=role, feature_id=feature_id))
    return Lexicon(entries=tuple(entries))


def load_lexicon_file(path: str) -> Lexicon:
    with open(path, encoding="utf-8") as fh:
        return load_lexicon(fh)


def _sentence_lemmas(doc: ParsedDocument) -> list[list[str]]:
    # Punctuation tokens are dropped here, which is what makes them
    # transparent to phrase contiguity.
    return [
        [t.lemma.lower() for t in sent.tokens if not t.is_punct]
        for sent in doc.sentences
    ]


def _contains_phrase(seq: list[str], phrase: tuple[str, ...]) -> bool:
    k = len(phrase)
    if k > len(seq):
        return False
    first = phrase[0]
    for i in range(len(seq) - k + 1):
        if seq[i] == first and tuple(seq[i : i + k]) == phrase:
            return True
    return False


def semantic_features(doc: ParsedDocument, lexicon: Lexicon) -> dict[str, int]:
    """Presence map over lexicon ids plus has_diff / has_int summaries."""
    sentences = _sentence_lemmas(doc)
    lemma_pool = set()
    for seq in sentences:
        lemma_pool.update(seq)
    out: dict[str, int] = {}
    any_dif = any_int = 0
    for entry in lexicon.entries:
        if entry.phrase[0] not in lemma_pool:
            hit = 0
        elif len(entry.phrase) == 1:
            hit = 1
        else:
            hit = int(any(_contains_phrase(seq, entry.phrase) for seq in sentences))
        out[entry.feature_id] = hit
        if hit:
            if entry.role == DIFFERENTIATION:
                any_dif = 1
            else:
                any_int = 1
    out[HAS_DIFF] = any_dif
    out[HAS_INT] = any_int
    return out


@dataclass(frozen=True)
class CategoryDictionary:
    """Named categories of word patterns; ``exact`` and ``prefixes`` are the
    match-ready split of each category's members."""

    names: tuple[str, ...]
    exact: dict[str, frozenset[str]] = field(default_factory=dict)
    prefixes: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.names)


EMPTY_CATEGORIES = CategoryDictionary(names=(), exact={}, prefixes={})


def load_categories(source: str | TextIO) -> CategoryDictionary:
    """Parse the %-header dictionary layout.

    Header section between the first two ``%`` lines assigns ``<id>\t<name>``;
    the body maps ``word\t<id>,<id>`` (comma- or tab-separated ids both occur
    in the wild, so both are accepted).
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    lines = [ln.rstrip("\n") for ln in source]
    try:
        first = lines.index("%")
        second = lines.index("%", first + 1)
    except ValueError:
        raise LexiconFormatError("category dictionary missing %-delimited header") from None

    id_to_name: dict[str, str] = {}
    for lineno, line in enumerate(lines[first + 1 : second], start=first + 2):
        line = line.strip()
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconFormatError(f"line {lineno}: bad header entry {line!r}")
        cat_id, name = parts[0].strip(), parts[1].strip()
        if name in id_to_name.values():
            raise DuplicateFeatureIdError(f"line {lineno}: duplicate category {name!r}")
        id_to_name[cat_id] = name

    members: dict[str, set[str]] = {name: set() for name in id_to_name.values()}
    for lineno, line in enumerate(lines[second + 1 :], start=second + 2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        word = parts[0].strip().lower()
        if not word:
            raise LexiconFormatError(f"line {lineno}: empty word")
        ids: list[str] = []
        for chunk in parts[1:]:
            ids.extend(c.strip() for c in chunk.split(",") if c.strip())
        if not ids:
            raise LexiconFormatError(f"line {lineno}: word {word!r} has no categories")
        for cat_id in ids:
            if cat_id not in id_to_name:
                raise LexiconFormatError(
                    f"line {lineno}: unknown category id {cat_id!r}"
                )
            members[id_to_name[cat_id]].add(word)

    names = tuple(id_to_name[k] for k in id_to_name)
    exact: dict[str, frozenset[str]] = {}
    prefixes: dict[str, tuple[str, ...]] = {}
    for name in names:
        exact[name] = frozenset(w for w in members[name] if not w.endswith("*"))
        prefixes[name] = tuple(sorted(w[:-1] for w in members[name] if w.endswith("*")))
    return CategoryDictionary(names=names, exact=exact, prefixes=prefixes)


def load_categories_file(path: str) -> CategoryDictionary:
    with open(path, encoding="utf-8") as fh:
        return load_categories(fh)


def _doc_token_strings(doc: ParsedDocument) -> set[str]:
    pool: set[str] = set()
    for tok in doc.iter_tokens():
        pool.add(tok.surface.lower())
        pool.add(tok.lemma.lower())
    return pool


def liwc_features(doc: ParsedDocument, categories: CategoryDictionary) -> dict[str, int]:
    """Category presence: 1 iff any token surface or lemma matches a member."""
    pool = _doc_token_strings(doc)
    out: dict[str, int] = {}
    for name in categories.names:
        hit = 0
        if pool & categories.exact[name]:
            hit = 1
        else:
            for prefix in categories.prefixes[name]:
                if any(tok.startswith(prefix) for tok in pool):
                    hit = 1
                    break
        out[name] = hit
    return out


def count_roles(lexicon: Lexicon) -> dict[str, int]:
    counts = {DIFFERENTIATION: 0, INTEGRATION: 0}
    for e in lexicon.entries:
        counts[e.role] += 1
    return counts


def lexicon_lines(entries: Iterable[LexiconEntry]) -> str:
    return "".join(
        f"{e.role}\t{e.feature_id}\t{' '.join(e.phrase)}\n" for e in entries
    )
