"""CoNLL-U ingestion and serialization.

A corpus file is a sequence of documents delimited by ``# newdoc id = <id>``
comment lines. Inside a document, ``# ic = <n>`` attaches a gold band label
(integer 1..7) and ``# meta.<key> = <value>`` attaches free string metadata.
Sentences are blocks of 10-column tab-separated token lines separated by
blank lines. Of the ten columns this package reads ID, FORM, LEMMA, XPOS,
HEAD and DEPREL; the remaining four (UPOS, FEATS, DEPS, MISC) are carried
through serialization untouched but never interpreted.

Structural validation happens during parsing, with 1-based line numbers:

* wrong column count or non-integer ID/HEAD -> MalformedLineError
* HEAD outside 0..len(sentence)             -> DanglingHeadError
* self-loops, cycles, zero or multiple roots -> CyclicTreeError
* ``# ic`` outside 1..7 or non-integer       -> BadLabelError

Multiword-token ranges (``1-2``) and empty nodes (``3.1``) are skipped:
dependency heads only ever reference plain integer ids, and nothing in this
package consumes the extra surface rows.

XPOS values outside the 45-tag registry are preserved on the token but
reported: the parser logs one warning per parse call listing unknown tags
and their counts.
"""

from __future__ import annotations

import io
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

from .errors import (
    BadLabelError,
    CyclicTreeError,
    DanglingHeadError,
    MalformedLineError,
)
from .postags import in_registry, is_punct_tag

logger = logging.getLogger(__name__)

NEWDOC_PREFIX = "# newdoc id = "
IC_PREFIX = "# ic = "
META_PREFIX = "# meta."

_PASSTHROUGH = ("_", "_", "_", "_")  # UPOS, FEATS, DEPS, MISC defaults


@dataclass(slots=True)
class Token:
    """One syntactic word. ``head`` is 0 for the sentence root."""

    index: int
    surface: str
    lemma: str
    xpos: str
    head: int
    deprel: str
    extra: tuple[str, str, str, str] = _PASSTHROUGH

    @property
    def is_punct(self) -> bool:
        if is_punct_tag(self.xpos):
            return True
        return not any(c.isalnum() for c in self.surface)


@dataclass(slots=True)
class Sentence:
    tokens: list[Token] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def root_index(self) -> int:
        for tok in self.tokens:
            if tok.head == 0:
                return tok.index
        raise CyclicTreeError("sentence has no root")


@dataclass(slots=True)
class ParsedDocument:
    doc_id: str
    sentences: list[Sentence] = field(default_factory=list)
    label: int | None = None
    meta: dict[str, str] = field(default_factory=dict)

    @property
    def word_count(self) -> int:
        return sum(len(s) for s in self.sentences)

    def iter_tokens(self) -> Iterator[Token]:
        for sent in self.sentences:
            yield from sent.tokens


def validate_band(value: int, line: int | None = None) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= 7:
        raise BadLabelError(f"band label must be an integer in 1..7, got {value!r}", line)
    return value


def _parse_token_line(line: str, lineno: int, expected_index: int) -> Token | None:
    cols = line.split("\t")
    if len(cols) != 10:
        raise MalformedLineError(
            f"expected 10 tab-separated columns, got {len(cols)}", lineno
        )
    raw_id = cols[0]
    if "-" in raw_id or "." in raw_id:
        return None  # multiword range / empty node: surface-only, skip
    try:
        idx = int(raw_id)
    except ValueError:
        raise MalformedLineError(f"non-integer token id {raw_id!r}", lineno) from None
    if idx != expected_index:
        raise MalformedLineError(
            f"token id {idx} out of sequence (expected {expected_index})", lineno
        )
    try:
        head = int(cols[6])
    except ValueError:
        raise MalformedLineError(f"non-integer head {cols[6]!r}", lineno) from None
    if head < 0:
        raise MalformedLineError(f"negative head {head}", lineno)
    return Token(
        index=idx,
        surface=cols[1],
        lemma=cols[2],
        xpos=cols[4],
        head=head,
        deprel=cols[7],
        extra=(cols[3], cols[5], cols[8], cols[9]),
    )


def _check_tree(tokens: list[Token], token_lines: list[int]) -> None:
    n = len(tokens)
    roots = 0
    for tok, lineno in zip(tokens, token_lines):
        if tok.head > n:
            raise DanglingHeadError(
                f"head {tok.head} exceeds sentence length {n}", lineno
            )
        if tok.head == tok.index:
            raise CyclicTreeError(f"token {tok.index} is its own head", lineno)
        if tok.head == 0:
            roots += 1
    first_line = token_lines[0] if token_lines else None
    if roots == 0:
        raise CyclicTreeError("sentence has no root token", first_line)
    if roots > 1:
        raise CyclicTreeError(f"sentence has {roots} root tokens", first_line)
    # Walk each token toward the root; a tree visits <= n distinct heads.
    for tok, lineno in zip(tokens, token_lines):
        seen = 0
        cur = tok.head
        while cur != 0:
            cur = tokens[cur - 1].head
            seen += 1
            if seen > n:
                raise CyclicTreeError(
                    f"cycle in head chain starting at token {tok.index}", lineno
                )


class _DocBuilder:
    def __init__(self, doc_id: str):
        self.doc = ParsedDocument(doc_id=doc_id)
        self.tokens: list[Token] = []
        self.token_lines: list[int] = []
        self.next_index = 1

    def flush_sentence(self) -> None:
        if not self.tokens:
            return
        _check_tree(self.tokens, self.token_lines)
        self.doc.sentences.append(Sentence(tokens=self.tokens))
        self.tokens = []
        self.token_lines = []
        self.next_index = 1

    def add_token(self, line: str, lineno: int, unknown_tags: Counter) -> None:
        tok = _parse_token_line(line, lineno, self.next_index)
        if tok is None:
            return
        if not in_registry(tok.xpos):
            unknown_tags[tok.xpos] += 1
        self.tokens.append(tok)
        self.token_lines.append(lineno)
        self.next_index += 1

    def finish(self) -> ParsedDocument:
        self.flush_sentence()
        return self.doc


def iter_parse_conllu(lines: Iterable[str]) -> Iterator[ParsedDocument]:
    """Stream documents out of CoNLL-U text, one at a time.

    Memory stays bounded by the largest single document, which is what the
    corpus-scale scoring path relies on.
    """
    builder: _DocBuilder | None = None
    unknown_tags: Counter = Counter()
    lineno = 0
    try:
        for lineno, raw in enumerate(lines, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip():
                if builder is not None:
                    builder.flush_sentence()
                continue
            if line.startswith(NEWDOC_PREFIX):
                if builder is not None:
                    yield builder.finish()
                builder = _DocBuilder(line[len(NEWDOC_PREFIX):].strip())
                continue
            if line.startswith("#"):
                if builder is None:
                    continue  # file-level comment, nothing to attach to
                if line.startswith(IC_PREFIX):
                    raw_label = line[len(IC_PREFIX):].strip()
                    try:
                        label = int(raw_label)
                    except ValueError:
                        raise BadLabelError(
                            f"non-integer band label {raw_label!r}", lineno
                        ) from None
                    builder.doc.label = validate_band(label, lineno)
                elif line.startswith(META_PREFIX):
                    body = line[len(META_PREFIX):]
                    key, sep, value = body.partition(" = ")
                    if sep and key:
                        builder.doc.meta[key] = value
                continue
            if builder is None:
                raise MalformedLineError("token line before any '# newdoc id'", lineno)
            builder.add_token(line, lineno, unknown_tags)
        if builder is not None:
            yield builder.finish()
    finally:
        if unknown_tags:
            logger.warning(
                "out-of-registry xpos tags mapped to OTHER: %s",
                dict(sorted(unknown_tags.items())),
            )


def parse_conllu(source: str | TextIO) -> list[ParsedDocument]:
    """Parse a whole corpus from a string or text stream."""
    if isinstance(source, str):
        source = io.StringIO(source)
    return list(iter_parse_conllu(source))


def parse_conllu_file(path: str) -> list[ParsedDocument]:
    with open(path, encoding="utf-8") as fh:
        return list(iter_parse_conllu(fh))


def serialize_document(doc: ParsedDocument) -> str:
    out: list[str] = [f"{NEWDOC_PREFIX}{doc.doc_id}"]
    if doc.label is not None:
        out.append(f"{IC_PREFIX}{doc.label}")
    for key in sorted(doc.meta):
        out.append(f"{META_PREFIX}{key} = {doc.meta[key]}")
    for sent in doc.sentences:
        for tok in sent.tokens:
            upos, feats, deps, misc = tok.extra
            out.append(
                "\t".join(
                    (
                        str(tok.index),
                        tok.surface,
                        tok.lemma,
                        upos,
                        tok.xpos,
                        feats,
                        str(tok.head),
                        tok.deprel,
                        deps,
                        misc,
                    )
                )
            )
        out.append("")
    if out[-1] != "":
        out.append("")
    return "\n".join(out) + "\n"


def serialize_conllu(docs: Iterable[ParsedDocument]) -> str:
    return "".join(serialize_document(d) for d in docs)


def write_conllu(docs: Iterable[ParsedDocument], sink: TextIO) -> None:
    for doc in docs:
        sink.write(serialize_document(doc))
