"""Shared builders for hand-constructed documents and corpora.

Tests build CoNLL-U content programmatically so every structural case
(tree shapes, labels, metadata) is explicit at the point of use.
"""

from __future__ import annotations

import pytest

from icscore.conllu import ParsedDocument, Sentence, Token, parse_conllu


def make_sentence(rows):
    """rows: list of (surface, lemma, xpos, head, deprel), 1-indexed heads."""
    tokens = [
        Token(index=i + 1, surface=s, lemma=l, xpos=x, head=h, deprel=d)
        for i, (s, l, x, h, d) in enumerate(rows)
    ]
    return Sentence(tokens=tokens)


def make_doc(doc_id, sentences, label=None, meta=None):
    """sentences: row lists (see make_sentence) or prebuilt Sentence objects."""
    built = [s if isinstance(s, Sentence) else make_sentence(s) for s in sentences]
    return ParsedDocument(
        doc_id=doc_id,
        sentences=built,
        label=label,
        meta=dict(meta or {}),
    )


CAT_SLEEPS_ROWS = [
    ("the", "the", "DT", 2, "det"),
    ("cat", "cat", "NN", 3, "nsubj"),
    ("sleeps", "sleep", "VBZ", 0, "root"),
]

CAT_SLEEPS_CONLLU = """\
# newdoc id = cat1
1\tthe\tthe\t_\tDT\t_\t2\tdet\t_\t_
2\tcat\tcat\t_\tNN\t_\t3\tnsubj\t_\t_
3\tsleeps\tsleep\t_\tVBZ\t_\t0\troot\t_\t_
"""


@pytest.fixture
def cat_sleeps_doc():
    return parse_conllu(CAT_SLEEPS_CONLLU)[0]


def simple_doc(doc_id, words, label=None, meta=None, xpos="NN"):
    """Flat one-sentence doc: every word attaches to the last as a chain of
    dep arcs with the final word as root. Lemma = lowercased surface."""
    rows = []
    n = len(words)
    for i, w in enumerate(words):
        head = 0 if i == n - 1 else i + 2
        deprel = "root" if i == n - 1 else "dep"
        rows.append((w, w.lower(), xpos, head, deprel))
    return make_doc(doc_id, [rows], label=label, meta=meta)


def star_doc(doc_id, root_word, child_words, deprels=None, label=None, meta=None):
    """One sentence: children all attach directly to a final root token."""
    n = len(child_words) + 1
    deprels = deprels or ["dep"] * len(child_words)
    rows = [
        (w, w.lower(), "NN", n, rel) for w, rel in zip(child_words, deprels)
    ]
    rows.append((root_word, root_word.lower(), "VBZ", 0, "root"))
    return make_doc(doc_id, [rows], label=label, meta=meta)


MINI_LIWC = """\
%
1\tfuture
2\tpositive
3\tnegation
4\tmotion
5\tfamily
%
will\t1
gonna\t1
happi*\t2
good\t2
not\t3
never\t3
go\t4
run*\t4
mother\t5
father\t5
"""


def band_corpus():
    """Hand-built labeled corpus spanning three bands with learnable cues.

    Band 1 docs carry no lexicon keywords, band 4 docs trip differentiation
    entries, band 7 docs trip both differentiation and integration. Trees
    vary enough that a small subtree vocabulary survives frequency
    filtering.
    """
    docs = []
    for i in range(7):
        docs.append(
            star_doc(
                f"b1_{i}",
                "sleeps",
                ["the", "cat", f"pet{i}"],
                deprels=["det", "nsubj", "obj"],
                label=1,
                meta={"community": "plain", "kind": "POST"},
            )
        )
    for i in range(7):
        docs.append(
            star_doc(
                f"b4_{i}",
                "runs",
                ["however", "the", "dog", f"toy{i}"],
                deprels=["advmod", "det", "nsubj", "obj"],
                label=4,
                meta={"community": "layered", "kind": "POST"},
            )
        )
    for i in range(6):
        docs.append(
            star_doc(
                f"b7_{i}",
                "binds",
                ["however", "unity", "the", f"idea{i}"],
                deprels=["advmod", "nsubj", "det", "obj"],
                label=7,
                meta={"community": "layered", "kind": "COMMENT"},
            )
        )
    return docs


@pytest.fixture
def labeled_corpus():
    return band_corpus()
