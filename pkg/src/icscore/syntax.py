"""Syntactic features: POS-tag distributions and dependency subtree paths.

A subtree path is the sequence of dependency labels along a descending
chain from some token to one of its descendants, at most ``max_edges``
steps long. Node identities are discarded; only edge labels survive.
For "the cat sleeps" (det <- cat, cat <- sleeps) the extracted multiset
is {nsubj, det, nsubj_det}.
"""

from __future__ import annotations

from collections import Counter

from .conllu import ParsedDocument, Sentence
from .errors import InvalidParamsError
from .postags import PENN_TAGS, in_registry

PATH_SEP = "_"

BINARY = "binary"
NORMALIZED = "normalized"
SUBTREE_MODES = (BINARY, NORMALIZED)


def path_key(labels: tuple[str, ...]) -> str:
    return PATH_SEP.join(labels)


def pos_distribution(doc: ParsedDocument) -> dict[str, float]:
    """Fraction of tokens per registry tag, zeros included.

    The denominator is the total token count, so out-of-registry tokens
    dilute every fraction but never add a key: the output is always
    exactly 45 wide.
    """
    total = doc.word_count
    counts: Counter = Counter()
    if total:
        for tok in doc.iter_tokens():
            if in_registry(tok.xpos):
                counts[tok.xpos] += 1
    return {tag: (counts[tag] / total if total else 0.0) for tag in PENN_TAGS}


def _sentence_paths(sent: Sentence, max_edges: int, out: Counter) -> None:
    children: dict[int, list[int]] = {}
    labels: dict[int, str] = {}
    for tok in sent.tokens:
        labels[tok.index] = tok.deprel
        children.setdefault(tok.head, []).append(tok.index)
    # Depth-first over descending chains. Chains start at real tokens only,
    # never at the virtual root, so the root token's own deprel is not a path.
    stack = [(tok.index, ()) for tok in sent.tokens]
    while stack:
        node, prefix = stack.pop()
        for child in children.get(node, ()):
            path = prefix + (labels[child],)
            out[path] += 1
            if len(path) < max_edges:
                stack.append((child, path))


def enumerate_subtree_paths(
    doc: ParsedDocument, max_edges: int = 5, branching: bool = False
) -> Counter:
    """Multiset of label chains, keyed by label tuple.

    ``branching`` reserves space for enumerating non-chain connected
    subtrees; it is intentionally unimplemented (combinatorial blowup on
    long sentences) and kept only so configs can state the choice.
    """
    if branching:
        raise NotImplementedError("branching subtree extraction is not supported")
    if max_edges < 1:
        raise InvalidParamsError(f"max_edges must be >= 1, got {max_edges}")
    paths: Counter = Counter()
    for sent in doc.sentences:
        _sentence_paths(sent, max_edges, paths)
    return paths


def subtree_feature_values(
    doc: ParsedDocument,
    vocabulary: tuple[str, ...] | list[str],
    mode: str = BINARY,
    max_edges: int = 5,
) -> dict[str, float]:
    """Project a document onto a frozen path vocabulary.

    NORMALIZED divides by the total number of paths extracted from the
    document, including paths outside the vocabulary.
    """
    if mode not in SUBTREE_MODES:
        raise InvalidParamsError(f"unknown subtree mode {mode!r}")
    counts = enumerate_subtree_paths(doc, max_edges=max_edges)
    keyed = {path_key(labels): n for labels, n in counts.items()}
    if mode == BINARY:
        return {key: (1.0 if keyed.get(key) else 0.0) for key in vocabulary}
    total = sum(counts.values())
    if not total:
        return {key: 0.0 for key in vocabulary}
    return {key: keyed.get(key, 0) / total for key in vocabulary}
