"""Deterministic single-root dependency heuristic.

A two-level scheme: one root per sentence, nominals and stray verbs hang
off the root, modifiers hang off the nearest following nominal. Heads
therefore always point at the root or at a nominal whose own head is the
root, so the output is a tree by construction: no cycles, exactly one
head-0 token, never a self-loop.

Not a parser. It preserves the local attachments the downstream subtree
features care about (det/amod/nsubj chains) and nothing deeper.
"""

_VERB_TAGS = {"VB", "VBD", "VBG", "VBN", "VBP", "VBZ"}
_NOMINAL_TAGS = {"NN", "NNS", "NNP", "NNPS", "PRP", "WP", "CD"}
_PUNCT_TAGS = {"#", "$", "''", "(", ")", ",", ".", ":", "``"}


def _next_nominal(tags, start):
    for j in range(start, len(tags)):
        if tags[j] in _NOMINAL_TAGS:
            return j
    return None


def _pick_root(tags):
    for group in (_VERB_TAGS, {"MD"}, _NOMINAL_TAGS):
        for i, tag in enumerate(tags):
            if tag in group:
                return i
    for i, tag in enumerate(tags):
        if tag not in _PUNCT_TAGS:
            return i
    return 0


def attach_heads(tags: list[str]) -> list[tuple[int, str]]:
    """Assign (head, deprel) per token; heads are 1-based, root head is 0."""
    root = _pick_root(tags)
    out: list[tuple[int, str]] = []
    subj_taken = False
    obj_taken = False
    for i, tag in enumerate(tags):
        if i == root:
            out.append((0, "root"))
            continue
        if tag in _PUNCT_TAGS:
            out.append((root + 1, "punct"))
            continue
        if tag in _NOMINAL_TAGS and tag != "CD":
            if i < root and not subj_taken:
                subj_taken = True
                out.append((root + 1, "nsubj"))
            elif i > root and not obj_taken:
                obj_taken = True
                out.append((root + 1, "obj"))
            else:
                out.append((root + 1, "dep"))
            continue
        if tag in ("DT", "PDT", "PRP$", "WDT"):
            nom = _next_nominal(tags, i + 1)
            if nom is not None and nom != root:
                out.append((nom + 1, "det"))
            else:
                out.append((root + 1, "det" if nom == root else "dep"))
            continue
        if tag in ("JJ", "JJR", "JJS"):
            nom = _next_nominal(tags, i + 1)
            if nom is not None and nom != root:
                out.append((nom + 1, "amod"))
            else:
                out.append((root + 1, "amod" if nom == root else "dep"))
            continue
        if tag == "CD":
            nom = _next_nominal(tags, i + 1)
            if nom is not None and nom != root:
                out.append((nom + 1, "nummod"))
            else:
                out.append((root + 1, "nummod" if nom == root else "dep"))
            continue
        if tag == "POS":
            # clitic marks the possessor it follows
            prev = i - 1
            if prev >= 0 and tags[prev] in _NOMINAL_TAGS and prev != root:
                out.append((prev + 1, "case"))
            else:
                out.append((root + 1, "case"))
            continue
        if tag in ("IN", "TO"):
            nom = _next_nominal(tags, i + 1)
            if nom is not None and nom != root:
                out.append((nom + 1, "case"))
            else:
                out.append((root + 1, "mark"))
            continue
        if tag in ("RB", "RBR", "RBS", "RP", "WRB"):
            out.append((root + 1, "advmod"))
            continue
        if tag == "MD":
            out.append((root + 1, "aux"))
            continue
        if tag in _VERB_TAGS:
            out.append((root + 1, "dep"))
            continue
        if tag == "CC":
            out.append((root + 1, "cc"))
            continue
        if tag == "UH":
            out.append((root + 1, "discourse"))
            continue
        if tag == "EX":
            out.append((root + 1, "expl"))
            continue
        out.append((root + 1, "dep"))
    return out
