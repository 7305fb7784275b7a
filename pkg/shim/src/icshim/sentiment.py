"""Per-document compound sentiment in [-1, 1].

Lexicon-based: each hit contributes its valence, flipped and damped when a
negator appears in the three preceding tokens of the same sentence. The
raw sum s is squashed to s / sqrt(s^2 + 15), which maps 0 to 0 and is
bounded by (-1, 1) for any finite sum; a final clamp guards the boundary
against float rounding. The analyzer is swappable: anything that writes a
[-1, 1] float into document metadata satisfies the downstream contract.
"""

import math
from importlib import resources

_NEGATORS = {
    "not", "never", "no", "nothing", "nobody", "neither", "nor", "cannot",
    "hardly", "barely", "without", "n't",
}
_NEGATION_WINDOW = 3
_NORMALIZATION_ALPHA = 15.0


def load_valences(path: str | None = None) -> dict[str, float]:
    """Load a word -> valence table; defaults to the bundled lexicon."""
    if path is None:
        ref = resources.files("icshim").joinpath("data/sentiment_lexicon.tsv")
        with resources.as_file(ref) as p:
            return load_valences(str(p))
    table: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            word, value = line.split("\t")
            table[word] = float(value)
    return table


_DEFAULT_VALENCES: dict[str, float] | None = None


def _default_valences() -> dict[str, float]:
    global _DEFAULT_VALENCES
    if _DEFAULT_VALENCES is None:
        _DEFAULT_VALENCES = load_valences()
    return _DEFAULT_VALENCES


def compound_score(
    sentences: list[list[tuple[str, str, str]]],
    valences: dict[str, float] | None = None,
) -> float:
    """Score tagged sentences: lists of (surface, lemma, xpos) triples."""
    table = valences if valences is not None else _default_valences()
    total = 0.0
    for sentence in sentences:
        lowers = [surface.lower() for surface, _, _ in sentence]
        for i, (surface, lemma, _) in enumerate(sentence):
            value = table.get(lowers[i])
            if value is None:
                value = table.get(lemma)
            if value is None:
                continue
            window = lowers[max(0, i - _NEGATION_WINDOW):i]
            if any(tok in _NEGATORS for tok in window):
                value *= -0.75
            total += value
    score = total / math.sqrt(total * total + _NORMALIZATION_ALPHA)
    return max(-1.0, min(1.0, score))
