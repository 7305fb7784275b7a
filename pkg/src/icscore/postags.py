"""Penn Treebank tag registry used by the part-of-speech feature family.

The registry is the closed set of 45 tags (36 word classes + 9 punctuation
tags). Tokens tagged outside it are counted under the reserved OTHER bucket,
which is deliberately not part of the registry: the pos feature family is
always exactly 45 columns wide.
"""

WORD_TAGS = (
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD",
    "NN", "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$",
    "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH",
    "VB", "VBD", "VBG", "VBN", "VBP", "VBZ",
    "WDT", "WP", "WP$", "WRB",
)

PUNCT_TAGS = ("#", "$", "''", "(", ")", ",", ".", ":", "``")

PENN_TAGS = WORD_TAGS + PUNCT_TAGS

# Overflow bucket for out-of-registry tags. Never a feature id.
OTHER_TAG = "OTHER"

_REGISTRY = frozenset(PENN_TAGS)
_PUNCT = frozenset(PUNCT_TAGS)


def in_registry(tag: str) -> bool:
    return tag in _REGISTRY


def is_punct_tag(tag: str) -> bool:
    return tag in _PUNCT
