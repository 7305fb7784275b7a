"""Rule-based Penn Treebank tagger and lemmatizer.

Closed classes come from lookup tables; open-class words fall through
suffix heuristics to a noun default. Ambiguous closed-class words get one
fixed reading (the corpus-dominant one) so the pipeline stays
deterministic. Lemmas are lowercase; irregular forms come from a table,
regular forms from suffix stripping checked against the verb stem list.
"""

import re

# ---------------------------------------------------------------- lexicons

_PUNCT_MAP = {
    ".": ".", "!": ".", "?": ".", "…": ".",
    ",": ",",
    ";": ":", ":": ":", "-": ":", "–": ":", "—": ":",
    "(": "(", "[": "(", "{": "(",
    ")": ")", "]": ")", "}": ")",
    "$": "$", "#": "#",
}

_DT = {
    "the", "a", "an", "this", "that", "these", "those", "some", "any",
    "each", "every", "either", "neither", "no", "another", "all", "both",
}
_PRP = {
    "i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them",
    "myself", "yourself", "himself", "herself", "itself", "ourselves",
    "themselves", "mine", "yours", "hers", "theirs", "ours", "one",
}
_PRP_DOLLAR = {"my", "your", "his", "her", "its", "our", "their"}
_WP = {"who", "whom", "whoever", "what"}
_WP_DOLLAR = {"whose"}
_WDT = {"which", "whichever"}
_WRB = {"when", "where", "why", "how", "whenever", "wherever"}
_EX = {"there"}
_IN = {
    "of", "in", "on", "at", "by", "for", "with", "from", "about", "into",
    "over", "under", "between", "during", "without", "within", "against",
    "after", "before", "since", "because", "although", "though", "while",
    "unless", "until", "whether", "if", "as", "than", "like", "near",
    "beyond", "among", "across", "behind", "below", "above", "per",
    "despite", "toward", "towards", "upon", "via", "off",
}
_CC = {"and", "or", "but", "nor", "so", "yet", "plus"}
_MD = {
    "can", "could", "will", "would", "shall", "should", "may", "might",
    "must", "wo", "ca",  # wo/ca are the stems of won't / can't
}
_UH = {"oh", "wow", "hey", "yeah", "yes", "hmm", "ah", "ugh", "hello", "hi", "please"}
_RP = {"up", "down", "out", "away", "back"}
_RB = {
    "not", "never", "also", "very", "really", "quite", "too", "just",
    "still", "even", "often", "sometimes", "usually", "perhaps", "almost",
    "rather", "maybe", "always", "already", "soon", "now", "then", "here",
    "again", "however", "instead", "anyway", "actually", "probably",
    "certainly", "simply", "mostly", "together", "once", "twice", "else",
    "ever", "far", "well",
}
_CD_WORDS = {
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "twenty", "thirty", "forty", "fifty",
    "hundred", "thousand", "million", "billion",
}
# "one" doubles as a pronoun; the number reading wins
_PRP.discard("one")

_GRADED = {
    "more": "JJR", "most": "JJS", "less": "JJR", "least": "JJS",
    "better": "JJR", "best": "JJS", "worse": "JJR", "worst": "JJS",
    "larger": "JJR", "largest": "JJS", "smaller": "JJR", "smallest": "JJS",
    "bigger": "JJR", "biggest": "JJS",
}

_JJ = {
    "good", "bad", "big", "small", "new", "old", "great", "high", "low",
    "long", "short", "happy", "sad", "nice", "fine", "hard", "easy",
    "important", "different", "same", "real", "sure", "right", "wrong",
    "strong", "weak", "early", "late", "young", "free", "full", "open",
    "clear", "dark", "hot", "cold", "warm", "cool", "deep", "rich", "poor",
    "quick", "slow", "wide", "safe", "simple", "complex", "difficult",
    "possible", "impossible", "separate", "mutual", "several", "such",
    "own", "other", "many", "much", "few", "little", "whole", "common",
    "fair", "true", "false", "last", "next", "able", "ready", "huge",
}

# verb stems whose -s / -ing / -ed forms the suffix rules may derive
_VERB_STEMS = {
    "ask", "agree", "answer", "appear", "argue", "balance", "become",
    "believe", "belong", "call", "care", "change", "check", "claim",
    "combine", "compare", "complain", "consider", "continue", "cover",
    "decide", "depend", "describe", "deserve", "differ", "disagree",
    "discuss", "dislike", "enjoy", "expect", "explain", "fail", "feel",
    "fix", "focus", "follow", "happen", "hate", "help", "hope", "ignore",
    "imagine", "include", "integrate", "judge", "jump", "kill", "learn",
    "like", "listen", "live", "look", "love", "manage", "matter", "mention",
    "miss", "move", "need", "note", "notice", "offer", "open", "order",
    "plan", "play", "point", "post", "prefer", "pretend", "prove", "pull",
    "push", "realize", "reach", "reconcile", "remain", "remember", "reply",
    "report", "respect", "remind", "return", "roll", "rule", "save",
    "seem", "share", "show", "sleep", "smell", "sound", "start", "stay",
    "stop", "suggest", "support", "suppose", "talk", "thank", "travel",
    "trust", "try", "turn", "use", "vote", "wait", "walk", "want", "warn",
    "watch", "weigh", "wish", "wonder", "work", "worry",
}

# form -> (tag, lemma); covers auxiliaries and common strong verbs
_IRREGULAR_VERBS = {
    "am": ("VBP", "be"), "is": ("VBZ", "be"), "are": ("VBP", "be"),
    "was": ("VBD", "be"), "were": ("VBD", "be"), "been": ("VBN", "be"),
    "being": ("VBG", "be"), "be": ("VB", "be"),
    "has": ("VBZ", "have"), "have": ("VBP", "have"), "had": ("VBD", "have"),
    "having": ("VBG", "have"),
    "does": ("VBZ", "do"), "do": ("VBP", "do"), "did": ("VBD", "do"),
    "done": ("VBN", "do"), "doing": ("VBG", "do"),
    "goes": ("VBZ", "go"), "go": ("VBP", "go"), "went": ("VBD", "go"),
    "gone": ("VBN", "go"),
    "says": ("VBZ", "say"), "say": ("VBP", "say"), "said": ("VBD", "say"),
    "gets": ("VBZ", "get"), "get": ("VBP", "get"), "got": ("VBD", "get"),
    "gotten": ("VBN", "get"),
    "makes": ("VBZ", "make"), "make": ("VBP", "make"), "made": ("VBD", "make"),
    "knows": ("VBZ", "know"), "know": ("VBP", "know"), "knew": ("VBD", "know"),
    "known": ("VBN", "know"),
    "thinks": ("VBZ", "think"), "think": ("VBP", "think"),
    "thought": ("VBD", "think"),
    "takes": ("VBZ", "take"), "take": ("VBP", "take"), "took": ("VBD", "take"),
    "taken": ("VBN", "take"),
    "sees": ("VBZ", "see"), "see": ("VBP", "see"), "saw": ("VBD", "see"),
    "seen": ("VBN", "see"),
    "comes": ("VBZ", "come"), "come": ("VBP", "come"), "came": ("VBD", "come"),
    "finds": ("VBZ", "find"), "find": ("VBP", "find"), "found": ("VBD", "find"),
    "gives": ("VBZ", "give"), "give": ("VBP", "give"), "gave": ("VBD", "give"),
    "given": ("VBN", "give"),
    "tells": ("VBZ", "tell"), "tell": ("VBP", "tell"), "told": ("VBD", "tell"),
    "leaves": ("VBZ", "leave"), "leave": ("VBP", "leave"),
    "left": ("VBD", "leave"),
    "puts": ("VBZ", "put"), "put": ("VBP", "put"),
    "means": ("VBZ", "mean"), "mean": ("VBP", "mean"),
    "meant": ("VBD", "mean"),
    "keeps": ("VBZ", "keep"), "keep": ("VBP", "keep"), "kept": ("VBD", "keep"),
    "lets": ("VBZ", "let"), "let": ("VBP", "let"),
    "begins": ("VBZ", "begin"), "begin": ("VBP", "begin"),
    "began": ("VBD", "begin"), "begun": ("VBN", "begin"),
    "hears": ("VBZ", "hear"), "hear": ("VBP", "hear"),
    "heard": ("VBD", "hear"),
    "runs": ("VBZ", "run"), "run": ("VBP", "run"), "ran": ("VBD", "run"),
    "holds": ("VBZ", "hold"), "hold": ("VBP", "hold"),
    "held": ("VBD", "hold"),
    "brings": ("VBZ", "bring"), "bring": ("VBP", "bring"),
    "brought": ("VBD", "bring"),
    "writes": ("VBZ", "write"), "write": ("VBP", "write"),
    "wrote": ("VBD", "write"), "written": ("VBN", "write"),
    "sits": ("VBZ", "sit"), "sit": ("VBP", "sit"), "sat": ("VBD", "sit"),
    "stands": ("VBZ", "stand"), "stand": ("VBP", "stand"),
    "stood": ("VBD", "stand"),
    "loses": ("VBZ", "lose"), "lose": ("VBP", "lose"),
    "lost": ("VBD", "lose"),
    "pays": ("VBZ", "pay"), "pay": ("VBP", "pay"), "paid": ("VBD", "pay"),
    "meets": ("VBZ", "meet"), "meet": ("VBP", "meet"), "met": ("VBD", "meet"),
    "reads": ("VBZ", "read"), "read": ("VBP", "read"),
    "eats": ("VBZ", "eat"), "eat": ("VBP", "eat"), "ate": ("VBD", "eat"),
    "eaten": ("VBN", "eat"),
    "slept": ("VBD", "sleep"),
    "buys": ("VBZ", "buy"), "buy": ("VBP", "buy"),
    "bought": ("VBD", "buy"),
    "sends": ("VBZ", "send"), "send": ("VBP", "send"), "sent": ("VBD", "send"),
    "builds": ("VBZ", "build"), "build": ("VBP", "build"),
    "built": ("VBD", "build"),
    "falls": ("VBZ", "fall"), "fall": ("VBP", "fall"),
    "fell": ("VBD", "fall"), "fallen": ("VBN", "fall"),
    "feels": ("VBZ", "feel"), "felt": ("VBD", "feel"),
    "wants": ("VBZ", "want"),
    "needs": ("VBZ", "need"),
    "seems": ("VBZ", "seem"),
}

_IRREGULAR_NOUNS = {
    "men": "man", "women": "woman", "children": "child", "feet": "foot",
    "teeth": "tooth", "mice": "mouse", "geese": "goose", "people": "people",
}

_CLITIC_TAGS = {
    "'re": ("VBP", "be"), "'m": ("VBP", "be"), "'ve": ("VBP", "have"),
    "'ll": ("MD", "will"), "'d": ("MD", "would"), "n't": ("RB", "not"),
}

_NUMBER = re.compile(r"^\d+(?:[.,]\d+)*$")
_NOUN_TAGS = {"NN", "NNS", "NNP", "NNPS"}
_JJ_SUFFIXES = ("ous", "ful", "ive", "able", "ible", "ish", "ical", "less")

_AUX_LEMMAS = {"have", "be"}


def _strip_plural(word: str) -> str:
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith(("ches", "shes", "xes", "ses", "zes", "oes")) and len(word) > 4:
        return word[:-2]
    if word.endswith("s") and not word.endswith(("ss", "us", "is")):
        return word[:-1]
    return word


def _known_stem(stem: str) -> bool:
    return stem in _VERB_STEMS or stem in _IRREGULAR_VERBS


def _verb_stem(base: str, suffix_len: int) -> str:
    """Recover a verb stem from an -ing/-ed form with e-restore/undouble."""
    stem = base[:-suffix_len]
    if _known_stem(stem):
        return stem
    if len(stem) >= 2 and stem[-1] == stem[-2] and _known_stem(stem[:-1]):
        return stem[:-1]
    if _known_stem(stem + "e"):
        return stem + "e"
    return stem


class _QuoteState:
    """Alternates straight double quotes between `` and '' per sentence."""

    def __init__(self):
        self.open = False

    def tag(self) -> str:
        self.open = not self.open
        return "``" if self.open else "''"


def _tag_one(word, lower, prev_tag, prev_lemma, first, quotes):
    """Return (xpos, lemma) for one token given left context."""
    if _NUMBER.match(word):
        return "CD", lower
    if len(word) == 1 and not word.isalnum():
        if word in ('"',) or word in ("“", "”"):
            return quotes.tag(), word
        if word == "`":
            return "``", word
        if word == "'":
            return "''", word
        mapped = _PUNCT_MAP.get(word)
        if mapped is not None:
            return mapped, word
        return "SYM", word

    key = lower.replace("’", "'")
    if key in _CLITIC_TAGS:
        return _CLITIC_TAGS[key]
    if key == "'s":
        # possessive after a noun, otherwise a contracted "is"
        if prev_tag in _NOUN_TAGS:
            return "POS", "'s"
        return "VBZ", "be"

    if lower in _IRREGULAR_VERBS:
        tag, lemma = _IRREGULAR_VERBS[lower]
        # base forms after "to" or a modal are infinitives
        if tag == "VBP" and prev_tag in ("TO", "MD"):
            return "VB", lemma
        if tag == "VBD" and prev_lemma in _AUX_LEMMAS:
            return "VBN", lemma
        return tag, lemma

    if lower == "to":
        return "TO", "to"
    if lower in _CD_WORDS:
        return "CD", lower
    if lower in _GRADED:
        return _GRADED[lower], lower
    if lower in _DT:
        return "DT", lower
    if lower in _PRP_DOLLAR:
        return "PRP$", lower
    if lower in _PRP:
        return "PRP", lower
    if lower in _WP:
        return "WP", lower
    if lower in _WP_DOLLAR:
        return "WP$", lower
    if lower in _WDT:
        return "WDT", lower
    if lower in _WRB:
        return "WRB", lower
    if lower in _EX:
        return "EX", lower
    if lower in _MD:
        return "MD", lower
    if lower in _CC:
        return "CC", lower
    if lower in _IN:
        return "IN", lower
    if lower in _UH:
        return "UH", lower
    if lower in _RP:
        return "RP", lower
    if lower in _RB:
        return "RB", lower
    if lower in _JJ:
        return "JJ", lower
    if lower in _IRREGULAR_NOUNS:
        return "NNS", _IRREGULAR_NOUNS[lower]

    if lower in _VERB_STEMS:
        if prev_tag in ("TO", "MD"):
            return "VB", lower
        return "VBP", lower

    if lower.endswith("ing") and len(lower) > 4:
        return "VBG", _verb_stem(lower, 3)
    if lower.endswith("ied") and len(lower) > 4:
        return "VBD", lower[:-3] + "y"
    if lower.endswith("ed") and len(lower) > 3:
        tag = "VBN" if prev_lemma in _AUX_LEMMAS or prev_tag == "VBZ" else "VBD"
        return tag, _verb_stem(lower, 2)
    if lower.endswith("ly") and len(lower) > 3:
        return "RB", lower
    if lower.endswith("est") and len(lower) > 4 and lower[:-3] in _JJ:
        return "JJS", lower[:-3]
    if lower.endswith("er") and len(lower) > 3 and lower[:-2] in _JJ:
        return "JJR", lower[:-2]
    if lower.endswith(_JJ_SUFFIXES):
        return "JJ", lower

    if lower.endswith("s") and not lower.endswith(("ss", "us", "is")):
        stem = _strip_plural(lower)
        if stem in _VERB_STEMS:
            return "VBZ", stem
        if word[0].isupper() and not first:
            return "NNPS", stem
        return "NNS", stem

    if word[0].isupper() and not first:
        return "NNP", lower
    return "NN", lower


def tag_sentence(tokens: list[str]) -> list[tuple[str, str, str]]:
    """Tag one tokenized sentence; returns (surface, lemma, xpos) triples."""
    out: list[tuple[str, str, str]] = []
    quotes = _QuoteState()
    prev_tag, prev_lemma = "", ""
    for i, word in enumerate(tokens):
        xpos, lemma = _tag_one(
            word, word.lower(), prev_tag, prev_lemma, i == 0, quotes
        )
        out.append((word, lemma, xpos))
        prev_tag, prev_lemma = xpos, lemma
    return out
