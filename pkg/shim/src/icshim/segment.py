"""Sentence splitting and tokenization.

Sentences break on terminal punctuation followed by whitespace and an
upper-case letter, digit, or opening quote/bracket, and on every line
break (the markup stripper already collapsed soft wraps). Tokens follow
Penn conventions for contractions: "don't" splits into "do" + "n't",
"cat's" into "cat" + "'s".
"""

import re

_SENT_SPLIT = re.compile(r"(?<=[.!?…])\s+(?=[\"'(\[“]?[A-Z0-9])")
_TOKEN = re.compile(
    r"[A-Za-z]+(?:['’][A-Za-z]+)*"  # words, apostrophes kept inside
    r"|\d+(?:[.,]\d+)*"                  # integers and decimal/grouped numbers
    r"|[^\sA-Za-z0-9]"                   # any other character, one per token
)
# PTB clitic split; n't outranks the 't ending
_NT = re.compile(r"^(.+?)(n['’]t)$", re.IGNORECASE)
_CLITIC = re.compile(r"^(.+?)(['’](?:s|re|ve|ll|d|m))$", re.IGNORECASE)


def split_sentences(text: str) -> list[str]:
    sentences = []
    for line in text.split("\n"):
        for part in _SENT_SPLIT.split(line):
            part = part.strip()
            if part:
                sentences.append(part)
    return sentences


def _split_clitics(word: str) -> list[str]:
    m = _NT.match(word)
    if m and len(m.group(1)) >= 2:
        return [m.group(1), m.group(2)]
    m = _CLITIC.match(word)
    if m:
        return [m.group(1), m.group(2)]
    return [word]


def tokenize(sentence: str) -> list[str]:
    tokens = []
    for match in _TOKEN.finditer(sentence):
        word = match.group(0)
        if "'" in word or "’" in word:
            tokens.extend(_split_clitics(word))
        else:
            tokens.append(word)
    return tokens
