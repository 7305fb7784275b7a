"""Markdown and HTML-entity stripping for raw social-media text.

The exact rule set lives in the package README ("Markup stripping rules");
keep the two in sync. Rules run in the order listed there: entity
unescaping first, then block-level removals, then inline unwrapping, then
whitespace normalization. Output is plain text whose line breaks are
sentence boundaries for the segmenter.
"""

import html
import re

_FENCED_CODE = re.compile(r"```.*?(?:```|\Z)", re.DOTALL)
_INLINE_CODE = re.compile(r"`([^`\n]*)`")
_QUOTE_LINE = re.compile(r"^[ \t]*>.*$", re.MULTILINE)
_LINK = re.compile(r"\[([^\]\n]*)\]\([^)\n]*\)")
_URL = re.compile(r"(?:https?://|www\.)\S+")
_HEADER_MARK = re.compile(r"^[ \t]*#{1,6}[ \t]+", re.MULTILINE)
_EMPHASIS = re.compile(r"(\*\*\*|___|\*\*|__|~~|\*|_)(\S(?:[^\n]*?\S)?)\1")
_DIVIDER_LINE = re.compile(r"^[ \t]*[-=*_|:+\s]+$", re.MULTILINE)
_TABLE_PIPE = re.compile(r"\|")
_CARET = re.compile(r"\^+")


def strip_markup(text: str) -> str:
    """Reduce Reddit-flavored markdown to plain sentence text."""
    out = html.unescape(html.unescape(text))
    out = _FENCED_CODE.sub(" ", out)
    out = _QUOTE_LINE.sub(" ", out)
    out = _INLINE_CODE.sub(r"\1", out)
    out = _LINK.sub(r"\1", out)
    out = _URL.sub(" ", out)
    out = _HEADER_MARK.sub("", out)
    # nested emphasis unwraps one layer per pass; depth is tiny in practice
    for _ in range(4):
        unwrapped = _EMPHASIS.sub(r"\2", out)
        if unwrapped == out:
            break
        out = unwrapped
    out = _CARET.sub(" ", out)
    out = _DIVIDER_LINE.sub(" ", out)
    out = _TABLE_PIPE.sub(" ", out)

    lines = [re.sub(r"[ \t]+", " ", ln).strip() for ln in out.split("\n")]
    return "\n".join(ln for ln in lines if ln)
