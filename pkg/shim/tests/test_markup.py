"""One test per documented stripping rule, plus composition."""

from icshim.markup import strip_markup


def test_entities_unescaped_twice():
    assert strip_markup("a &amp; b") == "a & b"
    # double-encoded survivors from API round trips
    assert strip_markup("x &amp;gt; y") == "x > y"


def test_fenced_code_removed():
    assert strip_markup("before ```int x = 1;``` after") == "before after"
    # unterminated fence swallows the rest
    assert strip_markup("keep\n```\nlost forever") == "keep"


def test_quote_lines_removed():
    out = strip_markup("> their words\nmy words\n> more theirs")
    assert out == "my words"


def test_inline_code_keeps_inner_text():
    assert strip_markup("run `pytest` now") == "run pytest now"


def test_links_keep_text_and_bare_urls_vanish():
    assert strip_markup("see [the docs](http://a.b/c) please") == "see the docs please"
    assert strip_markup("go to https://a.b/c?d=1 now") == "go to now"
    assert strip_markup("at www.site.test stuff") == "at stuff"


def test_header_marks_stripped():
    assert strip_markup("## Title here\nbody") == "Title here\nbody"


def test_emphasis_unwrapped_nested():
    assert strip_markup("this is *important*") == "this is important"
    assert strip_markup("very **_deeply_ nested** markup") == "very deeply nested markup"
    assert strip_markup("~~struck~~ text") == "struck text"


def test_carets_dropped():
    assert strip_markup("wow^really^big") == "wow really big"


def test_divider_lines_and_table_pipes():
    out = strip_markup("a | b | c\n--- | --- | ---\nd | e | f")
    assert out == "a b c\nd e f"


def test_whitespace_collapsed_blank_lines_dropped():
    assert strip_markup("a   b\t c\n\n\nnext") == "a b c\nnext"


def test_usernames_kept_verbatim():
    assert strip_markup("ask u/someone in r/place") == "ask u/someone in r/place"


def test_empty_and_markup_only():
    assert strip_markup("") == ""
    assert strip_markup("> quoted\n```code```\n---") == ""
