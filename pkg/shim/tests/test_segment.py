from icshim.segment import split_sentences, tokenize


def test_split_on_terminal_punctuation_before_capital():
    out = split_sentences("It works. Really well! Does it? Yes.")
    assert out == ["It works.", "Really well!", "Does it?", "Yes."]


def test_no_split_without_following_capital_or_digit():
    # decimal points and lowercase continuations do not split
    assert split_sentences("version 3.5 shipped. done") == ["version 3.5 shipped. done"]


def test_line_breaks_are_boundaries():
    assert split_sentences("first line\nsecond line") == ["first line", "second line"]


def test_split_before_quote_and_digit():
    out = split_sentences('He left. "Fine," she said. 42 people stayed.')
    assert out == ['He left.', '"Fine," she said.', "42 people stayed."]


def test_empty_text():
    assert split_sentences("") == []
    assert split_sentences("   \n  ") == []


def test_tokenize_basic_words_and_punct():
    assert tokenize("the cat sleeps.") == ["the", "cat", "sleeps", "."]


def test_tokenize_contractions_ptb_style():
    assert tokenize("don't") == ["do", "n't"]
    assert tokenize("won't stop") == ["wo", "n't", "stop"]
    assert tokenize("the cat's toy") == ["the", "cat", "'s", "toy"]
    assert tokenize("we're I'm they've he'll she'd") == [
        "we", "'re", "I", "'m", "they", "'ve", "he", "'ll", "she", "'d",
    ]


def test_tokenize_unicode_apostrophe():
    assert tokenize("don’t") == ["do", "n’t"]


def test_tokenize_numbers():
    assert tokenize("3.5 stars, 1,000 votes") == ["3.5", "stars", ",", "1,000", "votes"]


def test_tokenize_symbol_runs_split_per_char():
    assert tokenize("wait...") == ["wait", ".", ".", "."]
    assert tokenize("a---b") == ["a", "-", "-", "-", "b"]


def test_tokens_never_contain_whitespace():
    text = "Mixed:  tabs\tand   spaces, don't break 3.5 things!"
    for sentence in split_sentences(text):
        for token in tokenize(sentence):
            assert token
            assert not any(ch.isspace() for ch in token)
