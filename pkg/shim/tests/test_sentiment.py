import math

import numpy as np

from icshim.segment import tokenize
from icshim.sentiment import compound_score, load_valences
from icshim.tagger import tag_sentence


def score(*sentences, valences=None):
    return compound_score([tag_sentence(tokenize(s)) for s in sentences], valences)


def expected(total):
    return total / math.sqrt(total * total + 15.0)


def test_neutral_text_scores_zero():
    assert score("the cat sleeps") == 0.0
    assert compound_score([]) == 0.0


def test_positive_and_negative_direction():
    assert score("I love this great movie") > 0.5
    assert score("I hate this terrible movie") < -0.5


def test_hand_computed_compound():
    table = load_valences()
    want = expected(table["love"])
    assert abs(score("I love it") - want) < 1e-12


def test_negation_flips_and_damps():
    table = load_valences()
    want = expected(table["love"] * -0.75)
    assert abs(score("I do not love it") - want) < 1e-12
    assert abs(score("I don't love it") - want) < 1e-12


def test_negation_window_is_three_tokens():
    table = load_valences()
    # negator four tokens before the hit is out of the window
    flipped = score("not so very good")
    assert abs(flipped - expected(table["good"] * -0.75)) < 1e-12
    unflipped = score("not so very very good")
    assert abs(unflipped - expected(table["good"])) < 1e-12


def test_negation_does_not_cross_sentences():
    table = load_valences()
    out = score("I do not agree.", "Good point though.")
    want = expected(table["agree"] * -0.75 + table["good"])
    assert abs(out - want) < 1e-12


def test_lemma_fallback():
    # "hating" is not in the table; its lemma "hate" is
    assert score("hating this") < 0.0


def test_bounds_on_random_word_soup():
    table = load_valences()
    words = sorted(table)
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(1, 60))
        text = " ".join(words[int(k)] for k in rng.integers(0, len(words), size=n))
        value = score(text)
        assert -1.0 <= value <= 1.0


def test_custom_lexicon_swap(tmp_path):
    path = tmp_path / "tiny.tsv"
    path.write_text("# comment\nzorp\t4.0\n")
    table = load_valences(str(path))
    assert table == {"zorp": 4.0}
    assert score("zorp zorp", valences=table) == expected(8.0)
