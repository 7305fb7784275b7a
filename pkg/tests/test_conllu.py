"""Ingestion: parsing, validation with line numbers, serialization."""

import io

import pytest

from icscore.conllu import (
    ParsedDocument,
    iter_parse_conllu,
    parse_conllu,
    serialize_conllu,
    serialize_document,
    validate_band,
)
from icscore.errors import (
    BadLabelError,
    CyclicTreeError,
    DanglingHeadError,
    MalformedLineError,
)

from conftest import CAT_SLEEPS_CONLLU


def test_cat_sleeps_parses():
    docs = parse_conllu(CAT_SLEEPS_CONLLU)
    assert len(docs) == 1
    doc = docs[0]
    assert doc.doc_id == "cat1"
    assert doc.label is None
    assert doc.word_count == 3
    sent = doc.sentences[0]
    assert [t.surface for t in sent.tokens] == ["the", "cat", "sleeps"]
    assert [t.lemma for t in sent.tokens] == ["the", "cat", "sleep"]
    assert [t.xpos for t in sent.tokens] == ["DT", "NN", "VBZ"]
    assert [t.head for t in sent.tokens] == [2, 3, 0]
    assert [t.deprel for t in sent.tokens] == ["det", "nsubj", "root"]
    assert sent.root_index == 3


def test_label_and_meta_comments():
    text = (
        "# newdoc id = d1\n"
        "# ic = 4\n"
        "# meta.community = science\n"
        "# meta.kind = POST\n"
        "1\thi\thi\t_\tUH\t_\t0\troot\t_\t_\n"
    )
    doc = parse_conllu(text)[0]
    assert doc.label == 4
    assert doc.meta == {"community": "science", "kind": "POST"}


def test_multiple_docs_and_sentences():
    text = (
        "# newdoc id = a\n"
        "1\tx\tx\t_\tNN\t_\t0\troot\t_\t_\n"
        "\n"
        "1\ty\ty\t_\tNN\t_\t0\troot\t_\t_\n"
        "\n"
        "# newdoc id = b\n"
        "1\tz\tz\t_\tNN\t_\t0\troot\t_\t_\n"
    )
    docs = parse_conllu(text)
    assert [d.doc_id for d in docs] == ["a", "b"]
    assert len(docs[0].sentences) == 2
    assert len(docs[1].sentences) == 1


def test_empty_document_block():
    docs = parse_conllu("# newdoc id = empty\n\n# newdoc id = next\n")
    assert [d.doc_id for d in docs] == ["empty", "next"]
    assert docs[0].sentences == []
    assert docs[0].word_count == 0


def test_wrong_column_count_reports_line():
    text = "# newdoc id = d\n1\tx\tx\t_\tNN\t_\t0\troot\t_\n"
    with pytest.raises(MalformedLineError) as err:
        parse_conllu(text)
    assert err.value.line == 2
    assert "10" in str(err.value)


def test_non_integer_id_and_head():
    base = "# newdoc id = d\n"
    with pytest.raises(MalformedLineError):
        parse_conllu(base + "one\tx\tx\t_\tNN\t_\t0\troot\t_\t_\n")
    with pytest.raises(MalformedLineError):
        parse_conllu(base + "1\tx\tx\t_\tNN\t_\tzero\troot\t_\t_\n")


def test_token_id_out_of_sequence():
    text = "# newdoc id = d\n2\tx\tx\t_\tNN\t_\t0\troot\t_\t_\n"
    with pytest.raises(MalformedLineError):
        parse_conllu(text)


def test_token_before_newdoc_rejected():
    with pytest.raises(MalformedLineError) as err:
        parse_conllu("1\tx\tx\t_\tNN\t_\t0\troot\t_\t_\n")
    assert err.value.line == 1


def test_dangling_head_reports_line():
    text = (
        "# newdoc id = d\n"
        "1\tx\tx\t_\tNN\t_\t9\tdep\t_\t_\n"
        "2\ty\ty\t_\tNN\t_\t0\troot\t_\t_\n"
    )
    with pytest.raises(DanglingHeadError) as err:
        parse_conllu(text)
    assert err.value.line == 2


def test_self_loop_is_cyclic():
    text = "# newdoc id = d\n1\tx\tx\t_\tNN\t_\t1\tdep\t_\t_\n"
    with pytest.raises(CyclicTreeError):
        parse_conllu(text)


def test_two_node_cycle():
    text = (
        "# newdoc id = d\n"
        "1\tx\tx\t_\tNN\t_\t2\tdep\t_\t_\n"
        "2\ty\ty\t_\tNN\t_\t1\tdep\t_\t_\n"
        "3\tz\tz\t_\tNN\t_\t0\troot\t_\t_\n"
    )
    with pytest.raises(CyclicTreeError):
        parse_conllu(text)


def test_zero_roots_rejected():
    text = (
        "# newdoc id = d\n"
        "1\tx\tx\t_\tNN\t_\t2\tdep\t_\t_\n"
        "2\ty\ty\t_\tNN\t_\t1\tdep\t_\t_\n"
    )
    with pytest.raises(CyclicTreeError):
        parse_conllu(text)


def test_multiple_roots_rejected():
    text = (
        "# newdoc id = d\n"
        "1\tx\tx\t_\tNN\t_\t0\troot\t_\t_\n"
        "2\ty\ty\t_\tNN\t_\t0\troot\t_\t_\n"
    )
    with pytest.raises(CyclicTreeError) as err:
        parse_conllu(text)
    assert "2 root" in str(err.value)


def test_bad_label_values():
    for bad in ("9", "0", "x", "3.5"):
        text = f"# newdoc id = d\n# ic = {bad}\n"
        with pytest.raises(BadLabelError) as err:
            parse_conllu(text)
        assert err.value.line == 2
    for ok in range(1, 8):
        assert validate_band(ok) == ok


def test_multiword_range_lines_skipped():
    text = (
        "# newdoc id = d\n"
        "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "1\tdo\tdo\t_\tVBP\t_\t0\troot\t_\t_\n"
        "2\tn't\tnot\t_\tRB\t_\t1\tadvmod\t_\t_\n"
    )
    doc = parse_conllu(text)[0]
    assert [t.surface for t in doc.sentences[0].tokens] == ["do", "n't"]


def test_unknown_xpos_logged(caplog):
    text = "# newdoc id = d\n1\tx\tx\t_\tZZQ\t_\t0\troot\t_\t_\n"
    with caplog.at_level("WARNING", logger="icscore.conllu"):
        doc = parse_conllu(text)[0]
    assert doc.sentences[0].tokens[0].xpos == "ZZQ"
    assert any("ZZQ" in rec.message % rec.args for rec in caplog.records)


def test_round_trip_structural_equality():
    text = (
        "# newdoc id = d1\n"
        "# ic = 2\n"
        "# meta.kind = COMMENT\n"
        "# meta.community = books\n"
        "1\tThe\tthe\tDET\tDT\tDefinite=Def\t2\tdet\t_\tSpaceAfter=No\n"
        "2\tcat\tcat\tNOUN\tNN\t_\t3\tnsubj\t_\t_\n"
        "3\tsleeps\tsleep\tVERB\tVBZ\t_\t0\troot\t_\t_\n"
        "\n"
        "1\tIt\tit\t_\tPRP\t_\t2\tnsubj\t_\t_\n"
        "2\tpurrs\tpurr\t_\tVBZ\t_\t0\troot\t_\t_\n"
        "\n"
        "# newdoc id = d2\n"
        "1\tHi\thi\t_\tUH\t_\t0\troot\t_\t_\n"
    )
    docs = parse_conllu(text)
    rendered = serialize_conllu(docs)
    reparsed = parse_conllu(rendered)
    assert reparsed == docs
    # A second cycle is a fixed point byte-wise.
    assert serialize_conllu(reparsed) == rendered


def test_passthrough_columns_preserved():
    text = (
        "# newdoc id = d\n"
        "1\tcat\tcat\tNOUN\tNN\tNumber=Sing\t0\troot\t0:root\tSpaceAfter=No\n"
    )
    doc = parse_conllu(text)[0]
    rendered = serialize_document(doc)
    assert "NOUN\tNN\tNumber=Sing\t0\troot\t0:root\tSpaceAfter=No" in rendered


def test_streaming_matches_batch():
    text = CAT_SLEEPS_CONLLU + "\n# newdoc id = two\n# ic = 3\n"
    streamed = list(iter_parse_conllu(io.StringIO(text)))
    assert streamed == parse_conllu(text)


def test_meta_serialization_sorted_and_stable():
    doc = ParsedDocument(doc_id="d", meta={"zeta": "1", "alpha": "2"})
    rendered = serialize_document(doc)
    assert rendered.index("meta.alpha") < rendered.index("meta.zeta")


def test_file_level_comments_ignored():
    text = "# generator = foo\n# newdoc id = d\n1\tx\tx\t_\tNN\t_\t0\troot\t_\t_\n"
    docs = parse_conllu(text)
    assert len(docs) == 1
