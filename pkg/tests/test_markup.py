import pytest
from hypothesis import given, settings

from conftest import transcripts
from spner.errors import AdjacentTags, BadColumnLine, BrokenBio, DanglingTag, UnknownTag
from spner.markup import (
    LENIENT,
    TaggedToken,
    TaggedTranscript,
    check_inline,
    extract_concept_values,
    extract_concepts,
    extract_spans,
    from_columns,
    has_entities,
    is_bio_valid,
    normalize_transcript,
    parse_inline,
    read_column_document,
    render_inline,
    strip_tags,
    to_columns,
    write_column_document,
)
from spner.schema import BioTag, default_schema

B_PERS, I_PERS = BioTag("B", "PERS"), BioTag("I", "PERS")
B_ORG, I_ORG = BioTag("B", "ORG"), BioTag("I", "ORG")
B_DATE = BioTag("B", "DATE")


def tt(*tokens):
    return TaggedTranscript(tuple(TaggedToken(*t) for t in tokens))


def test_parse_basic():
    t = parse_inline("<B-PERS> محمد ذهب", default_schema())
    assert t.tokens == (("محمد", B_PERS), ("ذهب", None))


def test_parse_multiword_entity():
    t = parse_inline("<B-ORG> بنك <I-ORG> مصر يعمل")
    assert t.tokens == (("بنك", B_ORG), ("مصر", I_ORG), ("يعمل", None))


def test_unknown_tag_fatal_in_both_modes():
    with pytest.raises(UnknownTag):
        parse_inline("<B-FOO> x")
    with pytest.raises(UnknownTag):
        parse_inline("<B-FOO> x", mode=LENIENT)


def test_broken_bio():
    with pytest.raises(BrokenBio):
        parse_inline("<I-PERS> محمد")
    with pytest.raises(BrokenBio):
        parse_inline("<B-ORG> بنك <I-PERS> مصر")
    with pytest.raises(BrokenBio):
        parse_inline("<B-PERS> علي ذهب <I-PERS> محمد")
    issues = []
    t = parse_inline("<I-PERS> محمد", mode=LENIENT, issues=issues)
    assert t.tokens == (("محمد", I_PERS),)
    assert [i.kind for i in issues] == ["BrokenBio"]


def test_dangling_tag():
    with pytest.raises(DanglingTag):
        parse_inline("محمد <B-PERS>")
    issues = []
    t = parse_inline("محمد <B-PERS>", mode=LENIENT, issues=issues)
    assert t.tokens == (("محمد", None),)
    assert issues[0].kind == "DanglingTag"


def test_adjacent_tags_last_wins():
    with pytest.raises(AdjacentTags):
        parse_inline("<B-ORG> <B-PERS> محمد")
    issues = []
    t = parse_inline("<B-ORG> <B-PERS> محمد", mode=LENIENT, issues=issues)
    assert t.tokens == (("محمد", B_PERS),)
    assert issues[0].kind == "AdjacentTags"


def test_check_inline_collects_all():
    kinds = [i.kind for i in check_inline("<I-PERS> a <B-ORG> <B-DATE> b c <B-GPE>")]
    assert kinds == ["BrokenBio", "AdjacentTags", "DanglingTag"]
    assert check_inline("<B-PERS> a <I-PERS> b") == []


def test_render():
    assert render_inline(tt(("محمد", B_PERS))) == "<B-PERS> محمد"
    assert render_inline(tt()) == ""


def test_strip_and_extract():
    t = tt(("محمد", B_PERS), ("ذهب", None), ("امس", B_DATE))
    assert strip_tags(t) == ["محمد", "ذهب", "امس"]
    assert extract_concepts(t) == [B_PERS, B_DATE]
    assert extract_concept_values(t) == [(B_PERS, "محمد"), (B_DATE, "امس")]
    assert strip_tags(tt()) == []
    assert extract_concepts(tt(("a", None))) == []
    assert extract_concept_values(tt(("a", None))) == []
    assert extract_concepts(tt(("a", B_ORG), ("b", I_ORG))) == [B_ORG, I_ORG]
    assert extract_concept_values(tt(("بنك", B_ORG), ("مصر", I_ORG))) == [(B_ORG, "بنك"), (I_ORG, "مصر")]


def test_spans():
    t = tt(("بنك", B_ORG), ("مصر", I_ORG), ("x", None), ("علي", I_PERS), ("y", B_PERS), ("z", B_PERS))
    assert extract_spans(t) == [("ORG", "بنك مصر"), ("PERS", "علي"), ("PERS", "y"), ("PERS", "z")]


def test_columns():
    assert to_columns(tt(("محمد", B_PERS))) == "محمد\tB-PERS\n"
    assert from_columns("x\tO\n").tokens == (("x", None),)
    with pytest.raises(BadColumnLine):
        from_columns("x\tB-PERS\tjunk")
    with pytest.raises(BadColumnLine):
        from_columns("x\n")
    with pytest.raises(BadColumnLine):
        from_columns("x\tO\n\ny\tO\n")
    with pytest.raises(UnknownTag):
        from_columns("x\tB-FOO\n")
    assert from_columns("") == tt()


def test_column_document_round_trip():
    items = [("u1", tt(("بنك", B_ORG), ("مصر", I_ORG))), ("u2", tt()), ("u3", tt(("a", None)))]
    doc = "".join(write_column_document(items))
    assert list(read_column_document(doc.splitlines(keepends=True))) == items


def test_normalize_transcript_splits_and_drops():
    t = tt(("عبد-الله", B_PERS), (".", None), ("أحمد", None), ("؟", B_DATE))
    out = normalize_transcript(t)
    assert out.tokens == (("عبد", B_PERS), ("الله", I_PERS), ("احمد", None))


@settings(max_examples=200)
@given(transcripts())
def test_inline_round_trip(t):
    assert parse_inline(render_inline(t), t.schema, LENIENT) == t
    assert parse_inline(render_inline(t), t.schema) == t


@settings(max_examples=200)
@given(transcripts(valid=False))
def test_lenient_round_trip_any(t):
    assert parse_inline(render_inline(t), t.schema, LENIENT) == t


@settings(max_examples=200)
@given(transcripts(valid=False))
def test_columns_round_trip(t):
    assert from_columns(to_columns(t), t.schema) == t


@settings(max_examples=200)
@given(transcripts(valid=False))
def test_projection_and_length(t):
    assert [tag for tag, _ in extract_concept_values(t)] == extract_concepts(t)
    assert len(strip_tags(t)) == len(t.tokens)


@settings(max_examples=200)
@given(transcripts())
def test_generated_transcripts_are_valid(t):
    assert is_bio_valid(t)


@settings(max_examples=200)
@given(transcripts(valid=False))
def test_has_entities_invariant_under_normalization(t):
    assert has_entities(normalize_transcript(t)) == has_entities(t)
