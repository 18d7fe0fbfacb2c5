import pytest
from hypothesis import given, settings

from conftest import ARABIC_WORDS, transcripts
from spner.errors import EmptyVocabulary
from spner.errorsim import ErrorModel, inject, simulate_records
from spner.corpus import UtteranceRecord
from spner.markup import TaggedToken, TaggedTranscript, parse_inline
from spner.metrics import score_utterance
from spner.schema import BioTag

VOCAB = tuple(f"w{i}" for i in range(200))


@settings(max_examples=100)
@given(transcripts(valid=False))
def test_zero_rates_identity(t):
    assert inject(t, ErrorModel()) == t
    assert inject(t, ErrorModel(vocabulary=VOCAB, seed=5)) == t


def test_same_seed_same_output():
    t = parse_inline(" ".join(ARABIC_WORDS * 5))
    model = ErrorModel(0.2, 0.1, 0.1, 0.0, VOCAB, seed=42)
    assert inject(t, model, "u1") == inject(t, model, "u1")
    assert inject(t, model, "u1") != inject(t, ErrorModel(0.2, 0.1, 0.1, 0.0, VOCAB, seed=43), "u1")
    assert inject(t, model, "u1") != inject(t, model, "u2")


def test_order_independent_streams():
    records = [UtteranceRecord(f"u{i}", " ".join(ARABIC_WORDS)) for i in range(10)]
    model = ErrorModel(0.2, 0.1, 0.1, 0.1, VOCAB, seed=1)
    forward = {r.id: r.text for r in simulate_records(records, model)}
    backward = {r.id: r.text for r in simulate_records(records[::-1], model)}
    assert forward == backward


def test_vocabulary_required():
    with pytest.raises(EmptyVocabulary):
        ErrorModel(p_sub=0.1)
    with pytest.raises(EmptyVocabulary):
        ErrorModel(p_ins=0.1)
    ErrorModel(p_del=0.3)
    with pytest.raises(EmptyVocabulary):
        inject(parse_inline("w0"), ErrorModel(p_sub=1.0, vocabulary=("w0",)))


@pytest.mark.parametrize("kwargs", [dict(p_sub=1.5), dict(p_del=-0.1), dict(p_sub=0.6, p_del=0.6), dict(seed=-1)])
def test_bad_models(kwargs):
    with pytest.raises(ValueError):
        ErrorModel(vocabulary=VOCAB, **kwargs)


def test_substitution_never_keeps_word():
    t = parse_inline(" ".join(VOCAB[:50]))
    out = inject(t, ErrorModel(p_sub=1.0, vocabulary=VOCAB, seed=3))
    assert all(a.word != b.word for a, b in zip(t.tokens, out.tokens))
    assert len(out) == len(t)


def test_full_deletion_and_insertion():
    t = parse_inline("<B-PERS> a b c")
    assert len(inject(t, ErrorModel(p_del=1.0))) == 0
    out = inject(t, ErrorModel(p_ins=1.0, vocabulary=VOCAB))
    assert len(out) == 6
    assert [tok.tag for tok in out.tokens[1::2]] == [None] * 3
    assert out.words[0::2] == t.words


def test_tag_noise_only_touches_tags():
    t = parse_inline(" ".join(f"<B-PERS> {w}" for w in VOCAB[:100]))
    out = inject(t, ErrorModel(tag_noise=1.0, seed=9))
    assert out.words == t.words
    assert all(tok.tag != BioTag("B", "PERS") for tok in out.tokens)
    kinds = {tok.tag is None for tok in out.tokens}
    assert kinds == {True, False}


def test_substitution_inside_span_hits_cver_not_coer():
    ref = parse_inline("ذهب <B-ORG> بنك <I-ORG> مصر اليوم")
    tokens = list(ref.tokens)
    tokens[2] = TaggedToken("مصري", tokens[2].tag)
    hyp = TaggedTranscript(tuple(tokens), ref.schema)
    sc = score_utterance(ref, hyp)
    assert sc.coer_counts.errors == 0
    assert sc.cver_counts.errors > 0


def test_wer_converges_with_corpus_size():
    from spner.metrics import score_corpus

    model = ErrorModel(0.1, 0.05, 0.05, 0.0, VOCAB, seed=2024)
    rates = []
    for n_utts in (50, 2000):
        refs = [parse_inline(" ".join(VOCAB[(i * 7 + k) % 200] for k in range(10))) for i in range(n_utts)]
        pairs = [(str(i), r, inject(r, model, str(i))) for i, r in enumerate(refs)]
        rates.append(score_corpus(pairs, None).wer)
    # 20000 words: binomial sd of the error count is < 0.3 points
    assert abs(rates[1] - 0.20) < 0.01
