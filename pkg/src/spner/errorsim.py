"""Seeded injection of ASR-style errors into tagged transcripts.

Random streams come from numpy's PCG64. Each utterance gets its own stream,
derived from ``(seed, utterance id)``, so results do not depend on the order
or grouping in which utterances are processed.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .corpus import UtteranceRecord, parse_record
from .errors import EmptyVocabulary
from .markup import TaggedToken, TaggedTranscript, render_inline
from .schema import BioTag, EntitySchema


@dataclass(frozen=True)
class ErrorModel:
    p_sub: float = 0.0
    p_del: float = 0.0
    p_ins: float = 0.0
    tag_noise: float = 0.0
    vocabulary: tuple[str, ...] = ()
    seed: int = 0

    def __post_init__(self):
        for name in ("p_sub", "p_del", "p_ins", "tag_noise"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")
        if self.p_sub + self.p_del > 1.0:
            raise ValueError("p_sub + p_del must not exceed 1")
        vocab = tuple(dict.fromkeys(self.vocabulary))
        if (self.p_sub > 0 or self.p_ins > 0) and not vocab:
            raise EmptyVocabulary("substitution/insertion rates need a non-empty vocabulary")
        object.__setattr__(self, "vocabulary", vocab)
        object.__setattr__(self, "_positions", {w: i for i, w in enumerate(vocab)})
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def is_identity(self) -> bool:
        return self.p_sub == self.p_del == self.p_ins == self.tag_noise == 0.0


def utterance_rng(seed: int, utt_id: str = "") -> np.random.Generator:
    key = int.from_bytes(hashlib.sha256(utt_id.encode("utf-8")).digest()[:8], "little")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(key,))))


def _other_word(rng: np.random.Generator, model: ErrorModel, word: str) -> str:
    vocab = model.vocabulary
    idx = model._positions.get(word)
    if idx is None:
        return vocab[int(rng.integers(len(vocab)))]
    if len(vocab) < 2:
        raise EmptyVocabulary(f"vocabulary has no substitute for {word!r}")
    # uniform over the vocabulary minus the original word
    k = int(rng.integers(len(vocab) - 1))
    return vocab[k + 1 if k >= idx else k]


def _noisy_tag(rng: np.random.Generator, tag: BioTag, schema: EntitySchema) -> BioTag | None:
    others = [t for t in schema.types if t != tag.entity]
    if not others or rng.random() < 0.5:
        return None
    return BioTag(tag.position, others[int(rng.integers(len(others)))])


def inject(ref: TaggedTranscript, model: ErrorModel, utt_id: str = "") -> TaggedTranscript:
    """Corrupt ``ref`` word by word.

    For each word: substitute with probability ``p_sub`` (the tag stays),
    delete with ``p_del``, otherwise keep. A surviving tag is dropped or
    re-typed with probability ``tag_noise``. After every reference position an
    untagged vocabulary word is inserted with probability ``p_ins``.
    """
    if model.is_identity:
        return ref
    rng = utterance_rng(model.seed, utt_id)
    vocab = model.vocabulary
    out: list[TaggedToken] = []
    for word, tag in ref.tokens:
        u = rng.random()
        if u < model.p_sub:
            word = _other_word(rng, model, word)
        if u < model.p_sub or u >= model.p_sub + model.p_del:
            if tag is not None and model.tag_noise and rng.random() < model.tag_noise:
                tag = _noisy_tag(rng, tag, ref.schema)
            out.append(TaggedToken(word, tag))
        if model.p_ins and rng.random() < model.p_ins:
            out.append(TaggedToken(vocab[int(rng.integers(len(vocab)))]))
    return TaggedTranscript(tuple(out), ref.schema)


def corpus_vocabulary(records: Iterable[UtteranceRecord], schema: EntitySchema | None = None) -> list[str]:
    words: set[str] = set()
    for rec in records:
        words.update(parse_record(rec, schema).words)
    return sorted(words)


def simulate_records(
    records: Iterable[UtteranceRecord], model: ErrorModel, schema: EntitySchema | None = None
) -> Iterator[UtteranceRecord]:
    for rec in records:
        hyp = inject(parse_record(rec, schema), model, rec.id)
        yield UtteranceRecord(rec.id, render_inline(hyp), rec.audio, rec.duration)
