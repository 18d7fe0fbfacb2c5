"""WER, CoER and CVER scoring with per-tag error attribution.

All three metrics are ``(S + D + I) / N`` over a different unit sequence:

* WER  - words, tags removed;
* CoER - the BIO tags of tagged words, in order, ignoring the words;
* CVER - ``(tag, word)`` pairs (or ``(type, span text)`` with ``cver_unit="span"``).

Corpus figures are micro-aggregated: counts are summed over utterances and
divided once.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Iterable, Iterator

from .align import UNDEFINED, AlignmentResult, OpKind, align, error_rate, exact_rate
from .errors import DuplicateId, EmptyCorpus, SchemaMismatch
from .markup import (
    TaggedTranscript,
    extract_concept_values,
    extract_concepts,
    extract_spans,
    normalize_transcript,
    strip_tags,
)
from .normalize import DEFAULT_PROFILE, NormalizationProfile
from .schema import BioTag

CVER_UNITS = ("token", "span")


@dataclass(frozen=True)
class Counts:
    S: int = 0
    D: int = 0
    I: int = 0  # noqa: E741
    N: int = 0

    @classmethod
    def of(cls, result: AlignmentResult) -> "Counts":
        return cls(result.S, result.D, result.I, result.N)

    def __add__(self, other: "Counts") -> "Counts":
        return Counts(self.S + other.S, self.D + other.D, self.I + other.I, self.N + other.N)

    @property
    def errors(self) -> int:
        return self.S + self.D + self.I

    @property
    def rate(self):
        return error_rate(self.S, self.D, self.I, self.N)


@dataclass(frozen=True)
class TagCounts:
    ins: int = 0
    dels: int = 0
    subs: int = 0
    n_ref: int = 0

    def __add__(self, other: "TagCounts") -> "TagCounts":
        return TagCounts(
            self.ins + other.ins, self.dels + other.dels, self.subs + other.subs, self.n_ref + other.n_ref
        )

    @property
    def rate(self):
        return error_rate(self.subs, self.dels, self.ins, self.n_ref)


@dataclass(frozen=True)
class UtteranceScore:
    id: str
    wer_counts: AlignmentResult
    coer_counts: AlignmentResult
    cver_counts: AlignmentResult
    per_tag: dict[BioTag, TagCounts]
    ref_words: int = 0
    hyp_words: int = 0


def _per_tag(ref_tags: list[BioTag], hyp_tags: list[BioTag], result: AlignmentResult) -> dict[BioTag, TagCounts]:
    ins: dict[BioTag, int] = {}
    dels: dict[BioTag, int] = {}
    subs: dict[BioTag, int] = {}
    n_ref: dict[BioTag, int] = {}
    for tag in ref_tags:
        n_ref[tag] = n_ref.get(tag, 0) + 1
    for op in result.path:
        if op.kind is OpKind.DELETE:
            tag = ref_tags[op.ref_index]
            dels[tag] = dels.get(tag, 0) + 1
        elif op.kind is OpKind.SUBSTITUTE:
            tag = ref_tags[op.ref_index]
            subs[tag] = subs.get(tag, 0) + 1
        elif op.kind is OpKind.INSERT:
            tag = hyp_tags[op.hyp_index]
            ins[tag] = ins.get(tag, 0) + 1
    tags = set(n_ref) | set(ins) | set(dels) | set(subs)
    return {
        t: TagCounts(ins.get(t, 0), dels.get(t, 0), subs.get(t, 0), n_ref.get(t, 0)) for t in tags
    }


def score_utterance(
    ref: TaggedTranscript,
    hyp: TaggedTranscript,
    profile: NormalizationProfile | None = DEFAULT_PROFILE,
    *,
    cver_unit: str = "token",
    utt_id: str = "",
) -> UtteranceScore:
    """Score one reference/hypothesis pair.

    Both sides are normalized with ``profile`` first (pass ``None`` when the
    words are already normalized).
    """
    if ref.schema != hyp.schema:
        raise SchemaMismatch("reference and hypothesis use different schemas", utt_id=utt_id or None)
    if cver_unit not in CVER_UNITS:
        raise ValueError(f"cver_unit must be one of {CVER_UNITS}")
    if profile is not None:
        ref = normalize_transcript(ref, profile)
        hyp = normalize_transcript(hyp, profile)

    ref_words, hyp_words = strip_tags(ref), strip_tags(hyp)
    ref_tags, hyp_tags = extract_concepts(ref), extract_concepts(hyp)
    coer = align(ref_tags, hyp_tags)
    if cver_unit == "token":
        cver = align(extract_concept_values(ref), extract_concept_values(hyp))
    else:
        cver = align(extract_spans(ref), extract_spans(hyp))
    return UtteranceScore(
        id=utt_id,
        wer_counts=align(ref_words, hyp_words),
        coer_counts=coer,
        cver_counts=cver,
        per_tag=_per_tag(ref_tags, hyp_tags, coer),
        ref_words=len(ref_words),
        hyp_words=len(hyp_words),
    )


def tag_sort_key(tag: BioTag) -> tuple[str, str]:
    # entity first so B-X and I-X rows sit together
    return (tag.entity, tag.position)


@dataclass(frozen=True)
class PerTagRow:
    tag: BioTag
    ins: int
    dels: int
    subs: int
    n_ref: int

    @property
    def rate(self):
        return error_rate(self.subs, self.dels, self.ins, self.n_ref)


@dataclass(frozen=True)
class MetricReport:
    wer_counts: Counts = Counts()
    coer_counts: Counts = Counts()
    cver_counts: Counts = Counts()
    per_tag: dict[BioTag, TagCounts] = field(default_factory=dict)
    utterance_count: int = 0
    missing: tuple[str, ...] = ()
    ref_words: int = 0
    hyp_words: int = 0
    cver_unit: str = "token"

    @property
    def wer(self):
        return self.wer_counts.rate

    @property
    def coer(self):
        return self.coer_counts.rate

    @property
    def cver(self):
        return self.cver_counts.rate

    @property
    def token_counts(self) -> dict[str, int]:
        return {
            "ref_words": self.ref_words,
            "hyp_words": self.hyp_words,
            "ref_concepts": self.coer_counts.N,
            "hyp_concepts": self.coer_counts.N - self.coer_counts.D + self.coer_counts.I,
        }

    @property
    def per_tag_rows(self) -> list[PerTagRow]:
        return [
            PerTagRow(t, c.ins, c.dels, c.subs, c.n_ref)
            for t, c in sorted(self.per_tag.items(), key=lambda kv: tag_sort_key(kv[0]))
        ]

    def merge(self, other: "MetricReport") -> "MetricReport":
        if self.cver_unit != other.cver_unit:
            raise ValueError("cannot merge reports with different CVER units")
        per_tag = dict(self.per_tag)
        for t, c in other.per_tag.items():
            per_tag[t] = per_tag[t] + c if t in per_tag else c
        return MetricReport(
            self.wer_counts + other.wer_counts,
            self.coer_counts + other.coer_counts,
            self.cver_counts + other.cver_counts,
            per_tag,
            self.utterance_count + other.utterance_count,
            tuple(sorted(self.missing + other.missing)),
            self.ref_words + other.ref_words,
            self.hyp_words + other.hyp_words,
            self.cver_unit,
        )

    @classmethod
    def from_scores(cls, scores: Iterable[UtteranceScore], cver_unit: str = "token", missing=()) -> "MetricReport":
        wer = coer = cver = Counts()
        per_tag: dict[BioTag, TagCounts] = {}
        count = ref_words = hyp_words = 0
        for sc in scores:
            count += 1
            wer += Counts.of(sc.wer_counts)
            coer += Counts.of(sc.coer_counts)
            cver += Counts.of(sc.cver_counts)
            ref_words += sc.ref_words
            hyp_words += sc.hyp_words
            for t, c in sc.per_tag.items():
                per_tag[t] = per_tag[t] + c if t in per_tag else c
        return cls(wer, coer, cver, per_tag, count, tuple(sorted(missing)), ref_words, hyp_words, cver_unit)


def _score_args(args) -> UtteranceScore:
    utt_id, ref, hyp, profile, cver_unit = args
    return score_utterance(ref, hyp, profile, cver_unit=cver_unit, utt_id=utt_id)


def _checked_pairs(pairs, missing: list[str]) -> Iterator[tuple[str, TaggedTranscript, TaggedTranscript]]:
    seen: set[str] = set()
    for utt_id, ref, hyp in pairs:
        if utt_id in seen:
            raise DuplicateId(f"utterance id {utt_id!r} appears twice", utt_id=utt_id)
        seen.add(utt_id)
        if hyp is None:
            missing.append(utt_id)
            hyp = TaggedTranscript((), ref.schema)
        yield utt_id, ref, hyp


def score_corpus(
    pairs: Iterable[tuple[str, TaggedTranscript, TaggedTranscript | None]],
    profile: NormalizationProfile | None = DEFAULT_PROFILE,
    *,
    cver_unit: str = "token",
    jobs: int = 1,
) -> MetricReport:
    """Score ``(id, ref, hyp)`` triples; ``hyp=None`` marks a missing hypothesis.

    Missing hypotheses score as empty output (all deletions) and are listed in
    ``MetricReport.missing``. ``jobs > 1`` scores utterances in worker
    processes; the report does not depend on ``jobs``.
    """
    missing: list[str] = []
    checked = _checked_pairs(pairs, missing)
    if jobs > 1:
        work = [(i, r, h, profile, cver_unit) for i, r, h in checked]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            scores = list(pool.map(_score_args, work, chunksize=max(1, len(work) // (jobs * 4))))
    else:
        scores = (score_utterance(r, h, profile, cver_unit=cver_unit, utt_id=i) for i, r, h in checked)
    report = MetricReport.from_scores(scores, cver_unit)
    if report.utterance_count == 0:
        raise EmptyCorpus("no utterances to score")
    return replace(report, missing=tuple(sorted(missing)))


# -- formatting --------------------------------------------------------------


def percent(rate: Fraction | None, undefined: str) -> str:
    """Percentage with one decimal, rounding halves away from zero."""
    if rate is None:
        return undefined
    value = Decimal(rate.numerator * 100) / Decimal(rate.denominator)
    return str(value.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    widths = [max(len(r[k]) for r in [header] + rows) for k in range(len(header))]
    lines = []
    for r in [header] + rows:
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return lines


def format_per_tag(report: MetricReport) -> str:
    rows = [
        [str(r.tag), str(r.ins), str(r.dels), str(r.subs), percent(exact_rate(r.subs, r.dels, r.ins, r.n_ref), "inf")]
        for r in report.per_tag_rows
    ]
    return "\n".join(_table(["Tag", "INS", "DEL", "SUB", "CoER(%)"], rows)) + "\n"


def format_text(report: MetricReport, per_tag: bool = True) -> str:
    rows = []
    for name, c in (("WER", report.wer_counts), ("CoER", report.coer_counts), ("CVER", report.cver_counts)):
        rate = percent(exact_rate(c.S, c.D, c.I, c.N), "n/a")
        rows.append([name, str(c.S), str(c.D), str(c.I), str(c.N), rate])
    out = [
        f"utterances: {report.utterance_count}",
        f"missing hypotheses: {len(report.missing)}",
        f"cver unit: {report.cver_unit}",
        "",
        *_table(["Metric", "SUB", "DEL", "INS", "N", "Rate(%)"], rows),
    ]
    text = "\n".join(out) + "\n"
    if per_tag:
        text += "\n" + format_per_tag(report)
    return text


def _json_rate(value):
    return None if value is UNDEFINED else value


def to_structured(report: MetricReport) -> dict:
    metrics = {}
    for name, c in (("wer", report.wer_counts), ("coer", report.coer_counts), ("cver", report.cver_counts)):
        metrics[name] = {"S": c.S, "D": c.D, "I": c.I, "N": c.N, "rate": _json_rate(c.rate)}
    return {
        "utterances": report.utterance_count,
        "missing": list(report.missing),
        "cver_unit": report.cver_unit,
        "tokens": report.token_counts,
        "metrics": metrics,
        "per_tag": [
            {"tag": str(r.tag), "ins": r.ins, "del": r.dels, "sub": r.subs, "n": r.n_ref, "coer": _json_rate(r.rate)}
            for r in report.per_tag_rows
        ],
    }


def format_report(report: MetricReport, style: str = "text", *, per_tag: bool = True) -> str:
    """Render a report as an aligned text table or as JSON (``"structured"``)."""
    if style == "text":
        return format_text(report, per_tag)
    if style == "structured":
        return json.dumps(to_structured(report), ensure_ascii=False, indent=2, sort_keys=True) + "\n"
    raise ValueError(f"unknown report style {style!r}")


def report_from_structured(doc: str | dict) -> MetricReport:
    """Rebuild a :class:`MetricReport` from its structured form (counts only)."""
    data = json.loads(doc) if isinstance(doc, str) else doc
    m = data["metrics"]

    def counts(key: str) -> Counts:
        return Counts(m[key]["S"], m[key]["D"], m[key]["I"], m[key]["N"])

    per_tag = {}
    for row in data["per_tag"]:
        pos, _, entity = row["tag"].partition("-")
        per_tag[BioTag(pos, entity)] = TagCounts(row["ins"], row["del"], row["sub"], row["n"])
    return MetricReport(
        counts("wer"),
        counts("coer"),
        counts("cver"),
        per_tag,
        data["utterances"],
        tuple(data["missing"]),
        data["tokens"]["ref_words"],
        data["tokens"]["hyp_words"],
        data["cver_unit"],
    )
