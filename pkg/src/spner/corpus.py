"""Manifest I/O, entity filtering and dataset statistics.

A manifest is UTF-8 JSON Lines, one utterance per line::

    {"id":"u1","audio":"clips/u1.mp3","duration":3.2,"text":"<B-PERS> محمد ذهب"}

Only ``id`` and ``text`` are required.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import BadManifestLine, DataError, DuplicateId
from .markup import LENIENT, TaggedTranscript, has_entities, parse_inline
from .schema import EntitySchema, default_schema


@dataclass(frozen=True)
class UtteranceRecord:
    id: str
    text: str
    audio: str | None = None
    duration: float | None = None

    def to_json(self) -> str:
        obj: dict = {"id": self.id}
        if self.audio is not None:
            obj["audio"] = self.audio
        if self.duration is not None:
            obj["duration"] = self.duration
        obj["text"] = self.text
        return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def _record(obj, lineno: int) -> UtteranceRecord:
    if not isinstance(obj, dict):
        raise BadManifestLine("manifest line is not a JSON object", line=lineno)
    unknown = set(obj) - {"id", "text", "audio", "duration"}
    if unknown:
        raise BadManifestLine(f"unexpected keys {sorted(unknown)}", line=lineno)
    utt_id, text = obj.get("id"), obj.get("text")
    if not isinstance(utt_id, str) or not utt_id:
        raise BadManifestLine("'id' must be a non-empty string", line=lineno)
    if not isinstance(text, str):
        raise BadManifestLine("'text' must be a string", line=lineno, utt_id=utt_id)
    audio = obj.get("audio")
    if audio is not None and not isinstance(audio, str):
        raise BadManifestLine("'audio' must be a string", line=lineno, utt_id=utt_id)
    duration = obj.get("duration")
    if duration is not None:
        if isinstance(duration, bool) or not isinstance(duration, (int, float)) or not duration > 0:
            raise BadManifestLine("'duration' must be a positive number of seconds", line=lineno, utt_id=utt_id)
    return UtteranceRecord(utt_id, text, audio, duration)


def parse_manifest(lines: Iterable[str], path=None) -> Iterator[UtteranceRecord]:
    """Records from JSON-Lines text; blank lines are skipped."""
    seen: set[str] = set()
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise BadManifestLine(f"invalid JSON: {exc.msg}", path=path, line=lineno) from None
        try:
            rec = _record(obj, lineno)
        except DataError as exc:
            raise exc.locate(path=path)
        if rec.id in seen:
            raise DuplicateId(f"duplicate utterance id {rec.id!r}", path=path, line=lineno, utt_id=rec.id)
        seen.add(rec.id)
        yield rec


def read_manifest(path: str | Path) -> Iterator[UtteranceRecord]:
    """Stream records from a JSON-Lines manifest."""
    path = Path(path)
    with path.open(encoding="utf-8", newline=None) as fh:
        yield from parse_manifest(fh, path)


def write_manifest(records: Iterable[UtteranceRecord], path: str | Path) -> int:
    n = 0
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")
            n += 1
    return n


def read_tsv(path: str | Path) -> Iterator[UtteranceRecord]:
    """Common Voice-style export: ``id<TAB>duration<TAB>text``.

    A first line starting with ``id<TAB>`` is treated as a header. Empty
    duration cells mean unknown duration.
    """
    path = Path(path)
    seen: set[str] = set()
    with path.open(encoding="utf-8", newline=None) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if lineno == 1 and line.startswith("id\t"):
                continue
            if not line.strip():
                continue
            cells = line.split("\t")
            if len(cells) != 3:
                raise BadManifestLine(f"expected 3 tab-separated fields, got {len(cells)}", path=path, line=lineno)
            utt_id, dur, text = cells
            duration = None
            if dur.strip():
                try:
                    duration = float(dur)
                except ValueError:
                    raise BadManifestLine(f"bad duration {dur!r}", path=path, line=lineno, utt_id=utt_id) from None
            try:
                rec = _record({"id": utt_id, "text": text, "duration": duration}, lineno)
            except DataError as exc:
                raise exc.locate(path=path)
            if rec.id in seen:
                raise DuplicateId(f"duplicate utterance id {rec.id!r}", path=path, line=lineno, utt_id=rec.id)
            seen.add(rec.id)
            yield rec


def write_tsv(records: Iterable[UtteranceRecord], path: str | Path) -> int:
    n = 0
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("id\tduration\ttext\n")
        for rec in records:
            dur = "" if rec.duration is None else repr(float(rec.duration))
            fh.write(f"{rec.id}\t{dur}\t{rec.text}\n")
            n += 1
    return n


def parse_record(rec: UtteranceRecord, schema: EntitySchema | None = None, mode: str = LENIENT) -> TaggedTranscript:
    try:
        return parse_inline(rec.text, schema, mode)
    except DataError as exc:
        raise exc.locate(utt_id=rec.id)


def filter_entities(
    records: Iterable[UtteranceRecord], schema: EntitySchema | None = None, *, invert: bool = False
) -> Iterator[UtteranceRecord]:
    """Keep records whose transcript has at least one tagged word.

    With ``invert=True`` keep the entity-free ones instead.
    """
    for rec in records:
        if has_entities(parse_record(rec, schema)) != invert:
            yield rec


@dataclass
class CorpusStats:
    utterance_count: int = 0
    total_duration: float = 0.0
    tag_distribution: dict[str, int] = field(default_factory=dict)
    tokens: int = 0
    # B-/I- tag token counts, keyed by label
    bio_distribution: dict[str, int] = field(default_factory=dict)
    missing_duration: int = 0

    def add(self, t: TaggedTranscript, duration: float | None) -> None:
        self.utterance_count += 1
        if duration is None:
            self.missing_duration += 1
        else:
            self.total_duration += duration
        for tok in t.tokens:
            self.tokens += 1
            if tok.tag is None:
                continue
            label = tok.tag.label
            self.bio_distribution[label] = self.bio_distribution.get(label, 0) + 1
            if tok.tag.position == "B":
                self.tag_distribution[tok.tag.entity] = self.tag_distribution.get(tok.tag.entity, 0) + 1

    def merge(self, other: "CorpusStats") -> "CorpusStats":
        out = CorpusStats(
            self.utterance_count + other.utterance_count,
            self.total_duration + other.total_duration,
            dict(self.tag_distribution),
            self.tokens + other.tokens,
            dict(self.bio_distribution),
            self.missing_duration + other.missing_duration,
        )
        for k, v in other.tag_distribution.items():
            out.tag_distribution[k] = out.tag_distribution.get(k, 0) + v
        for k, v in other.bio_distribution.items():
            out.bio_distribution[k] = out.bio_distribution.get(k, 0) + v
        return out


def compute_stats(records: Iterable[UtteranceRecord], schema: EntitySchema | None = None) -> CorpusStats:
    """Utterance count, total duration, entity counts per type and word count.

    Entities are counted by their ``B-`` tag, so a multi-word entity counts
    once. Every schema type appears in ``tag_distribution``, zero or not.
    """
    schema = schema or default_schema()
    stats = CorpusStats(tag_distribution=dict.fromkeys(schema.types, 0))
    for rec in records:
        stats.add(parse_record(rec, schema), rec.duration)
    return stats


def format_duration(seconds: float) -> str:
    """``h:mm``, rounded to the nearest minute."""
    minutes = int(seconds / 60 + 0.5)
    return f"{minutes // 60}:{minutes % 60:02d}"


def stats_to_structured(stats: CorpusStats, schema: EntitySchema, bio: bool = False) -> dict:
    doc = {
        "utterances": stats.utterance_count,
        "duration_seconds": round(stats.total_duration, 3),
        "duration_hmm": format_duration(stats.total_duration),
        "missing_duration": stats.missing_duration,
        "tokens": stats.tokens,
        "entities": {t: stats.tag_distribution.get(t, 0) for t in schema.types},
    }
    if bio:
        doc["bio_tags"] = {tag.label: stats.bio_distribution.get(tag.label, 0) for tag in schema.tags}
    return doc


def format_stats(stats: CorpusStats, schema: EntitySchema, style: str = "text", bio: bool = False) -> str:
    if style == "structured":
        return json.dumps(stats_to_structured(stats, schema, bio), ensure_ascii=False, indent=2) + "\n"
    if style != "text":
        raise ValueError(f"unknown stats style {style!r}")
    lines = [
        f"# Utterances           {stats.utterance_count}",
        f"Total Duration (h:mm)  {format_duration(stats.total_duration)}",
        f"Tokens                 {stats.tokens}",
    ]
    if stats.missing_duration:
        lines.append(f"Missing durations      {stats.missing_duration}")
    lines.append("")
    rows = [(t, stats.tag_distribution.get(t, 0)) for t in schema.types]
    if bio:
        rows = [(tag.label, stats.bio_distribution.get(tag.label, 0)) for tag in schema.tags]
    width = max([len("Entity Class")] + [len(name) for name, _ in rows])
    lines.append(f"{'Entity Class'.ljust(width)}  Count")
    lines.extend(f"{name.ljust(width)}  {count}" for name, count in rows)
    return "\n".join(lines) + "\n"
