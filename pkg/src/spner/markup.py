"""Inline BIO markup: ``<B-PERS> محمد <I-PERS> علي ذهب``.

Each tag token labels the single word that follows it; untagged words are
outside any entity. References are parsed strictly, model hypotheses
leniently (repairs are reported as :class:`BioIssue` entries).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from .errors import AdjacentTags, BadColumnLine, BrokenBio, DanglingTag, UnknownTag
from .normalize import DEFAULT_PROFILE, NormalizationProfile, normalize_word, tokenize
from .schema import TAG_TOKEN_RE, BioTag, EntitySchema, default_schema

log = logging.getLogger(__name__)

STRICT = "strict"
LENIENT = "lenient"


class TaggedToken(NamedTuple):
    word: str
    tag: BioTag | None = None


@dataclass(frozen=True)
class TaggedTranscript:
    tokens: tuple[TaggedToken, ...] = ()
    schema: EntitySchema = field(default_factory=default_schema, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(TaggedToken(*t) for t in self.tokens))

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[TaggedToken]:
        return iter(self.tokens)

    @property
    def words(self) -> list[str]:
        return [t.word for t in self.tokens]


@dataclass(frozen=True)
class BioIssue:
    """A BIO violation found (and, in lenient mode, repaired) while parsing."""

    kind: str  # class name of the strict-mode error
    position: int  # token index in the raw token stream
    message: str

    def __str__(self) -> str:
        return f"{self.kind} at token {self.position}: {self.message}"


_ERRORS = {cls.__name__: cls for cls in (DanglingTag, BrokenBio, AdjacentTags)}


def parse_inline(
    text: str,
    schema: EntitySchema | None = None,
    mode: str = STRICT,
    issues: list[BioIssue] | None = None,
) -> TaggedTranscript:
    """Parse inline markup into a :class:`TaggedTranscript`.

    In strict mode any BIO violation raises. In lenient mode only
    :class:`UnknownTag` raises; dangling tags are dropped, adjacent tags keep
    the last one, orphan ``I-`` tags are kept verbatim. Each repair is appended
    to ``issues`` when a list is given.
    """
    if mode not in (STRICT, LENIENT):
        raise ValueError(f"unknown parse mode {mode!r}")
    schema = schema or default_schema()

    def problem(kind: str, pos: int, message: str) -> None:
        if mode == STRICT:
            raise _ERRORS[kind](f"{message} (token {pos})")
        issue = BioIssue(kind, pos, message)
        log.debug("repaired %s", issue)
        if issues is not None:
            issues.append(issue)

    tokens: list[TaggedToken] = []
    pending: BioTag | None = None
    pending_at = -1
    for pos, raw in enumerate(tokenize(text)):
        if TAG_TOKEN_RE.fullmatch(raw):
            tag = schema.parse_tag(raw)
            if pending is not None:
                problem("AdjacentTags", pos, f"{pending.surface} directly followed by {raw}")
            pending, pending_at = tag, pos
            continue
        if pending is not None and pending.position == "I":
            prev = tokens[-1].tag if tokens else None
            if prev is None or prev.entity != pending.entity:
                problem("BrokenBio", pending_at, f"{pending.surface} does not continue an entity")
        tokens.append(TaggedToken(raw, pending))
        pending = None
    if pending is not None:
        problem("DanglingTag", pending_at, f"{pending.surface} has no following word")
    return TaggedTranscript(tuple(tokens), schema)


def check_inline(text: str, schema: EntitySchema | None = None) -> list[BioIssue]:
    """All BIO violations in ``text``; unknown tags still raise."""
    issues: list[BioIssue] = []
    parse_inline(text, schema, LENIENT, issues)
    return issues


def render_inline(t: TaggedTranscript) -> str:
    parts = []
    for word, tag in t.tokens:
        if tag is not None:
            parts.append(tag.surface)
        parts.append(word)
    return " ".join(parts)


def is_bio_valid(t: TaggedTranscript) -> bool:
    prev: BioTag | None = None
    for _, tag in t.tokens:
        if tag is not None and tag.position == "I" and (prev is None or prev.entity != tag.entity):
            return False
        prev = tag
    return True


def strip_tags(t: TaggedTranscript) -> list[str]:
    return [tok.word for tok in t.tokens]


def extract_concepts(t: TaggedTranscript) -> list[BioTag]:
    return [tok.tag for tok in t.tokens if tok.tag is not None]


def extract_concept_values(t: TaggedTranscript) -> list[tuple[BioTag, str]]:
    return [(tok.tag, tok.word) for tok in t.tokens if tok.tag is not None]


def extract_spans(t: TaggedTranscript) -> list[tuple[str, str]]:
    """Entity spans as ``(type, space-joined words)``.

    ``B-X`` opens a span, ``I-X`` extends an open ``X`` span; an orphan ``I-X``
    opens a new one.
    """
    spans: list[tuple[str, list[str]]] = []
    open_type = None
    for word, tag in t.tokens:
        if tag is None:
            open_type = None
        elif tag.position == "I" and open_type == tag.entity:
            spans[-1][1].append(word)
        else:
            spans.append((tag.entity, [word]))
            open_type = tag.entity
    return [(etype, " ".join(words)) for etype, words in spans]


def has_entities(t: TaggedTranscript) -> bool:
    return any(tok.tag is not None for tok in t.tokens)


def normalize_transcript(
    t: TaggedTranscript, profile: NormalizationProfile = DEFAULT_PROFILE
) -> TaggedTranscript:
    """Normalize every word, keeping tags attached.

    A word that normalizes to nothing is dropped together with its tag. A word
    that splits into several keeps its tag on the first piece; the remaining
    pieces continue the entity as ``I-`` of the same type.
    """
    out: list[TaggedToken] = []
    for word, tag in t.tokens:
        pieces = normalize_word(word, profile)
        for i, piece in enumerate(pieces):
            if i and tag is not None:
                out.append(TaggedToken(piece, BioTag("I", tag.entity)))
            else:
                out.append(TaggedToken(piece, tag))
    return TaggedTranscript(tuple(out), t.schema)


def to_columns(t: TaggedTranscript) -> str:
    """Two-column ``word<TAB>label`` lines, one token per line."""
    return "".join(f"{word}\t{tag.label if tag else 'O'}\n" for word, tag in t.tokens)


def _parse_column_line(line: str, schema: EntitySchema, lineno: int) -> TaggedToken:
    fields = line.split("\t")
    if len(fields) != 2 or not fields[0] or any(c.isspace() for c in fields[0]):
        raise BadColumnLine(f"expected 'word<TAB>label', got {line!r}", line=lineno)
    word, label = fields
    if TAG_TOKEN_RE.fullmatch(word):
        raise BadColumnLine(f"word {word!r} looks like a tag token", line=lineno)
    try:
        return TaggedToken(word, schema.parse_label(label.strip()))
    except UnknownTag as exc:
        raise exc.locate(line=lineno)


def from_columns(doc: str, schema: EntitySchema | None = None) -> TaggedTranscript:
    """Inverse of :func:`to_columns` for a single utterance."""
    schema = schema or default_schema()
    lines = doc.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    tokens = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            raise BadColumnLine("blank line inside a single-utterance column block", line=lineno)
        tokens.append(_parse_column_line(line, schema, lineno))
    return TaggedTranscript(tuple(tokens), schema)


def write_column_document(items: Iterable[tuple[str, TaggedTranscript]]) -> Iterator[str]:
    """Multi-utterance column document: ``# id = ...`` header, tokens, blank line."""
    for utt_id, t in items:
        yield f"# id = {utt_id}\n"
        yield to_columns(t)
        yield "\n"


def read_column_document(
    lines: Iterable[str], schema: EntitySchema | None = None
) -> Iterator[tuple[str | None, TaggedTranscript]]:
    """Parse a column document back into ``(id, transcript)`` pairs.

    Blocks are separated by blank lines; a ``# id = X`` comment names the
    block, other ``#`` lines are ignored.
    """
    schema = schema or default_schema()
    utt_id: str | None = None
    tokens: list[TaggedToken] = []
    started = False
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\r\n")
        if not line.strip():
            if started:
                yield utt_id, TaggedTranscript(tuple(tokens), schema)
            utt_id, tokens, started = None, [], False
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep and key.strip() == "id":
                utt_id = value.strip()
                started = True
            continue
        tokens.append(_parse_column_line(line, schema, lineno))
        started = True
    if started:
        yield utt_id, TaggedTranscript(tuple(tokens), schema)


__all__ = [
    "LENIENT",
    "STRICT",
    "BioIssue",
    "TaggedToken",
    "TaggedTranscript",
    "check_inline",
    "extract_concept_values",
    "extract_concepts",
    "extract_spans",
    "from_columns",
    "has_entities",
    "is_bio_valid",
    "normalize_transcript",
    "parse_inline",
    "read_column_document",
    "render_inline",
    "strip_tags",
    "to_columns",
    "write_column_document",
]
