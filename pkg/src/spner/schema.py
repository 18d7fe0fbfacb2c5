"""Entity tagset and BIO tag tokens."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable

from .errors import BadTypeName, DuplicateType, EmptySchema, SchemaError, UnknownTag

# Wojood types, in the row order of the CV-18 NER tag distribution table.
WOJOOD_TYPES = (
    "CARDINAL",
    "CURR",
    "DATE",
    "EVENT",
    "FAC",
    "GPE",
    "LANGUAGE",
    "LAW",
    "LOC",
    "MONEY",
    "NORP",
    "OCC",
    "ORDINAL",
    "ORG",
    "PERCENT",
    "PERS",
    "PRODUCT",
    "QUANTITY",
    "TIME",
    "UNIT",
    "WEBSITE",
)

POSITIONS = ("B", "I")

_NAME_RE = re.compile(r"[A-Z0-9]+")
# Anything shaped like a tag token, whether or not the schema knows the name.
TAG_TOKEN_RE = re.compile(r"<([BI])-([A-Z0-9]+)>")


@dataclass(frozen=True, order=True)
class BioTag:
    """One B-/I- label, e.g. ``BioTag("B", "PERS")``."""

    position: str
    entity: str

    @property
    def label(self) -> str:
        return f"{self.position}-{self.entity}"

    @property
    def surface(self) -> str:
        return f"<{self.position}-{self.entity}>"

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class EntitySchema:
    types: tuple[str, ...]
    _index: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        types = tuple(self.types)
        if not types:
            raise EmptySchema("schema has no entity types")
        seen = set()
        for name in types:
            if not isinstance(name, str) or not _NAME_RE.fullmatch(name):
                raise BadTypeName(f"illegal entity type name {name!r} (expected A-Z and 0-9)")
            if name in seen:
                raise DuplicateType(f"entity type {name!r} listed twice")
            seen.add(name)
        object.__setattr__(self, "types", types)
        object.__setattr__(self, "_index", frozenset(types))

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.types)

    @cached_property
    def tags(self) -> tuple[BioTag, ...]:
        return tuple(BioTag(pos, name) for name in self.types for pos in POSITIONS)

    @cached_property
    def tag_tokens(self) -> frozenset[str]:
        return frozenset(t.surface for t in self.tags)

    def tag(self, position: str, entity: str) -> BioTag:
        if position not in POSITIONS or entity not in self._index:
            raise UnknownTag(f"tag {position}-{entity} is not in the schema")
        return BioTag(position, entity)

    def parse_tag(self, surface: str) -> BioTag:
        """Parse an inline tag token such as ``<B-PERS>``."""
        m = TAG_TOKEN_RE.fullmatch(surface)
        if m is None:
            raise UnknownTag(f"{surface!r} is not a tag token")
        return self.tag(m.group(1), m.group(2))

    def parse_label(self, label: str) -> BioTag | None:
        """Parse a column-format label (``B-PERS``, ``I-ORG`` or ``O``)."""
        if label == "O":
            return None
        pos, sep, name = label.partition("-")
        if not sep:
            raise UnknownTag(f"{label!r} is not a BIO label")
        return self.tag(pos, name)


_DEFAULT: EntitySchema | None = None


def default_schema() -> EntitySchema:
    """The 21-type Wojood schema."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = EntitySchema(WOJOOD_TYPES)
    return _DEFAULT


def load_schema(source: str | Iterable[str]) -> EntitySchema:
    """Build a schema from a schema document or a list of names.

    A string is read as a document: one name per line, blank lines and ``#``
    comments ignored. Any other iterable is taken as the names themselves.
    """
    if isinstance(source, str):
        names = []
        for line in source.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                names.append(line)
    else:
        names = list(source)
    return EntitySchema(tuple(names))


def read_schema(source: str | Path | None) -> EntitySchema:
    """Resolve a ``--schema`` value: ``None``/``"wojood"`` or a file path."""
    if source is None or str(source) == "wojood":
        return default_schema()
    path = Path(source)
    try:
        return load_schema(path.read_text(encoding="utf-8"))
    except SchemaError as exc:
        raise exc.locate(path=path)
