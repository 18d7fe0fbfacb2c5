"""Exception hierarchy shared by all modules.

Everything raised for bad input data derives from :class:`DataError`; the CLI
maps those to exit status 2.
"""

from __future__ import annotations


class SpnerError(Exception):
    """Base class for all toolkit errors."""


class DataError(SpnerError):
    """Input data could not be used.

    ``path``, ``line`` and ``utt_id`` are filled in by whichever layer knows
    them, so the CLI can print a single useful diagnostic line.
    """

    def __init__(self, message: str, *, path=None, line=None, utt_id=None):
        super().__init__(message)
        self.message = message
        self.path = path
        self.line = line
        self.utt_id = utt_id

    def locate(self, *, path=None, line=None, utt_id=None) -> "DataError":
        if path is not None and self.path is None:
            self.path = path
        if line is not None and self.line is None:
            self.line = line
        if utt_id is not None and self.utt_id is None:
            self.utt_id = utt_id
        return self

    def __str__(self) -> str:
        where = []
        if self.path is not None:
            where.append(str(self.path) if self.line is None else f"{self.path}:{self.line}")
        elif self.line is not None:
            where.append(f"line {self.line}")
        if self.utt_id is not None:
            where.append(f"id={self.utt_id}")
        prefix = " ".join(where)
        return f"{prefix}: {self.message}" if prefix else self.message


# schema
class SchemaError(DataError):
    pass


class DuplicateType(SchemaError):
    pass


class BadTypeName(SchemaError):
    pass


class EmptySchema(SchemaError):
    pass


class BadProfile(DataError):
    pass


# markup
class MarkupError(DataError):
    pass


class UnknownTag(MarkupError):
    pass


class DanglingTag(MarkupError):
    pass


class BrokenBio(MarkupError):
    pass


class AdjacentTags(MarkupError):
    pass


class BadColumnLine(MarkupError):
    pass


# corpus / metrics
class BadManifestLine(DataError):
    pass


class DuplicateId(DataError):
    pass


class EmptyCorpus(DataError):
    pass


class SchemaMismatch(DataError):
    pass


class EmptyVocabulary(DataError):
    pass
