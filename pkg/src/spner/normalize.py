"""Arabic text normalization and tokenization used before scoring.

The default profile removes punctuation, strips diacritics and tatweel, folds
hamza/madda carriers onto their bare letters and maps Eastern Arabic-Indic
digits to ASCII. Inline tag tokens (``<B-PERS>``) pass through untouched.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Mapping

from .errors import BadProfile
from .schema import TAG_TOKEN_RE

DIACRITICS = frozenset(
    [chr(c) for c in range(0x064B, 0x0653)]  # tanween, harakat, shadda, sukun
    + ["\u0670", "\u0640"]  # superscript alef, tatweel
)

HAMZA_MAP = {
    "\u0623": "\u0627",  # alef with hamza above
    "\u0625": "\u0627",  # alef with hamza below
    "\u0622": "\u0627",  # alef with madda
    "\u0621": "",  # standalone hamza
    "\u0624": "\u0648",  # waw with hamza
    "\u0626": "\u064A",  # yeh with hamza
    # combining madda / hamza above / hamza below (decomposed input)
    "\u0653": "",
    "\u0654": "",
    "\u0655": "",
}

NUMERAL_MAP = {
    **{chr(0x0660 + d): str(d) for d in range(10)},
    **{chr(0x06F0 + d): str(d) for d in range(10)},
}

ARABIC_PUNCTUATION = frozenset("\u060C\u061B\u061F")  # comma, semicolon, question mark

_SPLIT_RE = re.compile(r"(<[BI]-[A-Z0-9]+>)")


@dataclass(frozen=True)
class NormalizationProfile:
    remove_punctuation: bool = True
    remove_diacritics: bool = True
    normalize_hamza: bool = True
    transliterate_numerals: bool = True
    # codepoint -> replacement ("" deletes); overrides the built-in tables
    custom_map: Mapping[str, str] = field(default_factory=dict)

    @cached_property
    def table(self) -> dict[str, str]:
        table: dict[str, str] = {}
        if self.transliterate_numerals:
            table.update(NUMERAL_MAP)
        if self.normalize_hamza:
            table.update(HAMZA_MAP)
        if self.remove_diacritics:
            table.update(dict.fromkeys(DIACRITICS, ""))
        if self.remove_punctuation:
            table.update(dict.fromkeys(ARABIC_PUNCTUATION, " "))
        table.update(self.custom_map)
        return table

    def __hash__(self):
        return hash(
            (
                self.remove_punctuation,
                self.remove_diacritics,
                self.normalize_hamza,
                self.transliterate_numerals,
                tuple(sorted(self.custom_map.items())),
            )
        )


DEFAULT_PROFILE = NormalizationProfile()
# Leaves text as-is apart from whitespace handling.
IDENTITY_PROFILE = NormalizationProfile(False, False, False, False)


def tokenize(text: str) -> list[str]:
    """Split on whitespace; tag tokens are always their own token."""
    tokens = []
    for chunk in text.split():
        if TAG_TOKEN_RE.fullmatch(chunk):
            tokens.append(chunk)
        else:
            tokens.extend(p for p in _SPLIT_RE.split(chunk) if p)
    return tokens


def normalize_word(word: str, profile: NormalizationProfile = DEFAULT_PROFILE) -> list[str]:
    """Normalize one non-tag token; may return zero or several words."""
    table = profile.table
    strip_punct = profile.remove_punctuation
    out = []
    for ch in word:
        rep = table.get(ch)
        if rep is not None:
            out.append(rep)
        elif strip_punct and unicodedata.category(ch)[0] == "P":
            out.append(" ")
        else:
            out.append(ch)
    return "".join(out).split()


def normalize_text(text: str, profile: NormalizationProfile = DEFAULT_PROFILE) -> str:
    out: list[str] = []
    for token in tokenize(text):
        if TAG_TOKEN_RE.fullmatch(token):
            out.append(token)
        else:
            out.extend(normalize_word(token, profile))
    return " ".join(out)


_BOOL = {"1": True, "true": True, "yes": True, "on": True,
         "0": False, "false": False, "no": False, "off": False}


def _codepoints(value: str, lineno: int) -> str:
    chars = []
    for part in value.split():
        part = part.upper().removeprefix("U+")
        try:
            chars.append(chr(int(part, 16)))
        except ValueError:
            raise BadProfile(f"bad codepoint {part!r}", line=lineno) from None
    return "".join(chars)


def load_profile(source: str) -> NormalizationProfile:
    """Parse a profile document.

    One ``key = value`` per line, ``#`` comments allowed. Flags take
    true/false; ``map.<hex> = <hex> [<hex> ...]`` adds a custom mapping
    (an empty value deletes the character)::

        remove_punctuation = true
        map.U+0649 = U+064A
        map.0629 =
    """
    flags: dict[str, bool] = {}
    custom: dict[str, str] = {}
    names = {"remove_punctuation", "remove_diacritics", "normalize_hamza", "transliterate_numerals"}
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise BadProfile(f"expected key = value, got {raw!r}", line=lineno)
        if key.startswith("map."):
            src = _codepoints(key[4:], lineno)
            if len(src) != 1:
                raise BadProfile(f"map key must be a single codepoint: {key!r}", line=lineno)
            custom[src] = _codepoints(value, lineno)
        elif key in names:
            if value.lower() not in _BOOL:
                raise BadProfile(f"{key} expects true/false, got {value!r}", line=lineno)
            flags[key] = _BOOL[value.lower()]
        else:
            raise BadProfile(f"unknown profile key {key!r}", line=lineno)
    return NormalizationProfile(**flags, custom_map=custom)


def read_profile(source: str | Path | None) -> NormalizationProfile:
    """Resolve a ``--profile`` value: ``None``/``"default"``/``"none"`` or a file path."""
    if source is None or str(source) == "default":
        return DEFAULT_PROFILE
    if str(source) == "none":
        return IDENTITY_PROFILE
    path = Path(source)
    try:
        return load_profile(path.read_text(encoding="utf-8"))
    except BadProfile as exc:
        raise exc.locate(path=path)
