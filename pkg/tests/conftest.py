from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import strategies as st

from spner.markup import TaggedToken, TaggedTranscript
from spner.schema import BioTag, default_schema

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"

ARABIC_WORDS = [
    "محمد", "علي", "احمد", "ذهب", "الى", "القاهرة", "مصر", "بنك", "امس", "اليوم",
    "كتب", "رسالة", "سافر", "دبي", "زار", "المتحف", "الوطني", "يعمل", "طبيبا", "في",
]


@st.composite
def transcripts(draw, valid: bool = True, max_len: int = 8, words=ARABIC_WORDS):
    """Random tagged transcripts over the default schema.

    With ``valid=True`` every I- tag continues an entity of the same type.
    """
    schema = default_schema()
    n = draw(st.integers(0, max_len))
    tokens = []
    prev = None
    for _ in range(n):
        word = draw(st.sampled_from(words))
        choice = draw(st.sampled_from(["O", "B", "I"]))
        tag = None
        if choice == "B" or (choice == "I" and valid and prev is None):
            tag = BioTag("B", draw(st.sampled_from(schema.types)))
        elif choice == "I":
            entity = prev.entity if valid else draw(st.sampled_from(schema.types))
            tag = BioTag("I", entity)
        tokens.append(TaggedToken(word, tag))
        prev = tag
    return TaggedTranscript(tuple(tokens), schema)


_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        for mark in report.keywords:
            if mark == "acceptance":
                label = getattr(report, "criterion", None)
                if label:
                    status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
                    if _results.get(label) != "FAIL":
                        _results[label] = status


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    crit = item.get_closest_marker("criterion")
    if crit is not None:
        rep.criterion = crit.args[0]


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_results, key=lambda s: int(s.split()[0])):
        terminalreporter.write_line(f"[{_results[label]}] {label}")
