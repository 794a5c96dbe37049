from __future__ import annotations

import time

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_CRITERIA: dict[int, str] = {}


class Criterion:
    """Times one acceptance criterion and records a pass/fail line for the summary."""

    def __init__(self, number: int, title: str, limit: float):
        self.number = number
        self.title = title
        self.limit = limit
        self.notes: list[str] = []

    def note(self, text: str) -> None:
        self.notes.append(text)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and elapsed < self.limit
        reason = ""
        if exc_type is not None:
            reason = f" [{exc_type.__name__}: {str(exc).splitlines()[0] if str(exc) else ''}]"
        elif not ok:
            reason = f" [runtime {elapsed:.2f}s exceeds {self.limit:g}s]"
        extra = f" ({'; '.join(self.notes)})" if self.notes else ""
        line = f"{'PASS' if ok else 'FAIL'} criterion {self.number}: {self.title} in {elapsed:.2f}s / {self.limit:g}s{extra}{reason}"
        _CRITERIA[self.number] = line
        print(line)
        if exc_type is None and not ok:
            pytest.fail(line)
        return False


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[k])
