import os
import sys
import time
from contextlib import contextmanager

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_ACCEPTANCE: dict[int, list] = {}


class Criterion:
    """Times one acceptance criterion and records a PASS/FAIL line for the summary."""

    def __init__(self, number: int, title: str, limit: float):
        self.number, self.title, self.limit = number, title, limit
        self.detail = ""

    @contextmanager
    def run(self):
        start = time.perf_counter()
        ok = False
        try:
            yield self
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            _ACCEPTANCE.setdefault(self.number, []).append(
                (ok and elapsed < self.limit, elapsed, self.limit, self.title, self.detail))
        assert elapsed < self.limit, f"criterion {self.number} took {elapsed:.2f} s (limit {self.limit} s)"


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_ACCEPTANCE):
            runs = _ACCEPTANCE[k]
            ok = all(r[0] for r in runs)
            worst = max(r[1] for r in runs)
            _, _, limit, title, detail = runs[-1]
            parts = f"{len(runs)} runs, slowest " if len(runs) > 1 else ""
            line = f"criterion {k} {'PASS' if ok else 'FAIL'}: {title} [{parts}{worst:.2f} s / {limit:g} s]"
            terminalreporter.write_line(line + (f"; {detail}" if detail else ""))
