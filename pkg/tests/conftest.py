import time
from contextlib import contextmanager
from pathlib import Path

import pytest
from hypothesis import settings

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# some properties scan all triples of a 64-element lattice
settings.register_profile("default", deadline=None)
settings.load_profile("default")

_CRITERIA = []


@pytest.fixture
def fixtures_dir():
    return FIXTURES


class _Criterion:
    def __init__(self, number, title):
        self.number, self.title = number, title
        self.detail = ""


@pytest.fixture
def criterion():
    """Context manager recording one acceptance line: PASS when the block
    finishes, FAIL when it raises."""
    @contextmanager
    def run(number, title):
        c = _Criterion(number, title)
        start = time.perf_counter()
        ok = False
        try:
            yield c
            ok = True
        finally:
            secs = time.perf_counter() - start
            line = (f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: "
                    f"{c.detail} ({secs:.1f}s)")
            _CRITERIA.append((number, line))
            print(line)
    return run


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_CRITERIA):
            terminalreporter.write_line(line)
