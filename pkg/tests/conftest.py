import contextlib
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS] = {}


@pytest.fixture
def criterion(request):
    """Context manager timing one acceptance criterion and recording PASS/FAIL."""
    results = request.config.stash[_RESULTS]

    @contextlib.contextmanager
    def run(number: int, limit_s: float):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            elapsed = time.perf_counter() - start
            first = str(exc).strip().splitlines()[0] if str(exc).strip() else type(exc).__name__
            results[number] = f"criterion {number}: FAIL ({elapsed:.2f}s) {first}"
            print(results[number])
            raise
        elapsed = time.perf_counter() - start
        if elapsed >= limit_s:
            results[number] = f"criterion {number}: FAIL runtime {elapsed:.2f}s exceeds {limit_s}s"
            print(results[number])
            pytest.fail(results[number])
        results[number] = f"criterion {number}: PASS ({elapsed:.2f}s, limit {limit_s}s)"
        print(results[number])

    return run


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash[_RESULTS]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
