import os
import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# acceptance verdicts, printed in the terminal summary
ACCEPTANCE: dict[int, tuple[str, bool, float, str]] = {}


@pytest.fixture
def criterion():
    """Record an acceptance verdict: criterion(n, title) returns a context manager."""

    class _Run:
        def __init__(self, n, title, limit):
            self.n, self.title, self.limit = n, title, limit
            self.failures: list[str] = []

        def check(self, ok, what):
            if not ok:
                self.failures.append(what)
            return ok

        def __enter__(self):
            self.t0 = time.perf_counter()
            return self

        def __exit__(self, exc_type, exc, tb):
            dt = time.perf_counter() - self.t0
            if exc is not None:
                self.failures.append(f"{exc_type.__name__}: {exc}")
            if dt > self.limit:
                self.failures.append(f"took {dt:.1f}s, limit {self.limit}s")
            ok = not self.failures
            ACCEPTANCE[self.n] = (self.title, ok, dt, "; ".join(self.failures))
            line = f"criterion {self.n} [{'PASS' if ok else 'FAIL'}] {self.title} ({dt:.2f}s)"
            print(line + ("" if ok else " -- " + "; ".join(self.failures)))
            if exc is None and not ok:
                pytest.fail("; ".join(self.failures))
            return False

    return _Run


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, dt, why = ACCEPTANCE[n]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}  ({dt:.2f}s)"
        if not ok:
            line += f"  -- {why}"
        terminalreporter.write_line(line)
