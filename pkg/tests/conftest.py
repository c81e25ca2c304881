import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=30, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", deadline=None, max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# one summary line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def verdict():
    """Record and print the outcome line of one acceptance criterion."""

    def record(number: int, title: str, failures: list[str], checked: int):
        status = "PASS" if not failures else "FAIL"
        line = f"[{status}] criterion {number:2d}: {title} ({checked - len(failures)}/{checked} checks)"
        ACCEPTANCE_LINES[number] = line
        print(line)
        for f in failures:
            print(f"        {f}")
        assert not failures, f"criterion {number}: " + "; ".join(failures)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
