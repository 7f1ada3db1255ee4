import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=200,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


@pytest.fixture
def acceptance(request, capsys):
    """Record one acceptance line: acceptance(number, title, passed, detail)."""
    lines = request.config.stash[ACCEPTANCE]

    def record(num, title, passed, detail):
        lines.append((num, title, bool(passed), detail))
        with capsys.disabled():
            print(f"\n[{'PASS' if passed else 'FAIL'}] criterion {num}: {title} | {detail}")

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, passed, detail in sorted(lines):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {num:>2}: {title} | {detail}")
