import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# criterion number -> one-line verdict, filled by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def verdict():
    """Record 'criterion N PASS|FAIL: ...' for the end-of-run summary."""

    def record(n: int, title: str, ok: bool, detail: str) -> bool:
        line = f"criterion {n} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
        ACCEPTANCE[n] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
