from __future__ import annotations

import pytest

# (criterion number, passed, message), filled by test_acceptance.py
ACCEPTANCE: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, msg in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {msg}")


@pytest.fixture
def record():
    def _record(n: int, ok: bool, msg: str) -> None:
        ACCEPTANCE.append((n, bool(ok), msg))
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {msg}")
        assert ok, msg
    return _record
