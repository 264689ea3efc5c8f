import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: call with (id, passed, detail)."""

    def record(cid, passed, detail):
        _ACCEPTANCE.append((cid, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid, passed, detail in sorted(_ACCEPTANCE, key=lambda r: (len(r[0]), r[0])):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {cid}: {detail}")
