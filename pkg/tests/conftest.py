import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def acceptance():
    """record(number, title, ok, detail): one line per criterion in the terminal summary."""

    def record(number: int, title: str, ok: bool, detail: str = "") -> bool:
        prev = _ACCEPTANCE.get(number)
        ok = ok and (prev is None or prev[1])
        _ACCEPTANCE[number] = (title, ok, detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria (exact equality)")
    for number in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[number]
        tr.write_line(f"AC{number:02d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else ""))
