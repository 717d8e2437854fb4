import json
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"
BUNDLE = ROOT / "fixtures" / "bundle.json"

# filled by test_acceptance, printed once at the end of the run
ACCEPTANCE: dict = {}


def golden(name: str):
    return json.loads((GOLDEN / name).read_text())


@pytest.fixture
def bundle_path():
    return BUNDLE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:>2}. {title}: {detail}")
