import json
from pathlib import Path

import pytest

from treelimits.curve import End, curve_from_strings

ROOT = Path(__file__).resolve().parent.parent
SPECS = ROOT / "specs"
DATA = Path(__file__).resolve().parent / "data"

CANONICAL = {"a": [["t", "0"], ["0", "1/t"]], "b": [["1", "1"], ["1", "2"]]}
REDUCIBLE = {"a": [["t", "0"], ["0", "1/t"]], "b": [["1", "1"], ["0", "1"]]}
ABELIAN = {"a": [["t", "0"], ["0", "1/t"]], "b": [["t", "0"], ["0", "1/t"]]}


@pytest.fixture(scope="session")
def canonical():
    return curve_from_strings(CANONICAL)


@pytest.fixture(scope="session")
def infinity():
    return End.infinity()


@pytest.fixture(scope="session")
def oracle():
    with open(DATA / "oracle_values.json") as fh:
        return json.load(fh)


# --- acceptance reporting -------------------------------------------------------
# Each acceptance test records its verdict before asserting, so the summary
# has one line per criterion whether it passed or failed.

ACCEPTANCE: dict = {}


@pytest.fixture
def accept():
    def record(n: int, ok: bool, detail: str) -> bool:
        ACCEPTANCE[n] = (bool(ok), detail)
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
