import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from a2gsim import digitize_doughnut, save_pattern  # noqa: E402

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def record_criterion():
    """Record one acceptance line: (name, passed, detail)."""

    def _record(name: str, passed: bool, detail: str = "") -> None:
        ACCEPTANCE_RESULTS.append((name, bool(passed), detail))

    return _record


@pytest.fixture(scope="session")
def doughnut_file(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("patterns") / "doughnut_1deg.csv"
    save_pattern(digitize_doughnut(step=1.0), path)
    return path


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {name}" + (f"  ({detail})" if detail else ""))
