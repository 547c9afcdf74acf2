import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from gdlog import attach_database, parse_database, parse_program  # noqa: E402

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def load(name: str, facts: str | None = None):
    prog = parse_program((PROGRAMS / f"{name}.gdl").read_text(), file=f"{name}.gdl")
    if facts is None and (PROGRAMS / f"{name}.facts").exists():
        facts = name
    if facts is None:
        return prog
    return attach_database(prog, parse_database((PROGRAMS / f"{facts}.facts").read_text()))


@pytest.fixture(scope="session")
def network():
    return load("network")


@pytest.fixture(scope="session")
def coin():
    return load("coin")


@pytest.fixture(scope="session")
def dimes():
    return load("dimes")


_acceptance: dict = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        _acceptance[report.nodeid.rsplit("_", 1)[-1]] = report.outcome
    elif report.when == "setup" and report.failed and "test_acceptance.py::test_criterion_" in report.nodeid:
        _acceptance[report.nodeid.rsplit("_", 1)[-1]] = "failed"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for num, (title, _) in sorted(CRITERIA.items()):
        outcome = _acceptance.get(str(num))
        if outcome is None:
            continue
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {verdict}  {title}")
