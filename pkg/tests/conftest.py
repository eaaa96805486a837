from pathlib import Path

import pytest

from irmeasures import QrelsTable, RunTable, induce_ranking

GOLDEN = Path(__file__).parent / "golden"

INSTANCE_A_QRELS = {"q1": {"d1": 1, "d2": 2, "d3": 0}}
INSTANCE_A_RUN = {"q1": {"d2": 3.0, "d4": 2.0, "d1": 1.0}}


@pytest.fixture
def qrels_a():
    return QrelsTable(INSTANCE_A_QRELS)


@pytest.fixture
def run_a():
    return RunTable(INSTANCE_A_RUN)


@pytest.fixture
def judgments_a(qrels_a):
    return qrels_a["q1"]


@pytest.fixture
def ranking_a(run_a, judgments_a):
    return induce_ranking(run_a["q1"], judgments_a)


_acceptance = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.path.name == "test_acceptance.py":
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _acceptance.append((report.outcome.upper(), doc))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for outcome, doc in _acceptance:
        terminalreporter.write_line(f"[{'PASS' if outcome == 'PASSED' else 'FAIL'}] {doc}")
