import pytest

from ctinovelty.textprep import load_stopwords


@pytest.fixture(scope="session")
def stopwords():
    return load_stopwords()


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for item in terminalreporter.config._acceptance_items:
        outcome = _acceptance.get(item.nodeid)
        if outcome is None:
            continue
        label = (item.obj.__doc__ or item.name).strip().splitlines()[0]
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {label}")


def pytest_collection_modifyitems(config, items):
    config._acceptance_items = [i for i in items if "test_acceptance.py" in i.nodeid]
