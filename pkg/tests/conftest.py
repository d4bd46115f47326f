import pytest

from cubex import build_family, parse_family


def make(spec_text):
    return build_family(parse_family(spec_text))


@pytest.fixture(scope="session")
def grid32():
    return make("grid:3x2")


@pytest.fixture(scope="session")
def grid44():
    return make("grid:4x4")


@pytest.fixture(scope="session")
def star5():
    return make("star:5")


@pytest.fixture(scope="session")
def star8():
    return make("star:8")


@pytest.fixture(scope="session")
def edge():
    return make("cube:1")


@pytest.fixture(scope="session")
def cube2():
    return make("cube:2")


@pytest.fixture(scope="session")
def cube3():
    return make("cube:3")


@pytest.fixture(scope="session")
def path5():
    return make("grid:5x1")


@pytest.fixture(scope="session")
def tree33():
    return make("tree:3,3")


_ACCEPTANCE_RESULTS = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _ACCEPTANCE_RESULTS[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE_RESULTS):
        outcome = _ACCEPTANCE_RESULTS[name]
        line = "PASS" if outcome == "passed" else outcome.upper()
        terminalreporter.write_line(f"{name}: {line}")
