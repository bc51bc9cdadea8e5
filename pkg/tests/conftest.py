import pytest

from randpoly import CUSP_TEXT, NODE_TEXT, P8_TEXT
from resform.formlang import parse_poly
from resform.grading import WeightSystem
from resform.residue import MeroTopForm

_criteria = {}


@pytest.fixture
def p8():
    return parse_poly(P8_TEXT, {"p": -1, "q": 0})


@pytest.fixture
def p8_omega(p8):
    return MeroTopForm(parse_poly("1", nvars=3), p8)


@pytest.fixture
def cusp():
    return parse_poly(CUSP_TEXT)


@pytest.fixture
def cusp_weights():
    return WeightSystem((3, 2), 6)


@pytest.fixture
def node():
    return parse_poly(NODE_TEXT)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" in report.nodeid and name.startswith("test_ac"):
        _criteria[name] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        outcome, duration = _criteria[name]
        label = "PASS" if outcome == "passed" else "FAIL"
        number = int(name[len("test_ac"):].split("_", 1)[0])
        terminalreporter.write_line(f"criterion {number:>2}: {label}  ({duration:.2f}s)  {name}")
