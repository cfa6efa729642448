import pytest

from entgap import model
from entgap.overlap import seesaw_max_overlap, two_copy_overlap

_criteria = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    ok = call.excinfo is None
    prev = _criteria.get(number, (title, True))
    _criteria[number] = (title, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number:>2}  {title:<40} {'PASS' if ok else 'FAIL'}")


@pytest.fixture(scope="session")
def pi_b():
    return model.upb_projector()


@pytest.fixture(scope="session")
def seesaw_200(pi_b):
    return seesaw_max_overlap(pi_b, restarts=200, seed=42)


@pytest.fixture(scope="session")
def seesaw_400(pi_b):
    return seesaw_max_overlap(pi_b, restarts=400, seed=42)


@pytest.fixture(scope="session")
def two_copy_200(pi_b):
    return two_copy_overlap(pi_b, restarts=200, seed=42)
