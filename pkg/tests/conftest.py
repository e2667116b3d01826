from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

from prorank.config import DEFAULT_CAPS
from prorank.spec import abelian, cyclic, permutation_group, semidirect
from prorank.verify.corpus import metacyclic

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_collection_modifyitems(config, items):
    # the acceptance suite runs last so its summary lines close the log
    items.sort(key=lambda it: it.nodeid.startswith("tests/test_acceptance.py"))


class Named:
    """Small named groups built through independent constructors."""

    @staticmethod
    def C(n):
        return cyclic(n)

    S3 = staticmethod(lambda: permutation_group(3, ["(0 1)", "(0 1 2)"], label="S3"))
    D4 = staticmethod(lambda: metacyclic(4, 2, 3, 0, "D4"))
    Q8 = staticmethod(lambda: metacyclic(4, 2, 3, 2, "Q8"))
    V4 = staticmethod(lambda: abelian([2, 2], label="C2xC2"))
    A4 = staticmethod(lambda: semidirect(3, [2, 2], [[0, 1], [1, 1]], label="A4"))
    S4 = staticmethod(lambda: permutation_group(4, ["(0 1)", "(0 1 2 3)"], label="S4"))
    M16 = staticmethod(lambda: metacyclic(8, 2, 5, 0, "M16"))
    NEG18 = staticmethod(lambda: semidirect(2, [3, 3], [[-1, 0], [0, -1]], label="C2:C3^2"))


@pytest.fixture
def named():
    return Named


@pytest.fixture
def caps():
    return DEFAULT_CAPS


# ---------------------------------------------------------------------------
# acceptance summary: one line per criterion, printed after the run

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _CRITERIA[number] = ("PASS" if rep.passed else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}")
