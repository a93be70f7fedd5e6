from __future__ import annotations

import os
from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))

F = Fraction


@pytest.fixture
def Zm():
    from lengthlab.groups import Z
    return Z


@pytest.fixture
def F2m():
    from lengthlab.groups import F2
    return F2


# -- acceptance reporting -------------------------------------------------------

_CRITERIA: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    failed = rep.failed or (rep.when == "call" and rep.skipped)
    prev = _CRITERIA.get(number, (title, "PASS"))[1]
    if rep.when == "call" or failed:
        _CRITERIA[number] = (title, "FAIL" if failed or prev == "FAIL" else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status = _CRITERIA[number]
        terminalreporter.write_line(f"{status}  criterion {number:>2}: {title}")
