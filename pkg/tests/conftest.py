"""Shared pytest wiring.

The acceptance tests register one line per criterion through the
``criterion`` fixture; the terminal summary prints them after the run so
the pass/fail status of each criterion is visible in one place.
"""

from __future__ import annotations

import pytest

ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    out = yield
    rep = out.get_result()
    setattr(item, "rep_" + rep.when, rep)


@pytest.fixture
def criterion(request):
    """Collects 'criterion N: PASS/FAIL' lines for the summary block."""
    holder = {}

    def label(text: str) -> None:
        holder["label"] = text

    yield label
    rep = getattr(request.node, "rep_call", None)
    if "label" in holder:
        verdict = "PASS" if rep is not None and rep.passed else "FAIL"
        ACCEPTANCE_RESULTS.append((holder["label"], verdict))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, verdict in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{verdict}  {label}")
