"""Per-criterion reporting for the acceptance suite.

Tests marked ``@pytest.mark.criterion(n)`` are grouped; after the run one
line per criterion is printed: PASS when every test of the group passed,
FAIL otherwise.  Strict expected failures (statements of a criterion that
are known to be wrong as literally written) are listed separately.
"""

from __future__ import annotations

from collections import defaultdict

import pytest

CRITERIA = {
    1: "five-way agreement on the suite",
    2: "pinned worked examples",
    3: "Aztec diamond counts",
    4: "structural identities",
    5: "coefficient-free reduction",
    6: "specialisation closure",
    7: "CLI determinism",
}

_outcomes: dict[int, list[tuple[str, str]]] = defaultdict(list)


def _criterion(item) -> int | None:
    marker = item.get_closest_marker("criterion")
    return marker.args[0] if marker else None


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    number = _criterion(item)
    if number is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if hasattr(report, "wasxfail"):
            state = "xfailed" if report.skipped else "xpassed"
        else:
            state = report.outcome
        _outcomes[number].append((item.name, state))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    write = terminalreporter.write_line
    terminalreporter.section("acceptance criteria")
    for number in sorted(_outcomes):
        results = _outcomes[number]
        regular = [state for _, state in results if state not in ("xfailed", "xpassed")]
        ok = bool(regular) and all(state == "passed" for state in regular)
        verdict = "PASS" if ok else "FAIL"
        write(f"criterion {number}: {verdict} - {CRITERIA.get(number, '')} ({regular.count('passed')}/{len(regular)} checks)")
        for name, state in results:
            if state in ("xfailed", "xpassed"):
                label = "XFAIL (as literally stated; see notes)" if state == "xfailed" else "XPASS (unexpected)"
                write(f"criterion {number} literal statement {name}: {label}")
