import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = ""
        if report.failed:
            crash = getattr(report.longrepr, "reprcrash", None)
            detail = (crash.message if crash else str(report.longrepr)).splitlines()[0]
        _criteria[n] = (report.outcome.upper(), detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    from test_acceptance import CRITERIA
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        name, tol = CRITERIA[n]
        outcome, detail = _criteria.get(n, ("NOT RUN", ""))
        outcome = {"PASSED": "PASS", "FAILED": "FAIL"}.get(outcome, outcome)
        line = f"criterion {n:2d} [{outcome}] {name} (tolerance: {tol})"
        if detail:
            line += f" :: {detail[:300]}"
        terminalreporter.write_line(line)
