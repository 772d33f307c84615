import os
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL/SKIP line per acceptance criterion."""
    outcome = {}
    for key, label in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL"), ("skipped", "SKIP")):
        for rep in terminalreporter.stats.get(key, []):
            nodeid = getattr(rep, "nodeid", "")
            if "::test_criterion_" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            # a failure in any phase wins over a pass in another
            if outcome.get(name) != "FAIL":
                outcome[name] = label
    if not outcome:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(outcome):
        terminalreporter.write_line(f"{outcome[name]}  {name}")
