"""Shared pytest configuration.

The custom terminal section restates every acceptance-criterion test as
a single pass/fail line so the run log carries a compact scoreboard.
"""


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    tr = terminalreporter
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in tr.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            name = nodeid.rsplit("::", 1)[-1]
            if name.startswith("test_criterion_"):
                lines.append((name, outcome.upper()))
    if lines:
        tr.write_sep("-", "acceptance criteria")
        for name, outcome in sorted(lines):
            tr.write_line(f"{name}: {outcome}")
