"""Shared pytest wiring: surfaces the per-criterion PASS/FAIL lines collected
by the acceptance battery in the terminal summary (file-descriptor capture
would otherwise swallow them)."""


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    try:
        from test_acceptance import CRITERION_LINES
    except ImportError:
        return
    if not CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in CRITERION_LINES:
        terminalreporter.write_line(line)
