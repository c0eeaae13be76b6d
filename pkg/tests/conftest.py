# Acceptance results are collected here and summarised after the run so the
# per-criterion lines show up even when output capture is on.
ACCEPTANCE_RESULTS: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_RESULTS, key=lambda l: int(l.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
