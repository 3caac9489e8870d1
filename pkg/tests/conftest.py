"""Shared pytest plumbing: collects acceptance-criterion verdicts so they
print as a summary section, one PASS/FAIL line per criterion, regardless of
output capture."""

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str):
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
