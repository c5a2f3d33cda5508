from helpers import ACCEPTANCE_RESULTS


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, verdict, text in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {number}: {verdict}  {text}")
