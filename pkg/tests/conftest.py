import _scorecard


def pytest_terminal_summary(terminalreporter):
    if not _scorecard.lines:
        return
    terminalreporter.section("acceptance scorecard")
    for line in _scorecard.lines:
        terminalreporter.write_line(line)
