import pytest

_VERDICTS = []


@pytest.fixture
def verdict():
    """Collect a one-line verdict to print in the terminal summary.

    Capture redirects file descriptors during tests, so lines recorded here
    are flushed by the summary hook instead, where they stay visible.
    """
    return _VERDICTS.append


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance summary")
        for line in _VERDICTS:
            terminalreporter.line(line)
