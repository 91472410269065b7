import pytest

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def report(request):
    """Record one acceptance line: report(number, name, passed, detail)."""
    lines = request.config.stash[_LINES]

    def rec(number, name, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        lines.append((number, f"{status}  criterion {number:2d}  {name}  {detail}".rstrip()))
        return passed

    return rec


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
