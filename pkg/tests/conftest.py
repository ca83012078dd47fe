import pytest

from lambdabox import parse, parse_context


@pytest.fixture
def term():
    return lambda src, cps=False: parse(src, cps=cps)


@pytest.fixture
def ctx():
    return lambda src, cps=False: parse_context(src, cps=cps)


def pytest_terminal_summary(terminalreporter):
    lines = [
        value
        for key in ("passed", "failed")
        for rep in terminalreporter.stats.get(key, [])
        for name, value in rep.user_properties
        if name == "criterion" and rep.when == "call"
    ]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s[7:9])):
            terminalreporter.write_line(line)
