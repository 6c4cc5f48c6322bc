import pytest

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])


@pytest.fixture
def record_criterion(capsys):
    def record(k, passed, summary):
        line = f"CRITERION {k}: {'PASS' if passed else 'FAIL'} - {summary}"
        ACCEPTANCE[k] = line
        with capsys.disabled():
            print("\n" + line)
        return passed
    return record
