import pytest

from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")

_CRITERIA: dict[int, tuple[str, bool]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance verdict; the lines are printed at the end of the run."""

    def record(number: int, label: str, passed: bool) -> bool:
        _CRITERIA[number] = (label, bool(passed))
        print(f"{'PASS' if passed else 'FAIL'} criterion {number}: {label}")
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        label, passed = _CRITERIA[number]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} criterion {number}: {label}")
