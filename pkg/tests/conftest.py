import pytest

_CRITERIA: list[tuple[str, str, float, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, title): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    label, title = marker.args
    diagnosis = dict(item.user_properties).get("diagnosis", "")
    _CRITERIA.append((str(label), title, report.duration, "PASS" if report.passed else "FAIL", diagnosis))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, title, secs, status, diagnosis in _CRITERIA:
        terminalreporter.write_line(f"{status} criterion {label}: {title} ({secs:.1f} s)")
        for line in diagnosis.splitlines():
            terminalreporter.write_line(f"      {line}")
