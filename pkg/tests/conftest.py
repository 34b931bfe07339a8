import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.fixture
def report(request):
    """Attach measured numbers to the acceptance summary line of this test."""
    details: list[str] = []
    request.node.user_properties.append(("details", details))
    return details.append


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    number, title = marker.args
    details = next((v for k, v in item.user_properties if k == "details"), [])
    _CRITERIA[number] = {"title": title, "passed": rep.passed, "details": list(details),
                         "seconds": rep.duration}


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        c = _CRITERIA[number]
        status = "PASS" if c["passed"] else "FAIL"
        line = f"[{status}] criterion {number:2d}: {c['title']} ({c['seconds']:.1f}s)"
        terminalreporter.write_line(line)
        for d in c["details"]:
            terminalreporter.write_line(f"           {d}")
