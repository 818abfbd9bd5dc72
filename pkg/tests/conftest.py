import shutil
import sys
from pathlib import Path

import pytest

from stlf.models import parse_model

sys.path.insert(0, str(Path(__file__).parent))

GOLDEN = Path(__file__).parent / "golden"
HAVE_SOLVER = shutil.which("z3") is not None
needs_solver = pytest.mark.skipif(not HAVE_SOLVER, reason="z3 is not installed")

COUNTER = """
model counter;
state x init 0;
x' = x + 1;
output o = x;
"""


@pytest.fixture
def counter():
    return parse_model(COUNTER)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config._criteria = {}


def pytest_collection_modifyitems(config, items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            config._criteria.setdefault(m.args[0], [m.args[1], []])


def pytest_runtest_makereport(item, call):
    m = item.get_closest_marker("criterion")
    if m is None or call.when != "call" and not (call.when == "setup" and call.excinfo):
        return
    if call.excinfo is not None and call.excinfo.errisinstance(pytest.skip.Exception):
        return
    passed = call.excinfo is None
    item.config._criteria.setdefault(m.args[0], [m.args[1], []])[1].append(passed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    crit = config._criteria
    if not crit:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(crit):
        title, results = crit[num]
        status = "PASS" if results and all(results) else "FAIL"
        terminalreporter.write_line(f"{status} criterion {num}: {title}")
