import os
import sys

from hypothesis import settings

# oracles.py sits next to the tests
sys.path.insert(0, os.path.dirname(__file__))

# exact arithmetic and sympy oracles have uneven run times
settings.register_profile("default", deadline=None, print_blob=True)
settings.load_profile("default")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): test belongs to acceptance criterion k")
    config._criteria = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call" and not (call.when == "setup" and call.excinfo):
        return
    k = mark.args[0]
    failed = call.excinfo is not None
    results = item.config._criteria
    results[k] = results.get(k, True) and not failed


def pytest_terminal_summary(terminalreporter, config):
    results = config._criteria
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(f"criterion {k}: {'PASS' if results[k] else 'FAIL'}")
