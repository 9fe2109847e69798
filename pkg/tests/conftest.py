import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

# filled by test_acceptance: criterion number -> (passed, detail line)
ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "sweep: exhaustive sweep over enumerated algebras")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {line}")


@pytest.fixture(scope="session")
def entries():
    from hemikit.catalog import catalog
    return {e.key: e for e in catalog()}
