import numpy as np
import pytest

from qmultilinear import classical as cl
from qmultilinear.gf import field_make
from qmultilinear.rmcode import code_make

F2 = field_make(2)

ADDITIVE_F4 = [
    [[1, 0], [0, 0], [0, 0]],
    [[0, 0], [1, 0], [0, 1]],
    [[0, 1], [0, 0], [1, 0]],
]


@pytest.fixture
def additive_code():
    return code_make(3, 2, F2, np.array(ADDITIVE_F4))


@pytest.fixture
def u24_code():
    return cl.block_to_matrix_code(cl.load_fixture("u24_f2"))


def e11(n=2, m=2, F=F2):
    M = np.zeros((n, m), dtype=np.int64)
    M[0, 0] = 1
    return code_make(n, m, F, [M])


# -- acceptance summary ---------------------------------------------------------------

_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.module.__name__.endswith("test_acceptance") and item.name.startswith("test_criterion_"):
        if rep.when in ("setup", "call"):
            ok, secs = _ACCEPTANCE.get(item.name, (True, 0.0))
            _ACCEPTANCE[item.name] = (ok and rep.passed, secs + rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        ok, secs = _ACCEPTANCE[name]
        num, _, label = name[len("test_criterion_"):].partition("_")
        terminalreporter.write_line(f"criterion {int(num):2d} {'PASS' if ok else 'FAIL'}  {secs:7.2f}s  {label}")
