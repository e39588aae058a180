import pytest

from qbisect import _pykernels
from qbisect.graph import Graph, example_graph

try:
    from qbisect import _ckernels
except ImportError:  # extension not built
    _ckernels = None

KERNEL_MODULES = [_pykernels] + ([_ckernels] if _ckernels is not None else [])


@pytest.fixture(params=KERNEL_MODULES, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def kernel_module(request):
    return request.param


@pytest.fixture
def ex_graph() -> Graph:
    return example_graph()



def pytest_terminal_summary(terminalreporter):
    from suites import ACCEPTANCE_LOG

    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for no in sorted(ACCEPTANCE_LOG):
        terminalreporter.write_line(ACCEPTANCE_LOG[no])
    passed = sum(line.startswith("[PASS]") for line in ACCEPTANCE_LOG.values())
    terminalreporter.write_line(f"{passed}/{len(ACCEPTANCE_LOG)} criteria pass")
