import pytest

from padicreg import _kernels_py, kernels

try:
    from padicreg import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

BACKENDS = [pytest.param(_kernels_py, id="python")]
if _kernels_c is not None:
    BACKENDS.append(pytest.param(_kernels_c, id="cython"))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def four_points():
    from padicreg import Dataset

    return Dataset.from_points([(0, 0), (1, 0), (1, 1), (1, 2), (1, 3)])


@pytest.fixture
def identity_points():
    from padicreg import Dataset

    return Dataset.from_points([(i, i) for i in range(5)])


def pytest_report_header(config):
    return f"padicreg kernel backend: {kernels.BACKEND}"


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
