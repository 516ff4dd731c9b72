import pytest

from slimeca import _fallback, lattice, reinforcement

ACCEPTANCE_RESULTS = []


@pytest.fixture(params=["native", "python"])
def backend(request, monkeypatch):
    """Run a test once with the selected backend and once with the numpy fallback."""
    if request.param == "python":
        monkeypatch.setattr(lattice, "kernels", _fallback)
        monkeypatch.setattr(reinforcement, "kernels", _fallback)
    return request.param


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
