import numpy as np
import pytest

from dfakit.channel import KrausChannel

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
P0 = np.diag([1.0, 0.0]).astype(complex)
P1 = np.diag([0.0, 1.0]).astype(complex)

_acceptance_lines = []


@pytest.fixture
def dephasing():
    return KrausChannel([P0, P1])


@pytest.fixture
def flip():
    """Mixed unitary {1/sqrt2, X/sqrt2}."""
    return KrausChannel([I2 / np.sqrt(2), X / np.sqrt(2)])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def report_line():
    """Record one acceptance verdict line; shown in the terminal summary."""
    def record(criterion, ok, detail):
        _acceptance_lines.append(f"{'PASS' if ok else 'FAIL'} [{criterion}] {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
