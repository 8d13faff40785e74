import numpy as np
import pytest

from irrigopt.datasets import representative_scenario, toy_kinked_scenario, toy_linear_scenario
from irrigopt.lp import EQ, GE, LE, LinearProgram


@pytest.fixture(scope="session")
def rep():
    return representative_scenario()


@pytest.fixture(scope="session")
def toy():
    return toy_linear_scenario()


@pytest.fixture(scope="session")
def kinked():
    return toy_kinked_scenario()


def random_lp(rng: np.random.Generator) -> LinearProgram:
    """Small boxed LP with integer data; bounded by construction, sometimes infeasible."""
    n = int(rng.integers(2, 6))
    m = int(rng.integers(1, 6))
    A = rng.integers(-10, 11, size=(m, n)).astype(float)
    rel = list(rng.choice([LE, LE, GE, EQ], size=m))
    x0 = rng.uniform(0, 5, n)
    slack = rng.integers(-2, 4, size=m)   # negative slack can make the LP infeasible
    rhs = np.round(A @ x0) + np.where(np.array(rel) == LE, slack, np.where(np.array(rel) == GE, -slack, 0))
    lower = rng.integers(-2, 2, size=n).astype(float)
    upper = lower + rng.integers(1, 8, size=n)
    c = rng.integers(-10, 11, size=n).astype(float)
    return LinearProgram(c, A, rel, rhs, lower, upper, sense=str(rng.choice(["min", "max"])))


@pytest.fixture
def lp_factory():
    return random_lp


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    def log(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        print(line)
    return log


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
