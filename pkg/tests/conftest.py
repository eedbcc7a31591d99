import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def random_pure_vector(rng: np.random.Generator, D: int) -> np.ndarray:
    v = rng.normal(size=D * D) + 1j * rng.normal(size=D * D)
    return v / np.linalg.norm(v)


def random_density(rng: np.random.Generator, D: int, rank: int | None = None) -> np.ndarray:
    k = rank or D * D
    G = rng.normal(size=(D * D, k)) + 1j * rng.normal(size=(D * D, k))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
