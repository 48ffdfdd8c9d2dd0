import numpy as np
import pytest

from photon_pistol import AtomicState, Geometry, LevelScheme

PSI_SPECIAL = 0.685


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def s323():
    return LevelScheme(3, 2, 3)


@pytest.fixture
def s211():
    return LevelScheme(2, 1, 1)


@pytest.fixture
def s011():
    return LevelScheme(0, 1, 1)


def random_density(rng, n, rank=None):
    rank = n if rank is None else rank
    X = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = X @ X.conj().T
    return rho / np.trace(rho).real


def random_state(rng, n, rank=None):
    return AtomicState(random_density(rng, n, rank))


def psi_geometry(psi):
    return Geometry.from_psi(psi)


# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
