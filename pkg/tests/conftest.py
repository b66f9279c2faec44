import pytest

from ep2stefan.mkdv import MkdvSolution
from ep2stefan.painleve import default_profile
from ep2stefan.stefan import StefanProblem


@pytest.fixture(scope="session")
def profile():
    return default_profile()


@pytest.fixture(scope="session")
def sol(profile):
    return MkdvSolution.from_profile(profile)


@pytest.fixture(scope="session")
def problem(sol):
    return StefanProblem(1.0, sol)


@pytest.fixture(scope="session")
def grid(sol):
    return sol.standard_grid()
