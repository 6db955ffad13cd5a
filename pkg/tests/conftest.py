import pytest

from vertexlab import FockSpace, VertexAlgebra, build_epsilon, lattice_from_dict
from vertexlab.geometry import builtin

RANK1 = {"even": {"free_rank": 1, "form": [[2]]}}
A2 = {"even": {"free_rank": 2, "form": [[2, -1], [-1, 2]]}}
ODD_EVEN = {"even": {"free_rank": 2, "form": [[1, 1], [1, -2]]}}
SUPER = {
    "even": {"free_rank": 1, "form": [[1]]},
    "odd": {"free_rank": 2, "form": [[0, 1], [-1, 0]]},
}


def make_va(data, koszul="printed"):
    L = lattice_from_dict(data)
    return VertexAlgebra(FockSpace(L), build_epsilon(L), koszul)


@pytest.fixture(scope="session")
def va_rank1():
    return make_va(RANK1)


@pytest.fixture(scope="session")
def va_super():
    return make_va(SUPER)


@pytest.fixture(scope="session")
def va_odd():
    return make_va(ODD_EVEN)


@pytest.fixture(scope="session")
def models():
    return {n: builtin(n) for n in ("p1", "p2", "elliptic", "k3_reduced", "genus_g(2)")}
