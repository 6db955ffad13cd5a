import pytest
from hypothesis import given
from hypothesis import strategies as st

from vertexlab.abelian import (
    FGAbelianGroup,
    IntBilinearForm,
    apply_iota,
    lattice_from_dict,
    pair,
    validate_superlattice,
)

G = FGAbelianGroup(2, (2, 3))
elems = st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(0, 1), st.integers(0, 2))


@given(elems, elems, elems)
def test_group_laws(a, b, c):
    assert G.add(a, b) == G.add(b, a)
    assert G.add(G.add(a, b), c) == G.add(a, G.add(b, c))
    assert G.add(a, G.neg(a)) == G.zero()
    assert G.scale(3, a) == G.add(a, G.add(a, a))


def test_torsion_reduction():
    assert G.canon((0, 0, 3, 7)) == (0, 0, 1, 1)
    with pytest.raises(ValueError):
        FGAbelianGroup(1, (1,))


def test_pair_and_dimension_mismatch():
    f = IntBilinearForm(FGAbelianGroup(2), [[2, -1], [-1, 2]])
    # x^T M y by hand
    assert pair(f, (1, 1), (1, 0)) == 1
    assert pair(f, (1, -1), (1, -1)) == 6
    with pytest.raises(ValueError):
        pair(f, (1,), (1, 0))


def test_torsion_must_be_killed():
    L = lattice_from_dict({"even": {"free_rank": 1, "torsion": [2], "form": [[2, 1], [1, 0]]}})
    kinds = {v["kind"] for v in validate_superlattice(L)}
    assert "torsion-kill" in kinds


def test_symmetry_violations_reported():
    L = lattice_from_dict(
        {"even": {"free_rank": 2, "form": [[2, 1], [0, 2]]}, "odd": {"free_rank": 2, "form": [[0, 1], [1, 0]]}}
    )
    parts = {(v["kind"], v["part"]) for v in validate_superlattice(L)}
    assert ("symmetry", "even") in parts and ("symmetry", "odd") in parts


def test_default_bplus_is_identity():
    L = lattice_from_dict({"even": {"free_rank": 2, "form": [[2, 1], [1, 2]]}})
    assert apply_iota(L, (3, -1)) == (3, -1)
    assert L.gram() == ((2, 1), (1, 2))
    assert L.even_names == ("v1", "v2")


def test_iota_with_torsion_sector():
    data = {
        "even": {"free_rank": 1, "form": [[2]]},
        "bplus": {"free_rank": 1, "torsion": [2]},
        "iota": [[1, 0]],
    }
    L = lattice_from_dict(data)
    assert validate_superlattice(L) == []
    assert apply_iota(L, (2, 1)) == (2,)
    assert L.gram() == ((2, 0), (0, 0))
