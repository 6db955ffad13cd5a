import copy
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vertexlab.geometry import (
    ModelError,
    builtin,
    builtin_dict,
    dual_inv,
    effective_forms,
    euler,
    euler_matrix,
    load_variety,
    superlattice_of,
    variety_from_dict,
)


def test_p1_matrix():
    # [PAPER] the P^1 Euler matrix on (O, O(1))
    assert euler_matrix(builtin("p1")) == [[1, 2], [0, 1]]


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_p1_line_bundles(a, b):
    # [DERIVED] Riemann-Roch on P^1: chi(O(a), O(b)) = b - a + 1; O(a) = (1-a) O + a O(1) in K
    M = builtin("p1")
    assert euler(M, (1 - a, a), (1 - b, b)) == b - a + 1


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_p2_line_bundles(a, b):
    # [DERIVED] Riemann-Roch on P^2: chi(O(a), O(b)) = binom(b - a + 2, 2) as a polynomial
    M = builtin("p2")

    def coords(x):
        return (1, x, Fraction(x * x + x, 2))

    d = b - a
    assert euler(M, coords(a), coords(b)) == Fraction((d + 2) * (d + 1), 2)


def test_p2_known_values():
    M = builtin("p2")
    assert euler(M, 0, 0) == 1
    assert euler(M, 2, 2) == 0  # point with itself on a surface
    assert euler(M, 0, 2) == 1 and euler(M, 2, 0) == 1


@pytest.mark.parametrize("g", [0, 1, 2, 3])
def test_curve_structure_sheaf(g):
    # [DERIVED] chi(O, O) = 1 - g on a genus g curve; odd block is the intersection form
    M = builtin(f"genus_g({g})")
    assert euler(M, 0, 0) == 1 - g
    assert euler(M, 0, 1) == 1 and euler(M, 1, 0) == -1
    even, odd = effective_forms(M, "cy")
    for i in range(len(odd)):
        for j in range(len(odd)):
            assert odd[i][j] == -odd[j][i]
    if g:
        assert any(any(r) for r in odd)


def test_elliptic_blocks():
    M = builtin("elliptic")
    chi = euler_matrix(M)
    assert [[chi[i][j] for j in M.even] for i in M.even] == [[0, 1], [-1, 0]]
    assert [[chi[i][j] for j in M.odd] for i in M.odd] == [[0, 1], [-1, 0]]
    # not 2n-Calabi-Yau in this model, so the even block is symmetrised (to 0)
    even, _ = effective_forms(M, "cy")
    assert even == [[0, 0], [0, 0]]


def test_k3_mukai():
    # [PAPER] chi(O, O) = 2 on a K3 surface; the Euler form is symmetric
    M = builtin("k3_reduced")
    chi = euler_matrix(M)
    assert chi[0][0] == 2
    assert chi == [list(r) for r in zip(*chi)]
    assert chi == [[2, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]]
    assert not M.odd
    even, _ = effective_forms(M, "cy")
    assert even == chi


def test_dual_involution():
    R = builtin("elliptic").ring
    for k in range(R.size):
        x = R.basis_vec(k)
        assert dual_inv(R, dual_inv(R, x)) == x
    # degrees 0,1,2 get signs +,+,-
    assert dual_inv(R, (1, 1, 1, 1)) == (1, 1, 1, -1)


@given(st.integers(0, 3), st.integers(0, 3))
def test_dual_multiplicativity(i, j):
    # [DERIVED] (xy)^dual = (-1)^{|x||y|} x^dual y^dual for homogeneous x, y
    R = builtin("elliptic").ring
    x, y = R.basis_vec(i), R.basis_vec(j)
    s = -1 if R.degrees[i] % 2 and R.degrees[j] % 2 else 1
    lhs = dual_inv(R, R.mul(x, y))
    rhs = R.mul(dual_inv(R, x), dual_inv(R, y))
    assert lhs == tuple(s * c for c in rhs)


@pytest.mark.parametrize("name", ["p1", "p2", "elliptic", "genus_g(2)", "k3_reduced"])
def test_builtins_valid_and_integral(name):
    M = builtin(name)
    assert M.violations() == []
    for row in euler_matrix(M):
        assert all(c.denominator == 1 for c in row)
    L = superlattice_of(M, "general")
    assert tuple(L.even.matrix) == tuple(zip(*L.even.matrix))


def _broken(name, edit):
    d = copy.deepcopy(builtin_dict(name))
    edit(d)
    with pytest.raises(ModelError) as exc:
        variety_from_dict(d)
    return str(exc.value)


def test_validation_errors():
    assert "todd" in _broken("p1", lambda d: d.__setitem__("todd", [2, 1]))
    assert "parity" in _broken("elliptic", lambda d: d["kbasis"][2].__setitem__("parity", 0))

    def anticomm(d):
        d["cohomology"]["mul"][1][2] = [0, 0, 0, 1]

    assert "graded-commutativity" in _broken("elliptic", anticomm)

    def nonassoc(d):
        # H * H = H2 but H2 * H = 1 breaks associativity and the grading
        d["cohomology"]["mul"].append([2, 1, [1, 0, 0]])
        d["cohomology"]["mul"].append([1, 2, [1, 0, 0]])

    msg = _broken("p2", nonassoc)
    assert "associativity" in msg
    assert "schema" in _broken("p1", lambda d: d.pop("kbasis"))
    assert "length" in _broken("p1", lambda d: d.__setitem__("todd", [1]))


def test_fractional_euler_form_rejected():
    def half(d):
        d["kbasis"][1]["ch"] = [0, "1/2"]

    assert "integrality" in _broken("p1", half)


def test_json_round_trip(tmp_path):
    d = builtin_dict("p2")
    p = tmp_path / "p2.json"
    p.write_text(json.dumps(d))
    M = load_variety(p)
    assert euler_matrix(M) == euler_matrix(builtin("p2"))
    assert load_variety("elliptic").name == "elliptic"


@settings(max_examples=30)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_euler_bilinear(x, y):
    M = builtin("k3_reduced")
    direct = euler(M, x, y)
    chi = euler_matrix(M)
    assert direct == sum(x[i] * chi[i][j] * y[j] for i in range(4) for j in range(4))
