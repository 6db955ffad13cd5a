import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vertexlab import FockState
from vertexlab.vertex import (
    check_locality,
    check_skew,
    check_vacuum_creation,
    check_weak_assoc,
    gbinom,
    sample_states,
)

from .conftest import ODD_EVEN, RANK1, SUPER, make_va

half = Fraction(1, 2)


def test_gbinom():
    assert gbinom(-1, 3) == -1
    assert gbinom(5, 2) == 10
    assert gbinom(-3, 2) == 6
    assert gbinom(2, 3) == 0
    assert gbinom(4, -1) == 0


def test_gamma_on_opposite_sector(va_rank1):
    V = va_rank1.V
    u, w = V.state((1,)), V.state((-1,))
    # Gamma_a(z) e^{-a} = z^{-2} exp(sum a_{-j} z^j / j)|0>, chi(a,a) = 2, eps = 1
    assert va_rank1.y_mode(u, 1, w) == V.vacuum()
    assert va_rank1.y_mode(u, 0, w) == V.state(bosons=[(0, 1)])
    assert va_rank1.y_mode(u, -1, w) == V.state(bosons=[(0, 2)], coeff=half) + V.state(
        bosons=[(0, 1), (0, 1)], coeff=half
    )
    assert va_rank1.y_mode(u, 2, w) == 0


def test_gamma_on_same_sector(va_rank1):
    V = va_rank1.V
    e = V.state((1,))
    # z^{chi(a,a)} = z^2, so the first nonzero mode is n = -3
    for n in range(-2, 4):
        assert va_rank1.y_mode(e, n, e) == 0
    eps = va_rank1.eps((1,), (1,))
    assert va_rank1.y_mode(e, -3, e) == eps * V.state((2,))


def test_normal_ordered_square(va_rank1):
    V = va_rank1.V
    u = V.state(bosons=[(0, 1), (0, 1)])
    # :b b:_3 b_{-1}^2|0> = b_1 b_1 b_{-1}^2 |0> = 2 chi^2 = 8
    assert va_rank1.y_mode(u, 3, u) == 8 * V.vacuum()
    assert va_rank1.y_mode(u, 4, u) == 0


va_s = make_va(SUPER)
keys_s = [k for sec in [(-1,), (0,), (1,)] for k in va_s.V.basis_upto(sec, 2)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(keys_s), st.integers(-4, 4))
def test_generator_fields_are_modes(key, n):
    V = va_s.V
    s = FockState({key: 1})
    assert va_s.y_mode(V.state(bosons=[(0, 1)]), n, s) == V.b_mode(0, n, s)
    for w in (0, 1):
        assert va_s.y_mode(V.state(fermions=[(w, 1)]), n, s) == V.f_mode(w, n, s)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(keys_s), st.sampled_from(keys_s), st.integers(-4, 3))
def test_field_grading(ku, kw, n):
    V = va_s.V
    u, w = FockState({ku: 1}), FockState({kw: 1})
    r = va_s.y_mode(u, n, w)
    if r:
        assert V.field_degree(r) == V.field_degree(u) + V.field_degree(w) - 2 * n - 2


def test_printed_grading_is_not_field_compatible():
    V = va_s.V
    vac = V.vacuum()
    # vacuum_{-1} vacuum = vacuum, but 2 + 2 - 2(-1) - 2 = 4 != 2
    assert va_s.y_mode(vac, -1, vac) == vac
    assert V.degree(vac) != V.degree(vac) + V.degree(vac) - 2 * (-1) - 2
    assert V.field_degree(vac) == 0


@pytest.mark.parametrize("data", [RANK1, SUPER, ODD_EVEN])
@pytest.mark.parametrize("koszul", ["printed", "standard"])
def test_axioms(data, koszul):
    va = make_va(data, koszul)
    rng = random.Random(11)
    for s in sample_states(va, rng, 6, 2):
        assert check_vacuum_creation(va, s, 4)["ok"]
    for u, w in zip(sample_states(va, rng, 8, 2), sample_states(va, rng, 8, 2)):
        r = check_skew(va, u, w, 4)
        assert r["ok"], r["failures"][:1]
    u, v, w = sample_states(va, rng, 3, 1)
    r = check_weak_assoc(va, u, v, w, 8, 2)
    assert r["ok"] and r["N"] <= 8
    r = check_locality(va, u, v, [w], 8, 2)
    assert r["ok"]


def test_fermion_locality_order(va_super):
    V = va_super.V
    f = V.state(fermions=[(0, 1)])
    g = V.state(fermions=[(1, 1)])
    # {f(z), g(w)} ~ chi-(w1, w2)/(z - w)^2: N = 2 and not less
    r = check_locality(va_super, f, g, [V.vacuum(), V.state(bosons=[(0, 1)])], 6, 2)
    assert r == {"ok": True, "N": 2}


def test_skew_detects_wrong_cocycle():
    from vertexlab.cocycle import SignCocycle
    from vertexlab.vertex import VertexAlgebra

    base = make_va(ODD_EVEN)
    L = base.V.L
    bad = VertexAlgebra(base.V, SignCocycle(L.bplus, [[1, 1], [1, 1]]))
    u, w = base.V.state((1, 0)), base.V.state((0, 1))
    assert check_skew(base, u, w, 4)["ok"]
    assert not check_skew(bad, u, w, 4)["ok"]


def test_translation_is_derivation_of_vacuum(va_super):
    V = va_super.V
    assert va_super.translate(V.vacuum()) == 0
    e = V.state((1,))
    assert va_super.translate(e) == V.state((1,), bosons=[(0, 1)])
    assert va_super.translate(V.state(fermions=[(0, 1)])) == V.state(fermions=[(0, 2)])
