from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vertexlab import FockSpace, lattice_from_dict
from vertexlab.fock import FockState
from vertexlab.geometry import builtin
from vertexlab.homology import HomologySpace
from vertexlab.parse import (
    Boson,
    Fermion,
    ParseError,
    Sector,
    Term,
    UAtom,
    Vac,
    format_expr,
    format_fock,
    format_hclass,
    parse_state,
    to_fock,
    to_hclass,
)

from .conftest import SUPER

L = lattice_from_dict(SUPER)
V = FockSpace(L)
HS = HomologySpace(builtin("elliptic"))


def test_vacuum():
    assert parse_state("vac") == (Term(Fraction(1), (Vac(),)),)
    assert to_fock(parse_state("vac"), V) == V.vacuum()


def test_coefficient_sector_boson():
    (t,) = parse_state("2/3 * e[1] * b(v1,2)")
    assert t.coeff == Fraction(2, 3)
    assert t.factors == (Sector((1,)), Boson("v1", 2))
    assert to_fock((t,), V) == FockState.monomial((1,), [(0, 2)], [], Fraction(2, 3))


def test_exterior_square_vanishes():
    assert to_fock(parse_state("f(w1,1)*f(w1,1)"), V) == FockState()
    assert to_hclass(parse_state("u(0,0;A,1)*u(0,0;A,1)"), HS) == HS.u((0, 0), []) * 0


def test_fermion_order_sign():
    a = to_fock(parse_state("f(w1,1)*f(w2,1)"), V)
    b = to_fock(parse_state("f(w2,1)*f(w1,1)"), V)
    assert a == -b and a


def test_sums_and_signs():
    s = to_fock(parse_state("b(v1,1) - 1/2*b(v1,1) + -vac"), V)
    assert s == FockState.monomial((0,), [(0, 1)], [], Fraction(1, 2)) - V.vacuum()
    assert format_fock(s, L) == "-vac + 1/2 * b(v1,1)"


def test_geometric_atoms():
    eta = to_hclass(parse_state("3 * u([1,0];O,2) * u(0,0;B,1)"), HS)
    assert eta == HS.u((1, 0), [(0, 2), (3, 1)], 3)
    assert format_hclass(eta, HS) == "3 * e[1,0]*u([0,0];O,2)*u([0,0];B,1)"
    assert to_hclass(parse_state(format_hclass(eta, HS)), HS) == eta


def test_zero_sector_any_rank():
    assert to_hclass(parse_state("e[0]"), HS) == HS.unit()


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("vac +", 1, 6),
        ("b(v1,0)", 1, 6),
        ("u(0; O, -2)", 1, 9),
        ("2/0 * vac", 1, 3),
        ("vac\n * q", 2, 4),
        ("e[1", 1, 4),
        ("vac vac", 1, 5),
    ],
)
def test_error_positions(text, line, col):
    with pytest.raises(ParseError) as exc:
        parse_state(text)
    assert (exc.value.line, exc.value.column) == (line, col)
    assert isinstance(exc.value, SyntaxError)


def test_unknown_names_and_wrong_side():
    with pytest.raises(KeyError):
        to_fock(parse_state("b(zz,1)"), V)
    with pytest.raises(ValueError):
        to_fock(parse_state("u(0;O,1)"), V)
    with pytest.raises(ValueError):
        to_hclass(parse_state("b(O,1)"), HS)


names = st.sampled_from(["v1", "w2", "O", "x_1", "a'"])
depths = st.integers(1, 5)
factor = st.one_of(
    st.just(Vac()),
    st.builds(Sector, st.lists(st.integers(-3, 3), max_size=3).map(tuple)),
    st.builds(Boson, names, depths),
    st.builds(Fermion, names, depths),
    st.builds(UAtom, st.lists(st.integers(-3, 3), max_size=3).map(tuple), names, depths),
)
coeff = st.fractions(min_value=-20, max_value=20, max_denominator=12).filter(lambda c: c != 0)
term = st.builds(Term, coeff, st.lists(factor, min_size=1, max_size=4).map(tuple))


@given(st.lists(term, min_size=1, max_size=4).map(tuple))
def test_parse_print_round_trip(ast):
    assert parse_state(format_expr(ast)) == ast


@given(st.randoms())
def test_fock_print_parse(rnd):
    keys = [k for sec in [(-1,), (0,), (1,)] for k in V.basis_upto(sec, 3)]
    s = FockState()
    for _ in range(3):
        s = s + FockState({rnd.choice(keys): Fraction(rnd.randint(-5, 5), rnd.randint(1, 4))})
    assert to_fock(parse_state(format_fock(s, L)), V) == s if s else format_fock(s, L) == "0"
