from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from toricqd.algebra import IdealNormalizer, Polynomial, groebner_basis
from toricqd.algebra import linalg

X = ("x", "y", "z")
SX = sympy.symbols("x y z")


def to_sympy(f: Polynomial):
    return sympy.Add(
        sympy.Integer(0),
        *[
            sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s**e for s, e in zip(SX, m)])
            for m, c in f.terms.items()
        ],
    )


def from_sympy(expr) -> Polynomial:
    poly = sympy.Poly(expr, *SX)
    return Polynomial(X, {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})


monos = st.tuples(*[st.integers(0, 2)] * 3)
coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=3)
polys = st.dictionaries(monos, coeffs, min_size=1, max_size=3).map(lambda t: Polynomial(X, t))


def test_arithmetic_and_printing():
    x, y = Polynomial.gen(X, 0), Polynomial.gen(X, 1)
    f = (x + y) ** 2 - x * y * 2
    assert f == x * x + y * y
    assert f.to_string() == "x^2 + y^2"
    assert (x - x).is_zero()
    assert Polynomial.linear(X, [1, -1, 0], 2).to_string() == "x - y + 2"


def test_leading_monomial_is_grevlex():
    x, y, z = (Polynomial.gen(X, i) for i in range(3))
    # grevlex: x*z^2 < y^3 (same degree, smaller last exponent wins)
    assert (x * z * z + y**3).leading_monomial() == (0, 3, 0)


@given(st.lists(polys, min_size=1, max_size=3))
def test_groebner_matches_sympy(gens):
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return
    ours = groebner_basis(gens)
    theirs = sympy.groebner([to_sympy(g) for g in gens], *SX, order="grevlex", domain="QQ")
    theirs_monic = {from_sympy(sympy.expand(g / sympy.Poly(g, *SX).LC(order="grevlex"))) for g in theirs.exprs}
    ours_monic = {g.scale(1 / g.leading_coefficient()) for g in ours}
    assert ours_monic == theirs_monic


@given(st.lists(polys, min_size=1, max_size=2), polys)
def test_reduce_matches_sympy(gens, f):
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return
    norm = IdealNormalizer(X, gens)
    theirs = sympy.groebner([to_sympy(g) for g in gens], *SX, order="grevlex", domain="QQ")
    _, rem = theirs.reduce(to_sympy(f))
    assert norm.reduce(f) == (from_sympy(rem) if rem != 0 else Polynomial.zero(X))
    assert norm.contains(f - norm.reduce(f))


def test_quotient_basis_of_projective_plane():
    v = ("p",)
    norm = IdealNormalizer(v, [Polynomial(v, {(3,): 1})])
    assert [m for m in norm.quotient_basis()] == [(0,), (1,), (2,)]


def test_arity_mismatch():
    norm = IdealNormalizer(X, [Polynomial.gen(X, 0)])
    with pytest.raises(ValueError):
        norm.reduce(Polynomial.gen(("a",), 0))


ints = st.integers(-4, 4)
square3 = st.lists(st.lists(ints, min_size=3, max_size=3), min_size=3, max_size=3)


@given(square3)
def test_linalg_against_sympy(m):
    sm = sympy.Matrix(m)
    assert linalg.determinant(m) == sm.det()
    assert linalg.rank(m) == sm.rank()
    if sm.det() != 0:
        inv = linalg.inverse(m)
        assert [[sympy.Rational(x.numerator, x.denominator) for x in row] for row in inv] == sm.inv().tolist()
    for v in linalg.nullspace(m, 3):
        assert all(x == 0 for x in linalg.matvec(m, v))
    assert len(linalg.nullspace(m, 3)) == 3 - sm.rank()
