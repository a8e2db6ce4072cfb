from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from toricqd.cohomology import HLaurent, RingMismatchError, bundle_ring, invert_linear_factor, pullback
from toricqd.toric import BundleSpec, ProjectiveBundle, ToricVariety, hirzebruch_fan, projective_space

P3 = projective_space(3).cohomology
F1 = ToricVariety(hirzebruch_fan(1)).cohomology

small = st.fractions(min_value=-4, max_value=4, max_denominator=4)


def nilpotent(ring, coeffs):
    """Class with zero degree-0 part built from basis coefficients."""
    vec = [Fraction(0)] + [Fraction(c) for c in coeffs[: ring.dim - 1]]
    vec += [Fraction(0)] * (ring.dim - len(vec))
    return ring.from_coefficients(vec)


@pytest.mark.parametrize("ring", [P3, F1], ids=["P3", "F1"])
@given(coeffs=st.lists(small, min_size=5, max_size=5), m=st.integers(-5, 5).filter(bool))
def test_invert_multiply_back(ring, coeffs, m):
    c = nilpotent(ring, coeffs)
    inv = invert_linear_factor(c, m)
    assert inv * HLaurent.linear_factor(c, m) == HLaurent.one(ring)


def test_invert_expansion_against_sympy():
    p, h = sympy.symbols("p h")
    c = P3.gen(0)
    ours = invert_linear_factor(c, 2)
    series = sympy.series(1 / (p + 2 * h), p, 0, 4).removeO()
    for j in range(4):
        coeff = sympy.simplify(series.coeff(p, j))
        e = sympy.degree(sympy.denom(coeff), h)
        val = sympy.Rational(coeff * h**e)
        got = ours.coefficient(-e).coefficients[j]
        assert got == Fraction(int(val.p), int(val.q))


def test_invert_errors():
    with pytest.raises(ZeroDivisionError):
        invert_linear_factor(P3.gen(0), 0)
    with pytest.raises(ValueError):
        invert_linear_factor(P3.one(), 1)


def test_graded_dimensions_and_top_degree():
    assert P3.graded_dimensions() == [1, 1, 1, 1]
    assert F1.graded_dimensions() == [1, 2, 1]


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        P3.gen(0) + F1.gen(0)


def test_bundle_relation_holds():
    base = projective_space(2)
    matrix = [[0], [1], [2]]
    ring = bundle_ring(base.cohomology, matrix)
    z, p = ring.gen("z"), ring.gen("p1")
    assert (z * (z - p) * (z - p * 2)).is_zero()
    assert not (z * (z - p)).is_zero()
    assert ring.dim == 9


def test_extension_and_fan_presentations_agree():
    for base, matrix in [(projective_space(1), [[0], [1]]), (projective_space(2), [[0], [1]]), (projective_space(1), [[0], [0]])]:
        b = ProjectiveBundle(BundleSpec(base, matrix))
        ext = bundle_ring(base.cohomology, matrix)
        assert b.variety.cohomology.same_presentation(ext)


def test_pullback():
    base = projective_space(2)
    ring = bundle_ring(base.cohomology, [[0], [1]])
    x = base.cohomology.gen(0) ** 2
    assert pullback(x, ring) == ring.gen("p1") ** 2


def test_laurent_printing():
    c = P3.gen(0)
    assert str(invert_linear_factor(c, 1)) == "hbar^-1 + (-p1)*hbar^-2 + (p1^2)*hbar^-3 + (-p1^3)*hbar^-4"
