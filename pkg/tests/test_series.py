import pytest
from hypothesis import given, strategies as st

from oracles import h, hbar_inverse_scalar, p, projective_i
from toricqd.cohomology import HLaurent
from toricqd.generators import EulerSpec, toric_i_function
from toricqd.series import (
    Grading,
    MirrorRegimeError,
    NovikovSeries,
    SeriesError,
    exp_of_h_inverse,
    extract_one_over_hbar_part,
    gw_descendants,
)
from toricqd.toric import ToricVariety, product_fan, projective_space, projective_space_fan

P1xP1 = ToricVariety(product_fan(projective_space_fan(1), projective_space_fan(1)))
RING = P1xP1.cohomology
GRADING = Grading.of(P1xP1)


def random_series(data, bound=3):
    keys = P1xP1.enumerate_effective(bound)
    coeffs = {}
    for key in keys:
        terms = data.draw(st.dictionaries(st.integers(-3, 0), st.integers(-3, 3), max_size=2))
        val = HLaurent(RING)
        for e, c in terms.items():
            val = val + HLaurent.hbar_power(RING, e, c)
        coeffs[key] = val * RING.linear([data.draw(st.integers(-2, 2)), 1], 1)
    return NovikovSeries(RING, GRADING, coeffs, bound)


@given(st.data())
def test_product_is_commutative_and_associative(data):
    a, b, c = (random_series(data) for _ in range(3))
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_truncation_and_effectivity():
    one = HLaurent.one(RING)
    s = NovikovSeries(RING, GRADING, {(0, 0): one, (3, 1): one}, 2)
    assert s.keys() == [(0, 0)]
    with pytest.raises(SeriesError):
        NovikovSeries(RING, GRADING, {(-1, 0): one}, 2)


def test_exp_inverse_identity():
    P = NovikovSeries(RING, GRADING, {(1, 0): HLaurent.hbar_power(RING, -1, 2), (0, 1): HLaurent.hbar_power(RING, -1, -1)}, 4)
    unit = NovikovSeries.unit(RING, GRADING, 4, 2)
    assert exp_of_h_inverse(P) * exp_of_h_inverse(-P) == unit
    e = exp_of_h_inverse(P)
    # coefficient of q1^2 is (2/hbar)^2 / 2
    assert e[(2, 0)] == HLaurent.hbar_power(RING, -2, 2)


def test_exp_rejects_non_scalar():
    P = NovikovSeries(RING, GRADING, {(1, 0): HLaurent.constant(RING.gen(0)).shift(-1)}, 2)
    with pytest.raises(MirrorRegimeError):
        exp_of_h_inverse(P)


def test_p3_cubic_mirror_coefficient():
    p3 = projective_space(3)
    I = toric_i_function(p3, EulerSpec([[3]]), 3)
    data = extract_one_over_hbar_part(I)
    oracle = hbar_inverse_scalar((3 * p + h) * (3 * p + 2 * h) * (3 * p + 3 * h) / (p + h) ** 4)
    assert oracle == 6
    assert data.simple
    assert data.support == [(1,)]
    assert data.P[(1,)] == HLaurent.hbar_power(I.ring, -1, oracle)


def test_hbar_zero_term_is_not_simple():
    p1 = projective_space(1)
    one = HLaurent.one(p1.cohomology)
    s = NovikovSeries(p1.cohomology, Grading.of(p1), {(0,): one, (1,): one}, 2)
    assert not extract_one_over_hbar_part(s).simple


def test_gw_descendants_examples():
    for n, expected in [(1, ["1", "-2*p1"]), (2, ["0", "1", "-3*p1", "6*p1^2"])]:
        J = toric_i_function(projective_space(n), bound=2)
        got = [str(c) for c in gw_descendants(J, (1,))]
        assert got == expected
        assert gw_descendants(J, (0,)) == []
        with pytest.raises(SeriesError):
            gw_descendants(J, (3,))


def test_gw_descendants_agree_with_oracle():
    J = toric_i_function(projective_space(2), bound=3)
    for d in (1, 2, 3):
        oracle = projective_i(2, d)
        desc = gw_descendants(J, (d,))
        for k, c in enumerate(desc):
            for (j,), x in c.sorted_terms():
                assert oracle[(-(2 + k), (j,))] == x


def test_canonical_json_independent_of_workers():
    tv = projective_space(2)
    a = toric_i_function(tv, bound=4, workers=1)
    b = toric_i_function(tv, bound=4, workers=4)
    assert a.to_json() == b.to_json()
    assert a.mul(a, workers=3).to_json() == a.mul(a).to_json()
