import warnings

import pytest
from hypothesis import given, strategies as st

from conftest import laurent_dict
from oracles import projective_i
from toricqd.cohomology import HLaurent, invert_linear_factor
from toricqd.generators import (
    EulerSpec,
    TwistSpec,
    bundle_i_function,
    hypergeometric_ratio,
    lambda_sets,
    mirror_to_j,
    toric_i_function,
    twist_factor,
    verify_conjecture_two_routes,
)
from toricqd.series import MirrorRegimeError, NovikovSeries, extract_one_over_hbar_part
from toricqd.toric import BundleSpec, ProjectiveBundle, ToricVariety, hirzebruch_fan, product_fan, projective_space, projective_space_fan


@pytest.mark.parametrize("n", [1, 2, 3])
def test_projective_i_function_against_oracle(n):
    I = toric_i_function(projective_space(n), bound=3)
    for d in range(4):
        assert laurent_dict(I[(d,)]) == (projective_i(n, d) if d else {(0, (0,)): 1})


def test_product_i_function_factorizes():
    tv = ToricVariety(product_fan(projective_space_fan(1), projective_space_fan(1)))
    I = toric_i_function(tv, bound=4)
    one = toric_i_function(projective_space(1), bound=4)
    for (a, b), val in I.items():
        left, right = laurent_dict(one[(a,)]), laurent_dict(one[(b,)])
        expected = {}
        for (e1, (i,)), x in left.items():
            for (e2, (j,)), y in right.items():
                key = (e1 + e2, (i, j))
                expected[key] = expected.get(key, 0) + x * y
        assert laurent_dict(val) == {k: v for k, v in expected.items() if v}
    inv = invert_linear_factor(tv.cohomology.gen(0), 1)
    assert I[(1, 0)] == inv * inv


def test_negative_pairing_gives_polynomial_factor():
    x = projective_space(2).cohomology.gen(0)
    r = hypergeometric_ratio(x, -2)
    # (x - hbar) * x
    assert r == HLaurent.linear_factor(x, -1) * HLaurent.constant(x)


def test_twist_factor_example():
    spec = BundleSpec(projective_space(1), [[0], [1]])
    tw = TwistSpec(spec)
    z, p = tw.ring.gen("z"), tw.ring.gen("p1")
    expected = invert_linear_factor(z, 1) * invert_linear_factor(z - p, 1)
    assert twist_factor(tw, 1, (0,)) == expected
    assert twist_factor(tw, 0, (0,)) == HLaurent.one(tw.ring)


@given(nu=st.integers(0, 3), beta=st.integers(0, 3))
def test_twist_multiply_back(nu, beta):
    spec = BundleSpec(projective_space(2), [[0], [1], [2]])
    tw = TwistSpec(spec)
    val = tw.twist_factor(nu, (beta,))
    for i, x in enumerate(tw.lines):
        m = nu - spec.pairing(i, (beta,))
        if m > 0:
            for k in range(1, m + 1):
                val = val * HLaurent.linear_factor(x, k)
        elif m < 0:
            for k in range(m + 1, 0):
                val = val * invert_linear_factor(x, k)
    # after multiplying back, only the m = 0 factor x of each negative block remains
    leftover = HLaurent.one(tw.ring)
    for i, x in enumerate(tw.lines):
        if nu - spec.pairing(i, (beta,)) < 0:
            leftover = leftover * HLaurent.constant(x)
    assert val == leftover


def test_trivial_bundle_matches_product_fan():
    base = projective_space(2)
    spec = BundleSpec(base, [[0], [0]])
    bundle = ProjectiveBundle(spec)
    tw = TwistSpec(spec)
    I_bundle = bundle_i_function(tw, toric_i_function(base, bound=3), bundle, 3)
    prod = ToricVariety(product_fan(projective_space_fan(2), projective_space_fan(1)))
    I_prod = toric_i_function(prod, bound=3)
    assert sorted(I_bundle.coeffs) == sorted(k for k in I_prod.coeffs if bundle.variety.degree(k) <= 3)
    for key in I_bundle.coeffs:
        assert laurent_dict(I_bundle[key]) == laurent_dict(I_prod[key])


def test_mirror_is_identity_for_fano():
    I = toric_i_function(projective_space(3), bound=3)
    assert mirror_to_j(I) is I


def test_mirror_for_cubic_threefold_section():
    I = toric_i_function(projective_space(3), EulerSpec([[3]]), 3)
    J = mirror_to_j(I)
    assert J[(1,)] == I[(1,)] - HLaurent.hbar_power(I.ring, -1, 6)
    assert extract_one_over_hbar_part(J).P.coeffs == {}


def test_mirror_regime_error():
    tv = projective_space(1)
    one = HLaurent.one(tv.cohomology)
    s = NovikovSeries(tv.cohomology, toric_i_function(tv, bound=1).grading, {(0,): one, (1,): one}, 1)
    with pytest.raises(MirrorRegimeError):
        mirror_to_j(s)


def test_negative_euler_pairing_rejected():
    with pytest.raises(ValueError):
        toric_i_function(projective_space(1), EulerSpec([[-1]]), 2)


def test_lambda_sets_examples():
    p3 = projective_space(3)
    rep = lambda_sets(ProjectiveBundle(BundleSpec(p3, [[0], [0]])), EulerSpec([[3]]), 3)
    assert rep.lambda2 == [(1,)] and rep.lambda1 == [(1, 0)]
    assert rep.structure_ok and rep.twist_trivial_ok
    rep = lambda_sets(ProjectiveBundle(BundleSpec(p3, [[0], [1]])), EulerSpec([[1]]), 3)
    assert rep.lambda1 == [] and rep.lambda2 == []
    rep = lambda_sets(ProjectiveBundle(BundleSpec(projective_space(2), [[0], [1]])), EulerSpec(), 3)
    assert rep.lambda1 == [] and rep.lambda2 == []


def test_lambda_sets_skip_when_hypothesis_fails():
    with pytest.warns(UserWarning):
        rep = lambda_sets(ProjectiveBundle(BundleSpec(projective_space(1), [[0], [-1]])), EulerSpec(), 3)
    assert rep.structure_ok is None


def test_twist_shift_stability_on_lambda2():
    p3 = projective_space(3)
    tw = TwistSpec(BundleSpec(p3, [[0], [0]]))
    for nu in range(3):
        for d in range(3):
            assert tw.twist_factor(nu, (d,)) == tw.twist_factor(nu, (d + 1,))


@pytest.mark.parametrize(
    "base,matrix",
    [
        (projective_space(1), [[0], [0]]),
        (projective_space(1), [[0], [1]]),
        (projective_space(2), [[0], [1]]),
        (projective_space(1), [[0], [1], [1]]),
        (ToricVariety(hirzebruch_fan(1)), [[0, 0], [0, 1]]),
    ],
)
def test_two_routes_agree(base, matrix):
    rep = verify_conjecture_two_routes(BundleSpec(base, matrix), bound=3)
    assert rep.passed, rep.first_divergence
    # Fano total spaces: no scalar 1/hbar part on route A
    for key, val in rep.route_a.items():
        if any(key):
            assert val.coefficient(-1).is_zero()


def test_two_routes_with_euler_twist():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = verify_conjecture_two_routes(BundleSpec(projective_space(3), [[0], [0]]), EulerSpec([[3]]), bound=2)
    assert rep.passed and rep.p_equal
    assert rep.P1_support == [(1, 0)] and rep.P2_support == [(1,)]
