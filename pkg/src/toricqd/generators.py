"""Hypergeometric I-functions, the projective-bundle twisting factor and the
simple mirror map, plus the two-route comparison for split bundles."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from toricqd.cohomology import CohClass, CohRing, HLaurent, bundle_ring, invert_linear_factor, pullback
from toricqd.parallel import pmap
from toricqd.series import (
    Grading,
    Key,
    MirrorRegimeError,
    NovikovSeries,
    SeriesError,
    exp_of_h_inverse,
    extract_one_over_hbar_part,
)
from toricqd.toric.bundle import BundleSpec, ProjectiveBundle
from toricqd.toric.variety import ToricVariety

INJECTIVITY_WARNING = (
    "complete-intersection conclusions need i_*: H_2(X) -> H_2(Y) to be injective; "
    "this is not checked (it fails e.g. for the quadric surface in P^3)"
)


def hypergeometric_ratio(x: CohClass, n: int) -> HLaurent:
    """``prod_{m<=0}(x + mℏ) / prod_{m<=n}(x + mℏ)`` as a finite Laurent polynomial.

    ``n > 0``: inverse of ``prod_{m=1}^{n}(x + mℏ)``; ``n < 0``:
    ``prod_{m=n+1}^{0}(x + mℏ)``, which includes the factor ``x`` itself.
    """
    ring = x.ring
    result = HLaurent.one(ring)
    if n > 0:
        for m in range(1, n + 1):
            result = result * invert_linear_factor(x, m)
    elif n < 0:
        for m in range(n + 1, 1):
            result = result * HLaurent.linear_factor(x, m)
    return result


def rising_product(x: CohClass, n: int) -> HLaurent:
    """``prod_{m=1}^{n}(x + mℏ)`` for ``n >= 0``."""
    if n < 0:
        raise ValueError("rising product needs n >= 0")
    result = HLaurent.one(x.ring)
    for m in range(1, n + 1):
        result = result * HLaurent.linear_factor(x, m)
    return result


class _FactorCache:
    """Memoizes ratio and Euler factors per (class, pairing) for one ring."""

    def __init__(self):
        self._ratio: Dict[tuple, HLaurent] = {}
        self._rise: Dict[tuple, HLaurent] = {}

    def ratio(self, x: CohClass, n: int) -> HLaurent:
        key = (x.vec, n)
        val = self._ratio.get(key)
        if val is None:
            val = self._ratio[key] = hypergeometric_ratio(x, n)
        return val

    def rise(self, x: CohClass, n: int) -> HLaurent:
        key = (x.vec, n)
        val = self._rise.get(key)
        if val is None:
            val = self._rise[key] = rising_product(x, n)
        return val


@dataclass(frozen=True)
class EulerSpec:
    """First Chern classes of ``E = L'_1 + ... + L'_M`` in the nef basis."""

    classes: Tuple[Tuple[int, ...], ...] = ()

    def __init__(self, classes: Sequence[Sequence[int]] = ()):
        object.__setattr__(self, "classes", tuple(tuple(int(x) for x in c) for c in classes))

    def __bool__(self):
        return bool(self.classes)

    def total(self, k: int) -> Tuple[int, ...]:
        return tuple(sum(c[j] for c in self.classes) for j in range(k))

    def pullback(self) -> "EulerSpec":
        """Same classes on a projective bundle (zero z-coordinate)."""
        return EulerSpec([list(c) + [0] for c in self.classes])

    def check(self, tv: ToricVariety) -> List[bool]:
        for c in self.classes:
            if len(c) != tv.picard_rank:
                raise ValueError(f"Euler class {list(c)} does not have {tv.picard_rank} entries")
        return [tv.is_nef(c) for c in self.classes]


def _pair(a: Sequence[int], d: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, d))


def toric_i_function(
    tv: ToricVariety,
    euler: EulerSpec = EulerSpec(),
    bound: int = 3,
    keys: Optional[Sequence[Key]] = None,
    ring: Optional[CohRing] = None,
    workers: int = 1,
) -> NovikovSeries:
    """Toric (optionally Euler-twisted) I-function, truncated at ample degree ``bound``."""
    ring = ring or tv.cohomology
    if ring.variables != tv.names:
        raise ValueError("ring generators must be the variety's nef basis")
    euler.check(tv)
    rays = [ring.linear(row) for row in tv.divisor_classes]
    lines = [ring.linear(c) for c in euler.classes]
    cache = _FactorCache()
    if keys is None:
        keys = tv.enumerate_effective(bound)

    def coefficient(d):
        value = HLaurent.one(ring)
        for cls, x in zip(euler.classes, lines):
            n = _pair(cls, d)
            if n < 0:
                raise ValueError(f"Euler class {list(cls)} pairs negatively with {list(d)}")
            value = value * cache.rise(x, n)
        for row, x in zip(tv.divisor_classes, rays):
            n = _pair(row, d)
            if n:
                value = value * cache.ratio(x, n)
        return value

    keys = list(keys)
    values = pmap(coefficient, keys, workers)
    return NovikovSeries(ring, Grading.of(tv), dict(zip(keys, values)), bound)


@dataclass
class TwistSpec:
    """Split bundle data with its extension-presentation cohomology ring."""

    bundle: BundleSpec
    ring: CohRing = field(init=False)
    lines: List[CohClass] = field(init=False)

    def __post_init__(self):
        base = self.bundle.base
        self.ring = bundle_ring(base.cohomology, self.bundle.matrix)
        z = self.ring.gen("z")
        self.lines = [z - self.ring.linear(list(row) + [0]) for row in self.bundle.matrix]
        self._cache = _FactorCache()

    @property
    def matrix(self):
        return self.bundle.matrix

    @property
    def k(self) -> int:
        return self.bundle.base.picard_rank

    def twist_factor(self, nu: int, beta: Sequence[int]) -> HLaurent:
        value = HLaurent.one(self.ring)
        for i, x in enumerate(self.lines):
            m = nu - self.bundle.pairing(i, beta)
            if m:
                value = value * self._cache.ratio(x, m)
        return value


def twist_factor(spec: TwistSpec, nu: int, beta: Sequence[int]) -> HLaurent:
    """The twisting factor at (nu, beta), over the extension ring of ``spec``."""
    if not spec.bundle.base.is_effective(beta):
        raise SeriesError(f"beta = {list(beta)} is not effective")
    return spec.twist_factor(nu, beta)


def bundle_i_function(
    spec: TwistSpec,
    base_series: NovikovSeries,
    bundle: ProjectiveBundle,
    bound: int = 3,
    fiber_bound: Optional[int] = None,
    workers: int = 1,
) -> NovikovSeries:
    """``sum q1^nu q2^beta T_{nu,beta} pi^* S_beta`` for a base series ``S``."""
    grading = Grading.of(bundle.variety)
    keys = [
        key
        for key in bundle.variety.enumerate_effective(bound)
        if fiber_bound is None or key[-1] <= fiber_bound
    ]
    for key in keys:
        beta = key[:-1]
        if base_series.degree(beta) > base_series.truncation:
            raise SeriesError(
                f"base series truncated at {base_series.truncation} but beta = {list(beta)} is needed"
            )
    ring = spec.ring

    def coefficient(key):
        nu, beta = key[-1], key[:-1]
        base_val = base_series[beta]
        if base_val.is_zero():
            return HLaurent(ring)
        lifted = HLaurent.from_classes(ring, {e: pullback(c, ring) for e, c in base_val.items()})
        return spec.twist_factor(nu, beta) * lifted

    values = pmap(coefficient, keys, workers)
    return NovikovSeries(ring, grading, dict(zip(keys, values)), bound)


def mirror_to_j(I: NovikovSeries, ample_certificate: Optional[bool] = None, workers: int = 1) -> NovikovSeries:
    """``J = exp(-P/ℏ) I`` where ``P/ℏ`` is the scalar 1/ℏ part of ``I``."""
    if ample_certificate is False:
        warnings.warn("mirror map used without the ampleness hypothesis", stacklevel=2)
    data = extract_one_over_hbar_part(I)
    if not data.simple:
        raise MirrorRegimeError("beyond simple mirror regime: " + "; ".join(data.reasons))
    if not data.P.coeffs:
        return I
    return exp_of_h_inverse(-data.P, workers).mul(I, workers)


# -- hypotheses ------------------------------------------------------------------


@dataclass
class Hypothesis:
    name: str
    holds: bool
    detail: str = ""
    fatal: bool = True

    def as_dict(self) -> dict:
        return {"name": self.name, "holds": self.holds, "detail": self.detail, "fatal": self.fatal}


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def hypothesis_ledger(spec: Optional[BundleSpec], euler: EulerSpec, base: ToricVariety) -> List[Hypothesis]:
    out: List[Hypothesis] = []
    k = base.picard_rank
    for a, ok in enumerate(euler.check(base), start=1):
        out.append(Hypothesis(f"L'_{a} semiample (nef)", ok, str(list(euler.classes[a - 1]))))
    anti = _sub(base.anticanonical(), euler.total(k))
    out.append(
        Hypothesis("-K_Y - sum c1(L'_a) ample (simple mirror map on the base)", base.is_ample(anti), str(list(anti)))
    )
    if spec is not None:
        for i, ok in enumerate(spec.nef_lines(), start=1):
            out.append(Hypothesis(f"L_{i} nef (bundle precondition)", ok, str(list(spec.matrix[i]))))
        cls = _sub(anti, spec.first_chern())
        out.append(Hypothesis("-K_X - sum c1(L'_a) - c1(V) ample", base.is_ample(cls), str(list(cls))))
    if euler:
        out.append(Hypothesis("i_* injective on H_2", True, INJECTIVITY_WARNING, fatal=False))
    return out


# -- Lambda sets -----------------------------------------------------------------


@dataclass
class LambdaReport:
    lambda1: List[Key]
    lambda2: List[Key]
    hypothesis: bool
    structure_ok: Optional[bool]
    twist_trivial_ok: Optional[bool]
    warnings: List[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "lambda1": [list(k) for k in self.lambda1],
            "lambda2": [list(k) for k in self.lambda2],
            "hypothesis": self.hypothesis,
            "structure_ok": self.structure_ok,
            "twist_trivial_ok": self.twist_trivial_ok,
            "warnings": list(self.warnings),
        }


def lambda_sets(bundle: ProjectiveBundle, euler: EulerSpec, bound: int = 3, twist: Optional[TwistSpec] = None) -> LambdaReport:
    """Predicted supports of the 1/ℏ parts on the bundle and on the base."""
    base, total = bundle.base, bundle.variety
    k, r, n = base.picard_rank, base.nrays, bundle.spec.rank
    shifted = euler.total(k)
    anti_base = _sub(base.anticanonical(), shifted)
    anti_total = _sub(total.anticanonical(), tuple(shifted) + (0,))

    lam1 = []
    for key in total.enumerate_effective(bound):
        if _pair(anti_total, key) != 1:
            continue
        if any(_pair(total.divisor_classes[r + j], key) < 0 for j in range(n + 1)):
            continue
        if any(_pair(total.divisor_classes[i], key) < 0 for i in range(r)):
            continue
        lam1.append(key)
    base_bound = max([base.degree(key[:-1]) for key in total.enumerate_effective(bound)] + [0])
    lam2 = [
        d
        for d in base.enumerate_effective(base_bound)
        if _pair(anti_base, d) == 1 and all(_pair(row, d) >= 0 for row in base.divisor_classes)
    ]
    hyp_class = _sub(anti_base, bundle.spec.first_chern())
    hypothesis = base.is_ample(hyp_class) and all(bundle.spec.nef_lines()) and all(euler.check(base))
    report = LambdaReport(lam1, lam2, hypothesis, None, None)
    if not hypothesis:
        report.warnings.append("hypotheses (nef L_i, semiample L'_a, ampleness) fail; structural assertions skipped")
        warnings.warn(report.warnings[-1], stacklevel=2)
        return report
    predicted = sorted(
        (tuple(d) + (0,) for d in lam2 if total.degree(tuple(d) + (0,)) <= bound),
        key=lambda c: (total.degree(c), c),
    )
    report.structure_ok = predicted == lam1
    twist = twist or TwistSpec(bundle.spec)
    one = HLaurent.one(twist.ring)
    report.twist_trivial_ok = all(twist.twist_factor(0, d) == one for d in lam2)
    return report


# -- two-route comparison ----------------------------------------------------------


@dataclass
class RouteReport:
    passed: bool
    keys_checked: List[Key]
    mismatches: List[Key]
    first_divergence: Optional[dict]
    presentations_agree: bool
    p_equal: bool
    P1_support: List[Key]
    P2_support: List[Key]
    hypotheses: List[Hypothesis]
    route_a: NovikovSeries
    route_b: NovikovSeries
    base_j: NovikovSeries

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "keys_checked": [list(k) for k in self.keys_checked],
            "mismatches": [list(k) for k in self.mismatches],
            "first_divergence": self.first_divergence,
            "presentations_agree": self.presentations_agree,
            "P1_equals_P2": self.p_equal,
            "P1_support": [list(k) for k in self.P1_support],
            "P2_support": [list(k) for k in self.P2_support],
            "hypotheses": [h.as_dict() for h in self.hypotheses],
        }


def verify_conjecture_two_routes(
    spec: BundleSpec,
    euler: EulerSpec = EulerSpec(),
    bound: int = 3,
    fiber_bound: Optional[int] = None,
    workers: int = 1,
    bundle: Optional[ProjectiveBundle] = None,
) -> RouteReport:
    """Compare the total-space I-function route with the twisted base-series route."""
    bundle = bundle or ProjectiveBundle(spec)
    base, total = bundle.base, bundle.variety
    hyps = hypothesis_ledger(spec, euler, base)
    if euler:
        warnings.warn(INJECTIVITY_WARNING, stacklevel=2)
    twist = TwistSpec(spec)

    keys = [key for key in total.enumerate_effective(bound) if fiber_bound is None or key[-1] <= fiber_bound]

    # route A: toric I of the total space, then the simple mirror map
    I_a = toric_i_function(total, euler.pullback(), bound, workers=workers)
    exp_a = extract_one_over_hbar_part(I_a)
    J_a = mirror_to_j(I_a, workers=workers)

    # route B: mirror map on the base, then twist and pull back
    base_bound = max([base.degree(key[:-1]) for key in keys] + [0])
    I_base = toric_i_function(base, euler, base_bound, workers=workers)
    exp_b = extract_one_over_hbar_part(I_base)
    J_base = mirror_to_j(I_base, workers=workers)
    J_b = bundle_i_function(twist, J_base, bundle, bound, fiber_bound, workers=workers)

    agree = total.cohomology.same_presentation(twist.ring)
    if not agree:
        raise SeriesError("bundle-fan and extension presentations of H*(P(V)) differ")
    J_a_in_b = J_a.transfer(twist.ring)

    mismatches = []
    first = None
    for key in keys:
        a, b = J_a_in_b[key], J_b[key]
        if a != b:
            mismatches.append(key)
            if first is None:
                first = {"key": list(key), "route_a": str(a), "route_b": str(b)}

    P1 = {k: v for k, v in exp_a.P.transfer(twist.ring).coeffs.items()}
    P2_lift = {
        tuple(k) + (0,): HLaurent.from_classes(twist.ring, {e: pullback(c, twist.ring) for e, c in v.items()})
        for k, v in exp_b.P.coeffs.items()
        if total.degree(tuple(k) + (0,)) <= bound
    }
    p_equal = P1 == P2_lift
    return RouteReport(
        passed=not mismatches and p_equal,
        keys_checked=keys,
        mismatches=mismatches,
        first_divergence=first,
        presentations_agree=agree,
        p_equal=p_equal,
        P1_support=exp_a.support,
        P2_support=exp_b.support,
        hypotheses=hyps,
        route_a=J_a_in_b,
        route_b=J_b,
        base_j=J_base,
    )
