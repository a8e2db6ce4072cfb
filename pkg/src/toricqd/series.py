"""Truncated series over the Novikov semigroup with ℏ-Laurent coefficients.

A series is stored with its ``exp(tp/ℏ)`` prefactor stripped: only the
coefficients ``S_d`` of ``q^d`` are kept.  Keys are curve classes in
nef-basis coordinates; truncation is by the degree against a fixed ample
class.  ``reliable`` is the part of the window that is still exact after
operators moved coefficients around.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from toricqd.cohomology import CohClass, CohRing, HLaurent, RingMismatchError
from toricqd.parallel import pmap

Key = Tuple[int, ...]


@dataclass(frozen=True)
class Grading:
    """Ample class used for truncation, plus the Mori cone facets for membership."""

    ample: Tuple[int, ...]
    facets: Tuple[Tuple[int, ...], ...] = ()

    @classmethod
    def of(cls, variety) -> "Grading":
        return cls(tuple(variety.ample), tuple(tuple(f) for f in variety.mori.facets))

    def degree(self, key: Sequence[int]) -> int:
        return sum(a * d for a, d in zip(self.ample, key))

    def contains(self, key: Sequence[int]) -> bool:
        return all(sum(n * d for n, d in zip(f, key)) >= 0 for f in self.facets)

    def sort_key(self, key: Sequence[int]):
        return (self.degree(key), tuple(key))


class SeriesError(ValueError):
    pass


class MirrorRegimeError(SeriesError):
    """The ℏ^{-1} part of an I-function is outside the simple mirror regime."""


class NovikovSeries:
    def __init__(
        self,
        ring: CohRing,
        grading: Grading,
        coeffs: Optional[Dict[Key, HLaurent]] = None,
        truncation: int = 0,
        reliable: Optional[int] = None,
    ):
        self.ring = ring
        self.grading = grading
        self.truncation = truncation
        self.reliable = truncation if reliable is None else min(reliable, truncation)
        self.coeffs: Dict[Key, HLaurent] = {}
        for key, val in (coeffs or {}).items():
            key = tuple(key)
            if grading.degree(key) > truncation or val.is_zero():
                continue
            if val.ring is not ring:
                raise RingMismatchError("coefficient over a different ring")
            if grading.facets and not grading.contains(key):
                raise SeriesError(f"key {list(key)} is not effective")
            self.coeffs[key] = val

    # -- constructors -------------------------------------------------------

    @classmethod
    def unit(cls, ring: CohRing, grading: Grading, truncation: int, nkeys: int) -> "NovikovSeries":
        return cls(ring, grading, {(0,) * nkeys: HLaurent.one(ring)}, truncation)

    @classmethod
    def monomial(cls, ring, grading, key, value: HLaurent, truncation: int) -> "NovikovSeries":
        return cls(ring, grading, {tuple(key): value}, truncation)

    def _like(self, coeffs, truncation=None, reliable=None) -> "NovikovSeries":
        t = self.truncation if truncation is None else truncation
        r = self.reliable if reliable is None else reliable
        return NovikovSeries(self.ring, self.grading, coeffs, t, r)

    # -- access -------------------------------------------------------------

    def keys(self) -> List[Key]:
        return sorted(self.coeffs, key=self.grading.sort_key)

    def __getitem__(self, key) -> HLaurent:
        return self.coeffs.get(tuple(key), HLaurent(self.ring))

    def __contains__(self, key) -> bool:
        return tuple(key) in self.coeffs

    def __len__(self):
        return len(self.coeffs)

    def degree(self, key) -> int:
        return self.grading.degree(key)

    def items(self):
        for k in self.keys():
            yield k, self.coeffs[k]

    def truncate(self, bound: int) -> "NovikovSeries":
        return self._like(
            {k: v for k, v in self.coeffs.items() if self.degree(k) <= bound},
            truncation=min(bound, self.truncation),
            reliable=min(bound, self.reliable),
        )

    def restrict(self, keep: Callable[[Key], bool]) -> "NovikovSeries":
        return self._like({k: v for k, v in self.coeffs.items() if keep(k)})

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "NovikovSeries") -> None:
        if other.ring is not self.ring:
            raise RingMismatchError("series over different rings")
        if other.grading.ample != self.grading.ample:
            raise SeriesError("series graded by different ample classes")

    def __add__(self, other: "NovikovSeries") -> "NovikovSeries":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return self._like(
            out,
            truncation=min(self.truncation, other.truncation),
            reliable=min(self.reliable, other.reliable),
        )

    def __neg__(self) -> "NovikovSeries":
        return self._like({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "NovikovSeries") -> "NovikovSeries":
        return self + (-other)

    def scale(self, c) -> "NovikovSeries":
        return self._like({k: v * Fraction(c) for k, v in self.coeffs.items()})

    def mul(self, other: "NovikovSeries", workers: int = 1) -> "NovikovSeries":
        """Cauchy product over the Novikov semigroup."""
        self._check(other)
        bound = min(self.truncation, other.truncation)
        reliable = min(self.reliable, other.reliable)
        deg = self.grading.degree
        pairs: Dict[Key, List[Tuple[Key, Key]]] = {}
        for ka in self.coeffs:
            da = deg(ka)
            if da > bound:
                continue
            for kb in other.coeffs:
                if da + deg(kb) > bound:
                    continue
                key = tuple(x + y for x, y in zip(ka, kb))
                pairs.setdefault(key, []).append((ka, kb))

        def one(key):
            acc = HLaurent(self.ring)
            for ka, kb in sorted(pairs[key]):
                acc = acc + self.coeffs[ka] * other.coeffs[kb]
            return acc

        keys = sorted(pairs, key=self.grading.sort_key)
        values = pmap(one, keys, workers)
        return NovikovSeries(self.ring, self.grading, dict(zip(keys, values)), bound, reliable)

    __mul__ = mul

    def __eq__(self, other):
        if not isinstance(other, NovikovSeries):
            return NotImplemented
        return (
            self.ring is other.ring
            and self.grading.ample == other.grading.ample
            and self.coeffs == other.coeffs
        )

    def transfer(self, ring: CohRing, grading: Optional[Grading] = None) -> "NovikovSeries":
        """The same series with coefficients re-expressed in another presentation."""
        return NovikovSeries(
            ring,
            grading or self.grading,
            {k: v.transfer(ring) for k, v in self.coeffs.items()},
            self.truncation,
            self.reliable,
        )

    # -- serialization ------------------------------------------------------

    def canonical(self) -> dict:
        """JSON-ready canonical form, identical across runs and worker counts."""
        coeffs = []
        for key in self.keys():
            laurent = []
            for e, c in self.coeffs[key].items():
                laurent.append([e, [[list(m), str(x)] for m, x in c.sorted_terms()]])
            coeffs.append({"key": list(key), "degree": self.degree(key), "laurent": laurent})
        return {
            "ring": {"variables": list(self.ring.variables), "basis": self.ring.basis_labels()},
            "ample": list(self.grading.ample),
            "truncation": self.truncation,
            "reliable": self.reliable,
            "coefficients": coeffs,
        }

    def to_json(self) -> str:
        return dumps_canonical(self.canonical())

    def __repr__(self):
        return f"<NovikovSeries keys={len(self.coeffs)} D={self.truncation} reliable={self.reliable}>"

    def pretty(self, names: Optional[Sequence[str]] = None) -> str:
        lines = []
        for key, val in self.items():
            lines.append(f"{novikov_monomial(key, names)}: {val}")
        return "\n".join(lines)


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def novikov_monomial(key: Sequence[int], names: Optional[Sequence[str]] = None) -> str:
    names = names or [f"q{j + 1}" for j in range(len(key))]
    parts = []
    for n, e in zip(names, key):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts) if parts else "1"


# -- operations -----------------------------------------------------------------


def mul_series(a: NovikovSeries, b: NovikovSeries, workers: int = 1) -> NovikovSeries:
    return a.mul(b, workers)


def _scalar_hinv(v: HLaurent) -> Optional[Fraction]:
    """``c`` when ``v = c ℏ^{-1}`` with ``c`` a degree-0 scalar, else ``None``."""
    if v.exponents() != [-1]:
        return None
    c = v.coefficient(-1)
    if c != c.ring.scalar(c.degree0()):
        return None
    return c.degree0()


def exp_of_h_inverse(P: NovikovSeries, workers: int = 1) -> NovikovSeries:
    """``exp(P)`` for ``P`` with coefficients ``c ℏ^{-1}`` and no constant term."""
    nkeys = len(P.grading.ample)
    zero_key = (0,) * nkeys
    for key, v in P.coeffs.items():
        if key == zero_key:
            raise MirrorRegimeError("P has a constant Novikov term")
        if P.degree(key) <= 0:
            raise MirrorRegimeError(f"key {list(key)} has non-positive degree")
        if _scalar_hinv(v) is None:
            raise MirrorRegimeError(f"coefficient at {list(key)} is not a scalar times 1/hbar")
    result = NovikovSeries.unit(P.ring, P.grading, P.truncation, nkeys)
    result.reliable = P.reliable
    power = result
    j = 0
    while True:
        j += 1
        power = power.mul(P, workers)
        if not power.coeffs:
            break
        result = result + power.scale(Fraction(1, factorial(j)))
    return result


@dataclass
class HbarExpansion:
    """The 1/ℏ part of an I-function and whether it is in the simple regime."""

    P: NovikovSeries
    simple: bool
    support: List[Key]
    reasons: List[str] = field(default_factory=list)


def extract_one_over_hbar_part(I: NovikovSeries) -> HbarExpansion:
    nkeys = len(I.grading.ample)
    zero_key = (0,) * nkeys
    reasons: List[str] = []
    if I[zero_key] != HLaurent.one(I.ring):
        reasons.append("leading coefficient is not 1")
    P: Dict[Key, HLaurent] = {}
    for key, v in I.items():
        if v.max_exponent() > 0:
            reasons.append(f"positive power of hbar at {list(key)}")
        if key != zero_key and 0 in v.terms:
            reasons.append(f"hbar^0 term at {list(key)}")
        if key == zero_key:
            continue
        c = v.coefficient(-1)
        if c.is_zero():
            continue
        scalar = c.degree0()
        if c != I.ring.scalar(scalar):
            reasons.append(f"1/hbar coefficient at {list(key)} has positive-degree part")
        if scalar:
            P[key] = HLaurent.hbar_power(I.ring, -1, scalar)
    series = NovikovSeries(I.ring, I.grading, P, I.truncation, I.reliable)
    return HbarExpansion(series, not reasons, series.keys(), reasons)


def gw_descendants(J: NovikovSeries, key: Sequence[int]) -> List[CohClass]:
    """``[e_*(ψ^k ∩ [Y_{1,β}])]_k`` read off the ℏ^{-(2+k)} coefficients of ``J_β``."""
    key = tuple(key)
    if J.degree(key) > J.reliable:
        raise SeriesError(f"class {list(key)} is outside the reliable window")
    if J.grading.facets and not J.grading.contains(key):
        raise SeriesError(f"class {list(key)} is not effective")
    coeff = J[key]
    if coeff.is_zero():
        return []
    lowest = coeff.min_exponent()
    if coeff.max_exponent() > -2 and any(key):
        raise SeriesError(f"J at {list(key)} has hbar powers above hbar^-2")
    if not any(key):
        return []
    return [coeff.coefficient(-(2 + k)) for k in range(-lowest - 1)]
