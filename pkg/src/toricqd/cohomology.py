"""Finite-dimensional graded cohomology rings and ℏ-Laurent polynomials over them.

All generators sit in H^2, so cohomological degree is twice the polynomial
degree; degrees below are polynomial degrees.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from toricqd import kernels
from toricqd.algebra.groebner import IdealNormalizer
from toricqd.algebra.polynomial import Monomial, Polynomial, mono_str


class RingMismatchError(ValueError):
    pass


class CohRing:
    """Quotient ``Q[variables] / ideal`` presented by its standard monomials.

    The multiplication table is computed once; elements are dense coefficient
    vectors over the standard-monomial basis.  Instances are immutable.
    """

    def __init__(self, variables: Sequence[str], relations: Sequence[Polynomial], name: str = ""):
        self.variables = tuple(variables)
        self.name = name
        self.normalizer = IdealNormalizer(self.variables, relations)
        self.basis: Tuple[Monomial, ...] = tuple(self.normalizer.quotient_basis())
        if not self.basis or any(self.basis[0]):
            raise ValueError("ideal contains 1: the quotient ring is zero")
        self.index: Dict[Monomial, int] = {m: i for i, m in enumerate(self.basis)}
        self.degrees = tuple(sum(m) for m in self.basis)
        self.dim = len(self.basis)
        self.top_degree = max(self.degrees)
        self.table = self._structure_table()

    def _structure_table(self):
        dim = self.dim
        products: List[Dict[int, Fraction]] = []
        for a in self.basis:
            for b in self.basis:
                prod = Polynomial(self.variables, {tuple(x + y for x, y in zip(a, b)): 1})
                red = self.normalizer.reduce(prod)
                products.append({self.index[m]: c for m, c in red.terms.items()})
        tden = 1
        for p in products:
            for c in p.values():
                tden = tden * c.denominator // _gcd(tden, c.denominator)
        entries = [tuple(sorted((k, int(c * tden)) for k, c in p.items())) for p in products]
        return kernels.Table(dim, entries, tden)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<CohRing{label} vars={self.variables} dim={self.dim}>"

    # -- element construction ------------------------------------------------

    def zero(self) -> "CohClass":
        return CohClass(self, kernels.zero(self.dim))

    def one(self) -> "CohClass":
        return self.scalar(1)

    def scalar(self, c) -> "CohClass":
        c = Fraction(c)
        nums = [0] * self.dim
        nums[0] = c.numerator
        return CohClass(self, kernels.normalize(nums, c.denominator))

    def gen(self, name_or_index) -> "CohClass":
        i = self.variables.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        return self.from_polynomial(Polynomial.gen(self.variables, i))

    def gens(self) -> List["CohClass"]:
        return [self.gen(i) for i in range(len(self.variables))]

    def linear(self, coeffs: Sequence, constant=0) -> "CohClass":
        return self.from_polynomial(Polynomial.linear(self.variables, coeffs, constant))

    def from_polynomial(self, f: Polynomial) -> "CohClass":
        if f.variables != self.variables:
            raise RingMismatchError(f"polynomial over {f.variables}, ring over {self.variables}")
        red = self.normalizer.reduce(f)
        den = 1
        for c in red.terms.values():
            den = den * c.denominator // _gcd(den, c.denominator)
        nums = [0] * self.dim
        for m, c in red.terms.items():
            nums[self.index[m]] = int(c * den)
        return CohClass(self, kernels.normalize(nums, den))

    def from_coefficients(self, coeffs: Sequence) -> "CohClass":
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // _gcd(den, c.denominator)
        return CohClass(self, kernels.normalize([int(c * den) for c in fr], den))

    def basis_labels(self) -> List[str]:
        return [mono_str(m, self.variables) for m in self.basis]

    def graded_dimensions(self) -> List[int]:
        out = [0] * (self.top_degree + 1)
        for d in self.degrees:
            out[d] += 1
        return out

    def same_presentation(self, other: "CohRing") -> bool:
        """True when both rings are the same quotient of the same polynomial ring."""
        return self.normalizer.same_ideal(other.normalizer)

    def transfer(self, x: "CohClass") -> "CohClass":
        """Re-express a class of a ring over the same variables in this ring."""
        if x.ring is self:
            return x
        if x.ring.variables != self.variables:
            raise RingMismatchError("cannot identify rings over different generators")
        return self.from_polynomial(x.polynomial())


class CohClass:
    """An element of a :class:`CohRing`, always stored in normal form."""

    __slots__ = ("ring", "vec")

    def __init__(self, ring: CohRing, vec):
        self.ring = ring
        self.vec = vec

    def _check(self, other: "CohClass") -> None:
        if other.ring is not self.ring:
            raise RingMismatchError(f"{self.ring!r} vs {other.ring!r}")

    def _coerce(self, other) -> Optional["CohClass"]:
        if isinstance(other, CohClass):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CohClass(self.ring, kernels.add(self.vec, o.vec))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CohClass(self.ring, kernels.sub(self.vec, o.vec))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CohClass(self.ring, kernels.scale(self.vec, -1))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return CohClass(self.ring, kernels.scale(self.vec, c.numerator, c.denominator))
        if isinstance(other, CohClass):
            self._check(other)
            return CohClass(self.ring, kernels.vec_mul(self.vec, other.vec, self.ring.table))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other)
        if not isinstance(other, CohClass):
            return NotImplemented
        return self.ring is other.ring and self.vec == other.vec

    def __hash__(self):
        return hash((id(self.ring), self.vec))

    def is_zero(self) -> bool:
        return kernels.is_zero(self.vec)

    def __bool__(self):
        return not self.is_zero()

    @property
    def coefficients(self) -> List[Fraction]:
        nums, den = self.vec
        return [Fraction(x, den) for x in nums]

    def degree0(self) -> Fraction:
        nums, den = self.vec
        return Fraction(nums[0], den)

    def homogeneous_part(self, degree: int) -> "CohClass":
        nums, den = self.vec
        kept = [x if d == degree else 0 for x, d in zip(nums, self.ring.degrees)]
        return CohClass(self.ring, kernels.normalize(kept, den))

    def is_nilpotent(self) -> bool:
        return self.degree0() == 0

    def polynomial(self) -> Polynomial:
        nums, den = self.vec
        return Polynomial(
            self.ring.variables,
            {m: Fraction(x, den) for m, x in zip(self.ring.basis, nums) if x},
        )

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        """Basis-order list of ``(monomial, coefficient)`` pairs (nonzero only)."""
        nums, den = self.vec
        return [(m, Fraction(x, den)) for m, x in zip(self.ring.basis, nums) if x]

    def __str__(self):
        return self.polynomial().to_string()

    def __repr__(self):
        return f"CohClass({self})"


class HLaurent:
    """Finite Laurent polynomial in ℏ with coefficients in a :class:`CohRing`."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: CohRing, terms: Optional[Dict[int, tuple]] = None):
        self.ring = ring
        self.terms = terms or {}

    @classmethod
    def from_classes(cls, ring: CohRing, coeffs: Dict[int, CohClass]) -> "HLaurent":
        return cls(ring, {e: c.vec for e, c in coeffs.items() if not c.is_zero()})

    @classmethod
    def constant(cls, x: CohClass) -> "HLaurent":
        return cls.from_classes(x.ring, {0: x})

    @classmethod
    def one(cls, ring: CohRing) -> "HLaurent":
        return cls.constant(ring.one())

    @classmethod
    def hbar_power(cls, ring: CohRing, e: int, c=1) -> "HLaurent":
        return cls.from_classes(ring, {e: ring.scalar(c)})

    @classmethod
    def linear_factor(cls, c: CohClass, m) -> "HLaurent":
        """The ℏ-linear factor ``c + m ℏ``."""
        return cls.from_classes(c.ring, {0: c, 1: c.ring.scalar(m)})

    def _check(self, other: "HLaurent") -> None:
        if other.ring is not self.ring:
            raise RingMismatchError(f"{self.ring!r} vs {other.ring!r}")

    def __add__(self, other: "HLaurent") -> "HLaurent":
        self._check(other)
        return HLaurent(self.ring, kernels.laurent_add(self.terms, other.terms))

    def __neg__(self) -> "HLaurent":
        return HLaurent(self.ring, {e: kernels.scale(v, -1) for e, v in self.terms.items()})

    def __sub__(self, other: "HLaurent") -> "HLaurent":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HLaurent):
            self._check(other)
            return HLaurent(self.ring, kernels.laurent_mul(self.terms, other.terms, self.ring.table))
        if isinstance(other, CohClass):
            return self * HLaurent.constant(other)
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return HLaurent(self.ring)
            return HLaurent(
                self.ring,
                {e: kernels.scale(v, c.numerator, c.denominator) for e, v in self.terms.items()},
            )
        return NotImplemented

    __rmul__ = __mul__

    def shift(self, k: int) -> "HLaurent":
        """Multiply by ℏ^k."""
        return HLaurent(self.ring, {e + k: v for e, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, HLaurent):
            return NotImplemented
        return self.ring is other.ring and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, e: int) -> CohClass:
        v = self.terms.get(e)
        return CohClass(self.ring, v) if v is not None else self.ring.zero()

    def exponents(self) -> List[int]:
        return sorted(self.terms)

    def items(self) -> Iterable[Tuple[int, CohClass]]:
        for e in sorted(self.terms):
            yield e, CohClass(self.ring, self.terms[e])

    def min_exponent(self) -> Optional[int]:
        return min(self.terms) if self.terms else None

    def max_exponent(self) -> Optional[int]:
        return max(self.terms) if self.terms else None

    def transfer(self, ring: CohRing) -> "HLaurent":
        return HLaurent.from_classes(
            ring, {e: ring.transfer(c) for e, c in self.items()}
        )

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.items(), key=lambda t: -t[0]):
            h = "" if e == 0 else ("hbar" if e == 1 else f"hbar^{e}")
            body = str(c)
            if h:
                body = f"({body})*{h}" if body != "1" else h
            parts.append(body)
        return " + ".join(parts)

    def __repr__(self):
        return f"HLaurent({self})"


def invert_linear_factor(c: CohClass, m) -> HLaurent:
    """Exact inverse of ``c + m ℏ`` for nilpotent ``c`` and ``m != 0``.

    Expands ``sum_j (-1)^j c^j / (m ℏ)^(j+1)``; the sum stops once ``c^j``
    vanishes.

    >>> from toricqd.algebra.polynomial import Polynomial
    >>> R = CohRing(("p",), [Polynomial.gen(("p",), 0) ** 2])
    >>> str(invert_linear_factor(R.gen("p"), 1))
    'hbar^-1 + (-p)*hbar^-2'
    """
    m = Fraction(m)
    if m == 0:
        raise ZeroDivisionError("cannot invert c + 0*hbar: c is not a unit")
    if not c.is_nilpotent():
        raise ValueError("invert_linear_factor needs a class with zero degree-0 part")
    ring = c.ring
    terms: Dict[int, CohClass] = {}
    power = ring.one()
    j = 0
    while not power.is_zero():
        terms[-(j + 1)] = power * ((-1) ** j / m ** (j + 1))
        power = power * c
        j += 1
        if j > ring.top_degree + 1:
            raise AssertionError("nilpotency bound exceeded")
    return HLaurent.from_classes(ring, terms)


def pullback(x: CohClass, target: CohRing) -> CohClass:
    """Image of a base class under the inclusion of generators into ``target``.

    The target variables must start with the source variables.
    """
    src = x.ring.variables
    if target.variables[: len(src)] != src:
        raise RingMismatchError(f"{target.variables} does not extend {src}")
    extra = len(target.variables) - len(src)
    poly = x.polynomial()
    lifted = Polynomial(target.variables, {m + (0,) * extra: c for m, c in poly.terms.items()})
    return target.from_polynomial(lifted)


def bundle_ring(base: CohRing, line_classes: Sequence[Sequence[int]], fiber_name: str = "z") -> CohRing:
    """Presentation ``H*(base)[z] / prod_i (z - c1(L_i))`` of a split projective bundle.

    ``line_classes[i]`` lists the coefficients of ``c1(L_i)`` in the base
    generators; row 0 must vanish (``L_0 = O``).
    """
    if any(line_classes[0]):
        raise ValueError("the first line bundle must be trivial")
    variables = base.variables + (fiber_name,)
    n = len(variables)
    relations = [
        Polynomial(variables, {m + (0,): c for m, c in g.terms.items()})
        for g in base.normalizer.basis
    ]
    z = Polynomial.gen(variables, n - 1)
    prod = Polynomial.constant(variables, 1)
    for row in line_classes:
        prod = prod * (z - Polynomial.linear(variables, list(row) + [0]))
    relations.append(prod)
    return CohRing(variables, relations, name=f"{base.name}-bundle" if base.name else "bundle")
