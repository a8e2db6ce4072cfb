"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Sequence, Tuple

Monomial = Tuple[int, ...]


def grevlex_key(mono: Monomial) -> tuple:
    """Sort key for degree-reverse-lexicographic order (larger key = larger monomial)."""
    return (sum(mono), tuple(-e for e in reversed(mono)))


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_str(mono: Monomial, variables: Sequence[str]) -> str:
    parts = []
    for v, e in zip(variables, mono):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts) if parts else "1"


class Polynomial:
    """Polynomial over Q in a fixed, ordered list of variables.

    Zero coefficients are never stored and every exponent vector has the
    same length as ``variables``.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms=None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for mono, c in items:
                mono = tuple(int(e) for e in mono)
                if len(mono) != n:
                    raise ValueError(
                        f"exponent vector {mono} has arity {len(mono)}, expected {n}"
                    )
                if any(e < 0 for e in mono):
                    raise ValueError(f"negative exponent in {mono}")
                c = Fraction(c)
                if c:
                    total = clean.get(mono, 0) + c
                    if total:
                        clean[mono] = total
                    else:
                        clean.pop(mono, None)
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls(variables)

    @classmethod
    def constant(cls, variables: Sequence[str], c) -> "Polynomial":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def gen(cls, variables: Sequence[str], index: int) -> "Polynomial":
        mono = [0] * len(variables)
        mono[index] = 1
        return cls(variables, {tuple(mono): 1})

    @classmethod
    def linear(cls, variables: Sequence[str], coeffs: Sequence, constant=0) -> "Polynomial":
        n = len(variables)
        terms = {}
        for i, c in enumerate(coeffs):
            mono = [0] * n
            mono[i] = 1
            terms[tuple(mono)] = c
        if constant:
            terms[(0,) * n] = constant
        return cls(variables, terms)

    @classmethod
    def _raw(cls, variables: tuple, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        return obj

    # -- queries --------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True))

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=grevlex_key)

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * len(self.variables))

    def homogeneous_part(self, degree: int) -> "Polynomial":
        return Polynomial._raw(
            self.variables, {m: c for m, c in self.terms.items() if sum(m) == degree}
        )

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.variables != other.variables:
            raise ValueError(
                f"variable mismatch: {self.variables} vs {other.variables}"
            )

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.variables, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.variables)
        return Polynomial._raw(self.variables, {m: v * c for m, v in self.terms.items()})

    def mul_term(self, mono: Monomial, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial._raw(
            self.variables, {mono_mul(m, mono): v * c for m, v in self.terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.variables, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Replace variable ``i`` by ``images[i]`` (all images share one ring)."""
        if len(images) != len(self.variables):
            raise ValueError("need one image per variable")
        target = images[0].variables if images else ()
        result = Polynomial.zero(target)
        for mono, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for img, e in zip(images, mono):
                if e:
                    term = term * img**e
            result = result + term
        return result

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for mono, c in self:
            ms = mono_str(mono, self.variables)
            if ms == "1":
                body = str(c)
            elif c == 1:
                body = ms
            elif c == -1:
                body = "-" + ms
            else:
                body = f"{c}*{ms}"
            out.append(body)
        s = " + ".join(out)
        return s.replace("+ -", "- ")

    __str__ = to_string

    def __repr__(self):
        return f"Polynomial({self.to_string()!r}, variables={self.variables})"


def monomials_of_degree(nvars: int, degree: int) -> Iterable[Monomial]:
    """All exponent vectors of the given total degree, in lexicographic order."""
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - first):
            yield (first,) + rest
