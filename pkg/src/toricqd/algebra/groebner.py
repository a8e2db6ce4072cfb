"""Reduced Gröbner bases and normal forms under degree-reverse-lex order.

Buchberger with normal selection and the product and chain criteria.  The
ideals met in this package are small (squarefree monomials plus a handful of
linear-in-each-variable products).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence

from toricqd.algebra.polynomial import (
    Monomial,
    Polynomial,
    divides,
    grevlex_key,
    mono_div,
    mono_lcm,
    mono_mul,
    monomials_of_degree,
)


def _monic(f: Polynomial) -> Polynomial:
    return f.scale(1 / f.leading_coefficient())


def _reduce_full(f: Polynomial, basis: Sequence[Polynomial]) -> Polynomial:
    """Fully reduce ``f`` by ``basis`` (each element monic)."""
    leads = [(g.leading_monomial(), g) for g in basis]
    terms: Dict[Monomial, Fraction] = dict(f.terms)
    out: Dict[Monomial, Fraction] = {}
    while terms:
        m = max(terms, key=grevlex_key)
        c = terms.pop(m)
        for lm, g in leads:
            if divides(lm, m):
                q = mono_div(m, lm)
                for gm, gc in g.terms.items():
                    if gm == lm:
                        continue
                    t = mono_mul(gm, q)
                    s = terms.get(t, 0) - c * gc
                    if s:
                        terms[t] = s
                    else:
                        terms.pop(t, None)
                break
        else:
            out[m] = c
    return Polynomial._raw(f.variables, out)


def _s_poly(f: Polynomial, g: Polynomial) -> Polynomial:
    lf, lg = f.leading_monomial(), g.leading_monomial()
    lcm = mono_lcm(lf, lg)
    return f.mul_term(mono_div(lcm, lf), 1 / f.leading_coefficient()) - g.mul_term(
        mono_div(lcm, lg), 1 / g.leading_coefficient()
    )


def groebner_basis(generators: Sequence[Polynomial]) -> List[Polynomial]:
    """Reduced Gröbner basis (monic, sorted by leading monomial)."""
    basis = [_monic(g) for g in generators if not g.is_zero()]
    if not basis:
        return []
    leads = [g.leading_monomial() for g in basis]
    pairs = {(i, j) for i in range(len(basis)) for j in range(i)}

    def lcm_key(pair):
        m = mono_lcm(leads[pair[0]], leads[pair[1]])
        return (sum(m), grevlex_key(m), pair)

    while pairs:
        # normal selection: smallest lcm first
        pair = min(pairs, key=lcm_key)
        pairs.discard(pair)
        i, j = pair
        lf, lg = leads[i], leads[j]
        # coprime leading monomials: S-polynomial reduces to zero
        if all(a == 0 or b == 0 for a, b in zip(lf, lg)):
            continue
        # chain criterion
        lcm = mono_lcm(lf, lg)
        if any(
            t not in pair
            and divides(leads[t], lcm)
            and (max(i, t), min(i, t)) not in pairs
            and (max(j, t), min(j, t)) not in pairs
            for t in range(len(basis))
        ):
            continue
        r = _reduce_full(_s_poly(basis[i], basis[j]), basis)
        if not r.is_zero():
            basis.append(_monic(r))
            leads.append(basis[-1].leading_monomial())
            n = len(basis) - 1
            pairs.update((n, t) for t in range(n))

    # minimalize
    basis.sort(key=lambda p: grevlex_key(p.leading_monomial()))
    minimal: List[Polynomial] = []
    for g in basis:
        lm = g.leading_monomial()
        if any(divides(h.leading_monomial(), lm) for h in minimal):
            continue
        minimal = [h for h in minimal if not divides(lm, h.leading_monomial())]
        minimal.append(g)
    # interreduce
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        lm = g.leading_monomial()
        tail = Polynomial._raw(g.variables, {m: c for m, c in g.terms.items() if m != lm})
        tail = _reduce_full(tail, others)
        reduced.append(Polynomial._raw(g.variables, {**tail.terms, lm: Fraction(1)}))
    reduced.sort(key=lambda p: grevlex_key(p.leading_monomial()))
    return reduced


class IdealNormalizer:
    """Normal forms modulo an ideal of a polynomial ring over Q.

    Immutable after construction.

    >>> x = Polynomial.gen(("p",), 0)
    >>> N = IdealNormalizer(("p",), [x**3])
    >>> N.reduce(x**4).is_zero(), N.reduce(x**2) == x**2
    (True, True)
    """

    def __init__(self, variables: Sequence[str], generators: Sequence[Polynomial]):
        self.variables = tuple(variables)
        for g in generators:
            if g.variables != self.variables:
                raise ValueError(
                    f"generator over {g.variables} does not match {self.variables}"
                )
        self.generators = tuple(generators)
        self.basis = tuple(groebner_basis(self.generators))
        self.leading_monomials = tuple(g.leading_monomial() for g in self.basis)

    def reduce(self, f: Polynomial) -> Polynomial:
        if f.variables != self.variables:
            raise ValueError(
                f"variable-arity mismatch: {f.variables} vs {self.variables}"
            )
        return _reduce_full(f, self.basis)

    def contains(self, f: Polynomial) -> bool:
        return self.reduce(f).is_zero()

    def is_standard(self, mono: Monomial) -> bool:
        return not any(divides(lm, mono) for lm in self.leading_monomials)

    def standard_monomial_basis(self, max_degree: int) -> List[List[Monomial]]:
        """Standard monomials grouped by total degree ``0..max_degree``.

        Each group is sorted in decreasing monomial order.
        """
        n = len(self.variables)
        graded = []
        for d in range(max_degree + 1):
            graded.append(
                sorted(
                    (m for m in monomials_of_degree(n, d) if self.is_standard(m)),
                    key=grevlex_key,
                    reverse=True,
                )
            )
        return graded

    def quotient_basis(self) -> List[Monomial]:
        """All standard monomials of a finite-dimensional quotient."""
        n = len(self.variables)
        out: List[Monomial] = []
        d = 0
        while True:
            layer = [m for m in monomials_of_degree(n, d) if self.is_standard(m)]
            if not layer:
                # no standard monomial in degree d means none above it either
                return out
            out.extend(sorted(layer, key=grevlex_key, reverse=True))
            d += 1
            if d > 64:
                raise ValueError("quotient ring does not look finite-dimensional")

    def same_ideal(self, other: "IdealNormalizer") -> bool:
        if self.variables != other.variables:
            return False
        return all(other.contains(g) for g in self.basis) and all(
            self.contains(g) for g in other.basis
        )


def reduce(f: Polynomial, normalizer: IdealNormalizer) -> Polynomial:
    return normalizer.reduce(f)


def standard_monomial_basis(normalizer: IdealNormalizer, max_degree: int):
    return normalizer.standard_monomial_basis(max_degree)
