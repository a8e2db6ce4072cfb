"""Polynomial differential operators in (ℏ, ℏ∂/∂t_j, q) on stripped series.

A term is ``coeff * q^shift * ℏ^hpow * D^word`` with every q-shift written
to the left of the derivatives ``D_j = ℏ∂/∂t_j``.  Symbol ``j`` matches key
coordinate ``j``; on a bundle the last symbol is the fiber direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from toricqd.algebra.polynomial import Polynomial
from toricqd.cohomology import CohRing, HLaurent
from toricqd.parallel import pmap
from toricqd.series import Grading, Key, NovikovSeries, novikov_monomial
from toricqd.toric.bundle import BundleSpec

TermKey = Tuple[Tuple[int, ...], int, Tuple[int, ...]]


class OperatorError(ValueError):
    pass


class DiffOperator:
    def __init__(self, nvars: int, terms: Optional[Dict[TermKey, Fraction]] = None):
        self.nvars = nvars
        self.terms: Dict[TermKey, Fraction] = {}
        for (shift, hpow, word), c in (terms or {}).items():
            shift, word = tuple(int(x) for x in shift), tuple(int(x) for x in word)
            if len(shift) != nvars or len(word) != nvars:
                raise OperatorError(f"term has wrong arity for {nvars} symbols")
            if hpow < 0 or any(w < 0 for w in word):
                raise OperatorError("negative powers of hbar or derivatives")
            c = Fraction(c)
            key = (shift, int(hpow), word)
            total = self.terms.get(key, Fraction(0)) + c
            if total:
                self.terms[key] = total
            else:
                self.terms.pop(key, None)

    # -- constructors -------------------------------------------------------

    @classmethod
    def scalar(cls, nvars: int, c=1) -> "DiffOperator":
        zero = (0,) * nvars
        return cls(nvars, {(zero, 0, zero): Fraction(c)})

    @classmethod
    def identity(cls, nvars: int) -> "DiffOperator":
        return cls.scalar(nvars, 1)

    @classmethod
    def derivative(cls, nvars: int, j: int) -> "DiffOperator":
        """``ℏ∂/∂t_{j+1}`` (0-based symbol index)."""
        zero = (0,) * nvars
        word = tuple(int(i == j) for i in range(nvars))
        return cls(nvars, {(zero, 0, word): Fraction(1)})

    @classmethod
    def q(cls, shift: Sequence[int]) -> "DiffOperator":
        zero = (0,) * len(shift)
        return cls(len(shift), {(tuple(shift), 0, zero): Fraction(1)})

    @classmethod
    def hbar(cls, nvars: int, e: int = 1) -> "DiffOperator":
        zero = (0,) * nvars
        return cls(nvars, {(zero, e, zero): Fraction(1)})

    # -- algebra ------------------------------------------------------------

    def _check(self, other: "DiffOperator") -> None:
        if other.nvars != self.nvars:
            raise OperatorError("operators over different numbers of symbols")

    def _coerce(self, other) -> "DiffOperator":
        if isinstance(other, DiffOperator):
            self._check(other)
            return other
        return DiffOperator.scalar(self.nvars, other)

    def __add__(self, other) -> "DiffOperator":
        other = self._coerce(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, Fraction(0)) + c
        return DiffOperator(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self) -> "DiffOperator":
        return DiffOperator(self.nvars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "DiffOperator":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "DiffOperator":
        return self._coerce(other) - self

    def __mul__(self, other) -> "DiffOperator":
        """Composition, normal-ordered with ``D_j q^b = q^b (D_j + b_j ℏ)``."""
        other = self._coerce(other)
        out: Dict[TermKey, Fraction] = {}
        for (sa, ha, wa), ca in self.terms.items():
            for (sb, hb, wb), cb in other.terms.items():
                # expand prod_j (D_j + sb_j ℏ)^{wa_j}
                per_symbol = []
                for w, b in zip(wa, sb):
                    per_symbol.append([(i, comb(w, i) * b ** (w - i), w - i) for i in range(w + 1) if b or i == w])
                shift = tuple(x + y for x, y in zip(sa, sb))
                for choice in product(*per_symbol):
                    coeff = ca * cb
                    hpow = ha + hb
                    word = []
                    for (i, c, h), extra in zip(choice, wb):
                        coeff *= c
                        hpow += h
                        word.append(i + extra)
                    key = (shift, hpow, tuple(word))
                    out[key] = out.get(key, Fraction(0)) + coeff
        return DiffOperator(self.nvars, out)

    def __rmul__(self, other) -> "DiffOperator":
        return self._coerce(other) * self

    def __pow__(self, n: int) -> "DiffOperator":
        result = DiffOperator.identity(self.nvars)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- structure ----------------------------------------------------------

    def shifts(self) -> List[Tuple[int, ...]]:
        return sorted({s for s, _, _ in self.terms})

    def grouped(self) -> Dict[Tuple[int, ...], "DiffOperator"]:
        """``{alpha: P_alpha}`` with ``P = sum q^alpha P_alpha`` and each ``P_alpha`` shift-free."""
        zero = (0,) * self.nvars
        groups: Dict[Tuple[int, ...], Dict[TermKey, Fraction]] = {}
        for (s, h, w), c in self.terms.items():
            groups.setdefault(s, {})[(zero, h, w)] = c
        return {s: DiffOperator(self.nvars, t) for s, t in sorted(groups.items())}

    def embed(self, nvars: int, positions: Optional[Sequence[int]] = None) -> "DiffOperator":
        """Same operator over more symbols; symbol i goes to ``positions[i]``."""
        positions = list(range(self.nvars)) if positions is None else list(positions)

        def spread(v):
            out = [0] * nvars
            for i, x in zip(positions, v):
                out[i] = x
            return tuple(out)

        return DiffOperator(nvars, {(spread(s), h, spread(w)): c for (s, h, w), c in self.terms.items()})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0], -sum(kv[0][2]), kv[0][2], kv[0][1]))

    def to_string(self, dnames: Optional[Sequence[str]] = None, qnames: Optional[Sequence[str]] = None) -> str:
        dnames = dnames or [f"D{j + 1}" for j in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for (s, h, w), c in self.sorted_terms():
            factors = []
            if any(s):
                factors.append(novikov_monomial(s, qnames))
            if h:
                factors.append("hbar" if h == 1 else f"hbar^{h}")
            for name, e in zip(dnames, w):
                if e:
                    factors.append(name if e == 1 else f"{name}^{e}")
            body = "*".join(factors)
            mag = abs(c)
            if not body:
                body = str(mag)
            elif mag != 1:
                body = f"{mag}*{body}"
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"DiffOperator({self.nvars}, {self.to_string()!r})"

    def canonical(self) -> list:
        return [
            {"qshift": list(s), "hpow": h, "word": list(w), "coeff": str(c)}
            for (s, h, w), c in self.sorted_terms()
        ]


# -- action -----------------------------------------------------------------------


def _max_shift_degree(op: DiffOperator, grading: Grading) -> int:
    return max([grading.degree(s) for s in op.shifts()] + [0])


def apply(op: DiffOperator, S: NovikovSeries, workers: int = 1) -> NovikovSeries:
    """Act on a stripped series; symbol j at key kappa is ``p_j + kappa_j ℏ``."""
    ring = S.ring
    if op.nvars != len(ring.variables) or op.nvars != len(S.grading.ample):
        raise OperatorError(
            f"operator has {op.nvars} symbols but the series has {len(ring.variables)} generators"
        )
    grading = S.grading
    for s in op.shifts():
        if grading.degree(s) < 0 or (grading.facets and not grading.contains(s)):
            raise OperatorError(f"q-shift {list(s)} is not effective")
    reliable = S.reliable - _max_shift_degree(op, grading)
    gens = ring.gens()
    hpow: Dict[int, HLaurent] = {}
    eig: Dict[Tuple[int, int, int], HLaurent] = {}

    def eigen(j: int, kj: int, e: int) -> HLaurent:
        key = (j, kj, e)
        val = eig.get(key)
        if val is None:
            val = HLaurent.linear_factor(gens[j], kj) if e == 1 else eigen(j, kj, e - 1) * eigen(j, kj, 1)
            eig[key] = val
        return val

    def hb(h: int) -> HLaurent:
        if h not in hpow:
            hpow[h] = HLaurent.hbar_power(ring, h)
        return hpow[h]

    # warm the caches serially so worker threads only read them
    for key in S.coeffs:
        for (_, h, w), _ in op.terms.items():
            hb(h)
            for j, e in enumerate(w):
                if e:
                    eigen(j, key[j], e)

    contributions: Dict[Key, List[Tuple[Key, TermKey]]] = {}
    for key in S.coeffs:
        for term in op.terms:
            out = tuple(x + y for x, y in zip(key, term[0]))
            if grading.degree(out) <= reliable:
                contributions.setdefault(out, []).append((key, term))

    def one(out):
        acc = HLaurent(ring)
        for key, term in sorted(contributions[out]):
            _, h, w = term
            val = S.coeffs[key] * hb(h)
            for j, e in enumerate(w):
                if e:
                    val = val * eigen(j, key[j], e)
            acc = acc + val * op.terms[term]
        return acc

    keys = sorted(contributions, key=grading.sort_key)
    values = pmap(one, keys, workers)
    bound = max(reliable, -1)
    return NovikovSeries(ring, grading, dict(zip(keys, values)), bound, bound)


def annihilates(op: DiffOperator, S: NovikovSeries, workers: int = 1) -> bool:
    return not apply(op, S, workers).coeffs


# -- bundle operators ----------------------------------------------------------------


def _bundle_matrix(spec) -> Tuple[int, List[Tuple[int, ...]]]:
    """``(k, rows)`` from a BundleSpec, a TwistSpec or a bare matrix (k = 0 for a point base)."""
    if isinstance(spec, BundleSpec):
        return spec.base.picard_rank, list(spec.matrix)
    if hasattr(spec, "bundle"):
        return _bundle_matrix(spec.bundle)
    rows = [tuple(int(x) for x in row) for row in spec]
    if len(rows) < 2 or len({len(r) for r in rows}) != 1 or any(rows[0]):
        raise OperatorError("bundle matrix needs n + 1 >= 2 equal-length rows with row 0 zero")
    return len(rows[0]), rows


def _fiber_factor(k: int, row: Sequence[int], r: int = 0) -> DiffOperator:
    """``D_{k+1} - sum_j a_j D_j - r ℏ``."""
    op = DiffOperator.derivative(k + 1, k)
    for j, a in enumerate(row):
        if a:
            op = op - DiffOperator.derivative(k + 1, j) * a
    if r:
        op = op - DiffOperator.hbar(k + 1) * r
    return op


def delta_operator(spec, alpha: Sequence[int]) -> DiffOperator:
    """``prod_{i>=1} prod_{r=0}^{L_i(alpha)-1} (D_{k+1} - sum_j a_ij D_j - r ℏ)``."""
    k, rows = _bundle_matrix(spec)
    if len(alpha) != k:
        raise OperatorError(f"alpha needs {k} entries")
    op = DiffOperator.identity(k + 1)
    for i in range(1, len(rows)):
        n = sum(a * b for a, b in zip(rows[i], alpha))
        if n < 0:
            raise OperatorError(f"L_{i} pairs negatively with {list(alpha)}")
        for r in range(n):
            op = op * _fiber_factor(k, rows[i], r)
    return op


def big_delta_operator(spec) -> DiffOperator:
    """``prod_{i=0}^{n} (D_{k+1} - sum_j a_ij D_j) - q_1`` with ``q_1`` the fiber-line variable."""
    k, rows = _bundle_matrix(spec)
    op = DiffOperator.identity(k + 1)
    for row in rows:
        op = op * _fiber_factor(k, row)
    return op - DiffOperator.q((0,) * k + (1,))


def verify_shift_identity(twist, alpha: Sequence[int], nu: int, beta: Sequence[int], grading: Optional[Grading] = None) -> bool:
    """``delta_alpha (q1^nu q2^beta T_{nu,beta}) == q1^nu q2^beta T_{nu,alpha+beta}``."""
    bs = twist.bundle
    key = tuple(beta) + (nu,)
    grading = grading or Grading(tuple(1 for _ in key))
    deg = grading.degree(key)
    S = NovikovSeries(twist.ring, grading, {key: twist.twist_factor(nu, beta)}, deg)
    lhs = apply(delta_operator(bs, alpha), S)
    target = tuple(a + b for a, b in zip(alpha, beta))
    return lhs[key] == twist.twist_factor(nu, target) and set(lhs.coeffs) <= {key}


# -- classical limit -----------------------------------------------------------------


@dataclass
class Relation:
    """``sum_alpha q^alpha f_alpha(p)`` claimed to vanish in small quantum cohomology."""

    variables: Tuple[str, ...]
    parts: Dict[Tuple[int, ...], Polynomial]
    qnames: Optional[Tuple[str, ...]] = None

    def is_trivial(self) -> bool:
        return not any(not f.is_zero() for f in self.parts.values())

    def reduce(self, ring: CohRing) -> "Relation":
        """Each coefficient replaced by its normal form in the classical ring."""
        if tuple(ring.variables) != tuple(self.variables):
            raise OperatorError("relation and ring use different generators")
        out = {}
        for a, f in self.parts.items():
            g = ring.normalizer.reduce(f)
            if not g.is_zero():
                out[a] = g
        return Relation(self.variables, out, self.qnames)

    def to_string(self) -> str:
        parts = []
        for a, f in sorted(self.parts.items()):
            if f.is_zero():
                continue
            body = f.to_string()
            if not any(a):
                parts.append(body)
                continue
            mono = novikov_monomial(a, self.qnames)
            if body == "1":
                parts.append(mono)
            elif body == "-1":
                parts.append("-" + mono)
            elif len(f.terms) == 1 and not body.startswith("-"):
                parts.append(f"{mono}*{body}")
            else:
                parts.append(f"{mono}*({body})")
        if not parts:
            return "0"
        text = parts[0]
        for p in parts[1:]:
            text += " - " + p[1:] if p.startswith("-") else " + " + p
        return text

    def __str__(self):
        return self.to_string()

    def canonical(self) -> list:
        return [
            {"qshift": list(a), "poly": f.to_string()}
            for a, f in sorted(self.parts.items())
            if not f.is_zero()
        ]


def classical_limit(op: DiffOperator, variables: Sequence[str], qnames: Optional[Sequence[str]] = None) -> Relation:
    """Set ℏ = 0 and ``D_j -> variables[j]`` after normal ordering."""
    variables = tuple(variables)
    if len(variables) != op.nvars:
        raise OperatorError("need one variable per derivative symbol")
    parts: Dict[Tuple[int, ...], Polynomial] = {}
    for (s, h, w), c in op.terms.items():
        if h:
            continue
        term = Polynomial(variables, {tuple(w): c})
        parts[s] = parts[s] + term if s in parts else term
    parts = {s: f for s, f in parts.items() if not f.is_zero()}
    return Relation(variables, parts, tuple(qnames) if qnames else None)


@dataclass
class LiftResult:
    operator: DiffOperator
    relation: Relation
    lambda_set: List[Tuple[int, ...]]


def lift_operator(P: DiffOperator, twist, base_J: Optional[NovikovSeries] = None, workers: int = 1) -> LiftResult:
    """``P~ = sum_alpha q2^alpha delta_alpha P_alpha`` over the bundle symbols."""
    bs = twist.bundle
    k = bs.base.picard_rank
    if P.nvars != k:
        raise OperatorError(f"base operator must have {k} symbols")
    if base_J is not None:
        residue = apply(P, base_J, workers)
        if residue.coeffs:
            first = residue.keys()[0]
            raise OperatorError(f"operator does not annihilate the base J-function (key {list(first)})")
    total = DiffOperator(k + 1)
    for alpha, part in P.grouped().items():
        q2 = DiffOperator.q(tuple(alpha) + (0,))
        total = total + q2 * delta_operator(bs, alpha) * part.embed(k + 1)
    relation = classical_limit(total, twist.ring.variables)
    return LiftResult(total, relation, [a for a in P.grouped()])


# -- parsing -----------------------------------------------------------------------


def operator_from_terms(terms: Iterable[dict], nvars: int, bundle: bool = False) -> DiffOperator:
    """Parse ``{qshift, hpow, word, coeff}`` dicts; bundle qshifts are written ``[nu, d...]``."""
    out: Dict[TermKey, Fraction] = {}
    for n, t in enumerate(terms):
        try:
            shift = [int(x) for x in t.get("qshift", [0] * nvars)]
            word = [int(x) for x in t.get("word", [0] * nvars)]
            hpow = int(t.get("hpow", 0))
            coeff = Fraction(str(t.get("coeff", "1")))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise OperatorError(f"term {n}: {exc}") from None
        if len(shift) != nvars or len(word) != nvars:
            raise OperatorError(f"term {n}: qshift and word need {nvars} entries")
        if bundle:
            shift = shift[1:] + shift[:1]
        key = (tuple(shift), hpow, tuple(word))
        out[key] = out.get(key, Fraction(0)) + coeff
    return DiffOperator(nvars, out)
