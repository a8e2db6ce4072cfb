"""Smooth projective toric varieties: classes, Mori cone, nef cone, cohomology.

Curve classes are integer vectors ``d`` in the coordinates dual to the chosen
nef basis ``p_1..p_k`` (``d_j = p_j . C``).  Divisor classes are integer
vectors in the basis ``p``.  A torus-invariant divisor ``sum_i a_i D_i`` is
written as its ray-coefficient vector ``a``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import List, Optional, Sequence, Tuple

from toricqd.algebra.linalg import (
    determinant,
    integer_row_basis,
    inverse,
    nullspace,
    primitive,
    rank,
    solve,
)
from toricqd.algebra.polynomial import Polynomial
from toricqd.cohomology import CohRing
from toricqd.toric.fan import Fan, validate_fan

CurveVec = Tuple[int, ...]


class ToricError(ValueError):
    """Geometric precondition failure (not smooth, complete or projective, no nef basis)."""


class NotEffectiveError(ToricError):
    pass


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


class Wall:
    __slots__ = ("rays", "left", "right", "relation")

    def __init__(self, rays, left, right, relation):
        self.rays = rays
        self.left = left
        self.right = right
        self.relation = relation

    def __repr__(self):
        return f"Wall({sorted(self.rays)}, relation={list(self.relation)})"


class MoriCone:
    """Rational polyhedral cone given by generators, with exact membership."""

    def __init__(self, generators: Sequence[Sequence[int]], dim: int):
        gens = sorted({tuple(int(x) for x in g) for g in generators if any(g)})
        self.generators = tuple(gens)
        self.dim = dim
        if gens and rank(gens) != dim:
            raise ToricError("Mori cone is not full-dimensional")
        self.facets = self._facets()

    def _facets(self) -> List[Tuple[int, ...]]:
        if self.dim == 1:
            signs = {1 if g[0] > 0 else -1 for g in self.generators}
            if len(signs) != 1:
                raise ToricError("Mori cone contains a line")
            return [(signs.pop(),)]
        normals = set()
        for subset in combinations(self.generators, self.dim - 1):
            if rank(subset) != self.dim - 1:
                continue
            (n,) = nullspace(subset, self.dim)
            vals = [_dot(n, g) for g in self.generators]
            if all(v >= 0 for v in vals):
                normals.add(tuple(primitive(n)))
            elif all(v <= 0 for v in vals):
                normals.add(tuple(primitive([-x for x in n])))
        if not normals:
            raise ToricError("Mori cone has no facets (not strictly convex)")
        return sorted(normals)

    def contains(self, d: Sequence[int]) -> bool:
        return all(_dot(n, d) >= 0 for n in self.facets)

    def extremal_rays(self) -> List[Tuple[int, ...]]:
        """Primitive generators of the extremal rays."""
        out = set()
        for g in self.generators:
            tight = [n for n in self.facets if _dot(n, g) == 0]
            if self.dim == 1 or (tight and rank(tight) == self.dim - 1):
                out.add(tuple(primitive(g)))
        return sorted(out)


class ToricVariety:
    """A smooth projective toric variety with a chosen nef basis.

    ``nef_basis`` is an optional list of ray-coefficient vectors; when omitted
    the first unimodular set of nef invariant divisors is used.
    """

    def __init__(
        self,
        fan: Fan,
        nef_basis: Optional[Sequence[Sequence[int]]] = None,
        names: Optional[Sequence[str]] = None,
        ample_search: int = 5,
        label: str = "",
        require_nef: bool = True,
    ):
        report = validate_fan(fan, check_projective=False)
        if not report.smooth:
            raise ToricError("fan is not smooth: " + "; ".join(report.problems))
        if not report.complete:
            raise ToricError("fan is not complete: " + "; ".join(report.problems))
        self.fan = fan
        self.label = label
        self.nrays = fan.nrays
        self.lattice_rank = fan.lattice_rank
        self.picard_rank = self.nrays - self.lattice_rank
        k = self.picard_rank
        if k < 1:
            raise ToricError("Picard rank must be positive")

        self.walls = self._walls()
        self.curve_lattice = integer_row_basis([w.relation for w in self.walls])
        if len(self.curve_lattice) != k:
            raise ToricError("wall curves do not span the curve lattice")

        if nef_basis is None:
            nef_basis = self._auto_nef_basis()
        self.nef_basis = tuple(tuple(int(x) for x in a) for a in nef_basis)
        if len(self.nef_basis) != k or any(len(a) != self.nrays for a in self.nef_basis):
            raise ToricError(f"nef basis must be {k} vectors of length {self.nrays}")
        pmat = [[_dot(a, g) for g in self.curve_lattice] for a in self.nef_basis]
        if abs(determinant(pmat)) != 1:
            raise ToricError("nef basis is not a lattice basis of the class group")
        # divisor classes of rays in the p-basis: Q = G^T P^{-1}
        pinv = inverse(pmat)
        gt = [[g[i] for g in self.curve_lattice] for i in range(self.nrays)]
        q = [[sum(Fraction(x) * pinv[c][j] for c, x in enumerate(row)) for j in range(k)] for row in gt]
        if any(x.denominator != 1 for row in q for x in row):
            raise ToricError("divisor classes are not integral in the nef basis")
        self.divisor_classes: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(int(x) for x in row) for row in q
        )
        self.wall_curves: Tuple[CurveVec, ...] = tuple(self.curve_of_relation(w.relation) for w in self.walls)
        self.mori = MoriCone(self.wall_curves, k)
        self.nef_ok = all(self.is_nef(self.basis_class(j)) for j in range(k))
        if require_nef and not self.nef_ok:
            raise ToricError("the chosen basis is not nef")
        self.ample = self._find_ample(ample_search)
        if self.ample is None:
            raise ToricError(f"no ample class with coefficients in [-{ample_search}, {ample_search}]")
        self.names = tuple(names) if names else tuple(f"p{j + 1}" for j in range(k))
        if len(self.names) != k:
            raise ToricError("need one generator name per nef basis element")

    # -- construction helpers ------------------------------------------------

    def _walls(self) -> List[Wall]:
        fan = self.fan
        out = []
        for wall, owners in sorted(fan.walls().items(), key=lambda kv: sorted(kv[0])):
            c1, c2 = sorted(owners, key=sorted)
            (i,) = c1 - wall
            (j,) = c2 - wall
            wall_rays = sorted(wall)
            # b_i + b_j = sum_l x_l b_l over the wall rays
            target = [a + b for a, b in zip(fan.rays[i], fan.rays[j])]
            if wall_rays:
                cols = [list(col) for col in zip(*[fan.rays[l] for l in wall_rays])]
                x = solve(cols, target)
            else:
                x = [] if not any(target) else None
            if x is None or any(v.denominator != 1 for v in x):
                raise ToricError(f"wall {wall_rays} has no integral wall relation")
            rel = [0] * fan.nrays
            rel[i] = 1
            rel[j] = 1
            for l, v in zip(wall_rays, x):
                rel[l] = -int(v)
            out.append(Wall(wall, c1, c2, tuple(rel)))
        return out

    def _auto_nef_basis(self) -> List[List[int]]:
        k = self.picard_rank
        candidates = []
        seen = set()
        for i in range(self.nrays):
            if all(w.relation[i] >= 0 for w in self.walls):
                cls = tuple(g[i] for g in self.curve_lattice)
                if cls not in seen and any(cls):
                    seen.add(cls)
                    candidates.append(i)
        for subset in combinations(candidates, k):
            mat = [[g[i] for g in self.curve_lattice] for i in subset]
            if abs(determinant(mat)) == 1:
                basis = []
                for i in subset:
                    a = [0] * self.nrays
                    a[i] = 1
                    basis.append(a)
                return basis
        raise ToricError("no nef basis among the invariant divisors; supply one explicitly")

    def _find_ample(self, bound: int) -> Optional[Tuple[int, ...]]:
        k = self.picard_rank
        ones = (1,) * k
        if self.is_ample(ones):
            return ones
        for radius in range(1, bound + 1):
            for w in product(range(-radius, radius + 1), repeat=k):
                if max(abs(x) for x in w) == radius and self.is_ample(w):
                    return tuple(w)
        return None

    # -- classes and pairings -----------------------------------------------

    def basis_class(self, j: int) -> Tuple[int, ...]:
        return tuple(int(i == j) for i in range(self.picard_rank))

    def curve_of_relation(self, relation: Sequence[int]) -> CurveVec:
        """Coordinates of the curve class with ray intersections ``relation``."""
        return tuple(_dot(a, relation) for a in self.nef_basis)

    def ray_intersections(self, d: Sequence[int]) -> Tuple[int, ...]:
        """``(D_i . d)_i`` for a curve class in nef-basis coordinates."""
        return tuple(_dot(q, d) for q in self.divisor_classes)

    def divisor_class(self, ray_coeffs: Sequence[int]) -> Tuple[int, ...]:
        """Class in the p-basis of the invariant divisor ``sum a_i D_i``."""
        k = self.picard_rank
        return tuple(sum(a * self.divisor_classes[i][j] for i, a in enumerate(ray_coeffs)) for j in range(k))

    @staticmethod
    def pairing(div: Sequence, d: Sequence):
        return _dot(div, d)

    def anticanonical(self) -> Tuple[int, ...]:
        return self.divisor_class([1] * self.nrays)

    def is_nef(self, div: Sequence) -> bool:
        return all(_dot(div, c) >= 0 for c in self.wall_curves)

    def is_ample(self, div: Sequence) -> bool:
        return all(_dot(div, c) > 0 for c in self.wall_curves)

    def degree(self, d: Sequence[int]) -> int:
        """Degree of a curve class with respect to the fixed ample class."""
        return _dot(self.ample, d)

    def is_effective(self, d: Sequence[int]) -> bool:
        return self.mori.contains(d)

    def distinct_wall_curves(self) -> List[CurveVec]:
        return sorted(set(self.wall_curves), key=lambda c: (self.degree(c), c))

    def enumerate_effective(self, bound: int) -> List[CurveVec]:
        """Lattice points of the Mori cone with ample degree at most ``bound``."""
        if bound < 0:
            return []
        k = self.picard_rank
        gens = self.mori.generators
        ratios = [[Fraction(g[j], self.degree(g)) for g in gens] for j in range(k)]
        hi = [int(bound * max(max(r), 0)) for r in ratios]
        lo = [-int(-bound * min(min(r), 0)) for r in ratios]
        out = []
        for d in product(*[range(l, h + 1) for l, h in zip(lo, hi)]):
            if self.degree(d) <= bound and self.mori.contains(d):
                out.append(tuple(d))
        return sorted(out, key=lambda c: (self.degree(c), c))

    # -- cohomology -----------------------------------------------------------

    def divisor_polynomials(self) -> List[Polynomial]:
        return [Polynomial.linear(self.names, row) for row in self.divisor_classes]

    @cached_property
    def stanley_reisner(self) -> List[Polynomial]:
        divs = self.divisor_polynomials()
        rels = []
        for coll in self.fan.primitive_collections():
            prod_ = Polynomial.constant(self.names, 1)
            for i in sorted(coll):
                prod_ = prod_ * divs[i]
            rels.append(prod_)
        return rels

    @cached_property
    def cohomology(self) -> CohRing:
        return CohRing(self.names, self.stanley_reisner, name=self.label)

    @property
    def dimension(self) -> int:
        return self.lattice_rank

    def __repr__(self):
        label = f" {self.label}" if self.label else ""
        return f"<ToricVariety{label} rays={self.nrays} cones={len(self.fan.cones)} k={self.picard_rank}>"


def wall_curve_classes(tv: ToricVariety) -> List[CurveVec]:
    return tv.distinct_wall_curves()


def is_nef(div, tv: ToricVariety) -> bool:
    return tv.is_nef(div)


def is_ample(div, tv: ToricVariety) -> bool:
    return tv.is_ample(div)


def enumerate_effective(tv: ToricVariety, bound: int) -> List[CurveVec]:
    return tv.enumerate_effective(bound)


# -- standard fans -------------------------------------------------------------


def projective_space_fan(n: int) -> Fan:
    rays = [[int(i == j) for j in range(n)] for i in range(n)] + [[-1] * n]
    cones = [[j for j in range(n + 1) if j != i] for i in range(n + 1)]
    return Fan(rays, cones)


def product_fan(a: Fan, b: Fan) -> Fan:
    ma, mb = a.lattice_rank, b.lattice_rank
    rays = [list(r) + [0] * mb for r in a.rays] + [[0] * ma + list(r) for r in b.rays]
    cones = [sorted(ca) + [a.nrays + j for j in sorted(cb)] for ca in a.cones for cb in b.cones]
    return Fan(rays, cones)


def hirzebruch_fan(a: int) -> Fan:
    """Fan of the Hirzebruch surface F_a with rays (1,0), (0,1), (-1,a), (0,-1)."""
    return Fan([[1, 0], [0, 1], [-1, a], [0, -1]], [[0, 1], [1, 2], [2, 3], [3, 0]])


def projective_space(n: int) -> ToricVariety:
    return ToricVariety(projective_space_fan(n), label=f"P{n}")
