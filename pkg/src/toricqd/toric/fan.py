"""Simplicial fans: storage, validation, walls and primitive collections."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from toricqd.algebra.linalg import determinant, rank, solve


class FanError(ValueError):
    """Malformed fan input (non-primitive or duplicate ray, non-simplicial cone)."""


@dataclass(frozen=True)
class Fan:
    rays: Tuple[Tuple[int, ...], ...]
    cones: Tuple[FrozenSet[int], ...]
    lattice_rank: int = field(default=-1)

    def __init__(self, rays: Sequence[Sequence[int]], cones: Sequence[Sequence[int]], lattice_rank: Optional[int] = None):
        rays_t = tuple(tuple(int(x) for x in r) for r in rays)
        if not rays_t:
            raise FanError("a fan needs at least one ray")
        m = len(rays_t[0]) if lattice_rank is None else int(lattice_rank)
        if any(len(r) != m for r in rays_t):
            raise FanError(f"all rays must have length {m}")
        cones_t = tuple(frozenset(int(i) for i in c) for c in cones)
        for c in cones_t:
            if any(i < 0 or i >= len(rays_t) for i in c):
                raise FanError(f"cone {sorted(c)} refers to a missing ray")
        object.__setattr__(self, "rays", rays_t)
        object.__setattr__(self, "cones", cones_t)
        object.__setattr__(self, "lattice_rank", m)

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def cone_rays(self, cone) -> List[Tuple[int, ...]]:
        return [self.rays[i] for i in sorted(cone)]

    def is_face(self, subset) -> bool:
        s = frozenset(subset)
        return any(s <= c for c in self.cones)

    def walls(self) -> Dict[FrozenSet[int], List[FrozenSet[int]]]:
        """Codimension-one faces of maximal cones, with the maximal cones containing them."""
        out: Dict[FrozenSet[int], List[FrozenSet[int]]] = {}
        for c in self.cones:
            if len(c) != self.lattice_rank:
                continue
            for i in c:
                out.setdefault(c - {i}, []).append(c)
        return out

    def primitive_collections(self) -> List[FrozenSet[int]]:
        """Minimal subsets of rays that do not span a cone (Stanley-Reisner generators)."""
        out: List[FrozenSet[int]] = []
        for size in range(1, self.lattice_rank + 2):
            for subset in combinations(range(self.nrays), size):
                s = frozenset(subset)
                if self.is_face(s):
                    continue
                if any(p <= s for p in out):
                    continue
                out.append(s)
        return out


@dataclass
class FanReport:
    smooth: bool
    complete: bool
    projective_hint: Optional[bool]
    problems: List[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "smooth": self.smooth,
            "complete": self.complete,
            "projective_hint": self.projective_hint,
            "problems": list(self.problems),
        }


def _gcd_minors(vectors: Sequence[Sequence[int]]) -> int:
    """gcd of the maximal minors of the matrix with the given rows."""
    k, m = len(vectors), len(vectors[0])
    g = 0
    for cols in combinations(range(m), k):
        minor = determinant([[v[c] for c in cols] for v in vectors])
        g = gcd(g, int(minor))
        if g == 1:
            return 1
    return g


def check_structure(fan: Fan) -> None:
    """Raise :class:`FanError` on non-primitive/duplicate rays or non-simplicial cones."""
    seen = set()
    for i, r in enumerate(fan.rays):
        g = 0
        for x in r:
            g = gcd(g, x)
        if g != 1:
            raise FanError(f"ray {i} = {list(r)} is not primitive")
        if r in seen:
            raise FanError(f"duplicate ray {list(r)}")
        seen.add(r)
    for c in fan.cones:
        if not c:
            raise FanError("empty maximal cone")
        if rank(fan.cone_rays(c)) != len(c):
            raise FanError(f"cone {sorted(c)} is not simplicial")


def _opposite_sides(fan: Fan, wall: FrozenSet[int], c1: FrozenSet[int], c2: FrozenSet[int]) -> bool:
    (i,) = c1 - wall
    (j,) = c2 - wall
    # write b_i + b_j in the span of the wall and b_i; opposite sides iff the
    # coefficient of b_i in b_j is negative.
    basis = fan.cone_rays(wall) + [fan.rays[i]]
    cols = [list(col) for col in zip(*basis)]
    x = solve(cols, list(fan.rays[j]))
    return x is not None and x[-1] < 0


def validate_fan(fan: Fan, check_projective: bool = True) -> FanReport:
    """Smoothness, completeness and (optionally) a projectivity hint.

    >>> validate_fan(Fan([[1], [-1]], [[0], [1]])).complete
    True
    """
    check_structure(fan)
    m = fan.lattice_rank
    problems: List[str] = []
    smooth = True
    for c in fan.cones:
        vecs = fan.cone_rays(c)
        if len(c) == m:
            ok = abs(determinant(vecs)) == 1
        else:
            ok = _gcd_minors(vecs) == 1
        if not ok:
            smooth = False
            problems.append(f"cone {sorted(c)} is not unimodular")

    complete = True
    if any(len(c) != m for c in fan.cones):
        complete = False
        problems.append("some maximal cone is not full-dimensional")
    for wall, owners in sorted(fan.walls().items(), key=lambda kv: sorted(kv[0])):
        if len(owners) != 2:
            complete = False
            problems.append(f"wall {sorted(wall)} lies in {len(owners)} maximal cone(s)")
        elif not _opposite_sides(fan, wall, owners[0], owners[1]):
            complete = False
            problems.append(f"cones {sorted(owners[0])} and {sorted(owners[1])} overlap")

    projective: Optional[bool] = None
    if check_projective and smooth and complete:
        from toricqd.toric.variety import ToricVariety, ToricError

        try:
            ToricVariety(fan)
            projective = True
        except ToricError as exc:
            projective = False
            problems.append(str(exc))
    return FanReport(smooth, complete, projective, problems)
