"""Split projective bundles P(L_0 + ... + L_n) over a toric base, L_0 = O.

The total space is toric.  Its rays are the lifted base rays B_1..B_r
followed by the fiber rays F_0..F_n; the nef basis is (pi^* p_1, ...,
pi^* p_k, z) with z the class of the divisor of F_0, so a curve class has
coordinates ``(d_1, ..., d_k, nu)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import List, Sequence, Tuple

from toricqd.algebra.linalg import determinant, solve
from toricqd.toric.fan import Fan, validate_fan
from toricqd.toric.variety import CurveVec, NotEffectiveError, ToricError, ToricVariety


@dataclass(frozen=True)
class BundleSpec:
    """Base variety plus ``c1(L_i) = sum_j a_ij p_j`` for ``i = 0..n``."""

    base: ToricVariety
    matrix: Tuple[Tuple[int, ...], ...]

    def __init__(self, base: ToricVariety, matrix: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in row) for row in matrix)
        if len(rows) < 2:
            raise ValueError("a projective bundle needs at least two summands (n >= 1)")
        if any(len(row) != base.picard_rank for row in rows):
            raise ValueError(f"each row of the bundle matrix needs {base.picard_rank} entries")
        if any(rows[0]):
            raise ValueError("row 0 of the bundle matrix must vanish (L_0 = O)")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "matrix", rows)

    @property
    def rank(self) -> int:
        """Fiber dimension n."""
        return len(self.matrix) - 1

    def line_class(self, i: int) -> Tuple[int, ...]:
        return self.matrix[i]

    def pairing(self, i: int, beta: Sequence[int]) -> int:
        """L_i(beta) = c1(L_i) . beta."""
        return sum(a * b for a, b in zip(self.matrix[i], beta))

    def nef_lines(self) -> List[bool]:
        return [self.base.is_nef(row) for row in self.matrix[1:]]

    def first_chern(self) -> Tuple[int, ...]:
        k = self.base.picard_rank
        return tuple(sum(row[j] for row in self.matrix) for j in range(k))


def _representative_rays(base: ToricVariety) -> Tuple[int, ...]:
    """Lexicographically first k rays whose classes form a lattice basis."""
    k = base.picard_rank
    for subset in combinations(range(base.nrays), k):
        if abs(determinant([base.divisor_classes[i] for i in subset])) == 1:
            return subset
    raise ToricError("no unimodular set of invariant divisors")


def invariant_representative(base: ToricVariety, cls: Sequence[int]) -> List[int]:
    """Ray coefficients ``c`` with ``sum_i c_i D_i`` of class ``cls``, supported on a fixed ray set."""
    subset = _representative_rays(base)
    cols = [[base.divisor_classes[i][j] for i in subset] for j in range(base.picard_rank)]
    x = solve(cols, list(cls))
    if x is None or any(v.denominator != 1 for v in x):
        raise ToricError("class is not representable by an invariant divisor")
    c = [0] * base.nrays
    for i, v in zip(subset, x):
        c[i] = int(v)
    return c


def bundle_fan(spec: BundleSpec) -> Tuple[Fan, List[List[int]]]:
    """Fan of P(V) and the lift integers ``c[i][j]`` (ray i, summand j = 1..n)."""
    base = spec.base
    fan = base.fan
    m, n, r = fan.lattice_rank, spec.rank, fan.nrays
    reps = [invariant_representative(base, spec.line_class(j)) for j in range(1, n + 1)]
    lift = [[reps[j][i] for j in range(n)] for i in range(r)]
    rays = [list(fan.rays[i]) + lift[i] for i in range(r)]
    rays.append([0] * m + [-1] * n)
    for j in range(n):
        rays.append([0] * m + [int(j == l) for l in range(n)])
    fiber = list(range(r, r + n + 1))
    cones = []
    for c in sorted(fan.cones, key=sorted):
        for omit in fiber:
            cones.append(sorted(c) + [f for f in fiber if f != omit])
    total = Fan(rays, cones)
    report = validate_fan(total, check_projective=False)
    if not (report.smooth and report.complete):
        raise ToricError("lifted fan is not smooth and complete: " + "; ".join(report.problems))
    return total, lift


class ProjectiveBundle:
    """Total space of a split projective bundle as a toric variety."""

    def __init__(self, spec: BundleSpec, label: str = ""):
        self.spec = spec
        self.base = spec.base
        self.fan, self.lift = bundle_fan(spec)
        r = self.base.nrays
        nef = [list(a) + [0] * (spec.rank + 1) for a in self.base.nef_basis]
        z = [0] * self.fan.nrays
        z[r] = 1
        nef.append(z)
        names = tuple(self.base.names) + ("z",)
        self.variety = ToricVariety(
            self.fan, nef_basis=nef, names=names, label=label or "P(V)", require_nef=False
        )

    @property
    def k(self) -> int:
        return self.base.picard_rank

    def fiber_ray(self, i: int) -> int:
        return self.base.nrays + i

    def divisor_class_of_ray(self, index: int) -> Tuple[int, ...]:
        """Class of a ray divisor in the basis (p_1, ..., p_k, z)."""
        return self.variety.divisor_classes[index]

    def key(self, nu: int, beta: Sequence[int]) -> CurveVec:
        return tuple(beta) + (nu,)

    def mori_decomposition(self, d: Sequence[int]) -> Tuple[int, CurveVec]:
        """Split a curve class as ``nu [line in fiber] + s_0(beta)``."""
        d = tuple(d)
        if not self.variety.is_effective(d):
            raise NotEffectiveError(f"class {list(d)} is not effective")
        nu, beta = d[-1], d[:-1]
        if nu < 0 or not self.base.is_effective(beta):
            raise NotEffectiveError(f"class {list(d)} leaves MX + Z>=0 [l]")
        return nu, beta

    @cached_property
    def expected_wall_curves(self) -> List[CurveVec]:
        """Section lifts (L_j(beta), beta) of base wall curves plus the fiber line."""
        out = {self.key(1, (0,) * self.k)}
        for beta in self.base.wall_curves:
            for j in range(self.spec.rank + 1):
                out.add(self.key(self.spec.pairing(j, beta), beta))
        return sorted(out)

    def lifted_nef_basis_ok(self) -> bool:
        return all(self.variety.is_nef(self.variety.basis_class(j)) for j in range(self.k + 1))
