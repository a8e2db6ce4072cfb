"""Pure-Python arithmetic kernels (reference implementation and fallback).

A ring element is a pair ``(nums, den)``: a tuple of Python ints, one per
basis monomial, and a positive common denominator, always in lowest terms.
An ℏ-Laurent polynomial is a dict ``exponent -> (nums, den)`` without zero
entries.  ``_ckernels.pyx`` mirrors every function here.
"""

from math import gcd


class Table:
    """Structure constants ``basis[i] * basis[j] = sum_k c_ijk / tden * basis[k]``.

    ``entries[i * dim + j]`` is a tuple of ``(k, c_ijk)`` pairs with integer
    ``c_ijk``; empty when the product vanishes.
    """

    __slots__ = ("dim", "entries", "tden", "cmax")

    def __init__(self, dim, entries, tden):
        if len(entries) != dim * dim:
            raise ValueError("structure table must have dim*dim entries")
        self.dim = dim
        self.entries = [tuple((int(k), int(c)) for k, c in e) for e in entries]
        self.tden = int(tden)
        self.cmax = max((abs(c) for e in self.entries for _, c in e), default=0)

    def __reduce__(self):
        return (Table, (self.dim, self.entries, self.tden))


def normalize(nums, den):
    if den < 0:
        nums = [-x for x in nums]
        den = -den
    g = gcd(den, *nums)
    if g != 1:
        nums = [x // g for x in nums]
        den //= g
    return tuple(nums), den


def zero(dim):
    return (0,) * dim, 1


def is_zero(vec):
    return not any(vec[0])


def add(a, b):
    an, ad = a
    bn, bd = b
    if ad == bd:
        return normalize([x + y for x, y in zip(an, bn)], ad)
    g = gcd(ad, bd)
    fa, fb = bd // g, ad // g
    return normalize([x * fa + y * fb for x, y in zip(an, bn)], ad * fa)


def sub(a, b):
    bn, bd = b
    return add(a, (tuple(-x for x in bn), bd))


def scale(a, num, den=1):
    an, ad = a
    return normalize([x * num for x in an], ad * den)


def _common(laurent):
    lcm = 1
    for _, d in laurent.values():
        lcm = lcm // gcd(lcm, d) * d
    return lcm, {e: [x * (lcm // d) for x in n] for e, (n, d) in laurent.items()}


def laurent_mul(A, B, table):
    """Product of two ℏ-Laurent polynomials over the ring of ``table``."""
    if not A or not B:
        return {}
    dim = table.dim
    entries = table.entries
    la, sa = _common(A)
    lb, sb = _common(B)
    acc = {}
    for ea, an in sa.items():
        nz_a = [(i, x) for i, x in enumerate(an) if x]
        for eb, bn in sb.items():
            nz_b = [(j, y) for j, y in enumerate(bn) if y]
            e = ea + eb
            out = acc.get(e)
            if out is None:
                out = acc[e] = [0] * dim
            for i, x in nz_a:
                row = i * dim
                for j, y in nz_b:
                    xy = x * y
                    for k, c in entries[row + j]:
                        out[k] += xy * c
    den = la * lb * table.tden
    result = {}
    for e in sorted(acc):
        nums = acc[e]
        if any(nums):
            result[e] = normalize(nums, den)
    return result


def vec_mul(a, b, table):
    out = laurent_mul({0: a}, {0: b}, table)
    return out.get(0, zero(table.dim))


def laurent_add(A, B):
    out = dict(A)
    for e, v in B.items():
        if e in out:
            s = add(out[e], v)
            if any(s[0]):
                out[e] = s
            else:
                del out[e]
        else:
            out[e] = v
    return out
