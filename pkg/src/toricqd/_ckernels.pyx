# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled arithmetic kernels; same API and results as ``_pykernels``.

``laurent_mul`` runs a machine-integer loop whenever a bound on every
accumulated value fits in a signed 64-bit integer, and otherwise falls back
to arbitrary-precision Python ints.
"""

from libc.stdlib cimport malloc, calloc, free
from math import gcd

cdef long long _LIMIT = (1 << 62)


cdef class Table:
    cdef public Py_ssize_t dim
    cdef public list entries
    cdef public object tden
    cdef public object cmax
    cdef Py_ssize_t *off
    cdef Py_ssize_t *ks
    cdef long long *cs
    cdef bint small

    def __cinit__(self, Py_ssize_t dim, entries, tden):
        cdef Py_ssize_t n = 0, idx = 0, p
        if len(entries) != dim * dim:
            raise ValueError("structure table must have dim*dim entries")
        self.dim = dim
        self.entries = [tuple((int(k), int(c)) for k, c in e) for e in entries]
        self.tden = int(tden)
        self.cmax = max((abs(c) for e in self.entries for _, c in e), default=0)
        self.small = self.cmax < _LIMIT
        for e in self.entries:
            n += len(e)
        self.off = <Py_ssize_t *> malloc((dim * dim + 1) * sizeof(Py_ssize_t))
        self.ks = <Py_ssize_t *> malloc((n + 1) * sizeof(Py_ssize_t))
        self.cs = <long long *> malloc((n + 1) * sizeof(long long))
        if self.off == NULL or self.ks == NULL or self.cs == NULL:
            raise MemoryError()
        for p in range(dim * dim):
            self.off[p] = idx
            for k, c in self.entries[p]:
                self.ks[idx] = k
                self.cs[idx] = c if self.small else 0
                idx += 1
        self.off[dim * dim] = idx

    def __dealloc__(self):
        free(self.off)
        free(self.ks)
        free(self.cs)

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


def zero(Py_ssize_t dim):
    return (0,) * dim, 1


def is_zero(vec):
    return not any(vec[0])


def add(a, b):
    an, ad = a
    bn, bd = b
    if ad == bd:
        return normalize([x + y for x, y in zip(an, bn)], ad)
    g = gcd(ad, bd)
    fa = bd // g
    fb = ad // g
    return normalize([x * fa + y * fb for x, y in zip(an, bn)], ad * fa)


def sub(a, b):
    bn, bd = b
    return add(a, (tuple(-x for x in bn), bd))


def scale(a, num, den=1):
    an, ad = a
    return normalize([x * num for x in an], ad * den)


cdef tuple _common(dict laurent):
    lcm = 1
    for _, d in laurent.values():
        lcm = lcm // gcd(lcm, d) * d
    scaled = {}
    mx = 0
    for e, (n, d) in laurent.items():
        f = lcm // d
        row = [x * f for x in n]
        scaled[e] = row
        for x in row:
            if x > mx:
                mx = x
            elif -x > mx:
                mx = -x
    return lcm, scaled, mx


cdef dict _mul_small(dict sa, dict sb, Table t, Py_ssize_t lo, Py_ssize_t span):
    cdef Py_ssize_t dim = t.dim
    cdef Py_ssize_t na = len(sa), nb = len(sb)
    cdef long long *a = <long long *> malloc((na * dim + 1) * sizeof(long long))
    cdef long long *b = <long long *> malloc((nb * dim + 1) * sizeof(long long))
    cdef Py_ssize_t *ea = <Py_ssize_t *> malloc((na + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *eb = <Py_ssize_t *> malloc((nb + 1) * sizeof(Py_ssize_t))
    cdef long long *acc = <long long *> calloc(span * dim + 1, sizeof(long long))
    cdef char *used = <char *> calloc(span + 1, sizeof(char))
    cdef Py_ssize_t p, q, i, j, s, base_a, base_b, base_o, off
    cdef long long x, xy
    if a == NULL or b == NULL or ea == NULL or eb == NULL or acc == NULL or used == NULL:
        free(a); free(b); free(ea); free(eb); free(acc); free(used)
        raise MemoryError()
    try:
        p = 0
        for e, row in sa.items():
            ea[p] = e
            for i in range(dim):
                a[p * dim + i] = row[i]
            p += 1
        p = 0
        for e, row in sb.items():
            eb[p] = e
            for i in range(dim):
                b[p * dim + i] = row[i]
            p += 1
        for p in range(na):
            base_a = p * dim
            for q in range(nb):
                base_b = q * dim
                base_o = (ea[p] + eb[q] - lo) * dim
                used[ea[p] + eb[q] - lo] = 1
                for i in range(dim):
                    x = a[base_a + i]
                    if x == 0:
                        continue
                    for j in range(dim):
                        if b[base_b + j] == 0:
                            continue
                        xy = x * b[base_b + j]
                        off = i * dim + j
                        for s in range(t.off[off], t.off[off + 1]):
                            acc[base_o + t.ks[s]] += xy * t.cs[s]
        out = {}
        for p in range(span):
            if used[p]:
                out[p + lo] = [acc[p * dim + i] for i in range(dim)]
        return out
    finally:
        free(a); free(b); free(ea); free(eb); free(acc); free(used)


cdef dict _mul_big(dict sa, dict sb, Table t):
    cdef Py_ssize_t dim = t.dim
    cdef Py_ssize_t i, j, row
    cdef list entries = t.entries
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
    return acc


def laurent_mul(dict A, dict B, Table table):
    """Product of two ℏ-Laurent polynomials over the ring of ``table``."""
    if not A or not B:
        return {}
    cdef Py_ssize_t dim = table.dim
    la, sa, ma = _common(A)
    lb, sb, mb = _common(B)
    bound = ma * mb * table.cmax * dim * dim * min(len(sa), len(sb))
    if table.small and ma < _LIMIT and mb < _LIMIT and bound < _LIMIT:
        lo = min(sa) + min(sb)
        span = max(sa) + max(sb) - lo + 1
        acc = _mul_small(sa, sb, table, lo, span)
    else:
        acc = _mul_big(sa, sb, table)
    den = la * lb * table.tden
    result = {}
    for e in sorted(acc):
        nums = acc[e]
        if any(nums):
            result[e] = normalize(nums, den)
    return result


def vec_mul(a, b, Table table):
    out = laurent_mul({0: a}, {0: b}, table)
    return out.get(0, zero(table.dim))


def laurent_add(dict A, dict B):
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
