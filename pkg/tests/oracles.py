"""Independent sympy expansions used as test oracles."""

from fractions import Fraction

import sympy

p, h, u = sympy.symbols("p h u")


def expand_in_p(expr, top: int):
    """``{(hbar exponent, (j,)): Fraction}`` for ``expr(p, h)`` with ``p^(top+1) = 0``.

    Each p-coefficient is a Laurent polynomial in h; it is read off by
    substituting ``h = 1/u``.
    """
    series = sympy.series(expr, p, 0, top + 1).removeO() if top >= 0 else expr
    out = {}
    for j in range(top + 1):
        cj = sympy.expand(series.coeff(p, j))
        if cj == 0:
            continue
        poly = sympy.Poly(sympy.expand(sympy.cancel(cj.subs(h, 1 / u))), u)
        for (k,), c in poly.terms():
            out[(-k, (j,))] = Fraction(int(c.p), int(c.q))
    return out


def projective_i(n: int, d: int):
    expr = sympy.Integer(1)
    for m in range(1, d + 1):
        expr *= (p + m * h) ** (-(n + 1))
    return expand_in_p(expr, n)


def hbar_inverse_scalar(expr):
    """Coefficient of 1/h at p = 0."""
    val = sympy.cancel(expr.subs(p, 0) * h)
    return Fraction(int(sympy.Rational(val).p), int(sympy.Rational(val).q))
