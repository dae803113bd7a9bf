"""Exact polynomial arithmetic over the rationals.

Polynomials are tuples of :class:`fractions.Fraction`, lowest degree first,
with no trailing zeros (the zero polynomial is the empty tuple).
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, factorial, isqrt
from typing import Iterable, Sequence

Poly = tuple


def poly(coeffs: Iterable) -> Poly:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def add(p: Sequence, q: Sequence) -> Poly:
    n = max(len(p), len(q))
    return poly((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def scale(p: Sequence, s) -> Poly:
    return poly(s * c for c in p)


def mul(p: Sequence, q: Sequence) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly(out)


def power(p: Sequence, n: int) -> Poly:
    out: Poly = (Fraction(1),)
    for _ in range(n):
        out = mul(out, p)
    return out


def deriv(p: Sequence) -> Poly:
    return poly(i * c for i, c in enumerate(p) if i > 0)


def shift_degree(p: Sequence, k: int) -> Poly:
    """Multiply by ``x**k``."""
    return poly([0] * k + list(p)) if p else ()


def divmod_poly(p: Sequence, q: Sequence) -> tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(poly(p))
    dq = len(q) - 1
    if len(r) - 1 < dq:
        return (), tuple(r)
    out = [Fraction(0)] * (len(r) - dq)
    lead = Fraction(q[-1])
    for k in range(len(r) - 1 - dq, -1, -1):
        c = r[k + dq] / lead
        out[k] = c
        if c:
            for j, b in enumerate(q):
                r[k + j] -= c * b
    return poly(out), poly(r)


def exact_div(p: Sequence, q: Sequence) -> Poly:
    quo, rem = divmod_poly(p, q)
    if rem:
        raise ArithmeticError("polynomial division is not exact")
    return quo


def evaluate(p: Sequence, x):
    acc = 0 * x
    for c in reversed(p):
        acc = acc * x + c
    return acc


def compose_scale(p: Sequence, a) -> Poly:
    """Return ``p(a*x)``."""
    a = Fraction(a)
    return poly(c * a**i for i, c in enumerate(p))


def even_part_in_square(p: Sequence) -> Poly:
    """For an even polynomial ``p(x) = q(x**2)`` return ``q``."""
    if any(c for c in p[1::2]):
        raise ArithmeticError("polynomial is not even")
    return poly(p[0::2])


def binomial_expand(a, b, n: int) -> list:
    """Coefficients of ``(a + b*x)**n`` as a list indexed by power of x."""
    return [comb(n, j) * a ** (n - j) * b**j for j in range(n + 1)]


def gauss_moment(k: int) -> Fraction:
    """``int_{-inf}^{inf} s**k exp(-s**2) ds / sqrt(pi)``, exact."""
    if k % 2:
        return Fraction(0)
    # Gamma((k+1)/2)/sqrt(pi) = (k-1)!! / 2**(k/2)
    return Fraction(factorial(k), factorial(k // 2) * 4 ** (k // 2))


def exp_moment(k: int, beta: Fraction) -> Fraction:
    """``int_0^inf rho**k exp(-beta*rho) d rho``, exact."""
    return Fraction(factorial(k)) / Fraction(beta) ** (k + 1)


def split_square(r: Fraction) -> tuple[Fraction, Fraction]:
    """Write ``sqrt(r) = a * sqrt(s)`` with rational ``a`` and square-free integer ``s``.

    Returns ``(a, s)``; ``r`` must be non-negative.  Only prime factors below
    2000 are pulled out of the root, which covers every normalization used here.
    """
    r = Fraction(r)
    if r < 0:
        raise ValueError("negative radicand")
    if r == 0:
        return Fraction(0), Fraction(1)
    num = r.numerator * r.denominator
    outside = 1
    inside = 1
    f = 2
    while f * f <= num and f < 2000:
        while num % (f * f) == 0:
            num //= f * f
            outside *= f
        f += 1
    inside = num
    # sqrt(p/q) = sqrt(p*q)/q
    s = isqrt(inside)
    if s * s == inside:
        outside *= s
        inside = 1
    return Fraction(outside, r.denominator), Fraction(inside)
