"""Polynomials in ``s`` as coefficient tuples ``(c0, c1, ...)``, lowest degree first.

Only what the module-theoretic code needs: trimming, degree, the s-adic
valuation and evaluation ``c(A) u``.
"""

from __future__ import annotations

import math
from typing import Sequence

from .exactalg import Field

INF = math.inf


def trim(coeffs: Sequence) -> tuple:
    c = list(coeffs)
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def coerce(field: Field, coeffs: Sequence) -> tuple:
    return trim(field(x) for x in coeffs)


def degree(c: Sequence) -> int:
    """Degree, with ``-1`` for the zero polynomial."""
    return len(trim(c)) - 1


def valuation(c: Sequence):
    """Largest ``v`` with ``s^v | c``; infinite for the zero polynomial."""
    for i, a in enumerate(c):
        if a:
            return i
    return INF


def monomial(field: Field, k: int) -> tuple:
    return (field.zero,) * k + (field.one,)


def shift(c: Sequence, k: int, bound: int | None = None) -> tuple:
    """``s^k c(s)``, truncated below ``s^bound`` when given."""
    if not trim(c):
        return ()
    out = (type(c[0])(0),) * k + tuple(c)
    if bound is not None:
        out = out[:bound]
    return trim(out)


def evaluate(powers: Sequence, c: Sequence, u: Sequence, field: Field) -> tuple:
    """``c(A) u`` given ``powers[i] = A^i``; terms beyond the cached powers vanish."""
    acc = [field.zero] * len(u)
    for i, a in enumerate(c):
        if not a or i >= len(powers):
            continue
        v = powers[i].apply(u)
        for k, x in enumerate(v):
            if x:
                acc[k] = field.add(acc[k], field.mul(a, x))
    return tuple(acc)
