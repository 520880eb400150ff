"""Independent brute-force oracles and shared helpers for the tests."""

import random
from itertools import product

from nilhyp.exactalg import GF, QQ, Subspace
from nilhyp.verify import random_conjugate, random_type


def points(S: Subspace) -> frozenset:
    """Every vector of a subspace over GF(p), by enumerating linear combinations."""
    F = S.field
    n = S.ambient_dim
    out = set()
    for coeffs in product(F.elements(), repeat=S.dim):
        v = [0] * n
        for c, b in zip(coeffs, S.basis):
            for k in range(n):
                v[k] = (v[k] + c * b[k]) % F.p
        out.add(tuple(v))
    return frozenset(out)


def all_subspaces_by_closure(p: int, n: int) -> set:
    """All subspaces of GF(p)^n as point sets, grown from {0} one vector at a time."""
    vectors = list(product(range(p), repeat=n))
    zero = frozenset([(0,) * n])
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for S in frontier:
            for v in vectors:
                if v in S:
                    continue
                T = frozenset(tuple((a + c * b) % p for a, b in zip(s, v)) for s in S for c in range(p))
                if T not in seen:
                    seen.add(T)
                    nxt.append(T)
        frontier = nxt
    return seen


FIELDS = [GF(2), GF(3), GF(5), QQ]


def conjugated(seed, field, t=None, **kw):
    rng = random.Random(seed)
    t = t if t is not None else random_type(rng, **kw)
    op, P = random_conjugate(rng, t, field)
    return t, op, P
