"""Brute-force ground truth for hyperinvariance.

The commutant ``{B : AB = BA}`` is the kernel of ``B -> AB - BA``, a linear
system in ``n^2`` unknowns.  To keep that system sparse it is solved for a
similar matrix ``A' = S^{-1} A S`` and mapped back by ``B = S B' S^{-1}``.
Any invertible ``S`` gives the right answer; a Jordan basis only makes the
elimination cheap.  ``precondition=False`` solves for ``A`` itself.

A subspace is invariant under every element of a linear space of maps iff it
is invariant under each element of a basis (``(sum c_i B_i) x`` is a linear
combination of the ``B_i x``), so hyperinvariance is decided on the basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Iterator

from .exactalg import Matrix, MismatchError, Subspace, nullspace_basis
from .nilpotent import NilpotentOperator

SUBSPACE_LIMIT = 10**6


class TooLarge(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CommutantBasis:
    op: NilpotentOperator
    frame: Matrix
    frame_inv: Matrix
    local: tuple  # basis of the commutant of frame^-1 A frame

    @property
    def dimension(self) -> int:
        return len(self.local)

    @cached_property
    def basis(self) -> tuple:
        return tuple(self.to_global(B) for B in self.local)

    def to_global(self, B: Matrix) -> Matrix:
        return self.frame @ B @ self.frame_inv

    def __len__(self):
        return len(self.local)

    def __iter__(self):
        return iter(self.basis)


def _solve_commutant(A: Matrix) -> list[Matrix]:
    F = A.field
    n = A.rows
    nn = n * n
    z = F.zero
    rows = []
    # equation (i, k):  sum_j A[i][j] B[j][k] - sum_j B[i][j] A[j][k] = 0
    for i in range(n):
        Ai = A.data[i]
        for k in range(n):
            row = [z] * nn
            for j in range(n):
                if Ai[j]:
                    row[j * n + k] = F.add(row[j * n + k], Ai[j])
                a = A.data[j][k]
                if a:
                    row[i * n + j] = F.sub(row[i * n + j], a)
            if any(row):
                rows.append(row)
    out = []
    for v in nullspace_basis(F, rows, nn):
        out.append(Matrix(F, n, n, tuple(tuple(v[r * n:(r + 1) * n]) for r in range(n))))
    return out


@lru_cache(maxsize=128)
def commutant_basis(op: NilpotentOperator, precondition: bool = True) -> CommutantBasis:
    A = op.matrix
    if precondition:
        S, Sinv = op.generators.basis, op.generators.basis_inv
    else:
        S = Sinv = Matrix.identity(op.field, op.n)
    local_A = Sinv @ A @ S
    local = _solve_commutant(local_A)
    for B in local:
        if local_A @ B != B @ local_A:
            raise AssertionError("commutant solver returned a non-commuting matrix")
    return CommutantBasis(op, S, Sinv, tuple(local))


def commutant_dimension_formula(block_sizes) -> int:
    """Sum of ``min(t_a, t_b)`` over ordered pairs of blocks."""
    return sum(min(a, b) for a in block_sizes for b in block_sizes)


def violation(X: Subspace, B: Matrix):
    """A basis vector ``x`` of ``X`` with ``B x`` outside ``X``, or None."""
    if B.field != X.field or B.cols != X.ambient_dim or B.rows != X.ambient_dim:
        raise MismatchError("matrix does not act on the subspace's ambient space")
    for x in X.basis:
        if not X.contains(B.apply(x)):
            return x
    return None


def is_invariant(X: Subspace, B: Matrix) -> bool:
    return violation(X, B) is None


def is_hyperinvariant(op: NilpotentOperator, X: Subspace, cb: CommutantBasis | None = None):
    """``(True, None)`` if every commuting matrix maps ``X`` into itself,
    otherwise ``(False, B)`` with ``B`` a commuting matrix that does not."""
    if X.field != op.field or X.ambient_dim != op.n:
        raise MismatchError("subspace does not live in the operator's space")
    cb = commutant_basis(op) if cb is None else cb
    local_X = X.image(cb.frame_inv)
    for B in cb.local:
        if violation(local_X, B) is not None:
            return False, cb.to_global(B)
    return True, None


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_subspaces(n: int, p: int) -> int:
    return sum(gaussian_binomial(n, k, p) for k in range(n + 1))


def enumerate_subspaces(field, n: int, limit: int = SUBSPACE_LIMIT) -> Iterator[Subspace]:
    """Every subspace of ``GF(p)^n`` exactly once, by dimension, then pivot
    columns, then the free RREF entries in lexicographic order."""
    if not field.is_finite:
        raise ValueError("subspace enumeration needs a finite field")
    total = count_subspaces(n, field.p)
    if total > limit:
        raise TooLarge(f"GF({field.p})^{n} has {total} subspaces (limit {limit})")
    return _enumerate(field, n)


def _enumerate(field, n):
    elems = field.elements()
    z, one = field.zero, field.one
    for k in range(n + 1):
        for pivots in combinations(range(n), k):
            pivset = set(pivots)
            free = [(i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivset]
            for values in product(elems, repeat=len(free)):
                rows = [[z] * n for _ in range(k)]
                for i, pc in enumerate(pivots):
                    rows[i][pc] = one
                for (i, c), v in zip(free, values):
                    rows[i][c] = v
                yield Subspace(field, n, tuple(map(tuple, rows)), pivots)


def bruteforce_hyperinvariant(op: NilpotentOperator, limit: int = SUBSPACE_LIMIT) -> frozenset:
    """All hyperinvariant subspaces, found by filtering every subspace."""
    if not op.field.is_finite:
        raise ValueError("exhaustive search needs a finite field")
    cb = commutant_basis(op)
    return frozenset(X for X in enumerate_subspaces(op.field, op.n, limit)
                     if is_hyperinvariant(op, X, cb)[0])
