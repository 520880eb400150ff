"""r-sequences and the hyperinvariant subspaces they describe.

An r-sequence for a type ``t_1 < ... < t_m`` is a tuple of integers with
``0 <= r_j <= t_j`` such that both ``r_j`` and ``t_j - r_j`` are
non-decreasing in ``j``.  It labels the subspace ``sum_j A^{r_j} V_{t_j}``,
which also equals ``sum_j (Im A^{r_j} & Ker A^{t_j - r_j})``.

Subspace inclusion reverses the componentwise order on r-sequences, so the
intersection of two such subspaces is labelled by the componentwise max and
their sum by the componentwise min.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .exactalg import MismatchError, Subspace, subspace_sum
from .nilpotent import GeneratorSet, NilpotentOperator, SegreType, block_subspace


class RSequenceError(ValueError):
    pass


class RangeViolation(RSequenceError):
    pass


class MonotonicityViolation(RSequenceError):
    pass


class CoMonotonicityViolation(RSequenceError):
    pass


def check_constraints(t: SegreType, r: Sequence[int]) -> None:
    """Raise on the first violated constraint, naming the offending index or pair."""
    if len(r) != t.m:
        raise RangeViolation(f"expected {t.m} entries, got {len(r)}")
    for j, (rj, tj) in enumerate(zip(r, t.sizes), start=1):
        if not 0 <= rj <= tj:
            raise RangeViolation(f"r_{j} = {rj} not in 0..{tj}")
    for j in range(1, t.m + 1):
        for l in range(j + 1, t.m + 1):
            rj, rl = r[j - 1], r[l - 1]
            if rj > rl:
                raise MonotonicityViolation(f"r_{j} = {rj} > r_{l} = {rl}")
            cj, cl = t.size(j) - rj, t.size(l) - rl
            if cj > cl:
                raise CoMonotonicityViolation(
                    f"t_{j} - r_{j} = {cj} > t_{l} - r_{l} = {cl}")


def is_valid(t: SegreType, r: Sequence[int]) -> bool:
    try:
        check_constraints(t, r)
    except RSequenceError:
        return False
    return True


@dataclass(frozen=True)
class RSequence:
    type: SegreType
    r: tuple

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        check_constraints(self.type, self.r)

    def __iter__(self):
        return iter(self.r)

    def __len__(self):
        return len(self.r)

    def __getitem__(self, i):
        return self.r[i]

    @property
    def dim(self) -> int:
        """Dimension of the labelled subspace, ``sum_j m_j (t_j - r_j)``."""
        return sum(m * (t - r) for t, m, r in zip(self.type.sizes, self.type.mults, self.r))

    def __le__(self, other: RSequence) -> bool:
        """Inclusion order of the labelled subspaces."""
        _same_type(self, other)
        return all(a >= b for a, b in zip(self.r, other.r))

    def __lt__(self, other: RSequence) -> bool:
        return self <= other and self.r != other.r

    def __str__(self):
        return "(" + ",".join(map(str, self.r)) + ")"


def validate(t: SegreType, r: Sequence[int]) -> RSequence:
    return RSequence(t, tuple(r))


def enumerate_rsequences(t: SegreType) -> list[RSequence]:
    """All r-sequences of ``t`` in lexicographic order."""
    out: list[RSequence] = []

    def extend(prefix: list[int]):
        j = len(prefix)
        if j == t.m:
            out.append(RSequence(t, tuple(prefix)))
            return
        tj = t.sizes[j]
        lo = prefix[-1] if prefix else 0
        for rj in range(lo, tj + 1):
            if prefix and tj - rj < t.sizes[j - 1] - prefix[-1]:
                continue
            extend(prefix + [rj])

    extend([])
    return out


def bruteforce_rsequences(t: SegreType) -> list[tuple]:
    """Filter every in-range integer tuple through the constraints."""
    return [r for r in product(*(range(s + 1) for s in t.sizes)) if is_valid(t, r)]


def _same_type(a: RSequence, b: RSequence):
    if a.type != b.type:
        raise MismatchError(f"r-sequences of types {a.type} and {b.type}")


def _check_gs(gs: GeneratorSet, r: RSequence):
    if gs.segre != r.type:
        raise MismatchError(f"generator set of type {gs.segre}, r-sequence of type {r.type}")


def subspace_ii(gs: GeneratorSet, r: RSequence) -> Subspace:
    """``sum_j A^{r_j} V_{t_j}`` spanned by the tails of the generator chains."""
    _check_gs(gs, r)
    return block_subspace(gs, r.r)


def subspace_iii(op: NilpotentOperator, r: RSequence) -> Subspace:
    """``sum_j (Im A^{r_j} & Ker A^{t_j - r_j})``, from kernels and images only."""
    if op.segre != r.type:
        raise MismatchError(f"operator of type {op.segre}, r-sequence of type {r.type}")
    parts = [op.image(rj) & op.kernel(tj - rj) for rj, tj in zip(r.r, r.type.sizes)]
    if not parts:
        return Subspace.zero(op.field, op.n)
    return subspace_sum(*parts)


def meet(a: RSequence, b: RSequence) -> RSequence:
    """Label of the intersection: componentwise max."""
    _same_type(a, b)
    return RSequence(a.type, tuple(map(max, a.r, b.r)))


def join(a: RSequence, b: RSequence) -> RSequence:
    """Label of the sum: componentwise min."""
    _same_type(a, b)
    return RSequence(a.type, tuple(map(min, a.r, b.r)))


def identify(op: NilpotentOperator, gs: GeneratorSet, X: Subspace) -> tuple | None:
    """Exponents ``r`` with ``X = sum_j A^{r_j} V_{t_j}``, or None if ``X`` has no such form.

    The result is returned even when it breaks the monotonicity constraints;
    check it with :func:`is_valid` to learn whether ``X`` is hyperinvariant.
    """
    t = gs.segre
    if X.ambient_dim != op.n or X.field != op.field:
        raise MismatchError("subspace does not live in the operator's space")
    r = []
    for j in range(1, t.m + 1):
        d = (X & gs.block_space(j)).dim
        if d % t.mult(j):
            return None
        r.append(t.size(j) - d // t.mult(j))
    return tuple(r) if block_subspace(gs, r) == X else None


def hasse_edges(t: SegreType) -> list[tuple[RSequence, RSequence]]:
    """Covering pairs ``(a, b)`` with the subspace of ``a`` maximal inside that of ``b``."""
    seqs = enumerate_rsequences(t)
    edges = []
    for a in seqs:
        for b in seqs:
            if not a < b:
                continue
            if any(a < c and c < b for c in seqs):
                continue
            edges.append((a, b))
    return edges


def to_dot(t: SegreType, name: str = "hyperlattice") -> str:
    """DOT digraph of the Hasse diagram, edges pointing from smaller to larger subspace."""
    seqs = enumerate_rsequences(t)
    ids = {s.r: f"n{i}" for i, s in enumerate(seqs)}
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for s in seqs:
        lines.append(f'  {ids[s.r]} [label="r={s} dim={s.dim}"];')
    for a, b in hasse_edges(t):
        lines.append(f"  {ids[a.r]} -> {ids[b.r]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
