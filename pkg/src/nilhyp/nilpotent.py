"""Structure of a nilpotent operator.

Blocks are indexed the mathematical way: ``j = 1 .. m`` runs over the
distinct block sizes ``t_1 < ... < t_m`` and ``sigma = 1 .. m_j`` over the
blocks of size ``t_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterator, Sequence

from .exactalg import Field, Matrix, MismatchError, Subspace, kernel_image, unit_vector
from .poly import INF, trim

Key = tuple  # (j, sigma), both 1-based


class NotNilpotent(ValueError):
    pass


class InvalidWeyr(ValueError):
    pass


@dataclass(frozen=True)
class SegreType:
    """Strictly increasing block sizes with their multiplicities."""

    sizes: tuple
    mults: tuple

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(t) for t in self.sizes))
        object.__setattr__(self, "mults", tuple(int(m) for m in self.mults))
        if len(self.sizes) != len(self.mults):
            raise ValueError("sizes and multiplicities differ in length")
        if any(t < 1 for t in self.sizes) or any(m < 1 for m in self.mults):
            raise ValueError("sizes and multiplicities must be positive")
        if any(a >= b for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValueError(f"sizes must be strictly increasing: {self.sizes}")

    @classmethod
    def parse(cls, text: str) -> SegreType:
        """Parse ``t1:m1,t2:m2,...``; an empty string is the type of the zero space."""
        text = text.strip()
        if not text:
            return cls((), ())
        sizes, mults = [], []
        for item in text.split(","):
            t, sep, m = item.partition(":")
            if not sep:
                raise ValueError(f"expected t:m, got {item!r}")
            try:
                sizes.append(int(t))
                mults.append(int(m))
            except ValueError as exc:
                raise ValueError(f"expected integers in {item!r}") from exc
        return cls(tuple(sizes), tuple(mults))

    @classmethod
    def from_block_sizes(cls, blocks: Sequence[int]) -> SegreType:
        counts: dict[int, int] = {}
        for b in blocks:
            counts[b] = counts.get(b, 0) + 1
        sizes = sorted(counts)
        return cls(tuple(sizes), tuple(counts[t] for t in sizes))

    def __str__(self):
        return ",".join(f"{t}:{m}" for t, m in zip(self.sizes, self.mults))

    @property
    def m(self) -> int:
        """Number of distinct block sizes."""
        return len(self.sizes)

    @property
    def dim(self) -> int:
        return sum(t * m for t, m in zip(self.sizes, self.mults))

    def size(self, j: int) -> int:
        return self.sizes[j - 1]

    def mult(self, j: int) -> int:
        return self.mults[j - 1]

    def keys(self) -> Iterator[Key]:
        for j, m in enumerate(self.mults, start=1):
            for sigma in range(1, m + 1):
                yield (j, sigma)

    def block_sizes(self) -> list[int]:
        return [t for t, m in zip(self.sizes, self.mults) for _ in range(m)]


@dataclass(frozen=True, eq=False)
class NilpotentOperator:
    """A nilpotent matrix with its powers, kernels and images cached.

    ``powers[i] = A^i``, ``kernels[i] = Ker A^i`` and ``images[i] = Im A^i``
    for ``0 <= i <= index``.
    """

    matrix: Matrix
    index: int
    powers: tuple
    kernels: tuple
    images: tuple

    @classmethod
    def from_matrix(cls, m: Matrix) -> NilpotentOperator:
        if not m.is_square:
            raise MismatchError(f"operator must be square, got {m.rows}x{m.cols}")
        n = m.rows
        powers = [Matrix.identity(m.field, n)]
        while not powers[-1].is_zero():
            if len(powers) > n:
                raise NotNilpotent("matrix is not nilpotent")
            powers.append(powers[-1] @ m)
        pairs = [kernel_image(P) for P in powers]
        return cls(m, len(powers) - 1, tuple(powers), tuple(k for k, _ in pairs), tuple(i for _, i in pairs))

    @property
    def field(self) -> Field:
        return self.matrix.field

    @property
    def n(self) -> int:
        return self.matrix.rows

    def apply(self, x: Sequence) -> tuple:
        return self.matrix.apply(x)

    def power(self, k: int) -> Matrix:
        return self.powers[min(k, self.index)]

    def kernel(self, k: int) -> Subspace:
        """``Ker A^k``; saturates at the whole space for ``k >= index``."""
        return self.kernels[min(k, self.index)]

    def image(self, k: int) -> Subspace:
        return self.images[min(k, self.index)]

    @cached_property
    def weyr(self) -> tuple:
        return tuple(self.kernels[i].dim for i in range(1, self.index + 1))

    @cached_property
    def segre(self) -> SegreType:
        return segre_from_weyr(self.weyr)

    @cached_property
    def generators(self) -> GeneratorSet:
        return jordan_generators(self)

    def __repr__(self):
        return f"NilpotentOperator(n={self.n}, field={self.field}, type={self.segre})"


def from_matrix(m: Matrix) -> NilpotentOperator:
    return NilpotentOperator.from_matrix(m)


def exponent(op: NilpotentOperator, x: Sequence) -> int:
    """Smallest ``l >= 0`` with ``A^l x = 0``."""
    x = tuple(x)
    e = 0
    while any(x):
        x = op.apply(x)
        e += 1
    return e


def height(op: NilpotentOperator, x: Sequence):
    """Largest ``q`` with ``x`` in ``Im A^q``; ``math.inf`` for the zero vector."""
    if not any(x):
        return INF
    q = 0
    while q + 1 <= op.index and op.images[q + 1].contains(x):
        q += 1
    return q


def weyr(op: NilpotentOperator) -> tuple:
    return op.weyr


def segre_from_weyr(w: Sequence[int]) -> SegreType:
    """Block sizes from ``w_i = dim Ker A^i``: the number of blocks of size
    ``>= i`` is ``w_i - w_{i-1}``."""
    diffs = []
    prev = 0
    for wi in w:
        diffs.append(wi - prev)
        prev = wi
    if any(d <= 0 for d in diffs):
        raise InvalidWeyr(f"Weyr sequence must be strictly increasing: {tuple(w)}")
    if any(a < b for a, b in zip(diffs, diffs[1:])):
        raise InvalidWeyr(f"Weyr differences must be non-increasing: {tuple(diffs)}")
    diffs.append(0)
    sizes, mults = [], []
    for i in range(len(diffs) - 1):
        count = diffs[i] - diffs[i + 1]
        if count:
            sizes.append(i + 1)
            mults.append(count)
    return SegreType(tuple(sizes), tuple(mults))


def shift_block(field: Field, t: int) -> Matrix:
    """``J_t``: ``A e_{i+1} = e_i`` and ``A e_1 = 0``."""
    z, o = field.zero, field.one
    return Matrix(field, t, t, tuple(tuple(o if c == r + 1 else z for c in range(t)) for r in range(t)))


def canonical_matrix(t: SegreType, field: Field) -> NilpotentOperator:
    blocks = [shift_block(field, size) for size in t.block_sizes()]
    return NilpotentOperator.from_matrix(Matrix.block_diag(field, blocks))


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """Generators ``u_{j,sigma}`` with ``e(u) = t_j`` whose cyclic chains
    form a basis.

    ``basis`` has columns ``A^{t-1}u, ..., A u, u`` block by block, in key
    order, so ``basis^{-1} A basis`` is the canonical shift-block matrix.
    """

    op: NilpotentOperator
    segre: SegreType
    generators: dict = dc_field(repr=False)
    basis: Matrix = dc_field(repr=False)
    basis_inv: Matrix = dc_field(repr=False)

    @classmethod
    def build(cls, op: NilpotentOperator, segre: SegreType, generators: dict) -> GeneratorSet:
        cols = []
        for key in segre.keys():
            cols.extend(reversed(_chain(op, generators[key], segre.size(key[0]))))
        basis = Matrix.from_columns(op.field, cols, op.n)
        return cls(op, segre, dict(generators), basis, basis.inverse())

    @property
    def field(self) -> Field:
        return self.op.field

    def keys(self) -> list[Key]:
        return list(self.segre.keys())

    def __getitem__(self, key: Key) -> tuple:
        return self.generators[key]

    @cached_property
    def offsets(self) -> dict:
        out, o = {}, 0
        for key in self.segre.keys():
            out[key] = o
            o += self.segre.size(key[0])
        return out

    def chain(self, key: Key) -> list:
        """``[u, A u, ..., A^{t-1} u]``."""
        return _chain(self.op, self.generators[key], self.segre.size(key[0]))

    def cyclic(self, key: Key) -> Subspace:
        """``<u>``, the cyclic subspace of a generator."""
        return Subspace.span(self.field, self.op.n, self.chain(key))

    def block_space(self, j: int) -> Subspace:
        """``V_{t_j}``: the sum of the cyclic subspaces of size ``t_j``."""
        vecs = [v for s in range(1, self.segre.mult(j) + 1) for v in self.chain((j, s))]
        return Subspace.span(self.field, self.op.n, vecs)

    def coordinates(self, x: Sequence) -> dict:
        """The unique polynomials ``c_{j,sigma}`` (degree < t_j) with
        ``x = sum c_{j,sigma}(A) u_{j,sigma}``."""
        c = self.basis_inv.apply(tuple(x))
        out = {}
        for key, o in self.offsets.items():
            t = self.segre.size(key[0])
            # column o + k holds A^{t-1-k} u
            out[key] = trim(c[o + t - 1 - i] for i in range(t))
        return out

    def vector(self, coords: dict) -> tuple:
        """Inverse of :meth:`coordinates`; missing keys count as zero."""
        F = self.field
        c = [F.zero] * self.op.n
        for key, poly in coords.items():
            o = self.offsets[key]
            t = self.segre.size(key[0])
            if len(trim(poly)) > t:
                raise ValueError(f"degree of c{key} must be below {t}")
            for i, a in enumerate(poly):
                c[o + t - 1 - i] = F(a)
        return self.basis.apply(tuple(c))


def _chain(op: NilpotentOperator, u, t: int) -> list:
    out = [tuple(u)]
    for _ in range(t - 1):
        out.append(op.apply(out[-1]))
    return out


def jordan_generators(op: NilpotentOperator) -> GeneratorSet:
    """Pick generators size by size, largest first.

    Generators of size ``t`` span a complement of ``Ker A^{t-1} + A Ker A^{t+1}``
    inside ``Ker A^t``.  The complement is chosen greedily from the RREF basis
    of ``Ker A^t``, which makes the result deterministic.
    """
    segre = op.segre
    gens = {}
    for j in range(segre.m, 0, -1):
        t = segre.size(j)
        W = op.kernel(t - 1) + op.kernel(t + 1).image(op.matrix)
        chosen = []
        for v in op.kernel(t).basis:
            if not W.contains(v):
                chosen.append(v)
                W = W + Subspace.span(op.field, op.n, [v])
        if len(chosen) != segre.mult(j):
            raise AssertionError(f"found {len(chosen)} generators of size {t}, expected {segre.mult(j)}")
        for sigma, v in enumerate(chosen, start=1):
            gens[(j, sigma)] = v
    return GeneratorSet.build(op, segre, gens)


def canonical_generators(t: SegreType, field: Field) -> GeneratorSet:
    """Generators of :func:`canonical_matrix`: the last basis vector of each block."""
    op = canonical_matrix(t, field)
    gens, o = {}, 0
    for key in t.keys():
        size = t.size(key[0])
        gens[key] = unit_vector(field, op.n, o + size - 1)
        o += size
    return GeneratorSet.build(op, t, gens)


def coordinates(gs: GeneratorSet, x: Sequence) -> dict:
    return gs.coordinates(x)


def ulm_multiplicity(op: NilpotentOperator, j: int) -> int:
    """``dim (A^{t_j-1}V)[A] - dim (A^{t_j}V)[A]``, the number of blocks of size ``t_j``."""
    segre = op.segre
    if not 1 <= j <= segre.m:
        raise IndexError(f"block index {j} outside 1..{segre.m}")
    t = segre.size(j)
    ker = op.kernel(1)
    return (op.image(t - 1) & ker).dim - (op.image(t) & ker).dim


def block_subspace(gs: GeneratorSet, r: Sequence[int]) -> Subspace:
    """``sum_j A^{r_j} V_{t_j}`` for any integers ``0 <= r_j <= t_j``."""
    segre = gs.segre
    if len(r) != segre.m:
        raise MismatchError(f"expected {segre.m} exponents, got {len(r)}")
    vecs = []
    for key in segre.keys():
        j = key[0]
        if not 0 <= r[j - 1] <= segre.size(j):
            raise ValueError(f"r_{j} = {r[j - 1]} outside 0..{segre.size(j)}")
        vecs.extend(gs.chain(key)[r[j - 1]:])
    return Subspace.span(gs.field, gs.op.n, vecs)
