"""Exact linear algebra over GF(p) and the rationals.

Field elements are plain Python values: ``int`` in ``[0, p)`` for GF(p) and
``gmpy2.mpq`` for Q (:class:`fractions.Fraction` if gmpy2 is missing).
The :class:`Field` object carries the tag and the arithmetic.  Vectors are tuples of field elements and are treated as
column vectors; a matrix acts on the left, ``f(x) = A x``.

Subspaces are stored by a basis in reduced row-echelon form, so two
:class:`Subspace` values describe the same set iff they compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence, Union

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    Rational = Fraction

Vector = tuple


class MismatchError(ValueError):
    """Operands live in different ambient spaces or over different fields."""


class SingularMatrix(ValueError):
    pass


class FormatError(ValueError):
    """Malformed matrix or subspace text."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """GF(p) when ``p`` is a prime, the rationals when ``p`` is None."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not _is_prime(self.p) or self.p >= 2**31:
                raise ValueError(f"GF(p) needs a prime p < 2^31, got {self.p}")

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"GF({self.p})"

    @property
    def tag(self) -> str:
        """Field token used in the matrix file header."""
        return "Q" if self.p is None else str(self.p)

    @property
    def zero(self):
        return 0 if self.p is not None else Rational(0)

    @property
    def one(self):
        return 1 if self.p is not None else Rational(1)

    def __call__(self, x):
        """Coerce an int, rational or ``"a/b"`` string into this field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.p is None:
            if isinstance(x, Fraction):
                return Rational(x.numerator, x.denominator)
            return Rational(x)
        if isinstance(x, int):
            return x % self.p
        num, den = int(x.numerator), int(x.denominator)
        if den % self.p == 0:
            raise ZeroDivisionError(f"{x} has no image in {self.name}")
        return num * pow(den, -1, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return a * b % self.p if self.p else a * b

    def neg(self, a):
        return -a % self.p if self.p else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.p else 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self) -> range:
        if self.p is None:
            raise ValueError("Q is infinite")
        return range(self.p)

    def __str__(self):
        return self.name


QQ = Field(None)


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    return Field(p)


def field_from_tag(tag: str) -> Field:
    tag = tag.strip()
    if tag in ("Q", "q", "QQ"):
        return QQ
    try:
        return GF(int(tag))
    except ValueError as exc:
        raise FormatError(f"unknown field {tag!r}") from exc


# ---------------------------------------------------------------------------
# row reduction


def _reduce(field: Field, rows: Sequence[Sequence], ncols: int):
    """Gauss-Jordan elimination.  Returns (rows, pivots) with rows mutated
    into RREF; zero rows end up at the bottom."""
    p = field.p
    rows = [list(r) for r in rows]
    nrows = len(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        lead = prow[c]
        if lead != 1:
            inv = field.inv(lead)
            if p:
                prow = [x * inv % p for x in prow]
            else:
                prow = [x * inv for x in prow]
            rows[r] = prow
        # only the pivot row's nonzero columns can change other rows
        nz = [k for k in range(c, ncols) if prow[k]]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if not f:
                continue
            if p:
                for k in nz:
                    row[k] = (row[k] - f * prow[k]) % p
            else:
                for k in nz:
                    row[k] -= f * prow[k]
        pivots.append(c)
        r += 1
    return rows, pivots


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class Matrix:
    field: Field
    rows: int
    cols: int
    data: tuple  # row-major tuple of row tuples

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("matrix data does not match its shape")

    @classmethod
    def from_rows(cls, field: Field, rows: Iterable[Iterable], cols: int | None = None) -> Matrix:
        data = tuple(tuple(field(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise ValueError("cols required for a matrix with no rows")
            cols = len(data[0])
        return cls(field, len(data), cols, data)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int) -> Matrix:
        return cls(field, rows, len(columns), tuple(zip(*columns)) if columns else ((),) * rows)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int | None = None) -> Matrix:
        cols = rows if cols is None else cols
        z = field.zero
        return cls(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> Matrix:
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def block_diag(cls, field: Field, blocks: Sequence[Matrix]) -> Matrix:
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = [[field.zero] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i, row in enumerate(b.data):
                out[r0 + i][c0:c0 + b.cols] = row
            r0 += b.rows
            c0 += b.cols
        return cls(field, n, m, tuple(map(tuple, out)))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.data)

    def column(self, k: int) -> Vector:
        return tuple(r[k] for r in self.data)

    def columns(self) -> list[Vector]:
        return [tuple(c) for c in zip(*self.data)] if self.rows else [()] * self.cols

    @property
    def T(self) -> Matrix:
        data = tuple(map(tuple, zip(*self.data))) if self.rows else ((),) * self.cols
        return Matrix(self.field, self.cols, self.rows, data)

    def _check(self, other: Matrix):
        if self.field != other.field:
            raise MismatchError(f"{self.field} vs {other.field}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise MismatchError("shape mismatch")
        F = self.field
        return Matrix(F, self.rows, self.cols, tuple(
            tuple(F.add(a, b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __sub__(self, other: Matrix) -> Matrix:
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise MismatchError("shape mismatch")
        F = self.field
        return Matrix(F, self.rows, self.cols, tuple(
            tuple(F.sub(a, b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def scale(self, c) -> Matrix:
        F = self.field
        c = F(c)
        return Matrix(F, self.rows, self.cols, tuple(tuple(F.mul(c, a) for a in r) for r in self.data))

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.cols != other.rows:
            raise MismatchError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        p = self.field.p
        z = self.field.zero
        bdata = other.data
        out = []
        for row in self.data:
            acc = [z] * other.cols
            for k, a in enumerate(row):
                if a:
                    for j, b in enumerate(bdata[k]):
                        if b:
                            acc[j] += a * b
            if p:
                acc = [x % p for x in acc]
            out.append(tuple(acc))
        return Matrix(self.field, self.rows, other.cols, tuple(out))

    def apply(self, x: Sequence) -> Vector:
        """The column vector ``A x``."""
        if len(x) != self.cols:
            raise MismatchError(f"vector of length {len(x)} for {self.cols} columns")
        p = self.field.p
        nz = [(k, v) for k, v in enumerate(x) if v]
        out = []
        for row in self.data:
            s = sum(row[k] * v for k, v in nz)
            out.append(s % p if p else Rational(s))
        return tuple(out)

    def power(self, k: int) -> Matrix:
        if not self.is_square:
            raise MismatchError("power of a non-square matrix")
        result = Matrix.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def inverse(self) -> Matrix:
        if not self.is_square:
            raise SingularMatrix("non-square matrix")
        n = self.rows
        F = self.field
        aug = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(self.data)]
        rows, pivots = _reduce(F, aug, 2 * n)
        if pivots[:n] != list(range(n)):
            raise SingularMatrix("matrix is not invertible")
        return Matrix(F, n, n, tuple(tuple(r[n:]) for r in rows))

    def rank(self) -> int:
        return len(_reduce(self.field, self.data, self.cols)[1])

    def __str__(self):
        return format_matrix(self)


def rref(m: Matrix) -> tuple[Matrix, int, list[int]]:
    """Reduced row-echelon form of ``m`` (same shape), its rank and pivot columns."""
    rows, pivots = _reduce(m.field, m.data, m.cols)
    return Matrix(m.field, m.rows, m.cols, tuple(map(tuple, rows))), len(pivots), pivots


def nullspace_basis(field: Field, rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of ``{x : M x = 0}`` for the matrix with the given rows, one
    vector per free column, in increasing free-column order."""
    red, pivots = _reduce(field, rows, ncols)
    pivset = set(pivots)
    z, one = field.zero, field.one
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [z] * ncols
        v[free] = one
        for i, pc in enumerate(pivots):
            v[pc] = field.neg(red[i][free])
        basis.append(tuple(v))
    return basis


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """A subspace of ``field^ambient_dim`` with an RREF basis."""

    field: Field
    ambient_dim: int
    basis: tuple  # RREF rows, no zero rows
    pivots: tuple

    @classmethod
    def span(cls, field: Field, ambient_dim: int, vectors: Iterable[Sequence]) -> Subspace:
        vecs = [tuple(field(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise MismatchError(f"vector of length {len(v)} in a space of dimension {ambient_dim}")
        return cls._from_rows(field, ambient_dim, vecs)

    @classmethod
    def _from_rows(cls, field, ambient_dim, rows):
        # rows already coerced into the field
        red, pivots = _reduce(field, rows, ambient_dim)
        return cls(field, ambient_dim, tuple(tuple(r) for r in red[:len(pivots)]), tuple(pivots))

    @classmethod
    def zero(cls, field: Field, n: int) -> Subspace:
        return cls(field, n, (), ())

    @classmethod
    def full(cls, field: Field, n: int) -> Subspace:
        return cls(field, n, Matrix.identity(field, n).data, tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    rank = dim

    def _check(self, other):
        if self.field != other.field or self.ambient_dim != other.ambient_dim:
            raise MismatchError(
                f"{self.field}^{self.ambient_dim} vs {other.field}^{other.ambient_dim}")

    def residue(self, x: Sequence) -> Vector:
        """``x`` reduced against the basis; zero iff ``x`` lies in the subspace."""
        if len(x) != self.ambient_dim:
            raise MismatchError(f"vector of length {len(x)} in dimension {self.ambient_dim}")
        p = self.field.p
        v = list(x)
        for row, pc in zip(self.basis, self.pivots):
            c = v[pc]
            if c:
                for k in range(pc, self.ambient_dim):
                    if row[k]:
                        v[k] -= c * row[k]
                if p:
                    v = [a % p for a in v]
        return tuple(v)

    def contains(self, x: Union[Sequence, Subspace]) -> bool:
        if isinstance(x, Subspace):
            self._check(x)
            return all(not any(self.residue(b)) for b in x.basis)
        return not any(self.residue(x))

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def __le__(self, other: Subspace) -> bool:
        return other.contains(self)

    def __lt__(self, other: Subspace) -> bool:
        return self <= other and self.dim < other.dim

    def sum(self, other: Subspace) -> Subspace:
        self._check(other)
        return Subspace._from_rows(self.field, self.ambient_dim, list(self.basis) + list(other.basis))

    def intersect(self, other: Subspace) -> Subspace:
        """Zassenhaus: reduce ``[[a, a], [b, 0]]``; rows with a vanishing left
        half carry a basis of the intersection in their right half."""
        self._check(other)
        n = self.ambient_dim
        if not self.basis or not other.basis:
            return Subspace.zero(self.field, n)
        z = (self.field.zero,) * n
        rows = [a + a for a in self.basis] + [b + z for b in other.basis]
        red, pivots = _reduce(self.field, rows, 2 * n)
        inter = [r[n:] for r, pc in zip(red, pivots) if pc >= n]
        return Subspace._from_rows(self.field, n, inter)

    __add__ = sum
    __and__ = intersect

    def image(self, m: Matrix) -> Subspace:
        """``m X`` for a linear map ``m`` out of this space."""
        if m.field != self.field or m.cols != self.ambient_dim:
            raise MismatchError("map does not act on this space")
        return Subspace._from_rows(self.field, m.rows, [m.apply(b) for b in self.basis])

    def as_matrix(self) -> Matrix:
        return Matrix(self.field, self.dim, self.ambient_dim, self.basis)

    def __repr__(self):
        return f"Subspace({self.field}^{self.ambient_dim}, dim={self.dim}, basis={list(self.basis)})"


def kernel_image(m: Matrix) -> tuple[Subspace, Subspace]:
    """Kernel (inside the domain) and column space (inside the codomain) of ``m``."""
    F = m.field
    kernel = Subspace._from_rows(F, m.cols, nullspace_basis(F, m.data, m.cols))
    image = Subspace._from_rows(F, m.rows, m.columns())
    return kernel, image


def subspace_sum(*spaces: Subspace) -> Subspace:
    if not spaces:
        raise ValueError("need at least one subspace")
    first = spaces[0]
    for s in spaces[1:]:
        first._check(s)
    rows = [b for s in spaces for b in s.basis]
    return Subspace._from_rows(first.field, first.ambient_dim, rows)


# ---------------------------------------------------------------------------
# text format
#
#   field <p|Q>
#   <rows> <cols>
#   one row per line, whitespace separated; rationals as a/b


def _fmt(x) -> str:
    if not isinstance(x, int) and x.denominator == 1:
        return str(x.numerator)
    return str(x)


def format_matrix(m: Matrix) -> str:
    lines = [f"field {m.field.tag}", f"{m.rows} {m.cols}"]
    lines += [" ".join(_fmt(x) for x in row) for row in m.data]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> Matrix:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) < 2:
        raise FormatError("expected a 'field' line and a shape line")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "field":
        raise FormatError(f"bad header {lines[0]!r}")
    field = field_from_tag(head[1])
    try:
        rows, cols = (int(t) for t in lines[1].split())
    except ValueError as exc:
        raise FormatError(f"bad shape line {lines[1]!r}") from exc
    if rows < 0 or cols < 0:
        raise FormatError("negative shape")
    body = lines[2:]
    if len(body) != rows:
        raise FormatError(f"expected {rows} rows, found {len(body)}")
    data = []
    for ln in body:
        toks = ln.split()
        if len(toks) != cols:
            raise FormatError(f"expected {cols} entries in row {ln!r}")
        try:
            data.append(tuple(field(t) for t in toks))
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad entry in row {ln!r}: {exc}") from exc
    return Matrix(field, rows, cols, tuple(data))


def parse_subspace(text: str) -> Subspace:
    m = parse_matrix(text)
    return Subspace._from_rows(m.field, m.cols, m.data)


def format_subspace(s: Subspace) -> str:
    return format_matrix(s.as_matrix())


def read_matrix(path) -> Matrix:
    with open(path) as fh:
        return parse_matrix(fh.read())


def read_subspace(path) -> Subspace:
    with open(path) as fh:
        return parse_subspace(fh.read())


def write_matrix(path, m: Matrix) -> None:
    with open(path, "w") as fh:
        fh.write(format_matrix(m))


def unit_vector(field: Field, n: int, i: int) -> Vector:
    return tuple(field.one if k == i else field.zero for k in range(n))


def iter_vectors(field: Field, n: int) -> Iterator[Vector]:
    """All vectors of ``GF(p)^n`` in lexicographic order."""
    from itertools import product

    return product(field.elements(), repeat=n)
