"""Finitely supported vectors in a countable direct sum of cyclic blocks.

The space is ``V = sum_j V_{t_j}`` with ``V_{t_j}`` a direct sum of
``m_j`` copies of ``K[s]/s^{t_j}``, where ``m_j`` may be infinite
(:data:`OMEGA`) and the sizes may continue forever along an arithmetic tail.
A vector is a finite map ``(t, label) -> c(s)`` with ``deg c < t``.

Everything here is valuation and degree arithmetic: the component
``c(f) u`` of a block of size ``t`` has exponent ``t - val(c)`` and height
``val(c)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .exactalg import QQ, Field, FormatError
from .hyperlattice import RSequence, RSequenceError, check_constraints
from .nilpotent import GeneratorSet, SegreType
from .poly import INF, coerce, valuation


class _Omega:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "OMEGA"

    def __str__(self):
        return "w"

    def __reduce__(self):
        return (_Omega, ())


OMEGA = _Omega()
Mult = Union[int, _Omega]


class MalformedVector(ValueError):
    pass


def _check_mult(m) -> Mult:
    if m is OMEGA:
        return m
    if isinstance(m, int) and m >= 1:
        return m
    raise ValueError(f"multiplicity must be a positive integer or OMEGA, got {m!r}")


@dataclass(frozen=True)
class Tail:
    """Sizes ``a + b (j - J)`` for ``j > J``, each with multiplicity ``mult``."""

    a: int
    b: int
    mult: Mult

    def __post_init__(self):
        if self.b < 1:
            raise ValueError("tail step must be at least 1")
        _check_mult(self.mult)


@dataclass(frozen=True)
class BlockSpec:
    sizes: tuple
    mults: tuple
    tail: Tail | None = None

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(self.sizes))
        object.__setattr__(self, "mults", tuple(_check_mult(m) for m in self.mults))
        if len(self.sizes) != len(self.mults):
            raise ValueError("sizes and multiplicities differ in length")
        if not self.sizes and self.tail is None:
            raise ValueError("a block spec needs at least one block")
        if any(t < 1 for t in self.sizes):
            raise ValueError("block sizes must be positive")
        if any(a >= b for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValueError(f"sizes must be strictly increasing: {self.sizes}")
        if self.tail is not None:
            first = self.tail.a + self.tail.b
            if first < 1 or (self.sizes and first <= self.sizes[-1]):
                raise ValueError(f"first tail size {first} does not extend {self.sizes}")

    @property
    def J(self) -> int:
        """Number of explicit blocks."""
        return len(self.sizes)

    @property
    def is_finite(self) -> bool:
        return self.tail is None and all(m is not OMEGA for m in self.mults)

    def size(self, j: int) -> int:
        if j < 1:
            raise IndexError(j)
        if j <= self.J:
            return self.sizes[j - 1]
        if self.tail is None:
            raise IndexError(f"block {j} beyond the last block {self.J}")
        return self.tail.a + self.tail.b * (j - self.J)

    def mult(self, j: int) -> Mult:
        if j <= self.J:
            return self.mults[j - 1]
        self.size(j)
        return self.tail.mult

    def index_of(self, t: int) -> int | None:
        """The ``j`` with ``t_j = t``, or None if no block has that size."""
        if t in self.sizes:
            return self.sizes.index(t) + 1
        if self.tail is not None:
            q, rem = divmod(t - self.tail.a, self.tail.b)
            if rem == 0 and q >= 1:
                return self.J + q
        return None

    def has_label(self, j: int, label: str) -> bool:
        m = self.mult(j)
        if m is OMEGA:
            return isinstance(label, str) and label != ""
        return label in {str(s) for s in range(1, m + 1)}

    def to_segre(self) -> SegreType:
        if not self.is_finite:
            raise ValueError("only a finite spec has a Segre type")
        return SegreType(self.sizes, self.mults)


@dataclass(frozen=True)
class FinSuppVector:
    """``sum c(f) u_{t,label}`` over a finite support, zero terms dropped."""

    components: tuple  # sorted ((t, label), coeffs) pairs, coeffs nonzero

    @classmethod
    def build(cls, comps: Mapping, field: Field = QQ) -> FinSuppVector:
        items = []
        for (t, label), coeffs in comps.items():
            c = coerce(field, coeffs)
            if c:
                items.append(((int(t), str(label)), c))
        return cls(tuple(sorted(items)))

    @classmethod
    def zero(cls) -> FinSuppVector:
        return cls(())

    def __bool__(self):
        return bool(self.components)

    def as_dict(self) -> dict:
        return dict(self.components)


def check_vector(spec: BlockSpec, x: FinSuppVector) -> None:
    for (t, label), c in x.components:
        j = spec.index_of(t)
        if j is None:
            raise MalformedVector(f"no block of size {t}")
        if not spec.has_label(j, label):
            raise MalformedVector(f"label {label!r} not available in block of size {t} "
                                  f"(multiplicity {spec.mult(j)})")
        if len(c) > t:
            raise MalformedVector(f"degree {len(c) - 1} too large for block of size {t}")


def apply_f(x: FinSuppVector) -> FinSuppVector:
    """Multiply every component by ``s`` and truncate at ``s^t``."""
    out = []
    for (t, label), c in x.components:
        shifted = ((type(c[0])(0),) + c)[:t]
        if any(shifted):
            out.append(((t, label), shifted))
    return FinSuppVector(tuple(out))


def vector_stats(spec: BlockSpec, x: FinSuppVector):
    """``(exponent, height, f x)``; the height of zero is infinite."""
    check_vector(spec, x)
    e = max((t - valuation(c) for (t, _), c in x.components), default=0)
    h = min((valuation(c) for _, c in x.components), default=INF)
    return e, h, apply_f(x)


@dataclass(frozen=True)
class ConstantR:
    """``r_j = c`` for every tail block."""

    c: int


@dataclass(frozen=True)
class ConstantCoexponent:
    """``t_j - r_j = c`` for every tail block."""

    c: int


TailPolicy = Union[ConstantR, ConstantCoexponent]


@dataclass(frozen=True)
class InfRSequence:
    """Explicit ``r_1 .. r_J`` plus a rule for the tail blocks."""

    spec: BlockSpec
    r: tuple
    tail: TailPolicy | None = None

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(v) for v in self.r))
        spec = self.spec
        if len(self.r) != spec.J:
            raise RSequenceError(f"expected {spec.J} explicit entries, got {len(self.r)}")
        if (spec.tail is None) != (self.tail is None):
            raise RSequenceError("a tail policy is needed exactly when the block spec has a tail")
        # Within the tail both policies keep r_j and t_j - r_j non-decreasing,
        # so checking two tail blocks covers every pair.
        extra = 2 if spec.tail is not None else 0
        sizes = tuple(spec.size(j) for j in range(1, spec.J + extra + 1))
        rs = tuple(self.at(j) for j in range(1, spec.J + extra + 1))
        check_constraints(SegreType(sizes, (1,) * len(sizes)), rs)

    def at(self, j: int) -> int:
        if j <= self.spec.J:
            return self.r[j - 1]
        if isinstance(self.tail, ConstantR):
            return self.tail.c
        return self.spec.size(j) - self.tail.c


def member_ii(spec: BlockSpec, R: InfRSequence, x: FinSuppVector) -> bool:
    """``x`` in ``sum_j f^{r_j} V_{t_j}``: each component is divisible by ``s^{r_j}``."""
    check_vector(spec, x)
    return all(valuation(c) >= R.at(spec.index_of(t)) for (t, _), c in x.components)


def member_iii(spec: BlockSpec, R: InfRSequence, x: FinSuppVector) -> bool:
    """``x`` in ``sum_j (Im f^{r_j} & Ker f^{t_j - r_j})``.

    Each of these summands is a sum of pieces of the individual cyclic
    blocks, so ``x`` lies in the sum iff every component ``y`` does, i.e. iff
    some ``j`` has ``h(y) >= r_j`` and ``e(y) <= t_j - r_j``.  For a
    component in block ``l`` only ``j <= l`` need be tried: if ``j > l`` works
    then ``h(y) >= r_j >= r_l`` and ``e(y) <= t_l - h(y) <= t_l - r_l``, so
    ``j = l`` works as well.
    """
    check_vector(spec, x)
    for (t, _), c in x.components:
        l = spec.index_of(t)
        h, e = valuation(c), t - valuation(c)
        if not any(h >= R.at(j) and e <= spec.size(j) - R.at(j) for j in range(1, l + 1)):
            return False
    return True


# ---------------------------------------------------------------------------
# finite truncations


def finite_rsequence(R: InfRSequence) -> RSequence:
    return RSequence(R.spec.to_segre(), R.r)


def embed(gs: GeneratorSet, x: FinSuppVector) -> tuple:
    """The vector of a finite model with the same blocks, labels read as ``sigma``."""
    segre = gs.segre
    coords = {}
    for (t, label), c in x.components:
        j = segre.sizes.index(t) + 1
        coords[(j, int(label))] = c
    return gs.vector(coords)


# ---------------------------------------------------------------------------
# text formats
#
# spec:    block <t> <mult|w>      (repeated)   tail <a> <b> <mult|w>  (optional)
# vector:  <t> <label> <c0 c1 ...> (one line per component)
# rseq:    r <r_1> ... <r_J>       tail const <c> | tail coexp <c>  (optional)


def _lines(text: str):
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if ln:
            yield ln.split()


def _parse_mult(tok: str) -> Mult:
    if tok in ("w", "omega", "OMEGA"):
        return OMEGA
    try:
        return int(tok)
    except ValueError as exc:
        raise FormatError(f"bad multiplicity {tok!r}") from exc


def parse_spec(text: str) -> BlockSpec:
    sizes, mults, tail = [], [], None
    try:
        for toks in _lines(text):
            if toks[0] == "block" and len(toks) == 3:
                if tail is not None:
                    raise FormatError("block line after the tail")
                sizes.append(int(toks[1]))
                mults.append(_parse_mult(toks[2]))
            elif toks[0] == "tail" and len(toks) == 4:
                if tail is not None:
                    raise FormatError("more than one tail line")
                tail = Tail(int(toks[1]), int(toks[2]), _parse_mult(toks[3]))
            else:
                raise FormatError(f"bad spec line {' '.join(toks)!r}")
        return BlockSpec(tuple(sizes), tuple(mults), tail)
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def parse_vector(text: str, field: Field = QQ) -> FinSuppVector:
    comps: dict = {}
    for toks in _lines(text):
        if len(toks) < 3:
            raise FormatError(f"bad vector line {' '.join(toks)!r}")
        try:
            key = (int(toks[0]), toks[1])
            coeffs = [field(c) for c in toks[2:]]
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad vector line {' '.join(toks)!r}") from exc
        if key in comps:
            raise FormatError(f"component {key} given twice")
        comps[key] = coeffs
    return FinSuppVector.build(comps, field)


def parse_rseq(text: str, spec: BlockSpec) -> InfRSequence:
    """Raises :class:`FormatError` on syntax and ``RSequenceError`` subclasses
    on constraint violations."""
    r, tail, seen_r = (), None, False
    for toks in _lines(text):
        try:
            if toks[0] == "r" and not seen_r:
                r = tuple(int(v) for v in toks[1:])
                seen_r = True
            elif toks[0] == "tail" and len(toks) == 3 and tail is None:
                c = int(toks[2])
                if toks[1] == "const":
                    tail = ConstantR(c)
                elif toks[1] == "coexp":
                    tail = ConstantCoexponent(c)
                else:
                    raise FormatError(f"unknown tail policy {toks[1]!r}")
            else:
                raise FormatError(f"bad rseq line {' '.join(toks)!r}")
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"bad rseq line {' '.join(toks)!r}") from exc
    if not seen_r:
        raise FormatError("missing 'r' line")
    return InfRSequence(spec, r, tail)


def format_vector(x: FinSuppVector) -> str:
    lines = []
    for (t, label), c in x.components:
        lines.append(" ".join([str(t), label] + [str(a) for a in c]))
    return "\n".join(lines) + ("\n" if lines else "")
