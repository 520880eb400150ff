"""Seeded randomized checks of the hyperinvariant-subspace characterization.

Each trial draws a field and a block type, hides the canonical operator
behind a random similarity ``P J P^{-1}`` and checks, for that operator:

* the recovered block type is the one drawn;
* for every valid r-sequence the generator-built subspace equals the
  kernel/image-built one, is hyperinvariant under the commutant oracle and is
  recognized back as the same r-sequence;
* for invalid in-range tuples the block subspace is not hyperinvariant and a
  witness is found;
* the eta maps and swaps commute with the operator and keep every
  hyperinvariant subspace.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from itertools import product

from . import commutant as cm
from . import hyperlattice as hl
from . import proofkit as pk
from .exactalg import GF, QQ, Field, Matrix, field_from_tag
from .nilpotent import NilpotentOperator, SegreType, block_subspace, canonical_matrix

DEFAULT_FIELDS = (GF(2), GF(3), GF(5), QQ)
MAX_NEGATIVE = 4  # invalid tuples checked per trial


def parse_fields(text: str) -> tuple:
    return tuple(field_from_tag(tok) for tok in text.split(",") if tok.strip())


def random_type(rng: random.Random, max_blocks: int = 3, max_size: int = 5, max_mult: int = 2) -> SegreType:
    k = rng.randint(1, min(max_blocks, max_size))
    sizes = sorted(rng.sample(range(1, max_size + 1), k))
    return SegreType(tuple(sizes), tuple(rng.randint(1, max_mult) for _ in sizes))


def random_invertible(rng: random.Random, field: Field, n: int) -> Matrix:
    while True:
        if field.is_finite:
            rows = [[rng.randrange(field.p) for _ in range(n)] for _ in range(n)]
        else:
            rows = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        P = Matrix.from_rows(field, rows, n)
        if P.rank() == n:
            return P


def random_conjugate(rng: random.Random, t: SegreType, field: Field) -> tuple[NilpotentOperator, Matrix]:
    J = canonical_matrix(t, field).matrix
    P = random_invertible(rng, field, J.rows)
    return NilpotentOperator.from_matrix(P @ J @ P.inverse()), P


@dataclass
class TrialResult:
    index: int
    field: Field
    segre: SegreType
    checked: int = 0
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "ok" if self.ok else "FAIL: " + "; ".join(self.failures)
        return (f"trial {self.index:>4}  {self.field.name:<6} type {str(self.segre):<16} "
                f"n={self.segre.dim:<3} checks={self.checked:<4} {status}")


def run_trial(index: int, rng: random.Random, field: Field, max_blocks: int = 3,
              max_size: int = 5, max_mult: int = 2) -> TrialResult:
    t = random_type(rng, max_blocks, max_size, max_mult)
    res = TrialResult(index, field, t)

    def check(cond: bool, what: str):
        res.checked += 1
        if not cond:
            res.failures.append(what)

    op, _ = random_conjugate(rng, t, field)
    check(op.segre == t, f"recovered type {op.segre}")
    if op.segre != t:
        return res
    gs = op.generators
    cb = cm.commutant_basis(op)
    check(cb.dimension == cm.commutant_dimension_formula(t.block_sizes()),
          f"commutant dimension {cb.dimension}")

    hyper = []
    for r in hl.enumerate_rsequences(t):
        X = hl.subspace_ii(gs, r)
        hyper.append(X)
        check(X == hl.subspace_iii(op, r), f"(ii) != (iii) at r={r}")
        check(X.dim == r.dim, f"dim {X.dim} != {r.dim} at r={r}")
        check(cm.is_hyperinvariant(op, X, cb)[0], f"r={r} not hyperinvariant")
        check(hl.identify(op, gs, X) == r.r, f"identify failed at r={r}")

    invalid = [r for r in product(*(range(s + 1) for s in t.sizes)) if not hl.is_valid(t, r)]
    for r in rng.sample(invalid, min(MAX_NEGATIVE, len(invalid))):
        Y = block_subspace(gs, r)
        check(not cm.is_hyperinvariant(op, Y, cb)[0], f"invalid {r} hyperinvariant")
        check(pk.find_witness(op, Y, gs) is not None, f"no witness for invalid {r}")

    maps = [hom for kind, _, hom in pk.structural_maps(gs) if kind != "projection"]
    for hom in maps:
        check(hom.commutes(), "structural map does not commute")
        check(all(cm.is_invariant(X, hom.matrix) for X in hyper), "structural map moves a hyperinvariant X")
    return res


def run_suite(trials: int, seed: int, max_blocks: int = 3, max_size: int = 5,
              fields=DEFAULT_FIELDS, max_mult: int = 2) -> tuple[list[str], int]:
    """Run ``trials`` trials; returns the report lines and the failure count."""
    lines = [f"verify seed={seed} trials={trials} max_blocks={max_blocks} "
             f"max_size={max_size} fields={','.join(f.name for f in fields)}"]
    failed = 0
    for i in range(trials):
        rng = random.Random(f"nilhyp:{seed}:{i}")
        res = run_trial(i + 1, rng, fields[i % len(fields)], max_blocks, max_size, max_mult)
        failed += not res.ok
        lines.append(res.line())
    lines.append(f"{trials - failed}/{trials} passed")
    return lines, failed
