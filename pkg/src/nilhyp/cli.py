"""Command-line front end.

Exit codes: 0 success / verdict true, 1 verdict false, 2 input error,
3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from . import hyperlattice as hl
from .commutant import is_hyperinvariant
from .exactalg import FormatError, MismatchError, field_from_tag, read_matrix, read_subspace, write_matrix
from .infmodel import MalformedVector, member_ii, member_iii, parse_rseq, parse_spec, parse_vector
from .nilpotent import NilpotentOperator, NotNilpotent, SegreType, exponent
from .proofkit import find_witness
from .verify import DEFAULT_FIELDS, parse_fields, run_suite

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass
class Verdict:
    result: bool
    report: str
    rseq: tuple | None = None
    witness_path: str | None = None

    def __post_init__(self):
        if (self.witness_path is None) != self.result:
            raise ValueError("a witness accompanies exactly the negative verdicts")


def _load_operator(path: str, field_tag: str | None) -> NilpotentOperator:
    try:
        m = read_matrix(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except FormatError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if field_tag is not None:
        try:
            expected = field_from_tag(field_tag)
        except (FormatError, ValueError) as exc:
            raise InputError(f"bad --field {field_tag!r}") from exc
        if expected != m.field:
            raise InputError(f"{path} is over {m.field}, not {expected}")
    try:
        return NilpotentOperator.from_matrix(m)
    except NotNilpotent as exc:
        raise InputError(f"{path}: not nilpotent") from exc
    except MismatchError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _weyr_text(op: NilpotentOperator) -> str:
    return ",".join(map(str, op.weyr))


def cmd_analyze(args) -> int:
    op = _load_operator(args.matrix, args.field)
    print(f"index {op.index}; weyr {_weyr_text(op)}; type {op.segre}")
    gs = op.generators
    exps = [exponent(op, gs[k]) for k in gs.keys()]
    print(f"field {op.field}; n {op.n}")
    print("generator exponents " + ",".join(map(str, exps)))
    return EXIT_OK


def cmd_lattice(args) -> int:
    try:
        t = SegreType.parse(args.type)
    except ValueError as exc:
        raise InputError(f"bad type {args.type!r}: {exc}") from exc
    seqs = hl.enumerate_rsequences(t)
    for r in seqs:
        print(f"r={r} dim={r.dim}")
    print(f"count {len(seqs)}")
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(hl.to_dot(t))
        print(f"hasse diagram written to {args.dot}")
    return EXIT_OK


def check(matrix_path: str, subspace_path: str, field_tag: str | None = None,
          witness_path: str | None = None) -> Verdict:
    op = _load_operator(matrix_path, field_tag)
    try:
        X = read_subspace(subspace_path)
    except OSError as exc:
        raise InputError(f"cannot read {subspace_path}: {exc.strerror}") from exc
    except FormatError as exc:
        raise InputError(f"{subspace_path}: {exc}") from exc
    if X.field != op.field:
        raise InputError(f"subspace over {X.field}, operator over {op.field}")
    if X.ambient_dim != op.n:
        raise InputError(f"subspace lives in dimension {X.ambient_dim}, operator in {op.n}")

    ok, _ = is_hyperinvariant(op, X)
    if ok:
        r = hl.identify(op, op.generators, X)
        if r is None or not hl.is_valid(op.segre, r):
            raise AssertionError(f"hyperinvariant subspace with no valid r-sequence (got {r})")
        return Verdict(True, f"hyperinvariant; type {op.segre}; r=({','.join(map(str, r))})", rseq=r)

    w = find_witness(op, X)
    if w is None:
        raise AssertionError("commutant oracle and witness search disagree")
    path = witness_path or subspace_path + ".witness"
    write_matrix(path, w.matrix)
    r = hl.identify(op, op.generators, X)
    shape = "not of block form" if r is None else f"block form r=({','.join(map(str, r))}) violates the constraints"
    report = (f"not hyperinvariant; {shape}; witness {w.label} ({w.kind}) "
              f"moves x={list(map(str, w.vector))} out of X; written to {path}")
    return Verdict(False, report, rseq=r, witness_path=path)


def cmd_check(args) -> int:
    v = check(args.matrix, args.subspace, args.field, args.witness)
    print(v.report)
    return EXIT_OK if v.result else EXIT_FALSE


def _default_seed() -> int:
    env = os.environ.get("NILHYP_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise InputError(f"NILHYP_SEED must be an integer, got {env!r}") from exc


def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        fields = parse_fields(args.fields) if args.fields else DEFAULT_FIELDS
    except (FormatError, ValueError) as exc:
        raise InputError(f"bad --fields: {exc}") from exc
    if args.trials < 0 or args.max_blocks < 1 or args.max_size < 1 or not fields:
        raise InputError("trials must be >= 0, sizes >= 1 and at least one field given")
    lines, failed = run_suite(args.trials, seed, args.max_blocks, args.max_size, fields, args.max_mult)
    print("\n".join(lines))
    return EXIT_OK if failed == 0 else EXIT_FALSE


def cmd_infmem(args) -> int:
    try:
        field = field_from_tag(args.field)
        with open(args.spec) as fh:
            spec = parse_spec(fh.read())
        with open(args.rseq) as fh:
            R = parse_rseq(fh.read(), spec)
        with open(args.vector) as fh:
            x = parse_vector(fh.read(), field)
        a = member_ii(spec, R, x)
        b = member_iii(spec, R, x)
    except OSError as exc:
        raise InputError(f"cannot read {exc.filename}: {exc.strerror}") from exc
    except hl.RSequenceError as exc:
        raise InputError(f"r-sequence violates {type(exc).__name__}: {exc}") from exc
    except (FormatError, MalformedVector, ValueError) as exc:
        raise InputError(str(exc)) from exc
    print(f"member_ii {str(a).lower()}; member_iii {str(b).lower()}")
    if a != b:
        print("internal error: the two membership tests disagree", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK if a else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilhyp", description="Hyperinvariant subspaces of nilpotent operators.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="nilpotency index, Weyr sequence, block type")
    p.add_argument("--matrix", required=True)
    p.add_argument("--field", help="expected field (p or Q)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("lattice", help="list the r-sequences of a block type")
    p.add_argument("--type", required=True, help="t1:m1,t2:m2,... with increasing sizes")
    p.add_argument("--dot", help="write the Hasse diagram as a DOT digraph")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("check", help="decide hyperinvariance of a subspace")
    p.add_argument("--matrix", required=True)
    p.add_argument("--subspace", required=True)
    p.add_argument("--field")
    p.add_argument("--witness", help="where to write a witness (default: SUBSPACE.witness)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", help="run the randomized verification suite")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=None, help="defaults to $NILHYP_SEED, else 0")
    p.add_argument("--max-blocks", type=int, default=3)
    p.add_argument("--max-size", type=int, default=5)
    p.add_argument("--max-mult", type=int, default=2)
    p.add_argument("--fields", default="2,3,5,Q")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("infmem", help="membership in the infinite model")
    p.add_argument("--spec", required=True)
    p.add_argument("--rseq", required=True)
    p.add_argument("--vector", required=True)
    p.add_argument("--field", default="Q")
    p.set_defaults(func=cmd_infmem)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
