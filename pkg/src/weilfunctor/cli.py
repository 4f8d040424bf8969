"""Command-line front end: ``weilfunctor {lift,decompose,verify,tensor,validate}``.

Exit codes: 0 success, 2 usage or parse error, 3 domain or other
mathematical error, 4 verification failure (including an invalid algebra).
"""

from __future__ import annotations

import argparse
import os
import sys

from .algebra import FiniteAlgebra, WeilAlgebra, minimal_idempotents, tensor_product, validate
from .errors import AlgebraError, DomainError, NotFormallyRealError, ParseError, WeilError
from .lift import LiftedVector, eval_lift
from .parse import parse_expressions
from .sampling import preset
from .serialize import dumps_algebra, load_algebra
from .verify import SUITE_NAMES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_VERIFY = 0, 2, 3, 4


class UsageError(Exception):
    pass


class VerificationFailure(Exception):
    pass


def fmt(v: float) -> str:
    return f"{float(v) + 0.0:.12g}"


def resolve_algebra(source: str, check: bool = True) -> FiniteAlgebra:
    """Preset name, ``*``-product of presets, or path to an algebra file."""
    if os.path.isfile(source):
        return load_algebra(source, check=check)
    try:
        return preset(source)
    except ValueError:
        raise UsageError(f"unknown algebra {source!r}: not a file and not a preset (dual, jet:r, jet:r:k, A*B)") from None


def _weil(source: str) -> WeilAlgebra:
    alg = resolve_algebra(source)
    if not isinstance(alg, WeilAlgebra):
        raise UsageError(f"{source} has no augmentation; lifting needs a Weil algebra")
    return alg


def _slot(alg: WeilAlgebra, token: str):
    if token in ("-", "none"):
        return None
    labels = alg.labels()
    if token in labels:
        i = labels.index(token)
    else:
        try:
            i = int(token)
        except ValueError:
            raise UsageError(f"seed slot {token!r} is neither a basis label nor an index") from None
        if not 0 <= i < alg.dim:
            raise UsageError(f"seed slot {i} out of range for dim {alg.dim}")
    if alg.aug[i] != 0:
        raise UsageError(f"seed slot {token!r} is not nilpotent (its augmentation is nonzero)")
    return i


def lift_table(alg: WeilAlgebra, expr: str, point, slots=None) -> str:
    """The coefficient table printed by ``lift``."""
    g = parse_expressions(expr, arity=len(point))
    try:
        v = LiftedVector.seed(alg, point, slots)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = eval_lift(g, v).coeffs()
    labels = alg.labels()
    width = max(len(s) for s in labels)
    at = " ".join(fmt(x) for x in point)
    lines = [f"# algebra {alg.name}  dim={alg.dim}  height={alg.height}  at={at}"]
    for o, row in enumerate(out, 1):
        for lab, c in zip(labels, row):
            lines.append(f"f{o}  {lab:<{width}}  {fmt(c)}")
    return "\n".join(lines) + "\n"


def cmd_lift(args) -> str:
    alg = _weil(args.algebra)
    slots = None if args.seed_slots is None else [_slot(alg, t) for t in args.seed_slots]
    return lift_table(alg, args.expr, args.at, slots)


def cmd_decompose(args) -> str:
    alg = resolve_algebra(_one_algebra(args), check=False)
    dec = minimal_idempotents(alg, seed=args.seed)
    lines = [f"k {len(dec.idempotents)}"]
    for i, (e, s) in enumerate(zip(dec.idempotents, dec.summands), 1):
        lines.append(f"idempotent {i}: " + " ".join(fmt(c) for c in e.element.coeffs))
        lines.append(f"summand {i}: dim {s.dim} height {s.height}")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> str:
    report = run_suite(args.suite, seed=args.seed, trials=args.trials)
    if not report.passed:
        raise VerificationFailure(report.text())
    return report.text()


def cmd_tensor(args) -> str:
    specs = list(args.algebras) + list(args.more)
    if not specs:
        raise UsageError("tensor needs at least one algebra")
    algs = [_weil(s) for s in specs]
    out = algs[0]
    for a in algs[1:]:
        out = tensor_product(out, a)
    return dumps_algebra(out)


def cmd_validate(args) -> str:
    source = _one_algebra(args)
    alg = resolve_algebra(source, check=False)
    if not isinstance(alg, WeilAlgebra):
        raise UsageError(f"{source} has no augmentation row to validate against")
    rep = validate(alg)
    if not rep.ok:
        raise VerificationFailure(f"invalid: {rep.summary()}\n")
    return f"ok: dim {alg.dim} height {rep.height}\n"


def _algebra_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("algebra", nargs="?", help="algebra file or preset")
    sp.add_argument("--algebra", dest="algebra_flag", metavar="ALGEBRA", help="same as the positional argument")


def _one_algebra(args) -> str:
    if (args.algebra is None) == (args.algebra_flag is None):
        raise UsageError("give the algebra either positionally or with --algebra, exactly once")
    return args.algebra or args.algebra_flag


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weilfunctor", description="Weil algebras and their Taylor lifts.")
    sub = p.add_subparsers(dest="command", required=True)

    lift = sub.add_parser("lift", help="evaluate the lift of an expression at a point")
    lift.add_argument("expr", help='comma-separated expressions in x1..xn, e.g. "exp(x1)*x2"')
    lift.add_argument("--algebra", required=True, help="preset (dual, jet:r, jet:r:k, A*B) or algebra file")
    lift.add_argument("--at", required=True, type=float, nargs="+", metavar="X", help="base point")
    lift.add_argument(
        "--seed-slots",
        nargs="+",
        metavar="SLOT",
        help="basis label or index seeded on each variable ('-' for none); default: j-th generator on x_j",
    )
    lift.set_defaults(run=cmd_lift)

    dec = sub.add_parser("decompose", help="split an algebra into local summands")
    _algebra_args(dec)
    dec.add_argument("--seed", type=int, default=0)
    dec.set_defaults(run=cmd_decompose)

    ver = sub.add_parser("verify", help="run a property suite")
    ver.add_argument("suite", choices=SUITE_NAMES + ("all",))
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--trials", type=int, default=20)
    ver.set_defaults(run=cmd_verify)

    ten = sub.add_parser("tensor", help="print the tensor product of algebras in file format")
    ten.add_argument("algebras", nargs="*", help="presets or algebra files")
    ten.add_argument("--algebra", action="append", default=[], dest="more", help="may be repeated")
    ten.set_defaults(run=cmd_tensor)

    val = sub.add_parser("validate", help="check the Weil algebra identities")
    _algebra_args(val)
    val.set_defaults(run=cmd_validate)

    for sp in (lift, dec, ver, ten, val):
        sp.add_argument("--out", help="also write the output to this file")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.run(args), EXIT_OK
    except VerificationFailure as exc:
        text, code = str(exc), EXIT_VERIFY
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, NotFormallyRealError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except AlgebraError as exc:
        # an algebra file that fails the Weil identities, or a failed decomposition
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH if args.command == "decompose" else EXIT_VERIFY
    except (WeilError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
