"""Command-line front end.

Exit codes: 0 success, 1 validation or precondition failure (including bad
flags and malformed files), 2 budget or sampler exhaustion.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import serialize
from .bundle import is_steiner, reduced_summand, sample_steiner
from .errors import BudgetExceeded, InvariantViolation, SamplerExhausted, ValidationError
from .exactalg import DEFAULT_BUDGET, FieldCtx
from .jumping import enumerate_jumping_pairs, span_report
from .oracle import brute_rank_one_scan, tecnico_bound_property
from .schwarz import parse_triplet
from .transform import classify_max, transform_at, verify_transform_laws


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(f"usage: {message}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc


def _load(args):
    return serialize.loads_bundle(_read(args.bundle), args.budget)


def _emit(text: str, path: str | None, out) -> None:
    if path is None or path == "-":
        out.write(text)
    else:
        Path(path).write_text(text)


def cmd_construct(args, out):
    if (args.triplet is None) == (args.file is None):
        raise ValidationError("construct: give exactly one of a triplet file or --triplet")
    text = args.triplet if args.triplet is not None else _read(args.file)
    pres = parse_triplet(text, args.budget).build()
    _emit(serialize.dumps_bundle(pres), args.output, out)


def cmd_check(args, out):
    pres = _load(args)
    ok, witness = is_steiner(pres)
    if not ok:
        raise ValidationError(f"Steiner check failed: evaluation at u={list(witness)} has rank < s={pres.s}")
    red = reduced_summand(pres)
    d = {"p": pres.p, "n": pres.n, "s": pres.s, "t": pres.t, "steiner": True,
         "t0": red.t0, "kernel_dim": red.kernel_dim, "reduced": red.kernel_dim == 0}
    out.write(serialize.render(d, args.format))


def cmd_jumping(args, out):
    red = reduced_summand(_load(args))
    rep = enumerate_jumping_pairs(red)
    out.write(serialize.render(serialize.jumping_dict(rep, span_report(rep, red)), args.format))


def cmd_transform(args, out):
    red = reduced_summand(_load(args))
    rep = enumerate_jumping_pairs(red)
    if not 0 <= args.pair < len(rep.pairs):
        raise ValidationError(f"pair index {args.pair} out of range: the locus has {len(rep.pairs)} pairs")
    pair = rep.pairs[args.pair]
    step = transform_at(red, pair)
    law = verify_transform_laws(red, pair, rep)
    _emit(serialize.dumps_bundle(step.output.as_presentation()), args.output, out)
    report = serialize.render(serialize.law_dict(law, step), args.format)
    (sys.stderr if args.output in (None, "-") else out).write(report)


def cmd_classify(args, out):
    rep = classify_max(reduced_summand(_load(args)))
    out.write(serialize.render(serialize.classification_dict(rep), args.format))


def cmd_random(args, out):
    ctx = FieldCtx(args.p, args.budget)
    pres, rejections = sample_steiner(args.s, args.t, args.n, ctx, args.seed, args.max_rejections)
    _emit(serialize.dumps_bundle(pres), args.output, out)
    print(f"rejections {rejections}", file=sys.stderr)


def cmd_oracle_scan(args, out):
    red = reduced_summand(_load(args))
    out.write(serialize.render(serialize.pairs_dict(brute_rank_one_scan(red)), args.format))


def cmd_oracle_tecnico(args, out):
    ctx = FieldCtx(args.p, args.budget)
    bad = tecnico_bound_property(args.trials, ctx, args.seed, t_max=args.t_max)
    d = {"trials": args.trials, "p": args.p, "seed": args.seed, "violation_count": len(bad), "violations": bad}
    out.write(serialize.render(d, args.format))


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="cap on projective points enumerated in one pass (default: %(default)s)")
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="report format (default: %(default)s)")

    parser = _Parser(prog="steinerfp", description="Steiner bundles over F_p: jumping loci and classification.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", parents=[common], help="triplet description -> bundle file")
    p.add_argument("file", nargs="?", help="triplet JSON file")
    p.add_argument("--triplet", help='inline triplet JSON, e.g. \'{"p":5,"p1":[2,2]}\'')
    p.add_argument("-o", "--output", help="bundle file to write (default: stdout)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("check", parents=[common], help="Steiner and reducedness report")
    p.add_argument("bundle")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("jumping", parents=[common], help="jumping-locus report")
    p.add_argument("bundle")
    p.set_defaults(func=cmd_jumping)

    p = sub.add_parser("transform", parents=[common], help="transform at a pair (index in report order)")
    p.add_argument("bundle")
    p.add_argument("--pair", type=int, default=0, help="pair index (default: %(default)s)")
    p.add_argument("-o", "--output", help="bundle file to write; without it the law report goes to stderr")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("classify", parents=[common], help="classification report")
    p.add_argument("bundle")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("random", parents=[common], help="seeded random Steiner bundle")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-rejections", type=int, default=1000, help="(default: %(default)s)")
    p.add_argument("-o", "--output", help="bundle file to write (default: stdout)")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("oracle", help="brute-force oracles")
    osub = p.add_subparsers(dest="oracle", required=True, parser_class=_Parser)
    q = osub.add_parser("scan", parents=[common], help="rank-one scan of P(T_0)")
    q.add_argument("bundle")
    q.set_defaults(func=cmd_oracle_scan)
    q = osub.add_parser("tecnico", parents=[common], help="random check of the (a,b) dimension bound")
    q.add_argument("--trials", type=int, default=100, help="(default: %(default)s)")
    q.add_argument("--p", type=int, default=5, help="(default: %(default)s)")
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--t-max", type=int, default=10, help="(default: %(default)s)")
    q.set_defaults(func=cmd_oracle_tecnico)
    return parser


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        args.func(args, out)
    except (BudgetExceeded, SamplerExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, InvariantViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
