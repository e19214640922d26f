"""Command-line front end: JSON in, JSON out.

Exit codes: 0 success, 1 usage or malformed input, 2 precision exhausted,
3 invariant violation.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from collections import Counter

from .errors import InvariantViolation, PadicError, PrecisionExhausted
from .padic import DEFAULT_PRECISION, INF, PadicScalar, check_prime, parse_rational
from .sl2 import Mat2, mat_mul

SCHEMA = "padic-sl2/1"

EXIT_OK, EXIT_USAGE, EXIT_PRECISION, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- input ---------------------------------------------------------------------


def _read_json(path: str | None):
    if path is None:
        raise UsageError("--input is required for this command")
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None


def _job(args, data=None) -> tuple[int, int]:
    """(p, precision), with input-file values taking precedence over flags."""
    p = args.p
    prec = args.precision
    if isinstance(data, dict):
        p = data.get("p", p)
        prec = data.get("precision", prec)
    if p is None:
        raise UsageError("a prime is required (--p or \"p\" in the input)")
    if not isinstance(p, int) or not isinstance(prec, int):
        raise UsageError("p and precision must be integers")
    check_prime(p)
    if prec < 4:
        raise UsageError("precision must be at least 4")
    return p, prec


def _matrix(rows, p: int, prec: int) -> Mat2:
    try:
        (a, b), (c, d) = rows
    except (TypeError, ValueError):
        raise UsageError("matrix must be [[a, b], [c, d]]") from None
    return Mat2.of([[parse_rational(a), parse_rational(b)], [parse_rational(c), parse_rational(d)]], p, prec)


def _load_matrix(args):
    data = _read_json(args.input)
    if not isinstance(data, dict) or "matrix" not in data:
        raise UsageError('input must be an object with a "matrix" field')
    p, prec = _job(args, data)
    return data, p, prec, _matrix(data["matrix"], p, prec)


def _level_json(level):
    return "inf" if level == INF else level


# -- subcommands ----------------------------------------------------------------


def cmd_classify(args):
    from .classify import classify

    _, p, prec, x = _load_matrix(args)
    return {"p": p, "precision": prec, **classify(x).to_json()}


def _descriptor_from_flags(args, p, prec):
    from .subgroups import SubgroupDescriptor

    if not args.variant:
        raise UsageError('give a "descriptor" in the input or --variant')
    data = {"variant": args.variant}
    for name in ("delta", "gamma", "eta1", "eta2", "n"):
        val = getattr(args, name)
        if val is not None:
            data[name] = val
    return SubgroupDescriptor.from_json(data, p, prec)


def cmd_member(args):
    from .subgroups import SubgroupDescriptor, member

    data, p, prec, x = _load_matrix(args)
    if "descriptor" in data:
        D = SubgroupDescriptor.from_json(data["descriptor"], p, prec)
    else:
        D = _descriptor_from_flags(args, p, prec)
    return {"p": p, "precision": prec, "descriptor": D.to_json(), "member": member(D, x)}


def cmd_filtration(args):
    from .subgroups import filtration_level, z_quotient_map, zfilt_min_level

    data, p, prec, x = _load_matrix(args)
    delta = data.get("delta", args.delta)
    if delta is None:
        raise UsageError("--delta is required")
    level = filtration_level(x, int(delta))
    out = {"p": p, "precision": prec, "delta": int(delta), "level": _level_json(level)}
    if level != INF and level >= zfilt_min_level(p, int(delta)):
        out["quotient"] = z_quotient_map(x, level, int(delta))
    return out


def cmd_bruhat(args):
    from .sl2 import bruhat_decompose

    _, p, prec, x = _load_matrix(args)
    form = bruhat_decompose(x)
    if not form.reconstruct() == x:
        raise InvariantViolation("Bruhat factors do not multiply back")
    out = {"p": p, "precision": prec, "cell": form.cell, "left": form.left.to_json()}
    if form.right is not None:
        out["right"] = form.right.to_json()
    return out


def cmd_cover_check(args):
    from .errors import NoCoverIndex
    from .generosity import cover_membership, default_cover
    from .sl2 import random_sl2

    p, prec = _job(args)
    rng = random.Random(args.seed)
    cover = default_cover(p, prec)
    hist: Counter = Counter()
    failures = 0
    for _ in range(args.samples):
        x = random_sl2(rng, p, prec)
        try:
            hist[str(cover_membership(x, cover))] += 1
        except NoCoverIndex:
            failures += 1
    return {
        "p": p,
        "precision": prec,
        "checked": args.samples,
        "failures": failures,
        "indices_histogram": {str(i): hist.get(str(i), 0) for i in range(1, 5)},
    }


def cmd_escape(args):
    from .generosity import default_cover, escape_Wprime

    if args.input is not None:
        data = _read_json(args.input)
        if not isinstance(data, dict) or "translates" not in data:
            raise UsageError('input must be an object with a "translates" list')
        p, prec = _job(args, data)
        translates = [_matrix(rows, p, prec) for rows in data["translates"]]
    else:
        p, prec = _job(args)
        translates = list(default_cover(p, prec).translates)
    w = escape_Wprime(translates)
    return {
        "p": p,
        "precision": prec,
        "translates": [t.to_json() for t in translates],
        "x": w.x.to_json(),
        "shift": w.shift,
        "matrix": w.matrix.to_json(),
    }


def cmd_oracle_verify(args):
    from .oracle.suite import format_table, run_suite

    p = args.p
    if p is None:
        raise UsageError("--p is required")
    check_prime(p)
    checks = run_suite(p, args.k, seed=args.seed)
    print(format_table(checks), file=sys.stderr if args.output is None else sys.stdout)
    failed = [c.name for c in checks if not c.passed]
    report = {
        "p": p,
        "k": args.k,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
        "failures": len(failed),
    }
    if failed:
        raise _ReportedFailure(report, f"{len(failed)} oracle checks failed")
    return report


def cmd_interpret(args):
    from .interpretation import decode, encode, gf_add, gf_mul, mul_word, word

    p, prec = _job(args)
    if args.x is None or args.y is None:
        raise UsageError("--x and --y are required")
    x = PadicScalar.exact(parse_rational(args.x), p, prec)
    y = PadicScalar.exact(parse_rational(args.y), p, prec)
    ex, ey = encode(x), encode(y)
    if args.op == "add":
        combined = mat_mul(word(ex), word(ey))
        result = gf_add(ex, ey)
    else:
        combined = mul_word(ex, ey)
        result = gf_mul(ex, ey)
    return {
        "p": p,
        "precision": prec,
        "op": args.op,
        "x": x.to_json(),
        "y": y.to_json(),
        "words": {"x": word(ex).to_json(), "y": word(ey).to_json(), "combined": combined.to_json()},
        "result": decode(result).to_json(),
    }


class _ReportedFailure(Exception):
    def __init__(self, report, message):
        super().__init__(message)
        self.report = report


COMMANDS = {
    "classify": cmd_classify,
    "member": cmd_member,
    "filtration": cmd_filtration,
    "bruhat": cmd_bruhat,
    "cover-check": cmd_cover_check,
    "escape": cmd_escape,
    "oracle-verify": cmd_oracle_verify,
    "interpret": cmd_interpret,
}


# -- driver ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="the prime")
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="relative p-adic digits")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--input", help="JSON input file, or - for stdin")
    common.add_argument("--output", help="write the JSON report here instead of stdout")

    parser = argparse.ArgumentParser(prog="padic-sl2", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "member":
            sp.add_argument("--variant")
            for flag in ("--delta", "--gamma", "--eta1", "--eta2", "--n"):
                sp.add_argument(flag, type=int)
        elif name == "filtration":
            sp.add_argument("--delta", type=int)
        elif name == "cover-check":
            sp.add_argument("--samples", type=int, default=1000)
        elif name == "oracle-verify":
            sp.add_argument("--k", type=int, default=2)
        elif name == "interpret":
            sp.add_argument("--op", choices=("add", "mul"), required=True)
            sp.add_argument("--x")
            sp.add_argument("--y")
    return parser


def _emit(report: dict, args) -> None:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    base = {"schema": SCHEMA, "command": args.command, "seed": args.seed}
    try:
        report = COMMANDS[args.command](args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionExhausted as e:
        print(f"precision exhausted: {e}", file=sys.stderr)
        return EXIT_PRECISION
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except _ReportedFailure as e:
        _emit({**base, **e.report}, args)
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (PadicError, ValueError, TypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    _emit({**base, **report}, args)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
