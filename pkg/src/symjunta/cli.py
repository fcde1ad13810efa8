"""Command-line entry point.

Exit codes: 0 success, 1 verification counterexample, 2 usage error,
3 resource cap exceeded, 4 learner diagnostic failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import re
import sys
from fractions import Fraction
from typing import Callable

from . import moments, numtheory, structure
from .boolfn import SymmetricFunction, fourier_transform, level_coefficients
from .errors import (
    ArityError,
    BudgetError,
    CertificateUnavailable,
    ExampleParseError,
    InvalidModulusError,
    InvalidQueryError,
    LearningFailure,
    ResourceCapError,
)
from .learner import DatasetOracle, PlantedOracle, learn_symmetric_junta, plant_instance

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE, EXIT_CAP, EXIT_DIAGNOSTIC = 0, 1, 2, 3, 4

log = logging.getLogger("symjunta")


class UsageError(Exception):
    pass


_NUM = r"(\d+(?:\.\d+)?)"
_BOUND_FORMS = [
    (re.compile(rf"^{_NUM}$"), lambda c: (lambda k: float(c))),
    (re.compile(rf"^{_NUM}\*?k/{_NUM}$"), lambda a, b: (lambda k: Fraction(a) * k / Fraction(b))),
    (re.compile(rf"^{_NUM}\*?k/ln\(k\)$"), lambda c: (lambda k: float(c) * k / math.log(k) if k > 1 else math.inf)),
    (re.compile(r"^k$"), lambda: (lambda k: k)),
]


def parse_bound(expr: str) -> Callable[[int], float]:
    """Parse '2k/3', '3k/31', 'C*k/ln(k)', a constant, optionally wrapped in floor()/ceil()."""
    s = expr.replace(" ", "")
    wrap = None
    m = re.match(r"^(floor|ceil)\((.*)\)$", s)
    if m:
        wrap, s = m.group(1), m.group(2)
    for pat, make in _BOUND_FORMS:
        hit = pat.match(s)
        if hit:
            fn = make(*hit.groups())
            if wrap == "floor":
                return lambda k: math.floor(fn(k))
            if wrap == "ceil":
                return lambda k: math.ceil(fn(k))
            return fn
    raise UsageError(f"cannot parse bound expression {expr!r}")


def _enum_cap() -> int:
    return int(os.environ.get("SYMJUNTA_ENUM_CAP", structure.DEFAULT_ENUM_CAP))


def _symmetric(bits: str, k: int | None = None) -> SymmetricFunction:
    try:
        f = SymmetricFunction.from_bits(bits)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if k is not None and f.k != k:
        raise UsageError(f"function {bits} has arity {f.k}, expected {k}")
    return f


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


# --------------------------------------------------------------------------
# subcommands


def cmd_min_order(args) -> int:
    cap = _enum_cap()
    if args.f:
        f = _symmetric(args.f, args.k)
        rep = structure.report_for(f)
        if args.format == "text":
            _emit(args, "none" if rep["min_order"] is None else str(rep["min_order"]))
        elif args.format == "csv":
            _emit(args, structure.rows_to_csv([(str(f), rep["min_order"], rep["exceptional"])]))
        else:
            _emit(args, _dumps(rep))
        return EXIT_OK
    if args.k is None:
        raise UsageError("--k is required with --all")
    if args.k > cap:
        raise ResourceCapError(f"k={args.k} above enumeration cap {cap}")
    rows = structure.min_order_rows(args.k, args.shard_index, args.shard_count, cap)
    if args.format == "csv":
        _emit(args, structure.rows_to_csv(rows))
    elif args.format == "text":
        _emit(args, "\n".join(
            f"{s} {'none' if o is None else o}{' *' if e else ''}" for s, o, e in rows
        ))
    else:
        _emit(args, _dumps({
            "k": args.k,
            "rows": [{"function": s, "min_order": o, "exceptional": e} for s, o, e in rows],
        }))
    return EXIT_OK


def cmd_verify(args) -> int:
    bound = parse_bound(args.bound)
    cap = _enum_cap()
    if args.k_max > cap:
        raise ResourceCapError(f"k={args.k_max} above enumeration cap {cap}")
    per_k, ok = [], True
    for k in range(args.k_min, args.k_max + 1):
        rep = structure.enumerate_and_verify(k, bound, args.shard_index, args.shard_count, cap)
        log.info("k=%d max min order %d, %d counterexamples", k, rep.max_min_order, rep.counterexample_count)
        d = rep.to_dict()
        d["bound"] = float(rep.bound) if rep.bound is not None else None
        per_k.append(d)
        ok &= rep.ok
    _emit(args, _dumps({"bound": args.bound, "ok": ok, "per_k": per_k}))
    return EXIT_OK if ok else EXIT_COUNTEREXAMPLE


def cmd_learn(args) -> int:
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
        try:
            n, k, core, seed = int(cfg["n"]), int(cfg["k"]), cfg["core"], int(cfg["seed"])
        except (KeyError, TypeError, ValueError) as e:
            raise UsageError(f"bad oracle config: {e}") from None
        delta = float(cfg.get("delta", args.delta))
        inst = plant_instance(n, k, _symmetric(core, k), seed)
        oracle = PlantedOracle(inst)
    else:
        oracle = DatasetOracle.from_file(args.data)
        n = oracle.n
        if args.k is None:
            raise UsageError("--k is required with --data")
        k = min(args.k, n)
        delta = args.delta
    res = learn_symmetric_junta(oracle, n, k, delta)
    _emit(args, _dumps(res.to_dict()))
    return EXIT_OK


def cmd_primes(args) -> int:
    if args.M is not None:
        q = numtheory.primes_in_ap(args.lo, args.hi, args.M, args.a if args.a is not None else 1)
        out = q.to_dict()
    else:
        ps = numtheory.primes_in_interval(args.lo, args.hi)
        out = {"lo": args.lo, "hi": args.hi, "count": len(ps), "primes": ps}
    _emit(args, _dumps(out))
    return EXIT_OK


def cmd_lucas(args) -> int:
    rep = numtheory.lucas_check(args.m, args.l, args.r)
    _emit(args, _dumps(rep.to_dict()))
    return EXIT_OK if rep.ok else EXIT_COUNTEREXAMPLE


def cmd_moments(args) -> int:
    f = _symmetric(args.f)
    src = moments.symmetrize(f) if args.symmetrize else f
    _emit(args, _dumps(moments.moment_match_report(src, args.r)))
    return EXIT_OK


def cmd_certificate(args) -> int:
    cert = numtheory.two_periodicity_certificate(args.N, args.k)
    _emit(args, _dumps(cert.to_dict()))
    return EXIT_OK if cert.verify() else EXIT_COUNTEREXAMPLE


def cmd_spectrum(args) -> int:
    f = _symmetric(args.f)
    if args.subsets:
        _emit(args, fourier_transform(f).to_json())
    else:
        _emit(args, _dumps({"k": f.k, "scale": 1 << f.k, "levels": list(level_coefficients(f.values))}))
    return EXIT_OK


def cmd_window(args) -> int:
    f = _symmetric(args.f)
    ws = structure.window_system(f, args.t0)
    _emit(args, _dumps({"k": ws.k, "N": ws.N, "sums": list(ws.sums), "c_N": ws.c_N,
                        "epsilon": str(ws.epsilon), "t0_null": structure.is_t_null(f, args.t0).is_null}))
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symjunta", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=False, shard=False):
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")
        if fmt:
            sp.add_argument("--format", choices=("json", "csv", "text"), default="json")
        if shard:
            sp.add_argument("--shard-index", type=int, default=0)
            sp.add_argument("--shard-count", type=int, default=1)

    sp = sub.add_parser("min-order", help="minimal nonzero Fourier order of symmetric functions")
    sp.add_argument("--k", type=int)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--f", help="value bitstring f_0...f_k")
    g.add_argument("--all", action="store_true", help="every symmetric function on k bits")
    common(sp, fmt=True, shard=True)
    sp.set_defaults(func=cmd_min_order)

    sp = sub.add_parser("verify", help="check max min order against a bound over a range of k")
    sp.add_argument("--k-min", type=int, required=True)
    sp.add_argument("--k-max", type=int, required=True)
    sp.add_argument("--bound", required=True, help="e.g. 2k/3, 3k/31, 1.5*k/ln(k), floor(2k/3)")
    common(sp, shard=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("learn", help="learn a symmetric junta from a planted oracle or a dataset")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--config", help='JSON oracle config {"n", "k", "core", "seed"}')
    g.add_argument("--data", help="example file, one '<bits> <label>' per line")
    sp.add_argument("--k", type=int, help="junta size bound (dataset mode)")
    sp.add_argument("--delta", type=float, default=0.05)
    common(sp)
    sp.set_defaults(func=cmd_learn)

    sp = sub.add_parser("primes", help="primes in an interval, optionally in a residue class")
    sp.add_argument("--lo", type=int, required=True)
    sp.add_argument("--hi", type=int, required=True)
    sp.add_argument("--M", type=int)
    sp.add_argument("--a", type=int)
    common(sp)
    sp.set_defaults(func=cmd_primes)

    sp = sub.add_parser("lucas", help="check C(mr, lr) = C(m, l) and C(mr, n) = 0 mod r")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_lucas)

    sp = sub.add_parser("moments", help="compare moments of the induced measure with the uniform one")
    sp.add_argument("--f", required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--symmetrize", action="store_true", help="use f(x) + f(~x) as the source")
    common(sp)
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("certificate", help="prime certificate for 2-periodicity")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_certificate)

    sp = sub.add_parser("spectrum", help="exact scaled Fourier spectrum of a symmetric function")
    sp.add_argument("--f", required=True)
    sp.add_argument("--subsets", action="store_true", help="per-subset records instead of levels")
    common(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("window", help="window sums for a symmetric function at order t0")
    sp.add_argument("--f", required=True)
    sp.add_argument("--t0", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_window)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ResourceCapError as e:
        log.error("%s", e)
        return EXIT_CAP
    except (LearningFailure, BudgetError) as e:
        log.error("%s", e)
        return EXIT_DIAGNOSTIC
    except CertificateUnavailable as e:
        log.error("%s (searched %s)", e, e.interval)
        return EXIT_DIAGNOSTIC
    except (UsageError, ExampleParseError, ArityError, InvalidQueryError, InvalidModulusError, ValueError, OSError) as e:
        log.error("%s", e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
