"""Command-line front end.

Exit status: 0 when every check holds (or is verified), 1 when a violation
or inconclusive result is reported, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Iterator, TextIO

from hardycov import cov, hardy
from hardycov.counting import identity_failures
from hardycov.exact import DomainError, ceil_div, format_rational, parse_rational
from hardycov.reports import Report
from hardycov.sequences import (
    MonotonicityViolation,
    Seq,
    SeqFormatError,
    abel_step1_check,
    abel_step2_check,
    load_seq,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

DEFAULT_PRECISION = Fraction(1, 10**9)


class UsageError(Exception):
    pass


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational_list(text: str) -> list[Fraction]:
    return [_rational_arg(t) for t in text.split(",") if t.strip()]


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hardycov", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--output", "-o", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("text", "machine"), default="text")

    p = sub.add_parser("verify-cov", help="s * sum |a_[ns]| <= sum |a_n| for one sequence")
    p.add_argument("--seq", required=True, help="sequence file")
    p.add_argument("--s", required=True, type=_rational_arg)
    p.add_argument("--monotone", action="store_true", help="require non-increasing nonnegative input")
    common(p)

    p = sub.add_parser("fuzz", help="search for violations without the monotonicity hypothesis")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--support-max", type=int, default=8)
    p.add_argument("--s-denom-max", type=int, default=12)
    p.add_argument("--monotone", action="store_true", help="sample monotone sequences only")
    p.add_argument("--no-probe", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    common(p)

    p = sub.add_parser("verify-hardy", help="certify the discrete Hardy inequality")
    p.add_argument("--seq", help="sequence file; random sequences from --seed otherwise")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--M", type=int, help="truncation index (default 4*(support_max+1))")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    common(p)

    p = sub.add_parser("ingham-check", help="breakpoint integral equals the Cesàro mean")
    p.add_argument("--seq")
    p.add_argument("--n", type=int, default=100, help="check indices 0..n-1")
    p.add_argument("--seed", type=int, default=0)
    common(p)

    p = sub.add_parser("minkowski", help="certify the Minkowski integral step for monotone input")
    p.add_argument("--seq", required=True)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--M", type=int)
    p.add_argument("--s-min", type=_rational_arg, default=hardy.DEFAULT_S_MIN)
    common(p)

    p = sub.add_parser("sharpness", help="Hardy ratios for a_n = (n+1)^(-1/p-eps)")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--eps-list", type=_rational_list, default=[Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000)])
    p.add_argument("--N", type=int, default=10**4)
    p.add_argument("--prec", type=_rational_arg, default=DEFAULT_PRECISION)
    p.add_argument("--workers", type=int, default=1)
    common(p)

    p = sub.add_parser("norm2", help="power-iteration norm of the truncated Cesàro matrix")
    p.add_argument("--N", type=_int_list, default=[1, 10, 100, 1000, 10000])
    p.add_argument("--iters", type=int, default=10_000)
    p.add_argument("--tol", type=float, default=1e-12)
    common(p)

    p = sub.add_parser("identities", help="counting and summation-by-parts identities")
    p.add_argument("--m-max", type=int, default=500)
    p.add_argument("--s-denom-max", type=int, default=30, help="check every Farey fraction up to this denominator")
    p.add_argument("--s", type=_rational_list, default=[], help="extra rates, comma separated")
    p.add_argument("--trials", type=int, default=1000, help="random monotone sequences for the Abel checks")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    return parser


# -- output ----------------------------------------------------------------


class Emitter:
    def __init__(self, stream: TextIO, fmt: str):
        self.stream = stream
        self.fmt = fmt

    def record(self, rec) -> None:
        if self.fmt == "machine":
            data = rec if isinstance(rec, dict) else rec.to_record()
            self.stream.write(json.dumps(data, separators=(",", ":")) + "\n")
        else:
            text = _dict_to_text(rec) if isinstance(rec, dict) else rec.to_text()
            self.stream.write(text + "\n\n")

    def line(self, text: str) -> None:
        self.stream.write(text + "\n")


def _dict_to_text(d: dict) -> str:
    out = []
    for k, v in d.items():
        if isinstance(v, (dict, list)):
            v = json.dumps(v, separators=(",", ":"))
        out.append(f"{k}={v}")
    return "\n".join(out)


@contextlib.contextmanager
def _open_output(path: str | None) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


@contextlib.contextmanager
def _mapper(workers: int) -> Iterator[Callable]:
    if workers <= 1:
        yield map
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            yield lambda fn, *its: pool.map(fn, *its, chunksize=64)


def _decimal_down(q: Fraction, digits: int) -> str:
    scaled = (q.numerator * 10**digits) // q.denominator
    return _fixed(scaled, digits)


def _decimal_up(q: Fraction, digits: int) -> str:
    scaled = ceil_div(q.numerator * 10**digits, q.denominator)
    return _fixed(scaled, digits)


def _fixed(scaled: int, digits: int) -> str:
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"


def _digits_for(prec: Fraction) -> int:
    d = 0
    while Fraction(1, 10**d) > prec:
        d += 1
    return d


def _load(path: str) -> Seq:
    try:
        return load_seq(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    except SeqFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _default_M(a: Seq, M: int | None) -> int:
    return 4 * (a.length if a else 1) if M is None else M


def _random_signed_seq(rng: random.Random, support_max: int = 16, den_max: int = 100) -> Seq:
    length = rng.randint(1, support_max + 1)
    return Seq.from_values(Fraction(rng.randint(-den_max, den_max), rng.randint(1, den_max)) for _ in range(length))


# -- commands --------------------------------------------------------------


def cmd_verify_cov(args, out: Emitter) -> int:
    a = _load(args.seq)
    try:
        report = cov.verify_change_of_variable(a, args.s, require_monotone=args.monotone)
    except MonotonicityViolation as exc:
        raise UsageError(str(exc)) from None
    out.record(report)
    return EXIT_OK if report.holds else EXIT_VIOLATION


def cmd_fuzz(args, out: Emitter) -> int:
    with _mapper(args.workers) as map_fn:
        witnesses = cov.fuzz_unrestricted(
            args.trials,
            args.seed,
            support_max=args.support_max,
            s_denom_max=args.s_denom_max,
            monotone=args.monotone,
            include_probe=not args.no_probe,
            map_fn=map_fn,
        )
    for w in witnesses:
        out.record(w)
    out.record({"kind": "fuzz_summary", "trials": args.trials, "seed": args.seed, "witnesses": len(witnesses)})
    return EXIT_VIOLATION if witnesses else EXIT_OK


def cmd_verify_hardy(args, out: Emitter) -> int:
    if args.seq:
        seqs = [_load(args.seq)]
    else:
        rng = random.Random(f"hardycov-hardy:{args.seed}")
        seqs = [_random_signed_seq(rng) for _ in range(args.trials)]
    failures = 0
    for a in seqs:
        report = hardy.verify_hardy(a, args.p, _default_M(a, args.M))
        if args.seq or not report.holds:
            out.record(report)
        failures += not report.holds
    if not args.seq:
        out.record({"kind": "hardy_summary", "p": args.p, "cases": len(seqs), "violations": failures})
    return EXIT_VIOLATION if failures else EXIT_OK


def cmd_ingham(args, out: Emitter) -> int:
    if args.seq:
        a = _load(args.seq)
    else:
        a = _random_signed_seq(random.Random(f"hardycov-ingham:{args.seed}"), support_max=args.n)
    equalities = 0
    mismatches = []
    for n in range(args.n):
        try:
            hardy.ingham_integral(a, n)
            equalities += 1
        except AssertionError:
            mismatches.append(n)
    out.record({"kind": "ingham_summary", "checked": args.n, "equalities": equalities, "mismatches": mismatches})
    return EXIT_OK if not mismatches else EXIT_VIOLATION


def cmd_minkowski(args, out: Emitter) -> int:
    a = _load(args.seq)
    try:
        report = hardy.verify_minkowski_step(a, args.p, _default_M(a, args.M), args.s_min)
    except MonotonicityViolation as exc:
        raise UsageError(str(exc)) from None
    out.record(report)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_sharpness(args, out: Emitter) -> int:
    with _mapper(args.workers) as map_fn:
        rows = hardy.sharpness_sweep(args.p, args.eps_list, args.N, args.prec, map_fn=map_fn)
    digits = _digits_for(args.prec)
    precision = format_rational(args.prec)
    bad = 0
    if out.fmt == "text":
        out.line("eps,N,ratio_lower,ratio_upper,precision,p_prime")
    for row in rows:
        lo = _decimal_down(row.ratio.lower, digits)
        hi = _decimal_up(row.ratio.upper, digits)
        eps = format_rational(row.eps)
        pp = format_rational(row.p_prime)
        if out.fmt == "text":
            out.line(f"{eps},{row.N},{lo},{hi},{precision},{pp}")
        else:
            out.record({"kind": "sharpness", "eps": eps, "N": row.N, "ratio_lower": lo, "ratio_upper": hi, "precision": precision, "p_prime": pp})
        bad += not row.ratio.upper < row.p_prime
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_norm2(args, out: Emitter) -> int:
    ok = True
    prev = 0.0
    if out.fmt == "text":
        out.line("N,sigma,residual,iterations")
    for N in args.N:
        est = hardy.cesaro_norm2(N, args.iters, args.tol)
        if out.fmt == "text":
            out.line(f"{N},{est.sigma:.12f},{est.residual:.3e},{est.iterations}")
        else:
            out.record({"kind": "norm2", "N": N, "sigma": est.sigma, "residual": est.residual, "iterations": est.iterations})
        ok = ok and est.sigma < 2 and est.sigma >= prev
        prev = est.sigma
    return EXIT_OK if ok else EXIT_VIOLATION


def farey_rates(den_max: int) -> list[Fraction]:
    """Every fraction in ``(0, 1]`` with denominator at most ``den_max``, ascending."""
    return sorted({Fraction(n, d) for d in range(1, den_max + 1) for n in range(1, d + 1)})


def cmd_identities(args, out: Emitter) -> int:
    rates = sorted(set(farey_rates(args.s_denom_max)) | set(args.s))
    problems = []
    for s in rates:
        if s <= 0:
            raise UsageError(f"rate must be positive: {s}")
        problems.extend(identity_failures(args.m_max, s))
    rng = random.Random(f"hardycov-abel:{args.seed}")
    abel_failures: list[Report] = []
    for _ in range(args.trials):
        a = cov.random_monotone_seq(rng, 64)
        s = cov.random_rate(rng, 40)
        for rep in (abel_step1_check(a, s), abel_step2_check(a)):
            if not rep.ok:
                abel_failures.append(rep)
    for p in problems:
        out.record({"kind": "count_failure", **p})
    for rep in abel_failures:
        out.record(rep)
    out.record(
        {
            "kind": "identities_summary",
            "rates": len(rates),
            "m_max": args.m_max,
            "count_failures": len(problems),
            "abel_trials": args.trials,
            "abel_failures": len(abel_failures),
        }
    )
    return EXIT_VIOLATION if problems or abel_failures else EXIT_OK


COMMANDS = {
    "verify-cov": cmd_verify_cov,
    "fuzz": cmd_fuzz,
    "verify-hardy": cmd_verify_hardy,
    "ingham-check": cmd_ingham,
    "minkowski": cmd_minkowski,
    "sharpness": cmd_sharpness,
    "norm2": cmd_norm2,
    "identities": cmd_identities,
}


def _validate(args, parser: argparse.ArgumentParser) -> None:
    for name in ("trials", "n", "m_max", "support_max", "s_denom_max", "workers", "iters"):
        value = getattr(args, name, None)
        if value is not None and value < 0:
            parser.error(f"--{name.replace('_', '-')} must be nonnegative")
    if getattr(args, "s", None) is not None and isinstance(args.s, Fraction) and args.s <= 0:
        parser.error("--s must be positive")
    if args.command in ("verify-hardy",) and args.p < 2:
        parser.error("--p must be an integer >= 2")
    if args.command in ("minkowski",) and args.p < 1:
        parser.error("--p must be a positive integer")
    if args.command == "sharpness" and args.p < 2:
        parser.error("--p must be an integer >= 2")
    if getattr(args, "s_min", None) is not None and not 0 < args.s_min < 1:
        parser.error("--s-min must lie in (0, 1)")
    if getattr(args, "M", None) is not None and not isinstance(args.M, list) and args.M < 1:
        parser.error("--M must be positive")
    if args.command == "norm2" and any(n < 0 for n in args.N):
        parser.error("--N must be nonnegative")
    if args.command == "sharpness" and (args.N < 0 or args.prec <= 0):
        parser.error("--N must be nonnegative and --prec positive")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(args, parser)
    try:
        with _open_output(args.output) as stream:
            return COMMANDS[args.command](args, Emitter(stream, args.format))
    except (UsageError, DomainError) as exc:
        print(f"hardycov {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hardycov {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
