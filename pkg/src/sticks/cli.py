"""Command line entry point: ``sticks {exact,table,simulate,verify,rvec}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import exact as exact_mod
from . import kfib, mc, verify
from .errors import ConsistencyError, DomainError

FORMATS = ("human", "json", "csv")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # one-line errors instead of usage dumps
    def error(self, message):
        raise UsageError(message)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _split_render(p, digits):
    text = exact_mod.decimal_render(p, digits)
    terminates = text.endswith(" (exact)")
    return text.removesuffix(" (exact)"), terminates


def _check_digits(digits):
    if digits < 1:
        raise DomainError(f"digits must be >= 1 (got {digits})")


def cmd_exact(args) -> str:
    _check_digits(args.digits)
    p = exact_mod.exact_probability(args.k, args.n)
    dec, terminates = _split_render(p, args.digits)
    if args.format == "json":
        return json.dumps({"k": p.k, "n": p.n, "numerator": p.numerator,
                           "denominator": p.denominator, "decimal": dec, "terminates": terminates})
    if args.format == "csv":
        return _csv(["k", "n", "numerator", "denominator", "decimal"],
                    [[p.k, p.n, p.numerator, p.denominator, dec]])
    if p.trivial:
        return f"1 (no {p.k + 1}-subset exists)"
    return f"{p.value} = {dec} (exact)" if terminates else f"{p.value} ≈ {dec}"


def cmd_table(args) -> str:
    _check_digits(args.digits)
    if args.n_max < args.k + 1:
        raise DomainError(f"n-max must be >= k+1 = {args.k + 1} (got {args.n_max})")
    rows = []
    for n in range(args.k + 1, args.n_max + 1):
        p = exact_mod.exact_probability(args.k, n)
        rows.append([n, p.numerator, p.denominator, _split_render(p, args.digits)[0]])
    header = ["n", "numerator", "denominator", "decimal"]
    if args.format == "json":
        return json.dumps({"k": args.k, "rows": [dict(zip(header, r)) for r in rows]})
    if args.format == "csv":
        return _csv(header, rows)
    width = max(len(f"{r[1]}/{r[2]}") for r in rows)
    lines = [f"P_n for k={args.k}"]
    lines += [f"n={r[0]:<4d} {f'{r[1]}/{r[2]}':>{width}}  {r[3]}" for r in rows]
    return "\n".join(lines)


def _z_score(report) -> float | None:
    c = report.config
    try:
        truth = float(exact_mod.exact_probability(c.k, c.n).value)
    except (DomainError, ConsistencyError):
        return None
    diff = abs(report.estimate - truth)
    if report.stderr == 0.0:
        return 0.0 if diff == 0.0 else float("inf")
    return diff / report.stderr


def cmd_simulate(args) -> str:
    config = mc.SimulationConfig(args.k, args.n, args.trials, args.seed, args.workers, args.sampler)
    report = mc.estimate(config)
    z = _z_score(report)
    z_line = "" if z is None else f"|estimate - exact| / stderr = {z:.3f}"
    if args.format == "json":
        if z_line:
            print(z_line, file=sys.stderr)
        return report.to_json()
    if args.format == "csv":
        if z_line:
            print(z_line, file=sys.stderr)
        d = report.to_dict()
        lo, hi = d.pop("ci95")
        return _csv(list(d) + ["ci95_low", "ci95_high"], [list(d.values()) + [lo, hi]])
    return "\n".join(filter(None, [report.to_json(), z_line]))


def cmd_verify(args) -> tuple[str, int]:
    families = verify.run_suite(args.k_max, args.l_max, args.n_max)
    lines = [f"{f.name}: {f.passed}/{f.checked} passed" for f in families]
    failed = next((f for f in families if not f.ok), None)
    if failed is None:
        lines.append("all identities hold")
        return "\n".join(lines), 0
    lines.append(f"FAIL {failed.name} {failed.failure}")
    return "\n".join(lines), 1


def cmd_rvec(args) -> tuple[str, int]:
    if args.l_max < 1:
        raise DomainError(f"l-max must be >= 1 (got {args.l_max})")
    rows, mismatches = [], 0
    for r in kfib.r_vectors(args.k, args.l_max):
        closed = kfib.r_vector_closed_form(args.k, r.l)
        same = r.entries == closed.entries
        mismatches += not same
        rows.append([r.l, " ".join(map(str, r.entries)), " ".join(map(str, closed.entries)), same])
    header = ["l", "iterated", "closed_form", "match"]
    if args.format == "json":
        out = json.dumps({"k": args.k, "rows": [dict(zip(header, r)) for r in rows]})
    elif args.format == "csv":
        out = _csv(header, rows)
    else:
        out = "\n".join(f"l={r[0]:<4d} ({r[1]})  ({r[2]})  {'ok' if r[3] else 'MISMATCH'}" for r in rows)
    return out, int(mismatches > 0)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sticks", description="Probability that no k+1 of n uniform sticks form a polygon.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help, **flags):
        s = sub.add_parser(name, help=help)
        if flags.get("k", True):
            s.add_argument("--k", type=int, required=True, help="polygon has k+1 sides")
        if flags.get("format", True):
            s.add_argument("--format", choices=FORMATS, default="human")
        return s

    s = add("exact", "exact probability")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--digits", type=int, default=6)

    s = add("table", "exact probabilities for n = k+1 .. n-max")
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--digits", type=int, default=6)

    s = add("simulate", "Monte Carlo estimate")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--trials", type=int, default=10**6)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--sampler", choices=mc.SAMPLERS, default="uniform-sort")

    s = add("verify", "run the exact identity suite", k=False, format=False)
    s.add_argument("--k-max", type=int, default=8)
    s.add_argument("--l-max", type=int, default=50)
    s.add_argument("--n-max", type=int, default=25)

    s = add("rvec", "iterated vs closed-form R-vectors")
    s.add_argument("--l-max", type=int, default=10)
    return p


COMMANDS = {"exact": cmd_exact, "table": cmd_table, "simulate": cmd_simulate,
            "verify": cmd_verify, "rvec": cmd_rvec}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        result = COMMANDS[args.command](args)
    except (UsageError, DomainError, ConsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out, code = result if isinstance(result, tuple) else (result, 0)
    print(out)
    return code
