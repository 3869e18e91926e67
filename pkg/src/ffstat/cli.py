"""Command-line front end.

Subcommands map one-to-one onto the library's counting objects.  Output
is a deterministic JSON envelope (keys sorted, rationals rendered as
"num/den", newline-terminated) or, for scans, a flattened per-cell CSV
table.  `timing_ms` is 0 unless `--timing` is passed so that identical
invocations are diff-equal.

Exit codes: 0 success, 1 assertion-style disagreement (a counterexample
check that should agree but does not), 2 usage or budget errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ffstat import __version__, gf, polyring as pr, statistics as st, verify
from ffstat.combinatorics import (
    Partition,
    cycle_type_probability,
    exact_prime_count,
    exact_type_count,
)
from ffstat.gf import FieldElement, FieldSpec
from ffstat.polyring import Poly
from ffstat.tables import DEFAULT_BUDGET, BudgetError

CSV_HEADER = "q,k,m,lambda,cell_id,count,expected_num,expected_den,abs_dev,covered"


@dataclass
class RunConfig:
    threads: int
    budget: int
    seed: Optional[int]
    output: Optional[str]
    fmt: str
    dry_run: bool
    timing: bool


# ---------------------------------------------------------------------------
# Text grammars
# ---------------------------------------------------------------------------

def parse_field_element(text: str, spec: FieldSpec) -> FieldElement:
    """`[d0,d1,...]` (short vectors zero-padded) or a bare integer for prime fields."""
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ValueError(f"unterminated element {text!r}")
        body = text[1:-1].strip()
        if not body:
            raise ValueError("empty element brackets")
        digits = []
        for tok in body.split(","):
            tok = tok.strip()
            if not tok.isdigit():
                raise ValueError(f"malformed digit {tok!r}")
            digits.append(int(tok))
        if len(digits) > spec.nu:
            raise ValueError(f"element {text!r} has {len(digits)} components, field has nu = {spec.nu}")
        for d in digits:
            if d >= spec.p:
                raise ValueError(f"digit {d} >= p = {spec.p}")
        return gf.element(spec, digits)
    if spec.nu != 1:
        raise ValueError(f"bare integer {text!r} only allowed over prime fields; use [d0,...,d{spec.nu - 1}]")
    if not text.isdigit():
        raise ValueError(f"malformed element {text!r}")
    value = int(text)
    if value >= spec.p:
        raise ValueError(f"digit {value} >= p = {spec.p}")
    return gf.element(spec, [value])


def _split_top_level(text: str) -> list[str]:
    parts = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise ValueError("unbalanced brackets")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise ValueError("unbalanced brackets")
    parts.append("".join(cur))
    return parts


def parse_poly(text: str, spec: FieldSpec) -> Poly:
    """Comma-separated coefficients low-to-high, each in element text form."""
    tokens = _split_top_level(text)
    elements = [parse_field_element(tok, spec) for tok in tokens]
    return pr.poly_from_elements(spec, elements)


def parse_partition(text: str) -> Partition:
    parts = []
    for tok in text.replace(" ", "").split("+"):
        if not tok.isdigit() or int(tok) < 1:
            raise ValueError(f"malformed partition part {tok!r}")
        parts.append(int(tok))
    parts.sort(reverse=True)
    return Partition(tuple(parts))


# ---------------------------------------------------------------------------
# Envelope and output
# ---------------------------------------------------------------------------

def frac_str(fr: Fraction) -> str:
    return f"{fr.numerator}/{fr.denominator}"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _field_dict(spec: Optional[FieldSpec]):
    if spec is None:
        return None
    return {"p": spec.p, "nu": spec.nu, "modulus": list(spec.modulus)}


def make_envelope(spec, command, params, result, excluded, timing_ms):
    return {
        "tool_version": __version__,
        "field": _field_dict(spec),
        "command": command,
        "params": params,
        "result": result,
        "excluded": excluded,
        "timing_ms": timing_ms,
    }


def _write(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _census_result(census: st.TypeCensus, lam: Optional[Partition]) -> dict:
    result = {
        "census": {str(p): n for p, n in census.dense()},
        "total": census.total,
    }
    if lam is not None:
        result["count"] = census.get(lam)
    return result


def _csv_text(report: verify.DeviationReport) -> str:
    lines = [CSV_HEADER]
    for rec in report.per_cell or ():
        lines.append(
            ",".join(
                [
                    str(report.q),
                    str(report.k),
                    str(report.m),
                    str(report.lam),
                    str(rec.cell_id),
                    str(rec.count),
                    str(rec.expected.numerator),
                    str(rec.expected.denominator),
                    frac_str(rec.abs_dev),
                    "1" if rec.status is verify.CoverageStatus.COVERED else "0",
                ]
            )
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Command handlers: each returns (spec, params, result, excluded, exit_code)
# ---------------------------------------------------------------------------

def _field_from_args(args) -> FieldSpec:
    if args.p is None:
        raise ValueError("--p is required for this command")
    return gf.make_field(args.p, args.nu)


def _projection(cells: int, enumeration: int) -> dict:
    return {"projected_cells": cells, "projected_enumeration": enumeration}


def _check_budget(cfg: RunConfig, cells: int, enumeration: int) -> None:
    if enumeration > cfg.budget:
        raise BudgetError(
            f"projected enumeration {enumeration} over {cells} cells exceeds the budget {cfg.budget}"
        )


def cmd_pi(args, cfg):
    spec = _field_from_args(args)
    params = {"k": args.k}
    if cfg.dry_run:
        return spec, params, _projection(0, 0), None, 0
    return spec, params, exact_prime_count(spec.q, args.k), None, 0


def cmd_pi_type(args, cfg):
    spec = _field_from_args(args)
    lam = parse_partition(args.lam)
    params = {"k": args.k, "lambda": str(lam)}
    if cfg.dry_run:
        return spec, params, _projection(0, 0), None, 0
    return spec, params, exact_type_count(spec.q, args.k, lam), None, 0


def cmd_partition_prob(args, cfg):
    lam = parse_partition(args.lam)
    params = {"lambda": str(lam)}
    if cfg.dry_run:
        return None, params, _projection(0, 0), None, 0
    return None, params, frac_str(cycle_type_probability(lam)), None, 0


def cmd_totient(args, cfg):
    spec = _field_from_args(args)
    d_poly = parse_poly(args.D, spec)
    params = {"D": pr.poly_text(d_poly)}
    if cfg.dry_run:
        return spec, params, _projection(0, 0), None, 0
    return spec, params, st.poly_totient(d_poly), None, 0


def cmd_interval(args, cfg):
    spec = _field_from_args(args)
    f = parse_poly(args.f, spec)
    if args.k is not None and f.degree != args.k:
        raise ValueError(f"--k {args.k} does not match deg f = {f.degree}")
    interval = st.IntervalSpec(f, args.m)
    lam = parse_partition(args.lam) if args.lam else None
    params = {"f": pr.poly_text(f), "m": args.m}
    if lam is not None:
        params["lambda"] = str(lam)
    if cfg.dry_run:
        return spec, params, _projection(1, interval.size), None, 0
    _check_budget(cfg, 1, interval.size)
    return spec, params, _census_result(st.interval_counts(interval), lam), None, 0


def cmd_progression(args, cfg):
    spec = _field_from_args(args)
    d_poly = parse_poly(args.D, spec)
    f = parse_poly(args.f, spec)
    prog = st.ProgressionSpec(d_poly, f, args.k)
    lam = parse_partition(args.lam) if args.lam else None
    params = {"D": pr.poly_text(d_poly), "f": pr.poly_text(f), "k": args.k}
    if lam is not None:
        params["lambda"] = str(lam)
    if cfg.dry_run:
        return spec, params, _projection(1, prog.size), None, 0
    _check_budget(cfg, 1, prog.size)
    return spec, params, _census_result(st.progression_counts(prog), lam), None, 0


def cmd_nu(args, cfg):
    spec = _field_from_args(args)
    f = parse_poly(args.f, spec)
    params = {"f": pr.poly_text(f), "m": args.m, "decompose": bool(args.decompose)}
    k = f.degree if not f.is_zero else 0
    enumeration = spec.q ** (args.m + 1)
    if args.decompose and isinstance(k, int):
        from ffstat.combinatorics import divisors

        enumeration += sum(spec.q ** (k // d) for d in divisors(k) if d > 1)
    if cfg.dry_run:
        return spec, params, _projection(1, enumeration), None, 0
    _check_budget(cfg, 1, enumeration)
    result = {"nu": st.nu(f, args.m)}
    if args.decompose:
        dec = st.nu_decomposition(f, args.m)
        result["decomposition"] = {
            "k_pi": dec.k_pi,
            "proper_terms": {str(d): v for d, v in sorted(dec.proper_terms.items())},
            "epsilon": dec.epsilon,
            "reconstructed": dec.reconstructed,
        }
    return spec, params, result, None, 0


def cmd_radical(args, cfg):
    spec = _field_from_args(args)
    f = parse_poly(args.f, spec)
    interval = st.IntervalSpec(f, args.m)
    params = {"f": pr.poly_text(f), "m": args.m, "d": args.d}
    enumeration = spec.q ** (interval.k // args.d) if interval.k % args.d == 0 else 0
    if cfg.dry_run:
        return spec, params, _projection(1, enumeration), None, 0
    _check_budget(cfg, 1, enumeration)
    members = st.radical_set(interval, args.d)
    return spec, params, {"size": len(members), "members": [pr.poly_text(g) for g in members]}, None, 0


def cmd_mean_variance(args, cfg):
    spec = _field_from_args(args)
    params = {"k": args.k, "m": args.m}
    cells = spec.q ** (args.k - args.m - 1) if args.m < args.k else 0
    if cfg.dry_run:
        return spec, params, _projection(cells, spec.q**args.k), None, 0
    mean, var = st.mean_variance_nu(spec, args.k, args.m, cfg.budget)
    return spec, params, {"mean": frac_str(mean), "variance": frac_str(var)}, None, 0


def cmd_variance_trend(args, cfg):
    q_list = [int(tok) for tok in args.q_list.replace(" ", "").split(",") if tok]
    params = {"k": args.k, "m": args.m, "q_list": q_list}
    cells = sum(q ** (args.k - args.m - 1) for q in q_list)
    enumeration = sum(q**args.k for q in q_list)
    if cfg.dry_run:
        return None, params, _projection(cells, enumeration), None, 0
    _check_budget(cfg, cells, enumeration)
    report = verify.variance_trend(args.k, args.m, q_list, cfg.budget)
    result = {
        "limit": report.limit,
        "per_q": [{"q": q, "ratio": frac_str(ratio)} for q, ratio in report.per_q],
    }
    return None, params, result, None, 0


def cmd_scan_intervals(args, cfg):
    spec = _field_from_args(args)
    lam = parse_partition(args.lam)
    params = {"k": args.k, "m": args.m, "lambda": str(lam)}
    cells = spec.q ** (args.k - args.m - 1)
    if cfg.dry_run:
        return spec, params, _projection(cells, spec.q**args.k), None, 0
    opts = verify.ScanOptions(
        workers=cfg.threads,
        budget=cfg.budget,
        per_cell=args.per_cell or cfg.fmt == "csv",
    )
    report = verify.scan_intervals(spec, args.k, args.m, lam, opts)
    if cfg.fmt == "csv":
        return spec, params, report, report.excluded, 0
    return spec, params, verify.report_to_dict(report), report.excluded, 0


def cmd_scan_progressions(args, cfg):
    spec = _field_from_args(args)
    lam = parse_partition(args.lam)
    params = {"k": args.k, "m": args.m, "lambda": str(lam)}
    if args.max_cells is not None:
        params["max_cells"] = args.max_cells
    delta = args.k - args.m - 1
    cells = spec.q ** (2 * delta) if args.max_cells is None else min(spec.q ** (2 * delta), args.max_cells)
    if cfg.dry_run:
        return spec, params, _projection(cells, cells * spec.q ** (args.m + 1)), None, 0
    opts = verify.ScanOptions(
        workers=cfg.threads,
        budget=cfg.budget,
        per_cell=args.per_cell or cfg.fmt == "csv",
        max_cells=args.max_cells,
    )
    report = verify.scan_progressions(spec, args.k, args.m, lam, opts)
    if cfg.fmt == "csv":
        return spec, params, report, report.excluded, 0
    return spec, params, verify.report_to_dict(report), report.excluded, 0


def cmd_hypotheses(args, cfg):
    spec = _field_from_args(args)
    f = parse_poly(args.f, spec)
    params = {"k": args.k, "m": args.m, "f": pr.poly_text(f)}
    if cfg.dry_run:
        return spec, params, _projection(0, 0), None, 0
    if args.D:
        d_poly = parse_poly(args.D, spec)
        params["D"] = pr.poly_text(d_poly)
        cov = verify.check_hypotheses_progression(spec, args.k, args.m, d_poly, f)
    else:
        cov = verify.check_hypotheses_interval(spec, args.k, args.m, f)
    return spec, params, {"status": cov.status.value, "detail": cov.detail}, None, 0


def cmd_counterexample(args, cfg):
    if args.which == "m0":
        spec = _field_from_args(args)
        params = {"variant": "m0", "k": args.k}
        if cfg.dry_run:
            return spec, params, _projection(1, spec.q), None, 0
        _check_budget(cfg, 1, spec.q)
        rep = verify.counterexample_m0(spec, args.k)
    else:
        if args.p is None:
            raise ValueError("--p is required for counterexample m1")
        variant = "p2" if args.variant == "p2" else "p2+1"
        spec = gf.make_field(args.p, 2 * args.n)
        params = {"variant": f"m1:{variant}", "p": args.p, "n": args.n}
        if cfg.dry_run:
            return spec, params, _projection(1, spec.q**2), None, 0
        _check_budget(cfg, 1, spec.q**2)
        rep = verify.counterexample_m1(args.p, args.n, variant, cfg.budget)
    result = {
        "kind": rep.kind,
        "q": rep.q,
        "k": rep.k,
        "expected": rep.expected,
        "actual": rep.actual,
        "agrees": rep.agrees,
    }
    code = 1 if rep.agrees is False else 0
    return spec, params, result, None, code


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ffstat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, field_required=True):
        sp.add_argument("--p", type=int, default=None, required=False, help="field characteristic")
        sp.add_argument("--nu", type=int, default=1, help="field extension degree (default 1)")
        sp.add_argument("--threads", type=int, default=None, help="worker count (default: machine parallelism)")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max enumeration size")
        sp.add_argument("--seed", type=int, default=None, help="reserved for forward compatibility")
        sp.add_argument("--output", default=None, help="output path (default stdout)")
        sp.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
        sp.add_argument("--dry-run", action="store_true", help="print projected cell count and exit")
        sp.add_argument("--timing", action="store_true", help="include measured timing_ms")

    sp = sub.add_parser("pi", help="exact count of monic prime polynomials of degree k")
    add_common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(handler=cmd_pi)

    sp = sub.add_parser("pi-type", help="exact count of monic degree-k polynomials of a type")
    add_common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.set_defaults(handler=cmd_pi_type)

    sp = sub.add_parser("partition-prob", help="cycle-type probability P(lambda)")
    add_common(sp)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.set_defaults(handler=cmd_partition_prob)

    sp = sub.add_parser("totient", help="polynomial Euler totient of D")
    add_common(sp)
    sp.add_argument("--D", required=True)
    sp.set_defaults(handler=cmd_totient)

    sp = sub.add_parser("interval", help="type census of a short interval")
    add_common(sp)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--f", required=True)
    sp.add_argument("--lambda", dest="lam", default=None)
    sp.set_defaults(handler=cmd_interval)

    sp = sub.add_parser("progression", help="type census of a residue class")
    add_common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--D", required=True)
    sp.add_argument("--f", required=True)
    sp.add_argument("--lambda", dest="lam", default=None)
    sp.set_defaults(handler=cmd_progression)

    sp = sub.add_parser("nu", help="von Mangoldt interval sum nu(f; m)")
    add_common(sp)
    sp.add_argument("--f", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--decompose", action="store_true")
    sp.set_defaults(handler=cmd_nu)

    sp = sub.add_parser("radical", help="radical set I(f, m)^{1/d}")
    add_common(sp)
    sp.add_argument("--f", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.set_defaults(handler=cmd_radical)

    sp = sub.add_parser("mean-variance", help="exact mean and variance of nu(.; m)")
    add_common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.set_defaults(handler=cmd_mean_variance)

    sp = sub.add_parser("variance-trend", help="Var/q^{m+1} across a list of prime powers")
    add_common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--q-list", dest="q_list", required=True)
    sp.set_defaults(handler=cmd_variance_trend)

    sp = sub.add_parser("scan-intervals", help="deviation scan over all distinct intervals")
    add_common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--per-cell", action="store_true")
    sp.set_defaults(handler=cmd_scan_intervals)

    sp = sub.add_parser("scan-progressions", help="deviation scan over residue classes")
    add_common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--per-cell", action="store_true")
    sp.add_argument("--max-cells", type=int, default=None)
    sp.set_defaults(handler=cmd_scan_progressions)

    sp = sub.add_parser("hypotheses", help="coverage classification for a cell")
    add_common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--f", required=True)
    sp.add_argument("--D", default=None)
    sp.set_defaults(handler=cmd_hypotheses)

    sp = sub.add_parser("counterexample", help="small-m counterexample checks")
    ce = sp.add_subparsers(dest="which", required=True)
    for which in ("m0", "m1"):
        spw = ce.add_parser(which)
        add_common(spw)
        if which == "m0":
            spw.add_argument("--k", type=int, required=True)
        else:
            spw.add_argument("--n", type=int, required=True)
            spw.add_argument("--variant", choices=("p2", "p2+1"), default="p2")
        spw.set_defaults(handler=cmd_counterexample)

    return parser


def run_command(argv) -> int:
    """Parse argv, run the selected subcommand, write the report, return the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    threads = args.threads
    env_threads = os.environ.get("FFSTAT_THREADS")
    if env_threads is not None:
        threads = int(env_threads)
    if threads is None:
        threads = os.cpu_count() or 1
    if threads < 1:
        parser.error("thread count must be positive")

    cfg = RunConfig(
        threads=threads,
        budget=args.budget,
        seed=args.seed,
        output=args.output,
        fmt=args.fmt,
        dry_run=args.dry_run,
        timing=args.timing,
    )
    if cfg.fmt == "csv" and args.command not in ("scan-intervals", "scan-progressions"):
        print(f"ffstat: csv format is only available for scans, not {args.command!r}", file=sys.stderr)
        return 2

    start = time.monotonic()
    try:
        spec, params, result, excluded, code = args.handler(args, cfg)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"ffstat: {exc}", file=sys.stderr)
        return 2
    timing_ms = int((time.monotonic() - start) * 1000) if cfg.timing else 0

    if cfg.fmt == "csv" and not cfg.dry_run:
        _write(cfg, _csv_text(result))
        return code
    if isinstance(result, verify.DeviationReport):  # csv fell through to dry-run json
        result = verify.report_to_dict(result)
    command = args.command if args.command != "counterexample" else f"counterexample {args.which}"
    envelope = make_envelope(spec, command, params, result, excluded, timing_ms)
    _write(cfg, canonical_json(envelope))
    return code


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
