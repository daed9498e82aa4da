"""Command-line entry point: ``betacantor expand`` and ``betacantor report <name>``.

Exit codes: 0 success, 1 a failed self-test, 2 domain errors, 3 precision
exhaustion, 4 unmet preconditions, 5 search or enumeration limits, 64
malformed flags or literals.
"""
from __future__ import annotations

import argparse
import csv
import enum
import io
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import analysis, basechange, cantor, expansions
from .errors import (
    AlphaTooShort,
    BetaError,
    CaseMismatch,
    DegeneratePairs,
    DomainError,
    EnumerationCap,
    InadmissiblePrefix,
    InvalidR,
    NotFiniteExpansion,
    ParseError,
    PrecisionExhausted,
    RefinementCapExceeded,
    WitnessNotFound,
)
from .evaluation import tail_bound
from .precision import DEFAULT_CAP, DEFAULT_PRECISION, ApproxReal, Base, as_base, format_real, make_real
from .sequences import DigitSeq

EXIT_OK = 0
EXIT_SELFTEST_FAILED = 1
EXIT_DOMAIN = 2
EXIT_PRECISION = 3
EXIT_PRECONDITION = 4
EXIT_LIMIT = 5
EXIT_USAGE = 64

SURD_WIDTH = 40   # longer exact surds print as enclosures

_EXIT_MAP = [
    (DomainError, EXIT_DOMAIN),
    ((PrecisionExhausted, RefinementCapExceeded), EXIT_PRECISION),
    ((InadmissiblePrefix, NotFiniteExpansion, InvalidR, CaseMismatch, DegeneratePairs, AlphaTooShort),
     EXIT_PRECONDITION),
    ((WitnessNotFound, EnumerationCap), EXIT_LIMIT),
    (ParseError, EXIT_USAGE),
]


class UsageError(Exception):
    pass


def exit_code_for(exc):
    for types, code in _EXIT_MAP:
        if isinstance(exc, types):
            return code
    if isinstance(exc, (UsageError, ValueError)):
        return EXIT_USAGE
    raise exc


@dataclass
class RunConfig:
    precision_bits: int = DEFAULT_PRECISION
    refinement_cap_bits: int = DEFAULT_CAP
    depth: int = 64
    seed: int = 0
    output_format: str = "csv"
    output_path: str | None = None

    def __post_init__(self):
        if self.precision_bits < 8:
            raise UsageError("--precision-bits must be at least 8")
        if self.refinement_cap_bits < self.precision_bits:
            raise UsageError("--cap-bits must be at least --precision-bits")
        if self.depth < 1:
            raise UsageError("--digits must be at least 1")
        if not 0 <= self.seed < 1 << 64:
            raise UsageError("--seed must fit in 64 bits")


# ---------------------------------------------------------------------------
# cell formatting
# ---------------------------------------------------------------------------

def cell(v):
    """Exact rationals print exactly, enclosures as value±radius."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, ApproxReal):
        if v.exact and not isinstance(v.value, Fraction) and len(str(v.value)) > SURD_WIDTH:
            lo, hi = v.interval(DEFAULT_PRECISION)
            return format_real(ApproxReal.from_interval(lo, hi))
        return format_real(v)
    if isinstance(v, (Base, DigitSeq)):
        return str(v)
    if isinstance(v, enum.Enum):
        return str(v.value)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(params, columns, rows, fmt):
    """CSV with the parameter columns first, or JSON {params, rows}."""
    keys = list(params)
    if fmt == "json":
        out = {"params": {k: cell(v) for k, v in params.items()},
               "rows": [{**{k: cell(params[k]) for k in keys}, **{c: cell(v) for c, v in zip(columns, r)}}
                        for r in rows]}
        return json.dumps(out, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys + list(columns))
    pv = [cell(params[k]) for k in keys]
    for r in rows:
        w.writerow(pv + [cell(v) for v in r])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(sp):
    sp.add_argument("--precision-bits", type=int, default=DEFAULT_PRECISION)
    sp.add_argument("--cap-bits", type=int, default=DEFAULT_CAP)


REPORTS = ("basechange", "gaps", "staircase", "arclength", "integral", "dini", "holder",
           "boxdim", "count", "witness", "jump")


def build_parser():
    parser = _Parser(prog="betacantor", description="Expansions in non-integer bases and Cantor-type staircases.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ex = sub.add_parser("expand", help="greedy or quasi-greedy digits of x in base p")
    ex.add_argument("--p", required=True)
    ex.add_argument("--x", required=True)
    ex.add_argument("--kind", default="greedy", choices=["greedy", "quasigreedy"])
    ex.add_argument("--digits", type=int, default=64)
    _common(ex)

    rp = sub.add_parser("report", help="tabulate one experiment as CSV or JSON")
    rp.add_argument("name", nargs="?", choices=REPORTS)
    for flag in ("--p", "--q", "--r", "--x"):
        rp.add_argument(flag)
    for flag in ("--digits", "--level", "--levels", "--n"):
        rp.add_argument(flag, type=int)
    rp.add_argument("--seed", type=int, default=0)
    rp.add_argument("--kind", choices=["greedy", "quasigreedy"], default="greedy")
    rp.add_argument("--function", choices=["staircase", "basechange", "pi"], default=None,
                    help="map probed by the holder report")
    rp.add_argument("--format", choices=["csv", "json"], default="csv")
    rp.add_argument("--out")
    rp.add_argument("--selftest", action="store_true", help="run the acceptance suite")
    _common(rp)
    return parser


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.name} needs " + ", ".join("--" + m for m in missing))


def _real(text, cfg):
    return make_real(text, cfg.precision_bits)


def _base(text, cfg):
    return as_base(_real(text, cfg), cfg.precision_bits)


def _interval(text, cfg, p):
    """``lo:hi``; without a value the whole domain [0, 1/(p-1)]."""
    if text is None:
        return ApproxReal(0), p.limit()
    if ":" not in text:
        raise UsageError("--x for the witness report is an interval lo:hi")
    lo, hi = text.split(":", 1)
    return _real(lo, cfg), _real(hi, cfg)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_expand(args, out=None):
    out = out or sys.stdout
    cfg = RunConfig(args.precision_bits, args.cap_bits, args.digits)
    p = _base(args.p, cfg)
    x = _real(args.x, cfg)
    report = expansions.expand(p, x, cfg.depth, args.kind, detect_period=True, require_full=True,
                               precision=cfg.precision_bits, cap=cfg.refinement_cap_bits)
    out.write(report.digits + "\n")
    if report.sequence is not None:
        out.write(f"sequence={report.sequence}\n")
        out.write("residual_bound=0\n")
    else:
        out.write(f"residual_bound={format_real(tail_bound(p, cfg.depth))}\n")
    return EXIT_OK


def _grid(p, n):
    top = p.limit()
    return [top * Fraction(k, n) for k in range(n + 1)]


def report_basechange(a, cfg):
    _need(a, "p", "q")
    p, q = _base(a.p, cfg), _base(a.q, cfg)
    xs = [_real(a.x, cfg)] if a.x else _grid(p, a.n or 16)
    rows = []
    maps = [("b", basechange.b_pq)] + ([] if p.large else [("a", basechange.a_pq)])
    for x in xs:
        for tag, fn in maps:
            try:
                v = fn(p, q, x, cfg.depth)
            except DomainError:
                if a.x:
                    raise
                continue   # grid point outside J_p
            rows.append((tag, x, v.digits, v.sequence, v.value, v.truncation))
    params = {"p": p, "q": q, "digits": cfg.depth}
    return params, ("map", "x", "digits_prefix", "sequence", "value", "truncation"), rows


def report_gaps(a, cfg):
    _need(a, "p")
    p = _base(a.p, cfg)
    level = 1 if a.level is None else a.level
    levels = [level] if a.levels is None else range(a.levels + 1)
    rows = [g.row() for m in levels for g in cantor.gap_intervals(p, m)]
    return {"p": p}, ("m", "k", "anchor", "left", "right"), rows


def report_staircase(a, cfg):
    _need(a, "p", "q")
    st = cantor.StaircaseConfig(_base(a.p, cfg), _base(a.q, cfg))
    xs = [_real(a.x, cfg)] if a.x else _grid(st.p, a.n or 64)
    rows = []
    for x in xs:
        loc = cantor.locate(st.p, x, cfg.depth)
        rows.append((x, cantor.staircase_eval(st, x, cfg.depth), loc.kind, loc.gap.m if loc.gap else None))
    return {"p": st.p, "q": st.q, "digits": cfg.depth}, ("x", "value", "location", "gap_level"), rows


def report_arclength(a, cfg):
    _need(a, "p")
    p = _base(a.p, cfg)
    n = a.n or 30
    limit = cantor.arc_length_limit(p)
    rows = []
    for k in range(1, n + 1):
        L = cantor.arc_length_polygonal(p, k)
        rows.append((k, L, limit, limit - L))
    return {"p": p}, ("n", "length", "limit", "limit_minus_length"), rows


def report_integral(a, cfg):
    _need(a, "p", "q")
    st = cantor.StaircaseConfig(_base(a.p, cfg), _base(a.q, cfg))
    M = 40 if a.levels is None else a.levels
    rep = cantor.total_gap_integral(st, M)
    rows = [(m, cantor.gap_integral(st, m), s, rep.trend, rep.limit) for m, s in enumerate(rep.partial_sums)]
    return {"p": st.p, "q": st.q}, ("m", "one_gap_integral", "partial_sum", "trend", "limit"), rows


def report_dini(a, cfg):
    _need(a, "p", "q", "x")
    kind = "b" if a.kind == "greedy" else "a"
    s = analysis.dini_witness_quotients(kind, _base(a.p, cfg), _base(a.q, cfg), _real(a.x, cfg), a.n or 12)
    rows = [(s.case, s.side, s.construction, idx, y, quot, bound)
            for (idx, y, quot), bound in zip(s.points, s.bounds)]
    params = {"p": _base(a.p, cfg), "q": _base(a.q, cfg), "x": _real(a.x, cfg), "map": kind}
    return params, ("case", "side", "construction", "index", "y", "quotient", "bound"), rows


def report_holder(a, cfg):
    _need(a, "p", "q")
    p, q = _base(a.p, cfg), _base(a.q, cfg)
    fn = a.function or ("staircase" if p.large else "basechange")
    fit = analysis.holder_fit(fn, p, q, count=a.n or 400, seed=cfg.seed)
    predicted = min(1.0, math.log(float(q)) / math.log(float(p)))
    rows = [(fit.exponent, predicted, fit.intercept, fit.residual, fit.pair_count, len(fit.bins))]
    params = {"p": p, "q": q, "function": fn, "n": a.n or 400, "seed": cfg.seed}
    return params, ("exponent", "predicted", "intercept", "residual", "pairs_used", "bins"), rows


def report_boxdim(a, cfg):
    _need(a, "p")
    p = _base(a.p, cfg)
    est = analysis.box_dimension(p, 40 if a.levels is None else a.levels)
    rows = [(m, count, eps, est.slope) for m, count, eps in est.levels]
    return {"p": p}, ("m", "boxes", "eps", "fitted_slope"), rows


def report_count(a, cfg):
    _need(a, "p")
    p = _base(a.p, cfg)
    rows = [(n, expansions.count_admissible(p, n)) for n in range(1, (a.n or 12) + 1)]
    return {"p": p}, ("n", "admissible_words"), rows


def report_witness(a, cfg):
    _need(a, "p", "q")
    p, q = _base(a.p, cfg), _base(a.q, cfg)
    lo, hi = _interval(a.x, cfg, p)
    if a.kind == "greedy":
        w = basechange.monotonicity_witness_b(p, q, (lo, hi), None if a.r is None else _base(a.r, cfg))
        extra = w.r
    else:
        w = basechange.monotonicity_witness_a(p, q, (lo, hi))
        extra = w.m
    rows = [(w.anchor, w.x, w.y, w.z, w.fx, w.fy, w.fz, *w.sequences, extra)]
    params = {"p": p, "q": q, "map": "b" if a.kind == "greedy" else "a", "lo": lo, "hi": hi}
    cols = ("anchor", "x", "y", "z", "fx", "fy", "fz", "seq_x", "seq_y", "seq_z",
            "r" if a.kind == "greedy" else "m")
    return params, cols, rows


def report_jump(a, cfg):
    _need(a, "p", "q", "x")
    p, q, x = _base(a.p, cfg), _base(a.q, cfg), _real(a.x, cfg)
    recs = [("b", basechange.jump_left_b(p, q, x)), ("a", basechange.jump_right_a(p, q, x))]
    rows = [(tag, j.side, j.n, j.value, j.limit, j.magnitude) for tag, j in recs]
    return {"p": p, "q": q, "x": x}, ("map", "side", "last_one", "value", "limit", "magnitude"), rows


_REPORTS = {name: globals()[f"report_{name}"] for name in REPORTS}


def cmd_selftest(out=None):
    out = out or sys.stdout
    from . import acceptance

    failed = 0
    for num, *_ in acceptance.CRITERIA:
        v = acceptance.run(num)
        failed += not v.passed
        out.write(v.line() + "\n")
        out.flush()
    out.write(f"{len(acceptance.CRITERIA) - failed}/{len(acceptance.CRITERIA)} criteria passed\n")
    return EXIT_OK if failed == 0 else EXIT_SELFTEST_FAILED


def cmd_report(args, out=None):
    out = out or sys.stdout
    if args.selftest:
        return cmd_selftest(out)
    if args.name is None:
        raise UsageError("report needs a name or --selftest")
    cfg = RunConfig(args.precision_bits, args.cap_bits, 64 if args.digits is None else args.digits,
                    args.seed, args.format, args.out)
    params, columns, rows = _REPORTS[args.name](args, cfg)
    text = render(params, columns, rows, cfg.output_format)
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:          # argparse exits 64 on bad flags, 0 on --help
        return exc.code
    try:
        if args.command == "expand":
            return cmd_expand(args)
        return cmd_report(args)
    except (BetaError, UsageError, ValueError) as exc:
        code = exit_code_for(exc)
        print(f"betacantor: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
