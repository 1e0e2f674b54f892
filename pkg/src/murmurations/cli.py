"""Command-line front end: sieving and caching class numbers, trace tables,
statistic runs, measure evaluations, and curve comparisons as CSV/JSON."""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from .arith import analytic_conductor, build_factor_sieve
from .classnum import load_class_numbers, save_class_numbers, sieve_class_numbers
from .murmur import MurmurationRequest, compute_series
from .nu import Interval, evaluate_nu, nu_rational, prop_circle_check
from .qexp import dimension_supported, oracle_trace
from .trace import TableBoundError, TraceContext, trace_hecke
from .window import cosine_progression_sum, make_window, poisson_weight_sum

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_CAPACITY = 3


def _fmt(x: float) -> str:
    return f"{x:.12g}"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load_context(args, required_bound: int) -> TraceContext:
    if getattr(args, "cache", None):
        try:
            table = load_class_numbers(args.cache)
        except OSError as exc:
            print(f"error: cannot read cache: {exc}", file=sys.stderr)
            raise SystemExit(EXIT_IO)
        if table.bound < required_bound:
            print(
                f"error: cache bound {table.bound} below required {required_bound}",
                file=sys.stderr,
            )
            raise SystemExit(EXIT_CAPACITY)
    else:
        table = sieve_class_numbers(max(required_bound, 16))
    sieve = build_factor_sieve(max(table.bound, 16))
    return TraceContext(table=table, sieve=sieve)


def cmd_sieve(args) -> int:
    table = sieve_class_numbers(args.dmax)
    try:
        save_class_numbers(table, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote class numbers for |D| <= {args.dmax} to {args.out}")
    return EXIT_OK


def cmd_trace(args) -> int:
    ctx = _load_context(args, 4 * args.nmax)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for n in range(1, args.nmax + 1):
            tr = trace_hecke(ctx, args.k, n)
            norm = tr * math.exp(0.5 * (1 - args.k) * math.log(n)) if n > 1 else float(tr)
            if args.verify and dimension_supported(args.k):
                want = oracle_trace(args.k, n)
                if want != tr:
                    print(f"error: oracle mismatch at n={n}: {tr} != {want}", file=sys.stderr)
                    return EXIT_CAPACITY
            out.write(f"{n}\t{tr}\t{_fmt(norm)}\n")
    finally:
        if args.out:
            out.close()
    if args.verify:
        print(f"verified against q-expansion oracle for k={args.k}", file=sys.stderr)
    return EXIT_OK


def _write_series_csv(path, series) -> None:
    with open(path, "w") as f:
        f.write("p,p_over_N,numerator_term,denominator_term,cumulative_r\n")
        for n, x, num, den, r in zip(
            series.n, series.x, series.numerator, series.denominator, series.cumulative
        ):
            f.write(f"{n},{_fmt(x)},{_fmt(num)},{_fmt(den)},{_fmt(r)}\n")


def cmd_murmur(args) -> int:
    interval = Interval.parse(args.E)
    req = MurmurationRequest(
        delta=args.delta,
        K=args.K,
        H=args.H,
        E=interval,
        weighting=args.weighting,
        summand_domain=args.domain,
    )
    n = analytic_conductor(args.K).N
    required = 4 * int(float(interval.hi) * n) + 4
    try:
        ctx = _load_context(args, required)
        series = compute_series(req, ctx, threads=args.threads)
    except TableBoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    try:
        _write_series_csv(args.out, series)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    summary = {
        "N": series.N,
        "K": args.K,
        "H": args.H,
        "delta": args.delta,
        "weighting": args.weighting,
        "domain": args.domain,
        "points": int(series.n.size),
        "num_total": series.num_total,
        "den_total": series.den_total,
        "den_total_over_sqrtN": series.den_total / math.sqrt(series.N),
        "r_endpoints": {
            "lo": float(series.cumulative[0]) if series.n.size else 0.0,
            "hi": float(series.cumulative[-1]) if series.n.size else 0.0,
        },
    }
    text = json.dumps(summary, indent=2)
    if args.summary:
        with open(args.summary, "w") as f:
            f.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_nu(args) -> int:
    sieve = build_factor_sieve(max(args.qmax, args.tmax or 1, 16))
    rows = []
    if args.grid:
        start, end, count = args.grid.split(":")
        ts = np.linspace(float(start), float(end), int(count))
        for t in ts:
            if t <= 0:
                rows.append((t, 0.0, ""))
                continue
            part = nu_rational(Interval(Fraction(0), float(t)), args.qmax, sieve, weight=args.weight)
            rows.append((t, part.value, ""))
        with open(args.out, "w") as f:
            f.write("t,nu_cumulative_rational,nu_cumulative_fourier_if_available\n")
            for t, v, other in rows:
                f.write(f"{_fmt(t)},{_fmt(v)},{other}\n")
        return EXIT_OK
    interval = Interval.parse(args.E)
    ev = evaluate_nu(interval, args.qmax, args.tmax, sieve, weight=args.weight)
    report = {
        "E": [str(interval.lo), str(interval.hi)],
        "weight": args.weight,
        "q_max": ev.q_max,
        "t_max": ev.t_max,
        "rational_form_value": ev.rational_form_value,
        "fourier_form_value": ev.fourier_form_value,
        "rational_tail_bound": ev.rational_tail_bound,
        "fourier_tail_bound": ev.fourier_tail_bound,
        "abs_difference": None
        if ev.fourier_form_value is None
        else abs(ev.rational_form_value - ev.fourier_form_value),
        "endpoint_atoms": [
            {"a": a, "q": q, "side": side} for a, q, side in ev.endpoint_terms
        ],
    }
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _read_csv(path, xcol, ycol):
    xs, ys = [], []
    try:
        with open(path) as f:
            header = f.readline().strip().split(",")
            xi, yi = header.index(xcol), header.index(ycol)
            for line in f:
                parts = line.strip().split(",")
                if len(parts) <= max(xi, yi) or not parts[yi]:
                    continue
                xs.append(float(parts[xi]))
                ys.append(float(parts[yi]))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)
    return np.asarray(xs), np.asarray(ys)


def _step_sample(xs, ys, grid):
    idx = np.searchsorted(xs, grid, side="right") - 1
    out = np.empty(grid.size)
    for i, j in enumerate(idx):
        out[i] = ys[j] if j >= 0 else 0.0
    return out


def cmd_compare(args) -> int:
    mx, mr = _read_csv(args.murmur_csv, "p_over_N", "cumulative_r")
    nx, nv = _read_csv(args.nu_csv, "t", "nu_cumulative_rational")
    if mx.size == 0 or nx.size == 0:
        print("error: empty input curves", file=sys.stderr)
        return EXIT_USAGE
    lo = max(mx.min(), nx.min())
    hi = min(mx.max(), nx.max())
    if not lo < hi:
        print("error: curve ranges do not overlap", file=sys.stderr)
        return EXIT_USAGE
    grid = np.linspace(lo, hi, args.grid_points)
    r = _step_sample(mx, mr, grid)
    nu_vals = _step_sample(nx, nv, grid) * (-1.0 if args.delta else 1.0)
    dev = np.abs(r - nu_vals)
    corr = float(np.corrcoef(r, nu_vals)[0, 1])
    t2 = None
    if lo <= 2.0 <= hi:
        t2 = float(
            np.abs(_step_sample(mx, mr, np.array([2.0]))
                   - (-1.0 if args.delta else 1.0) * _step_sample(nx, nv, np.array([2.0])))[0]
        )
    report = {
        "grid_points": args.grid_points,
        "range": [float(lo), float(hi)],
        "max_abs_deviation": float(dev.max()),
        "deviation_at_2": t2,
        "pearson_correlation": corr,
    }
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_propcircle(args) -> int:
    sieve = build_factor_sieve(max(int(args.tmult * args.x) + 1, 16))
    window = make_window()
    chk = prop_circle_check(args.a, args.q, args.theta, args.x, window, sieve, t_mult=args.tmult)
    report = {
        "a": chk.a,
        "q": chk.q,
        "theta": chk.theta,
        "x": chk.x,
        "t_max": chk.t_max,
        "lhs": chk.lhs,
        "main_term": chk.main_term,
        "residual": chk.residual,
    }
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_window_selftest(args) -> int:
    w = make_window()
    checks = []
    checks.append(("W(0) = 1", abs(w.value(0.0) - 1.0) < 1e-10))
    checks.append(("W(1/2) = 1/2", abs(w.value(0.5) - 0.5) < 1e-10))
    checks.append(("W(1) = 0", w.value(1.0) == 0.0))
    checks.append(
        ("partition W(x) + W(1-x) = 1", abs(w.value(0.25) + w.value(0.75) - 1.0) < 1e-10)
    )
    checks.append(("hat(0) = 1", abs(w.hat(0.0) - 1.0) < 1e-10))
    checks.append(("hat evenness", abs(w.hat(1.7) - w.hat(-1.7)) < 1e-12))
    direct = cosine_progression_sum(w, 40, 16.0, 0.0)
    checks.append(("lattice sum at phi = 0 equals h", abs(direct - 16.0) < 1e-9))
    lhs = cosine_progression_sum(w, 38, 12.0, 0.31)
    rhs = poisson_weight_sum(w, 38, 12.0, 0.31)
    checks.append(("Poisson identity", abs(lhs - rhs) < 1e-7))
    ok = True
    for name, passed in checks:
        print(f"{'PASS' if passed else 'FAIL'}  {name}")
        ok &= passed
    return EXIT_OK if ok else EXIT_USAGE


def main(argv=None) -> int:
    parser = _Parser(prog="murmur", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", help="sieve class numbers and write the binary cache")
    p.add_argument("--dmax", type=int, required=True, help="largest |D| to cover")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("trace", help="exact Hecke traces as TSV (n, trace, normalized)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--cache")
    p.add_argument("--out")
    p.add_argument("--verify", action="store_true", help="check against the q-expansion oracle")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("murmur", help="statistic run: per-prime CSV plus JSON summary")
    p.add_argument("--K", type=float, required=True)
    p.add_argument("--H", type=float, required=True)
    p.add_argument("--delta", type=int, choices=(0, 1), required=True)
    p.add_argument("--E", required=True, help="interval lo:hi, exact rationals allowed (1/4:4)")
    p.add_argument("--weighting", choices=("unit", "sqrt_p"), default="unit")
    p.add_argument("--domain", choices=("primes", "integers"), default="primes")
    p.add_argument("--cache")
    p.add_argument("--out", required=True)
    p.add_argument("--summary")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default MURMUR_THREADS or cpu count, max 8)")
    p.set_defaults(func=cmd_murmur)

    p = sub.add_parser("nu", help="limit-measure evaluation or cumulative curve CSV")
    p.add_argument("--E", help="interval lo:hi")
    p.add_argument("--grid", help="cumulative grid start:end:count")
    p.add_argument("--qmax", type=int, default=5000)
    p.add_argument("--tmax", type=int, default=None)
    p.add_argument("--weight", choices=("cubic", "quartic"), default="cubic")
    p.add_argument("--out")
    p.set_defaults(func=cmd_nu)

    p = sub.add_parser("compare", help="deviation/correlation report between the two curves")
    p.add_argument("--murmur-csv", required=True)
    p.add_argument("--nu-csv", required=True)
    p.add_argument("--delta", type=int, choices=(0, 1), default=0)
    p.add_argument("--grid-points", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("propcircle", help="main-term check of the exponential sum")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--tmult", type=float, default=120.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_propcircle)

    p = sub.add_parser("window-selftest", help="identity checks for the smooth window")
    p.set_defaults(func=cmd_window_selftest)

    try:
        args = parser.parse_args(argv)
        if args.command == "nu" and not args.grid and not args.E:
            parser.error("nu needs --E or --grid")
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
