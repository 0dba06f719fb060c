"""Command-line interface.

Exit codes: 0 success, 2 invalid arguments or config, 3 validity violation
under ``--strict`` (or a failed identity check), 4 capacity exceeded.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction

from .. import arcs, bounds, expsum, moments
from ..errors import CapacityError, ConvergenceError, DomainError, SmoothMomentsError, ValidityError
from ..smooth_core import K_from_y, exponent_params, psi, sieve_smooth
from .config import ConfigError, GridPolicy, load_config
from .plot import write_gnuplot, write_svg
from .rows import format_value, read_csv, read_jsonl, rows_to_csv
from .sweep import compute_moment, run_config

EXIT_OK, EXIT_ARGS, EXIT_STRICT, EXIT_CAPACITY = 0, 2, 3, 4


def _rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from None


def _fmt(v) -> str:
    return format_value(v) if isinstance(v, float) else str(v)


def cmd_sieve(a) -> int:
    print(" ".join(map(str, sieve_smooth(a.x, a.y).members.tolist())))
    return EXIT_OK


def cmd_psi(a) -> int:
    print(psi(a.x, a.y))
    return EXIT_OK


def cmd_expsum(a) -> int:
    v = expsum.eval_S(a.theta, sieve_smooth(a.x, a.y))
    print(f"re={_fmt(v.re)} im={_fmt(v.im)} modulus={_fmt(v.modulus)}")
    return EXIT_OK


def cmd_moment(a) -> int:
    s_set = sieve_smooth(a.x, a.y)
    if a.exact:
        s = moments.even_integer(a.rho)
        if s is None:
            raise DomainError(f"--exact needs an even integer rho, got {a.rho}")
        m = moments.even_moment_exact(s_set, s)
    elif a.grid is not None:
        m = moments.moment_quadrature(s_set, float(a.rho), a.grid)
    elif a.refined is not None:
        m = moments.moment_refined(s_set, float(a.rho), a.refined)
    else:
        m = compute_moment(s_set, a.rho, GridPolicy("auto"))
    print(_fmt(m.value))
    if a.verbose:
        print(f"method={m.method.value} N={m.N} error_estimate={_fmt(m.error_estimate)} psi={s_set.count}")
    return EXIT_OK


def cmd_energy(a) -> int:
    print(moments.energy(sieve_smooth(a.x, a.y)).value)
    return EXIT_OK


def cmd_arcs_classify(a) -> int:
    lab = arcs.classify_theta(a.theta, a.Q, a.x)
    print(
        f"a={lab.a} q={lab.q} distance={_fmt(lab.distance)} halfwidth={_fmt(lab.halfwidth)} "
        f"sharp={str(lab.sharp).lower()} L={_fmt(lab.L)}"
    )
    return EXIT_OK


def _params_for(x, y, rho, K, eps):
    if K is None:
        Keff = K_from_y(x, y)
        K = Fraction(Keff).limit_denominator(10**6) if Keff is not None else Fraction(1)
    return exponent_params(K, rho, eps)


def cmd_arcs_decompose(a) -> int:
    s_set = sieve_smooth(a.x, a.y)
    params = _params_for(a.x, a.y, a.rho, a.K, a.epsilon)
    s = moments.even_integer(a.rho)
    N = a.N or (moments.alias_free_size(a.x, s) if s else 4 * a.x)
    d = arcs.arc_decompose(s_set, float(a.rho), a.Q, N, params, a.split)
    for k in ("split_q", "N", "part1", "part2", "sharp_part", "flat_part", "total"):
        print(f"{k}={_fmt(getattr(d, k))}")
    print(f"arcs={len(d.per_arc)}")
    return EXIT_OK


def cmd_bounds(a) -> int:
    s_set = sieve_smooth(a.x, a.y)
    params = exponent_params(a.K, a.rho, a.epsilon)
    m = compute_moment(s_set, a.rho, GridPolicy("auto"))
    ids = a.bound or list(bounds.BOUND_IDS)
    reports = bounds.all_bounds(a.x, a.y, s_set.count, params, a.harper_K, a.sunit_C, ids)
    print(f"x={a.x} y={a.y} psi={s_set.count} rho={a.rho} K={a.K} moment={_fmt(m.value)} ({m.method.value})")
    if not params.in_theory:
        print(f"warning: K={a.K} <= 3 is outside the theory (gamma={params.gamma})")
    violations = [] if params.in_theory else [f"K={a.K} <= 3"]
    for r in reports:
        r = bounds.compare(r, m)
        nt = "-" if r.nontrivial is None else str(r.nontrivial).lower()
        print(
            f"{r.bound_id:<11} total={_fmt(r.total)} ratio={_fmt(r.ratio)} "
            f"valid={str(r.valid).lower()} nontrivial={nt}"
            + (f"  [{'; '.join(r.reasons)}]" if r.reasons else "")
        )
        if not r.valid:
            violations.append(f"{r.bound_id} invalid")
    if a.strict and violations:
        print("strict: " + ", ".join(violations), file=sys.stderr)
        return EXIT_STRICT
    return EXIT_OK


def cmd_identities(a) -> int:
    p = exponent_params(a.K, a.rho)
    for name in ("kappa", "beta", "gamma", "eta", "xi", "zeta"):
        print(f"{name}={getattr(p, name)}")
    if p.zeta is not None:
        print(f"energy_exponent={3 - p.zeta}")
    checks = [bounds.exponent_identities(p), bounds.corollary_consistency_check(p.K)]
    ok = True
    for c in checks:
        for name, (lhs, rhs, good) in c.checks.items():
            print(f"{'PASS' if good else 'FAIL'} {name}: {lhs} vs {rhs}")
        ok = ok and c.ok
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_STRICT


def cmd_sweep(a) -> int:
    cfg = load_config(a.config)
    rows = run_config(cfg, output=a.out)
    if a.out is None and cfg.output is None:
        sys.stdout.write(rows_to_csv(rows))
    else:
        n_err = sum(r.kind == "error" for r in rows)
        print(f"{len(rows)} rows written to {a.out or cfg.output} ({n_err} error rows)")
    return EXIT_OK


def cmd_plot(a) -> int:
    rows = read_jsonl(a.results) if a.results.endswith(".jsonl") else read_csv(a.results)
    write_svg(rows, a.out)
    if a.gnuplot:
        write_gnuplot(rows, a.gnuplot)
    print(a.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="smooth-moments", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def xy(sp):
        sp.add_argument("x", type=int)
        sp.add_argument("y", type=int)

    sp = sub.add_parser("sieve", help="list the y-smooth integers up to x")
    xy(sp)
    sp.set_defaults(func=cmd_sieve)

    sp = sub.add_parser("psi", help="count the y-smooth integers up to x")
    xy(sp)
    sp.set_defaults(func=cmd_psi)

    sp = sub.add_parser("expsum", help="evaluate S(theta; x, y)")
    sp.add_argument("theta", type=float)
    xy(sp)
    sp.set_defaults(func=cmd_expsum)

    sp = sub.add_parser("moment", help="compute I_rho(x, y)")
    xy(sp)
    sp.add_argument("rho", type=_rational)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--grid", type=int, metavar="N")
    g.add_argument("--exact", action="store_true")
    g.add_argument("--refined", type=float, metavar="TOL")
    sp.set_defaults(func=cmd_moment)

    sp = sub.add_parser("energy", help="additive energy E(x, y)")
    xy(sp)
    sp.set_defaults(func=cmd_energy)

    sp = sub.add_parser("arcs", help="Dirichlet arc tools")
    asub = sp.add_subparsers(dest="arcs_command", required=True)
    c = asub.add_parser("classify", help="label theta with its arc")
    c.add_argument("theta", type=float)
    c.add_argument("Q", type=float)
    c.add_argument("x", type=int)
    c.set_defaults(func=cmd_arcs_classify)
    d = asub.add_parser("decompose", help="split the moment over arcs")
    xy(d)
    d.add_argument("rho", type=_rational)
    d.add_argument("Q", type=float)
    d.add_argument("--split", type=str.upper, choices=["THM1", "THM2"], required=True)
    d.add_argument("--N", type=int)
    d.add_argument("--K", type=_rational)
    d.add_argument("--epsilon", type=float, default=0.05)
    d.set_defaults(func=cmd_arcs_decompose)

    sp = sub.add_parser("bounds", help="bound reports")
    bsub = sp.add_subparsers(dest="bounds_command", required=True)
    r = bsub.add_parser("report", help="evaluate the bounds at one point")
    xy(r)
    r.add_argument("rho", type=_rational)
    r.add_argument("K", type=_rational)
    r.add_argument("--strict", action="store_true")
    r.add_argument("--bound", action="append", choices=list(bounds.BOUND_IDS))
    r.add_argument("--epsilon", type=float, default=0.05)
    r.add_argument("--harper-K", type=float, default=bounds.DEFAULT_HARPER_K)
    r.add_argument("--sunit-C", type=float, default=bounds.DEFAULT_SUNIT_C)
    r.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("identities", help="exact exponent identities for (K, rho)")
    sp.add_argument("K", type=_rational)
    sp.add_argument("rho", type=_rational)
    sp.set_defaults(func=cmd_identities)

    sp = sub.add_parser("sweep", help="run an experiment config")
    sp.add_argument("config")
    sp.add_argument("--out", help="output directory (overrides the config)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("plot", help="draw an SVG from persisted results")
    sp.add_argument("results")
    sp.add_argument("--out", required=True)
    sp.add_argument("--gnuplot", metavar="SCRIPT", help="also write a gnuplot script")
    sp.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING)
    try:
        return a.func(a)
    except CapacityError as e:
        print(f"capacity error: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except ValidityError as e:
        print(f"validity error: {e}", file=sys.stderr)
        return EXIT_STRICT
    except (ConfigError, DomainError, ConvergenceError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ARGS
    except SmoothMomentsError as e:  # pragma: no cover
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
