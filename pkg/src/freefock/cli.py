"""Command-line runner for the convergence and moment experiments.

Exit status: 0 on success, 1 on an invalid configuration, 2 when
``--assert`` finds a row outside tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from fractions import Fraction
from math import lcm, sqrt

import numpy as np

from . import approximation, grid, limits, oracle, toy

SUBCOMMANDS = ("converge-projection", "converge-operator", "clt", "poisson", "freeness",
               "multiplicity-demo", "oracle")


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _n_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad --n-list {text!r}") from exc
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("--n-list needs positive integers")
    return values


def _env_int(name: str) -> int | None:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{name}={raw!r} is not an integer") from exc


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="freefock", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", help="write the table here instead of stdout")
        sp.add_argument("--assert", dest="check", action="store_true", help="exit 2 if any row fails")
        sp.add_argument("--tol", type=float, default=1e-9)
        return sp

    def grid_args(sp):
        sp.add_argument("--f", default="x-on-unit", choices=grid.TEST_VECTORS)
        sp.add_argument("--n-list", type=_n_list, default=[2, 4, 8, 16, 32])
        sp.add_argument("--mesh", type=int, help="cells per unit interval (default: lcm of n-list)")
        sp.add_argument("--depth", type=int, help="degree cap of grid tensors")
        sp.add_argument("--multiplicity", type=int, default=1)

    sp = common(sub.add_parser("converge-projection", help="||P_n f - f|| along n"))
    grid_args(sp)

    sp = common(sub.add_parser("converge-operator", help="||a_t(n) f - a_t f|| against the bound"))
    grid_args(sp)
    sp.add_argument("--eps", default="+", help="one of + - o x, or a matrix unit i,j")
    sp.add_argument("--t", type=Fraction, default=Fraction(1, 2))

    for name, helptext in (("clt", "free Bernoulli walk moments"), ("poisson", "free Poisson walk moments")):
        sp = common(sub.add_parser(name, help=helptext))
        sp.add_argument("--n-list", type=_n_list, default=[1, 2, 4, 8])
        sp.add_argument("--k-max", type=int, default=6)
        sp.add_argument("--t", type=float, default=1.0)
        sp.add_argument("--depth", type=int)

    sp = common(sub.add_parser("freeness", help="alternating centered products"))
    sp.add_argument("--trials", type=int, default=500)
    sp.add_argument("--max-len", type=int, default=6)
    sp.add_argument("--sites", type=int, default=3)
    sp.add_argument("--multiplicity", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)

    common(sub.add_parser("multiplicity-demo", help="the commuting and non-commuting N=2 pairs"))

    sp = common(sub.add_parser("oracle", help="non-crossing counts and limit-law moments"))
    sp.add_argument("--k-max", type=int, default=8)
    sp.add_argument("--rate", "--lambda", dest="rate", type=float, default=1.0)
    return p


# -- experiments -------------------------------------------------------------


def _grid_for(args, t=None) -> grid.Grid:
    mesh = args.mesh or _env_int("FREEFOCK_MESH")
    if mesh is None:
        mesh = lcm(*args.n_list)
        if t is not None:
            mesh = lcm(mesh, Fraction(t).limit_denominator(10 ** 6).denominator)
    if mesh < 1:
        raise ConfigError("mesh must be >= 1")
    bad = [n for n in args.n_list if mesh % n]
    if bad:
        raise ConfigError(f"n-list entries {bad} do not divide the mesh {mesh}")
    depth = args.depth or _env_int("FREEFOCK_DEPTH") or 3
    horizon = 4 if args.f == "exp-decay" else 1
    if t is not None and not (0 <= t <= horizon):
        raise ConfigError(f"t={t} outside [0, {horizon}]")
    if t is not None and abs(t * mesh - round(t * mesh)) > 1e-9:
        raise ConfigError(f"t={t} is not a point of the mesh {mesh}")
    try:
        return grid.Grid(mesh, horizon, args.multiplicity, max(depth, 1))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _expected_projection(name: str, n: int):
    return {
        "vacuum": 0.0,
        "indicator-unit": 0.0,
        "x-on-unit": 1 / (n * sqrt(12)),
        "square-indicator": 1 / sqrt(n),
    }.get(name)


def run_projection(args):
    g = _grid_for(args)
    f = grid.test_vector(args.f, g)
    rows, failures = [], []
    prev = None
    for r in approximation.projection_convergence(f, args.n_list):
        exp = _expected_projection(args.f, r.n)
        rows.append({"n": r.n, "error": r.error, "expected": exp})
        if exp is not None and abs(r.error - exp) > args.tol:
            failures.append(f"n={r.n} measured={r.error:.12g} expected={exp:.12g} tol={args.tol:g}")
        if prev is not None and r.n % prev[0] == 0 and r.error > prev[1] + args.tol:
            failures.append(f"n={r.n} measured={r.error:.12g} exceeds n={prev[0]} error {prev[1]:.12g} tol={args.tol:g}")
        prev = (r.n, r.error)
    return rows, failures


def _parse_eps(text: str):
    if "," in text:
        i, j = text.split(",")
        return (int(i), int(j))
    return text


def run_operator(args):
    g = _grid_for(args, args.t)
    f = grid.test_vector(args.f, g)
    eps = _parse_eps(args.eps)
    t = float(args.t)
    try:
        conv = approximation.operator_convergence(f, t, eps, args.n_list)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rows, failures = [], []
    for r in conv:
        rows.append({"n": r.n, "t_n": r.t_n, "error": r.error, "bound": r.bound})
        if r.bound is not None and r.error > r.bound + args.tol:
            failures.append(f"n={r.n} measured={r.error:.12g} expected<={r.bound:.12g} tol={args.tol:g}")
    return rows, failures


def _moment_args(args):
    if args.k_max < 1 or args.k_max > oracle.MAX_ORDER:
        raise ConfigError(f"k-max must be in 1..{oracle.MAX_ORDER}")
    depth = args.depth or _env_int("FREEFOCK_DEPTH")
    if depth is not None and depth < args.k_max:
        raise ConfigError(f"depth {depth} is below k-max {args.k_max}")
    if args.t <= 0:
        raise ConfigError("t must be positive")


def _run_walk(args, kind: str):
    _moment_args(args)
    rows, failures = [], []
    for n in args.n_list:
        spec = limits.WalkSpec(kind, n, args.t)
        for k in range(1, args.k_max + 1):
            orc = limits.walk_moment_oracle(spec, k)
            op = limits.walk_moment(spec, k) if n <= limits.OPERATOR_BUDGET and k <= limits.OPERATOR_BUDGET else None
            limit = (limits.semicircle_moment(args.t, k) if kind == "brownian"
                     else limits.free_poisson_moment(args.t, k))
            diff = None if op is None else abs(op - orc)
            rows.append({"n": n, "k": k, "operator": op, "oracle": orc, "limit": limit, "diff": diff})
            if diff is not None and diff > args.tol:
                failures.append(f"n={n} k={k} measured={op:.12g} expected={orc:.12g} tol={args.tol:g}")
    return rows, failures


def random_alternating(rng: random.Random, sites: int, max_len: int, multiplicity: int = 1):
    """A random alternating sequence of centered single-site operators."""
    length = rng.randint(1, max_len)
    seq, last = [], None
    d = multiplicity + 1
    for _ in range(length):
        site = rng.choice([s for s in range(sites) if s != last])
        m = np.array([[complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(d)] for _ in range(d)])
        seq.append((toy.site_op(toy.centered(m), site), site))
        last = site
    return seq


def run_freeness(args):
    if args.sites < 2 or args.max_len < 1 or args.trials < 1:
        raise ConfigError("need sites >= 2, max-len >= 1, trials >= 1")
    rng = random.Random(args.seed)
    rows, failures = [], []
    for trial in range(args.trials):
        seq = random_alternating(rng, args.sites, args.max_len, args.multiplicity)
        tau = abs(toy.alternating_moment(seq))
        rows.append({"trial": trial, "length": len(seq), "sites": "-".join(str(s) for _, s in seq),
                     "abs_tau": tau})
        if tau > args.tol:
            failures.append(f"trial={trial} measured={tau:.12g} expected=0 tol={args.tol:g}")
    return rows, failures


def run_demo(args):
    report = limits.multiplicity_demo()
    rows = report.rows()
    failures = []
    if not report.matches_printed:
        failures.append("matrix units do not reproduce the reference Y/Z matrices")
    for r in rows:
        if r["quantity"] == "commutator_norm":
            if r["pair"] == "Z" and r["measured"] > args.tol:
                failures.append(f"[Z1,Z2] measured={r['measured']:.12g} expected=0 tol={args.tol:g}")
            if r["pair"] == "Y" and r["measured"] <= args.tol:
                failures.append(f"[Y1,Y2] measured={r['measured']:.12g} expected>0 tol={args.tol:g}")
        elif r["expected"] != "" and abs(r["measured"] - r["expected"]) > args.tol:
            failures.append(f"m={r['m']} n={r['n']} measured={r['measured']:.12g} "
                            f"expected={r['expected']:.12g} tol={args.tol:g}")
    return rows, failures


def run_oracle(args):
    if not 1 <= args.k_max <= oracle.MAX_ORDER:
        raise ConfigError(f"k-max must be in 1..{oracle.MAX_ORDER}")
    if args.rate <= 0:
        raise ConfigError("rate must be positive")
    rows, failures = [], []
    for k in range(1, args.k_max + 1):
        count = len(oracle.noncrossing_partitions(k))
        sc, scq = limits.semicircle_moment(1.0, k), limits.semicircle_quadrature_moment(1.0, k)
        fp, fpq = limits.free_poisson_moment(args.rate, k), limits.free_poisson_quadrature_moment(args.rate, k)
        rows.append({"k": k, "nc_count": count, "catalan": oracle.catalan(k), "semicircle": sc,
                     "semicircle_quadrature": scq, "free_poisson": fp, "free_poisson_quadrature": fpq})
        if count != oracle.catalan(k):
            failures.append(f"k={k} measured={count} expected={oracle.catalan(k)}")
        if abs(sc - scq) > args.tol:
            failures.append(f"k={k} measured={scq:.12g} expected={sc:.12g} tol={args.tol:g}")
        if abs(fp - fpq) > args.tol * max(1.0, abs(fp)):
            failures.append(f"k={k} measured={fpq:.12g} expected={fp:.12g} tol={args.tol:g} (relative)")
    return rows, failures


RUNNERS = {
    "converge-projection": run_projection,
    "converge-operator": run_operator,
    "clt": lambda a: _run_walk(a, "brownian"),
    "poisson": lambda a: _run_walk(a, "poisson"),
    "freeness": run_freeness,
    "multiplicity-demo": run_demo,
    "oracle": run_oracle,
}


# -- output ------------------------------------------------------------------


def _fmt(value):
    if value is None or value == "":
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def _jsonable(value):
    if value is None or value == "":
        return None
    if isinstance(value, (float, np.floating)):
        x = float(f"{float(value):.12g}")
        return x if math.isfinite(x) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{k: _jsonable(v) for k, v in r.items()} for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(rows[0]))
        for r in rows:
            writer.writerow([_fmt(v) for v in r.values()])
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rows, failures = RUNNERS[args.command](args)
    except ConfigError as exc:
        print(f"freefock: configuration error: {exc}", file=sys.stderr)
        return 1
    text = render(rows, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.check and failures:
        for line in failures:
            print(f"FAIL {args.command}: {line}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
