"""Acceptance checks, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line with the measured numbers,
then asserts. Run ``pytest tests/test_acceptance.py -v`` to see the lines
next to the test names, or ``python3 tests/test_acceptance.py`` for the
bare report.
"""

import random
from math import sqrt

import numpy as np
import pytest

from freefock import approximation, grid, limits, oracle, toy, words
from freefock.cli import random_alternating

DYADIC = (2, 4, 8, 16, 32)


def report(capsys, number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    return ok


# -- 1. operator algebra on the toy Fock space --------------------------------


def check_operator_algebra():
    worst = 0.0
    for w in words.enumerate_adapted(3, 1, 4):
        v = toy.ToyVector.basis(w)
        for i in range(3):
            plus, minus = toy.elementary("+", i), toy.elementary("-", i)
            gauge, times = toy.elementary("o", i), toy.elementary("x", i)
            gaps = [
                ((minus * plus).apply(v) - times.apply(v)).norm(),
                ((plus * minus).apply(v) - gauge.apply(v)).norm(),
                ((gauge + times).apply(v) - v).norm(),
            ]
            worst = max(worst, *gaps)
    return worst <= 1e-12, f"max residual {worst:.2e} over words of length <= 4 on 3 sites (tol 1e-12)"


# -- 2. freeness of the factors ----------------------------------------------


def check_freeness():
    rng = random.Random(20261014)
    worst = 0.0
    for trial in range(500):
        seq = random_alternating(rng, sites=3, max_len=6, multiplicity=1 + trial % 2)
        worst = max(worst, abs(toy.alternating_moment(seq)))
    return worst <= 1e-10, f"max |tau| {worst:.2e} over 500 centered alternating products (tol 1e-10)"


# -- 3. toy operators inside the grid ----------------------------------------


def check_embedding():
    g = grid.Grid(8, max_degree=4)
    worst, checked = 0.0, 0
    for n in (2, 4, 8):
        S = grid.PartitionSpec.uniform(g, n)
        for w in words.enumerate_adapted(n, 1, 3):
            v = toy.ToyVector.basis(w)
            f = grid.embed_toy(S, v)
            for eps in "+-ox":
                for site in range(n):
                    lhs = grid.embed_toy(S, toy.apply_elementary(eps, site, v))
                    worst = max(worst, (lhs - grid.partition_op(eps, site, S, f)).norm())
                    checked += 1
    return worst <= 1e-12, f"max residual {worst:.2e} over {checked} (word, operator, site) cases (tol 1e-12)"


# -- 4. projections converge ---------------------------------------------------


def check_projection():
    g = grid.Grid(16)
    x = grid.test_vector("x-on-unit", g)
    sq = grid.test_vector("square-indicator", g)
    worst = 0.0
    for n in (2, 4, 8, 16):
        S = grid.PartitionSpec.uniform(g, n)
        worst = max(worst, abs((grid.project(S, x) - x).norm() - 1 / (n * sqrt(12))),
                    abs((grid.project(S, sq) - sq).norm() - 1 / sqrt(n)))
    e = grid.test_vector("exp-decay", grid.Grid(32, horizon=4))
    errors = [r.error for r in approximation.projection_convergence(e, (1,) + DYADIC)]
    mono = all(b <= a for a, b in zip(errors, errors[1:]))
    ok = worst <= 1e-10 and mono
    return ok, (f"closed-form gap {worst:.2e} (tol 1e-10); exp-decay errors "
                f"{', '.join(f'{x:.4f}' for x in errors)} non-increasing={mono}")


# -- 5. operators converge ------------------------------------------------------


def check_operators():
    bound_rows, bound_bad = 0, []
    for name in grid.TEST_VECTORS:
        f = grid.test_vector(name, grid.Grid(32, horizon=4 if name == "exp-decay" else 1))
        for eps in "+-":
            for t in (0.25, 0.5, 1.0):
                for r in approximation.operator_convergence(f, t, eps, DYADIC):
                    bound_rows += 1
                    if r.error > r.bound + 1e-10:
                        bound_bad.append((name, eps, t, r.n))
    e = grid.test_vector("exp-decay", grid.Grid(32, horizon=4))
    tail = {eps: approximation.operator_convergence(e, 0.5, eps, (32,), with_bound=False)[0].error
            for eps in "+-"}
    g = grid.Grid(24)
    omega = grid.StepTensor.vacuum(g)
    times_worst = 0.0
    times_ok = True
    for n in (2, 3, 4, 6, 8, 12, 24):
        for k in range(25):
            spec = approximation.DiscreteOpSpec("x", k / 24, grid.PartitionSpec.uniform(g, n))
            value = approximation.discrete_op_apply(spec, omega).f0.real
            times_worst = max(times_worst, abs(value - k / 24) * n)
            times_ok &= abs(value - k / 24) <= 1 / n
    tail_ok = all(v < 0.05 for v in tail.values())
    ok = not bound_bad and tail_ok and times_ok
    detail = (f"bound held on {bound_rows - len(bound_bad)}/{bound_rows} rows; "
              f"exp-decay t=1/2 n=32 error + {tail['+']:.4f}, - {tail['-']:.4f} (need < 0.05); "
              f"times on vacuum max n*|value - t| = {times_worst:.3f} (need <= 1)")
    return ok, detail


# -- 6. single Poisson step ----------------------------------------------------


def check_step_formula():
    worst = 0.0
    for n in (1, 2, 4):
        for k in range(1, 9):
            expected = ((n + 1) / sqrt(n)) ** k / (n + 1)
            worst = max(worst, abs(limits.step_moment("poisson", n, k) - expected) / expected)
    return worst <= 1e-10, f"max relative gap {worst:.2e} for n in 1,2,4 and k <= 8 (tol 1e-10)"


# -- 7. walks against the combinatorial oracle ---------------------------------


def check_walks():
    worst = 0.0
    for kind in ("brownian", "poisson"):
        for n in range(1, 9):
            spec = limits.WalkSpec(kind, n, 1.0)
            for k in range(1, 9):
                worst = max(worst, abs(limits.walk_moment(spec, k) - limits.walk_moment_oracle(spec, k)))
    gaps = {}
    for kind, limit in (("brownian", lambda k: limits.semicircle_moment(1, k)),
                        ("poisson", lambda k: limits.free_poisson_moment(1, k))):
        spec = limits.WalkSpec(kind, 10 ** 6, 1.0)
        gaps[kind] = max((abs(limits.walk_moment_oracle(spec, k) - limit(k)), k) for k in range(1, 9))
    ok = worst <= 1e-9 and all(g <= 1e-3 for g, _ in gaps.values())
    far = "; ".join(f"{kind} {g:.2e} at k={k}" for kind, (g, k) in gaps.items())
    return ok, f"operator vs oracle {worst:.2e} (tol 1e-9); n=10^6 vs limit laws: {far} (tol 1e-3)"


# -- 8. densities ----------------------------------------------------------------


def check_densities():
    sc = max(abs(limits.semicircle_quadrature_moment(1.0, k) - limits.semicircle_moment(1.0, k))
             for k in range(1, 9))
    fp = 0.0
    for rate in (0.5, 1.0, 2.0):
        for k in range(0, 9):
            exact = 1.0 if k == 0 else sum(rate ** len(p) for p in oracle.noncrossing_partitions(k))
            fp = max(fp, abs(limits.free_poisson_quadrature_moment(rate, k) - exact))
    ok = sc <= 1e-8 and fp <= 1e-6
    return ok, f"semicircle gap {sc:.2e} (tol 1e-8); free Poisson gap {fp:.2e} incl. atom (tol 1e-6)"


# -- 9. the commuting pair -----------------------------------------------------


def check_two_dim():
    rep = limits.multiplicity_demo(6)
    z_gap = max(abs(tau - float(mu)) for _, _, tau, mu in rep.z_moments)
    comm_z = float(np.abs(rep.commutator_z).max())
    comm_y = float(np.linalg.norm(rep.commutator_y))
    ok = rep.matches_printed and comm_z == 0 and comm_y > 0 and z_gap <= 1e-12
    return ok, (f"|[Z1,Z2]| = {comm_z:g}, |[Y1,Y2]| = {comm_y:.4f}, "
                f"joint moment gap {z_gap:.2e} for m+n <= 6 (tol 1e-12)")


# -- 10. counting adapted words ------------------------------------------------


def check_counts():
    bad = []
    for m in range(1, 6):
        for nc in range(1, 4):
            for length in range(0, 6):
                formula = 1 + sum(m * nc * ((m - 1) * nc) ** (l - 1) for l in range(1, length + 1))
                if len(words.enumerate_adapted(m, nc, length)) != formula:
                    bad.append((m, nc, length))
    return not bad, f"{75 - len(bad)}/75 (m, N, L) cases match the closed form"


CRITERIA = {
    1: check_operator_algebra,
    2: check_freeness,
    3: check_embedding,
    4: check_projection,
    5: check_operators,
    6: check_step_formula,
    7: check_walks,
    8: check_densities,
    9: check_two_dim,
    10: check_counts,
}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, detail = CRITERIA[number]()
    report(capsys, number, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    for number, check in sorted(CRITERIA.items()):
        report(None, number, *check())
