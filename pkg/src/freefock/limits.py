"""Free Bernoulli walks on the toy Fock space and their free limits.

Operator-path moments are exact vacuum expectations on the toy Fock space;
the oracle path uses free cumulants. The two are kept independent so each
checks the other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, pi, sqrt
from typing import Iterable, Sequence

import numpy as np

from . import oracle
from .toy import (ToyOperator, ToyVector, inner, matrix_unit, operator_sum, site_op, unit_matrix,
                  vacuum_state)

OPERATOR_BUDGET = 8
TWO_DIM_BUDGET = 6


class BudgetExceeded(ValueError):
    """The direct operator evaluation would be too large; use the oracle path."""


# -- laws --------------------------------------------------------------------


@dataclass(frozen=True)
class DiscreteMeasure:
    atoms: tuple[tuple[object, float], ...]

    def __post_init__(self):
        weights = [w for _, w in self.atoms]
        if any(w < 0 for w in weights) or abs(sum(weights) - 1) > 1e-12:
            raise ValueError("weights must be non-negative and sum to one")

    def moment(self, k: int) -> float:
        return sum(w * x ** k for x, w in self.atoms)

    def moments(self, k: int) -> list:
        return [self.moment(j) for j in range(1, k + 1)]

    def joint_moment(self, m: int, n: int):
        return sum(w * x ** m * y ** n for (x, y), w in self.atoms)


@dataclass
class MomentTable:
    """Moments keyed by order, or by a tuple such as ``(k, t)`` or ``(m, p)``."""

    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        if key == 0 or key == (0, 0):
            return 1.0
        return self.values[key]

    def __setitem__(self, key, value):
        self.values[key] = value

    def rows(self) -> list[tuple]:
        return sorted(self.values.items())


def bernoulli_law(kind: str, n: int = 1) -> DiscreteMeasure:
    """Law of a single step operator (before the ``1/sqrt(n)`` prefactor)."""
    if kind == "brownian":
        return DiscreteMeasure(((-1.0, 0.5), (1.0, 0.5)))
    if kind == "poisson":
        if n < 1:
            raise ValueError("n must be >= 1")
        return DiscreteMeasure((((n + 1) / sqrt(n), 1 / (n + 1)), (0.0, n / (n + 1))))
    raise ValueError(f"unknown walk kind {kind!r}")


# -- walks -------------------------------------------------------------------


@dataclass(frozen=True)
class WalkSpec:
    """Normalized free walk ``(1/sqrt(n)) sum_i step_i`` over sites ``0..floor(nt)``.

    ``inclusive=False`` drops the last site, giving exactly ``floor(nt)``
    summands.
    """

    kind: str
    n: int
    t: float = 1.0
    inclusive: bool = True

    def __post_init__(self):
        if self.kind not in ("brownian", "poisson"):
            raise ValueError(f"unknown walk kind {self.kind!r}")
        if self.n < 1 or self.t <= 0:
            raise ValueError("need n >= 1 and t > 0")

    @property
    def summands(self) -> int:
        s = floor(self.n * self.t + 1e-12) + (1 if self.inclusive else 0)
        if s < 1:
            raise ValueError("walk has no summands")
        return s

    @property
    def step_matrix(self) -> np.ndarray:
        if self.kind == "brownian":
            return np.array([[0.0, 1.0], [1.0, 0.0]])
        r = sqrt(self.n)
        # a^+ + a^- + sqrt(n) a^o + a^x / sqrt(n)
        return np.array([[1 / r, 1.0], [1.0, r]])

    def operator(self) -> ToyOperator:
        return operator_sum((site_op(self.step_matrix, i) for i in range(self.summands)),
                            scale=1 / sqrt(self.n))


def _split_moment(left: ToyOperator, right: ToyOperator, a: int, b: int) -> complex:
    # <Omega, L^a R^b Omega> = <L^a Omega, R^b Omega> for self-adjoint L
    n = left.multiplicity
    u = ToyVector.vacuum(n)
    v = ToyVector.vacuum(n)
    for _ in range(a):
        u = left.apply(u)
    for _ in range(b):
        v = right.apply(v)
    return inner(u, v)


def walk_moment(spec: WalkSpec, k: int, budget: int = OPERATOR_BUDGET) -> float:
    """``tau(S^k)`` by direct evaluation on the toy Fock space."""
    if spec.n > budget or k > budget:
        raise BudgetExceeded(f"n={spec.n}, k={k} exceeds the operator budget {budget}")
    s = spec.operator()
    return _split_moment(s, s, k // 2, k - k // 2).real


def walk_moment_oracle(spec: WalkSpec, k: int) -> float:
    """The same moment from free cumulants of the step law."""
    base = bernoulli_law(spec.kind, spec.n).moments(k)
    return oracle.free_sum_moments(base, spec.summands, 1 / sqrt(spec.n))[k - 1]


def step_moment(kind: str, n: int, k: int) -> float:
    """``tau(step^k)`` for a single step operator at site 0."""
    spec = WalkSpec(kind, n)
    return vacuum_state(site_op(spec.step_matrix, 0) ** k).real


def walk_moment_table(kind: str, n_list: Iterable[int], k_max: int, t: float = 1.0,
                      method: str = "operator") -> MomentTable:
    table = MomentTable()
    for n in n_list:
        spec = WalkSpec(kind, n, t)
        for k in range(1, k_max + 1):
            value = walk_moment(spec, k) if method == "operator" else walk_moment_oracle(spec, k)
            table[(n, k)] = value
    return table


# -- limit laws --------------------------------------------------------------


def semicircle_moment(t: float, k: int) -> float:
    """k-th moment of the centered semicircle law of variance ``t``."""
    if k % 2:
        return 0.0
    return oracle.catalan(k // 2) * t ** (k // 2)


def free_poisson_moment(rate: float, k: int) -> float:
    if rate <= 0:
        raise ValueError("rate must be positive")
    if k == 0:
        return 1.0
    return oracle.free_poisson_moments(k, rate)[-1]


def midpoint(fn, lo: float, hi: float, tol: float = 1e-12, start: int = 16, max_panels: int = 1 << 22) -> float:
    """Midpoint rule, doubling the panel count until successive estimates agree to ``tol``."""
    panels = start
    prev = None
    while True:
        h = (hi - lo) / panels
        x = lo + h * (np.arange(panels) + 0.5)
        est = float(np.sum(fn(x)) * h)
        if prev is not None and abs(est - prev) < tol:
            return est
        if panels >= max_panels:
            raise RuntimeError("midpoint refinement did not converge")
        prev, panels = est, panels * 2


def semicircle_density(x, t: float = 1.0):
    x = np.asarray(x, dtype=float)
    return np.sqrt(np.clip(4 * t - x ** 2, 0, None)) / (2 * pi * t)


def free_poisson_density(x, rate: float):
    """Absolutely continuous part of the free Poisson law."""
    x = np.asarray(x, dtype=float)
    lo, hi = (1 - sqrt(rate)) ** 2, (1 + sqrt(rate)) ** 2
    inside = (x >= lo) & (x <= hi) & (x > 0)
    safe = np.where(inside, x, 1.0)
    return np.where(inside, np.sqrt(np.clip(4 * rate - (safe - 1 - rate) ** 2, 0, None)) / (2 * pi * safe), 0.0)


def semicircle_quadrature_moment(t: float, k: int, tol: float = 1e-12) -> float:
    """Quadrature of ``x^k`` against the semicircle density of variance ``t``.

    Substituting ``x = 2 sqrt(t) sin(theta)`` removes the square-root edges.
    """
    r = 2 * sqrt(t)
    return midpoint(lambda th: (2 / pi) * np.cos(th) ** 2 * (r * np.sin(th)) ** k, -pi / 2, pi / 2, tol)


def free_poisson_quadrature_moment(rate: float, k: int, tol: float = 1e-12) -> float:
    """Quadrature of ``x^k`` against the free Poisson law, atom at 0 included."""
    if rate <= 0:
        raise ValueError("rate must be positive")
    c, r = 1 + rate, 2 * sqrt(rate)

    def integrand(th):
        x = c + r * np.sin(th)
        if k == 0:
            return 2 * rate * np.cos(th) ** 2 / (pi * x)
        return (2 * rate / pi) * np.cos(th) ** 2 * x ** (k - 1)

    atom = (1 - rate) if rate < 1 and k == 0 else 0.0
    return atom + midpoint(integrand, -pi / 2, pi / 2, tol)


# -- multiplicity two --------------------------------------------------------

Z_JOINT_LAW = DiscreteMeasure((((1, 0), Fraction(1, 2)), ((-1, 1), Fraction(1, 3)), ((-1, -2), Fraction(1, 6))))


def two_dim_matrices() -> dict[str, np.ndarray]:
    """The single-site ``Y`` and ``Z`` pairs on ``C^3``, assembled from matrix units."""
    u = lambda i, j: unit_matrix(i, j, 2).real
    return {
        "Y1": u(0, 1) + u(1, 0),
        "Y2": u(0, 2) + u(2, 0),
        "Z1": u(0, 1) + u(1, 0) - u(2, 2),
        "Z2": u(0, 2) + u(2, 0) - (u(1, 2) + u(2, 1) + u(2, 2)),
    }


PRINTED = {
    "Y1": np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]]),
    "Y2": np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]]),
    "Z1": np.array([[0, 1, 0], [1, 0, 0], [0, 0, -1]]),
    "Z2": np.array([[0, 0, 1], [0, 0, -1], [1, -1, -1]]),
}


@dataclass
class DemoReport:
    matrices: dict[str, np.ndarray]
    matches_printed: bool
    commutator_y: np.ndarray
    commutator_z: np.ndarray
    z_moments: list[tuple[int, int, float, float]]
    y_moments: list[tuple[int, int, float]]

    def rows(self) -> list[dict]:
        out = [
            {"quantity": "commutator_norm", "pair": "Y", "m": "", "n": "",
             "measured": float(np.linalg.norm(self.commutator_y)), "expected": ""},
            {"quantity": "commutator_norm", "pair": "Z", "m": "", "n": "",
             "measured": float(np.linalg.norm(self.commutator_z)), "expected": 0.0},
        ]
        for m, n, tau in self.y_moments:
            out.append({"quantity": "tau", "pair": "Y", "m": m, "n": n, "measured": tau, "expected": ""})
        for m, n, tau, mu in self.z_moments:
            out.append({"quantity": "tau", "pair": "Z", "m": m, "n": n, "measured": tau, "expected": mu})
        return out


def multiplicity_demo(max_total: int = 6) -> DemoReport:
    mats = two_dim_matrices()
    ops = {name: site_op(m, 0) for name, m in mats.items()}
    matches = all(np.array_equal(mats[k], PRINTED[k]) for k in PRINTED)
    comm = lambda a, b: mats[a] @ mats[b] - mats[b] @ mats[a]
    z_rows, y_rows = [], []
    for m in range(max_total + 1):
        for n in range(max_total + 1 - m):
            z = vacuum_state(ops["Z1"] ** m * ops["Z2"] ** n, 2).real
            z_rows.append((m, n, z, float(Z_JOINT_LAW.joint_moment(m, n))))
            y = vacuum_state(ops["Y1"] ** m * ops["Y2"] ** n, 2).real
            y_rows.append((m, n, y))
    return DemoReport(mats, matches, comm("Y1", "Y2"), comm("Z1", "Z2"), z_rows, y_rows)


def two_dim_walk(family: str, n: int, t: float = 1.0, inclusive: bool = True) -> tuple[ToyOperator, ToyOperator]:
    """The normalized pair ``(1/sqrt(n)) sum_k (F_1(k), F_2(k))`` for ``F`` in ``{Y, Z}``."""
    if family not in ("Y", "Z"):
        raise ValueError("family must be 'Y' or 'Z'")
    mats = two_dim_matrices()
    sites = range(floor(n * t + 1e-12) + (1 if inclusive else 0))
    scale = 1 / sqrt(n)
    first = operator_sum((site_op(mats[family + "1"], k) for k in sites), scale)
    second = operator_sum((site_op(mats[family + "2"], k) for k in sites), scale)
    return first, second


def two_dim_walk_moments(family: str, n: int, t: float = 1.0, orders: Sequence[tuple[int, int]] = ((1, 1), (2, 0), (0, 2)),
                         budget: int = TWO_DIM_BUDGET) -> MomentTable:
    """``tau(W_1^m W_2^p)`` for each ``(m, p)`` in ``orders``."""
    if n > budget:
        raise BudgetExceeded(f"n={n} exceeds the two-dimensional budget {budget}")
    w1, w2 = two_dim_walk(family, n, t)
    table = MomentTable()
    for m, p in orders:
        table[(m, p)] = _split_moment(w1, w2, m, p).real
    return table
