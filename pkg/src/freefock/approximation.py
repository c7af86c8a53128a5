"""Discrete approximations of the time-indexed operators and their strong-convergence errors.

For a partition ``S_n`` and a time ``t`` the discrete operator sums the
partition operators over the intervals meeting ``[0, t)``; the sum then
reaches up to ``t^(n)``, the first partition point at or after ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .grid import (PartitionSpec, StepTensor, annihilation, creation, gauge, project, times)

Eps = Union[str, tuple[int, int]]

_EPS_ALIASES = {"∘": "o", "×": "x"}
_AS_UNIT = {"+": (0, 1), "-": (1, 0), "o": (1, 1), "x": (0, 0)}


def _norm_eps(eps: Eps) -> Eps:
    if isinstance(eps, str):
        eps = _EPS_ALIASES.get(eps, eps)
        if eps not in _AS_UNIT:
            raise ValueError(f"unknown operator {eps!r}")
        return eps
    i, j = eps
    return (int(i), int(j))


def weight_exponent(i: int, j: int) -> float:
    """``(delta_0i + delta_0j) / 2``."""
    return 0.5 * ((i == 0) + (j == 0))


@dataclass(frozen=True)
class DiscreteOpSpec:
    eps: Eps
    t: float
    partition: PartitionSpec

    def __post_init__(self):
        object.__setattr__(self, "eps", _norm_eps(self.eps))
        if self.t < 0 or self.t > self.partition.grid.horizon:
            raise ValueError(f"t={self.t} outside [0, horizon]")
        self.partition.grid.point(self.t)
        if isinstance(self.eps, tuple):
            nc = self.partition.grid.multiplicity
            if not all(0 <= x <= nc for x in self.eps):
                raise ValueError(f"matrix unit {self.eps} outside 0..{nc}")

    @property
    def sites(self) -> range:
        """Partition intervals ``[t_i, t_{i+1})`` meeting ``[0, t)``."""
        k = self.partition.grid.point(self.t)
        return range(int(np.searchsorted(self.partition.cuts, k, side="left")))

    @property
    def upper(self) -> float:
        return float(self.partition.upper_point(self.t))


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    t_n: float
    error: float
    bound: float | None = None

    def as_dict(self) -> dict:
        return {"n": self.n, "t_n": self.t_n, "error": self.error, "bound": self.bound}


def _unit_term(i: int, j: int, site: int, S: PartitionSpec, pf: StepTensor) -> StepTensor:
    # a^i_j(site) on an already projected vector, before the outer projection
    ind = S.indicator(site)
    width = S.width(site)
    nc = S.grid.multiplicity
    w = width ** weight_exponent(i, j)
    if i == 0 and j == 0:
        out = pf
        for c in range(1, nc + 1):
            out = out - _unit_term(c, c, site, S, pf)
        return w * out
    if i == 0:
        return w * creation(ind / np.sqrt(width), pf, color=j)
    if j == 0:
        return w * annihilation(ind / np.sqrt(width), pf, color=i)
    cmap = np.zeros((nc, nc))
    cmap[j - 1, i - 1] = 1.0
    return w * gauge(ind, pf, color_map=cmap)


def _weighted_sum(i: int, j: int, spec: DiscreteOpSpec, f: StepTensor) -> StepTensor:
    S = spec.partition
    pf = project(S, f)
    total = StepTensor.zero(f.grid)
    for site in spec.sites:
        # inner terms are combined before the outer projection; P is linear
        total = total + project(S, _unit_term(i, j, site, S, pf))
    return total


def discrete_op_apply(spec: DiscreteOpSpec, f: StepTensor, check: bool = True,
                      tol: float = 1e-10) -> StepTensor:
    """Apply the discrete operator ``a_t^eps(n)`` (or its matrix-unit analogue) to ``f``.

    For creation and annihilation the result is also computed as
    ``P_n a_{t^(n)} P_n f`` and the two are required to agree.
    """
    eps = spec.eps
    i, j = _AS_UNIT[eps] if isinstance(eps, str) else eps
    out = _weighted_sum(i, j, spec, f)
    if check and (i == 0) != (j == 0):
        S = spec.partition
        tall = DiscreteOpSpec(eps, spec.upper, S)
        shortcut = project(S, full_op_apply(tall, project(S, f)))
        gap = (out - shortcut).norm()
        if gap > tol * max(1.0, f.norm()):
            raise ArithmeticError(f"weighted sum and P a P disagree by {gap:.3e}")
    return out


def full_op_apply(spec: DiscreteOpSpec, f: StepTensor, t: float | None = None) -> StepTensor:
    """The continuous-time operator at time ``t`` (default ``spec.t``) applied on the grid."""
    eps = spec.eps
    t = spec.t if t is None else t
    grid = f.grid
    ind = grid.indicator(0, t)
    i, j = _AS_UNIT[eps] if isinstance(eps, str) else eps
    if i == 0 and j == 0:
        return times(ind, f)
    if i == 0:
        return creation(ind, f, color=j)
    if j == 0:
        return annihilation(ind, f, color=i)
    nc = grid.multiplicity
    cmap = np.zeros((nc, nc))
    cmap[j - 1, i - 1] = 1.0
    return gauge(ind, f, color_map=cmap)


def multiplicity_discrete_op(i: int, j: int, t: float, S: PartitionSpec, f: StepTensor) -> StepTensor:
    """``sum_k (t_{k+1} - t_k)^{eps_ij} a^i_j(k) f`` over the intervals meeting ``[0, t)``."""
    return discrete_op_apply(DiscreteOpSpec((i, j), t, S), f)


def convergence_bound(spec: DiscreteOpSpec, f: StepTensor) -> float:
    """Triangle-inequality majorant of ``||a_t(n) f - a_t f||``.

    Creation/annihilation use ``||P a_{t^(n)}|| <= sqrt(t^(n))`` and
    ``||P a(1_[t, t^(n)))|| <= sqrt(t^(n) - t)``. Gauge-type operators use
    the measured middle term. The constant part uses
    ``t^(n) ||(P - I) f|| + (t^(n) - t) ||f|| + delta ||f||``.
    """
    S = spec.partition
    eps = spec.eps
    i, j = _AS_UNIT[eps] if isinstance(eps, str) else eps
    tn, t = spec.upper, spec.t
    pf = project(S, f)
    proj_err = (pf - f).norm()
    if i == 0 and j == 0:
        return tn * proj_err + (tn - t) * f.norm() + S.diameter * f.norm()
    after = full_op_apply(spec, f)
    tail = (project(S, after) - after).norm()
    if (i == 0) != (j == 0):
        return np.sqrt(tn) * proj_err + np.sqrt(tn - t) * f.norm() + tail
    strip = S.grid.indicator(t, tn)
    nc = S.grid.multiplicity
    cmap = np.zeros((nc, nc))
    cmap[j - 1, i - 1] = 1.0
    middle = project(S, gauge(strip, f, color_map=cmap)).norm()
    return proj_err + middle + tail


def operator_convergence(f: StepTensor, t: float, eps: Eps, n_list: Iterable[int] = (2, 4, 8, 16, 32),
                         with_bound: bool = True) -> list[ConvergenceRow]:
    rows = []
    for n in n_list:
        spec = DiscreteOpSpec(eps, t, PartitionSpec.uniform(f.grid, n))
        err = (discrete_op_apply(spec, f) - full_op_apply(spec, f)).norm()
        bound = convergence_bound(spec, f) if with_bound else None
        rows.append(ConvergenceRow(n, spec.upper, err, bound))
    return rows


def projection_convergence(f: StepTensor, n_list: Iterable[int] = (2, 4, 8, 16, 32)) -> list[ConvergenceRow]:
    rows = []
    for n in n_list:
        S = PartitionSpec.uniform(f.grid, n)
        rows.append(ConvergenceRow(n, float(S.upper_point(0)), (project(S, f) - f).norm()))
    return rows
