"""Grid model of the full Fock space over L^2(R_+; C^N).

Degree-n components are step functions on an ``n``-fold product of the
uniform mesh ``[k/M, (k+1)/M)``. Each leg index runs over ``(cell, color,
channel)``:

* channel 0 holds the value of the function on the cell;
* channel 1 is the amplitude of an in-cell residual profile, orthogonal to
  constants on that cell and of squared norm ``1/M``. It lets analytic test
  functions (``x``, ``exp(-x)``) be carried exactly: every operator built
  from step functions either scales the residual, moves it to a later leg,
  or integrates it to zero, and every partition projector kills it.

Residual profiles coming from different ingested functions are not
comparable, so tensors remember the ``profile`` they were built from.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Mapping

import numpy as np

from .toy import ToyVector

CHANNELS = 2
ALIGN_TOL = 1e-9


@dataclass(frozen=True)
class Grid:
    mesh: int
    horizon: float = 1
    multiplicity: int = 1
    max_degree: int = 3

    def __post_init__(self):
        if self.mesh < 1:
            raise ValueError("mesh must be >= 1")
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")
        cells = self.mesh * self.horizon
        if abs(cells - round(cells)) > ALIGN_TOL:
            raise ValueError("mesh * horizon must be an integer")

    @property
    def cells(self) -> int:
        return int(round(self.mesh * self.horizon))

    @property
    def volume(self) -> float:
        return 1.0 / self.mesh

    @property
    def leg(self) -> int:
        return self.cells * self.multiplicity * CHANNELS

    @property
    def edges(self) -> np.ndarray:
        return np.arange(self.cells + 1) / self.mesh

    def point(self, t) -> int:
        """Index of the mesh point ``t``; raises if ``t`` is off the mesh."""
        k = float(t) * self.mesh
        if abs(k - round(k)) > ALIGN_TOL or k < -ALIGN_TOL or k > self.cells + ALIGN_TOL:
            raise ValueError(f"t={t} is not a mesh point of {self}")
        return int(round(k))

    def indicator(self, a, b) -> np.ndarray:
        """Cell values of ``1_[a, b)``."""
        out = np.zeros(self.cells)
        out[self.point(a):self.point(b)] = 1.0
        return out

    def leg_vector(self, values, color: int = 1) -> np.ndarray:
        """Embed cell values of a scalar step function into the leg index space on one color."""
        values = np.asarray(values)
        if values.shape != (self.cells,):
            raise ValueError(f"expected {self.cells} cell values, got {values.shape}")
        if not 1 <= color <= self.multiplicity:
            raise ValueError(f"color {color} outside 1..{self.multiplicity}")
        out = np.zeros((self.cells, self.multiplicity, CHANNELS), dtype=complex)
        out[:, color - 1, 0] = values
        return out.reshape(-1)


class StepTensor:
    """Truncated Fock-space element ``f0 Omega + sum_n f_n``. Treated as immutable."""

    __slots__ = ("grid", "f0", "parts", "profile")

    def __init__(self, grid: Grid, f0: complex = 0.0, parts: Mapping[int, np.ndarray] | None = None,
                 profile: str | None = None):
        self.grid = grid
        self.f0 = complex(f0)
        clean = {}
        for n, arr in (parts or {}).items():
            arr = np.asarray(arr, dtype=complex)
            if n < 1 or arr.shape != (grid.leg,) * n:
                raise ValueError(f"degree {n} part has shape {arr.shape}")
            if n > grid.max_degree and np.any(arr):
                raise ValueError(f"degree {n} exceeds the grid cap {grid.max_degree}")
            if np.any(arr):
                clean[n] = arr
        self.parts: dict[int, np.ndarray] = clean
        self.profile = profile if profile and any(_has_residual(a) for a in clean.values()) else None

    @classmethod
    def vacuum(cls, grid: Grid) -> "StepTensor":
        return cls(grid, 1.0)

    @classmethod
    def zero(cls, grid: Grid) -> "StepTensor":
        return cls(grid)

    @classmethod
    def from_cells(cls, grid: Grid, values, color: int = 1) -> "StepTensor":
        """Degree-1 step function with the given cell values."""
        return cls(grid, 0.0, {1: grid.leg_vector(values, color)})

    @property
    def degree(self) -> int:
        return max(self.parts, default=0)

    def part(self, n: int) -> np.ndarray:
        return self.parts.get(n, np.zeros((self.grid.leg,) * n, dtype=complex))

    def _merge_profile(self, other: "StepTensor") -> str | None:
        if self.grid != other.grid:
            raise ValueError("grid mismatch")
        if self.profile and other.profile and self.profile != other.profile:
            raise ValueError(f"cannot combine residual profiles {self.profile!r} and {other.profile!r}")
        return self.profile or other.profile

    def __add__(self, other: "StepTensor") -> "StepTensor":
        profile = self._merge_profile(other)
        parts = dict(self.parts)
        for n, arr in other.parts.items():
            parts[n] = parts[n] + arr if n in parts else arr
        return StepTensor(self.grid, self.f0 + other.f0, parts, profile)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, c: complex) -> "StepTensor":
        return StepTensor(self.grid, c * self.f0, {n: c * a for n, a in self.parts.items()},
                          self.profile)

    __mul__ = __rmul__

    def __neg__(self):
        return (-1.0) * self

    def norm(self) -> float:
        return float(np.sqrt(max(inner(self, self).real, 0.0)))

    def __repr__(self):
        return f"StepTensor(f0={self.f0:.6g}, degrees={sorted(self.parts)}, mesh={self.grid.mesh})"


def _has_residual(arr: np.ndarray) -> bool:
    n = arr.ndim
    legs = arr.reshape((arr.shape[0] // CHANNELS, CHANNELS) * n)
    for k in range(n):
        index = [slice(None)] * (2 * n)
        index[2 * k + 1] = 1
        if np.any(legs[tuple(index)]):
            return True
    return False


def inner(f: StepTensor, g: StepTensor) -> complex:
    """``<f, g>`` in the full Fock space, antilinear in ``f``."""
    f._merge_profile(g)
    total = np.conj(f.f0) * g.f0
    vol = f.grid.volume
    for n, a in f.parts.items():
        b = g.parts.get(n)
        if b is not None:
            total += np.vdot(a, b) * vol ** n
    return complex(total)


# -- the four operator families of the full Fock space ------------------------


def creation(h, f: StepTensor, color: int = 1) -> StepTensor:
    """``a^+(h) f``: prepend the step function ``h`` (cell values) as first variable."""
    grid = f.grid
    hv = grid.leg_vector(h, color)
    parts = {}
    if f.f0:
        parts[1] = f.f0 * hv
    for n, arr in f.parts.items():
        parts[n + 1] = np.multiply.outer(hv, arr)
    return StepTensor(grid, 0.0, parts, f.profile)


def annihilation(h, f: StepTensor, color: int = 1) -> StepTensor:
    """``a^-(h) f``: integrate the first variable against ``conj(h)``."""
    grid = f.grid
    hv = np.conj(grid.leg_vector(h, color)) * grid.volume
    f0 = 0.0
    parts = {}
    for n, arr in f.parts.items():
        red = np.tensordot(hv, arr, axes=(0, 0))
        if n == 1:
            f0 = complex(red)
        else:
            parts[n - 1] = red
    return StepTensor(grid, f0, parts, f.profile)


def gauge(b, f: StepTensor, color_map: np.ndarray | None = None) -> StepTensor:
    """``a^o(b) f``: multiply the first variable by ``b``; ``color_map`` acts on its color.

    ``color_map`` is an ``N x N`` matrix (default identity); the multiplicity-N
    gauge-type matrix unit ``a^i_j`` uses the unit sending color ``i`` to ``j``.
    """
    grid = f.grid
    b = np.asarray(b, dtype=complex)
    if b.shape != (grid.cells,):
        raise ValueError(f"expected {grid.cells} cell values, got {b.shape}")
    nc = grid.multiplicity
    cmap = np.eye(nc) if color_map is None else np.asarray(color_map, dtype=complex)
    parts = {}
    for n, arr in f.parts.items():
        view = arr.reshape(grid.cells, nc, CHANNELS, -1)
        out = np.einsum("c,ji,cirx->cjrx", b, cmap, view)
        parts[n] = out.reshape(arr.shape)
    return StepTensor(grid, 0.0, parts, f.profile)


def times(b, f: StepTensor) -> StepTensor:
    """``a^x(b) f``: scalar multiplication by the integral of ``b``."""
    return (float(np.sum(b)) * f.grid.volume) * f


# -- partitions and the toy Fock space inside the grid -----------------------


@dataclass(frozen=True)
class PartitionSpec:
    """Grid-aligned partition ``0 = t_0 < t_1 < ...`` covering the grid horizon.

    ``cuts`` are the partition points in mesh units.
    """

    grid: Grid
    cuts: tuple[int, ...]

    def __post_init__(self):
        cuts = tuple(int(c) for c in self.cuts)
        if not cuts or cuts[0] != 0:
            raise ValueError("partition must start at 0")
        if any(b <= a for a, b in zip(cuts, cuts[1:])):
            raise ValueError("partition points must be strictly increasing")
        if cuts[-1] != self.grid.cells:
            raise ValueError("partition must end at the grid horizon")
        object.__setattr__(self, "cuts", cuts)

    @classmethod
    def from_points(cls, grid: Grid, points) -> "PartitionSpec":
        cuts = [grid.point(p) for p in points]
        if cuts[-1] < grid.cells:
            cuts.append(grid.cells)
        return cls(grid, tuple(cuts))

    @classmethod
    def uniform(cls, grid: Grid, n: int) -> "PartitionSpec":
        """The partition ``{k/n}`` restricted to the grid horizon."""
        if grid.mesh % n:
            raise ValueError(f"n={n} does not divide the mesh {grid.mesh}")
        step = grid.mesh // n
        return cls(grid, tuple(range(0, grid.cells + 1, step)))

    @property
    def points(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.grid.mesh) for c in self.cuts)

    @property
    def sites(self) -> int:
        return len(self.cuts) - 1

    @property
    def diameter(self) -> float:
        return max(b - a for a, b in zip(self.cuts, self.cuts[1:])) / self.grid.mesh

    def width(self, i: int) -> float:
        return (self.cuts[i + 1] - self.cuts[i]) / self.grid.mesh

    def indicator(self, i: int) -> np.ndarray:
        """Cell values of ``1_[t_i, t_{i+1})``."""
        if not 0 <= i < self.sites:
            raise ValueError(f"site {i} outside partition with {self.sites} cells")
        out = np.zeros(self.grid.cells)
        out[self.cuts[i]:self.cuts[i + 1]] = 1.0
        return out

    def site_of(self, t) -> int:
        """Index ``i`` of the partition interval containing ``t`` (``t_i <= t < t_{i+1}``)."""
        k = self.grid.point(t)
        return int(np.searchsorted(self.cuts, k, side="right") - 1)

    def upper_point(self, t) -> Fraction:
        """Smallest partition point ``>= t``."""
        k = self.grid.point(t)
        j = int(np.searchsorted(self.cuts, k, side="left"))
        return Fraction(self.cuts[j], self.grid.mesh)

    @cached_property
    def _block(self) -> np.ndarray:
        return np.repeat(np.arange(self.sites), np.diff(self.cuts))

    @cached_property
    def _frame(self) -> np.ndarray:
        """Isometry from ``(site, color)`` onto the normalized block indicators in leg space."""
        nc = self.grid.multiplicity
        e = (self._block[:, None] == np.arange(self.sites)[None, :]) / np.sqrt(np.diff(self.cuts))
        return np.kron(np.kron(e, np.eye(nc)), np.array([[1.0], [0.0]]))

    def _mask(self, n: int) -> np.ndarray:
        """Adaptedness of degree-n words in ``(site, color)`` coordinates."""
        site = np.repeat(np.arange(self.sites), self.grid.multiplicity)
        distinct = site[:, None] != site[None, :]
        k = len(site)
        mask = np.ones((k,) * n, dtype=bool)
        for a in range(n - 1):
            shape = [1] * n
            shape[a] = shape[a + 1] = k
            mask &= distinct.reshape(shape)
        return mask


def project(S: PartitionSpec, f: StepTensor) -> StepTensor:
    """Orthogonal projection ``P_S`` onto the toy Fock space of ``S``.

    Averages each degree-n component over the partition rectangles and keeps
    only rectangles whose neighbouring intervals differ. The averaging runs
    through the coefficients on the normalized block indicators, which is
    also much cheaper than averaging in leg space.
    """
    if S.grid != f.grid:
        raise ValueError("partition and tensor live on different grids")
    e = S._frame
    parts = {}
    for n, arr in f.parts.items():
        # each contraction eats the leading axis and appends the new one,
        # so n of them restore the original order
        coeff = arr
        for _ in range(n):
            coeff = np.tensordot(coeff, e, axes=(0, 0))
        if n > 1:
            coeff = coeff * S._mask(n)
        out = coeff
        for _ in range(n):
            out = np.tensordot(out, e, axes=(0, 1))
        parts[n] = out
    return StepTensor(f.grid, f.f0, parts)


def embed_toy(S: PartitionSpec, v: ToyVector) -> StepTensor:
    """Isometric image of a toy vector on the basis ``X_sigma(S)``."""
    grid = S.grid
    if v.multiplicity != grid.multiplicity:
        raise ValueError("multiplicity mismatch between toy vector and grid")
    legs = {}

    def leg(site, color):
        key = (site, color)
        if key not in legs:
            legs[key] = grid.leg_vector(S.indicator(site) / np.sqrt(S.width(site)), color)
        return legs[key]

    f0 = 0.0
    parts: dict[int, np.ndarray] = {}
    for w, a in v.items():
        if not w:
            f0 += a
            continue
        t = a * leg(*w[0])
        for letter in w[1:]:
            t = np.multiply.outer(t, leg(*letter))
        n = len(w)
        parts[n] = parts[n] + t if n in parts else t
    return StepTensor(grid, f0, parts)


def partition_op(eps: str, site: int, S: PartitionSpec, f: StepTensor) -> StepTensor:
    """``a_i^eps(S) f``: rescaled restriction of the full Fock operators to the toy space of ``S``."""
    pf = project(S, f)
    if eps == "+":
        return project(S, creation(S.indicator(site) / np.sqrt(S.width(site)), pf))
    if eps == "-":
        return project(S, annihilation(S.indicator(site) / np.sqrt(S.width(site)), pf))
    if eps in ("o", "∘"):
        return project(S, gauge(S.indicator(site), pf))
    if eps in ("x", "×"):
        return project(S, pf - partition_op("o", site, S, pf))
    raise ValueError(f"unknown elementary operator {eps!r}")


def partition_unit(src: int, dst: int, site: int, S: PartitionSpec, f: StepTensor) -> StepTensor:
    """Matrix unit ``a^src_dst`` of the ``site``-th factor, acting on the toy space of ``S``."""
    nc = S.grid.multiplicity
    if not (0 <= src <= nc and 0 <= dst <= nc):
        raise ValueError(f"matrix unit indices ({src}, {dst}) outside 0..{nc}")
    pf = project(S, f)
    ind = S.indicator(site)
    if src == 0 and dst == 0:
        kept = pf
        for c in range(1, nc + 1):
            kept = kept - partition_unit(c, c, site, S, pf)
        return project(S, kept)
    if src == 0:
        return project(S, creation(ind / np.sqrt(S.width(site)), pf, color=dst))
    if dst == 0:
        return project(S, annihilation(ind / np.sqrt(S.width(site)), pf, color=src))
    cmap = np.zeros((nc, nc))
    cmap[dst - 1, src - 1] = 1.0
    return project(S, gauge(ind, pf, color_map=cmap))


# -- exact ingestion of analytic test functions ------------------------------

CellIntegrals = Callable[[np.ndarray, np.ndarray], np.ndarray]


def ingest(degree: int, integrals: Callable, grid: Grid, cell_variance: CellIntegrals | None = None,
           color: int = 1, profile: str | None = None) -> StepTensor:
    """Build a tensor from exact cell integrals of a target function.

    ``integrals(lo, hi)`` receives broadcastable arrays of lower and upper
    cell edges, one pair per variable (``degree`` pairs, flattened as
    ``lo_1, hi_1, lo_2, hi_2, ...``), and returns the integral over each
    rectangle. The step part is the cell average. For degree 1,
    ``cell_variance(lo, hi)`` may supply ``int_cell |f - mean|^2`` so that the
    in-cell residual is carried exactly.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    if degree == 0:
        return StepTensor(grid, complex(integrals()))
    e = grid.edges
    args = []
    for k in range(degree):
        shape = [1] * degree
        shape[k] = grid.cells
        args += [e[:-1].reshape(shape), e[1:].reshape(shape)]
    vals = np.broadcast_to(np.asarray(integrals(*args), dtype=complex), (grid.cells,) * degree)
    avg = vals / grid.volume ** degree
    step = np.zeros((grid.cells, grid.multiplicity, CHANNELS) * degree, dtype=complex)
    index = tuple(x for _ in range(degree) for x in (slice(None), color - 1, 0))
    step[index] = avg
    if cell_variance is not None:
        if degree != 1:
            raise ValueError("in-cell residuals are only supported for degree 1")
        var = np.asarray(cell_variance(e[:-1], e[1:]), dtype=float)
        step[:, color - 1, 1] = np.sqrt(np.clip(var, 0.0, None) / grid.volume)
    return StepTensor(grid, 0.0, {degree: step.reshape((grid.leg,) * degree)},
                      profile or f"ingest-{id(integrals)}")


def _x_integrals(lo, hi):
    lo, hi = np.minimum(lo, 1.0), np.minimum(hi, 1.0)
    return (hi ** 2 - lo ** 2) / 2


def _x_variance(lo, hi):
    lo, hi = np.minimum(lo, 1.0), np.minimum(hi, 1.0)
    return (hi - lo) ** 3 / 12


def _exp_integrals(lo, hi):
    lo, hi = np.minimum(lo, 4.0), np.minimum(hi, 4.0)
    return np.exp(-lo) - np.exp(-hi)


def _exp_variance(lo, hi):
    lo, hi = np.minimum(lo, 4.0), np.minimum(hi, 4.0)
    w = hi - lo
    second = (np.exp(-2 * lo) - np.exp(-2 * hi)) / 2
    first = np.exp(-lo) - np.exp(-hi)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(w > 0, second - first ** 2 / np.where(w > 0, w, 1.0), 0.0)


def _unit_integrals(*edges):
    out = 1.0
    for lo, hi in zip(edges[::2], edges[1::2]):
        out = out * np.clip(np.minimum(hi, 1.0) - lo, 0.0, None)
    return out


TEST_VECTORS = ("vacuum", "indicator-unit", "x-on-unit", "square-indicator", "exp-decay")


def test_vector(name: str, grid: Grid) -> StepTensor:
    """Named test vectors; each is represented exactly on any grid covering its support."""
    if name == "vacuum":
        return StepTensor.vacuum(grid)
    support = 4.0 if name == "exp-decay" else 1.0
    if grid.horizon < support:
        raise ValueError(f"{name} needs horizon >= {support}")
    if name == "indicator-unit":
        return ingest(1, _unit_integrals, grid)
    if name == "x-on-unit":
        return ingest(1, _x_integrals, grid, _x_variance, profile=name)
    if name == "square-indicator":
        return ingest(2, _unit_integrals, grid)
    if name == "exp-decay":
        return ingest(1, _exp_integrals, grid, _exp_variance, profile=name)
    raise ValueError(f"unknown test vector {name!r}; choose from {TEST_VECTORS}")
