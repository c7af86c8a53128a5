"""The free toy Fock space of multiplicity N.

Vectors are sparse maps from adapted words to complex amplitudes. A
single-factor operator is an ``(N+1) x (N+1)`` matrix in the basis
``(Omega, X^1, ..., X^N)`` of one copy of ``C^{N+1}``; :func:`embed_apply`
lifts it to the whole free product.

Matrix convention: column ``c`` of ``M`` is the image of ``X^c``, so the
matrix unit sending ``X^i`` to ``X^j`` has a single 1 at ``[j, i]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .words import EMPTY, Word, is_adapted, make_word

PRUNE = 1e-15
TOL = 1e-10


class ToyVector:
    """Finitely supported vector over adapted words. Treated as immutable."""

    __slots__ = ("amplitudes", "multiplicity")

    def __init__(self, amplitudes: Mapping[Word, complex] | None = None, multiplicity: int = 1,
                 check: bool = True):
        amps = dict(amplitudes or {})
        if check:
            for w in amps:
                if not is_adapted(w) or any(c < 1 or c > multiplicity for _, c in w):
                    raise ValueError(f"invalid word {w!r} for multiplicity {multiplicity}")
        self.amplitudes: dict[Word, complex] = amps
        self.multiplicity = multiplicity

    @classmethod
    def vacuum(cls, multiplicity: int = 1) -> "ToyVector":
        return cls({EMPTY: 1.0}, multiplicity, check=False)

    @classmethod
    def basis(cls, w: Sequence, multiplicity: int = 1) -> "ToyVector":
        return cls({make_word(w, multiplicity): 1.0}, multiplicity, check=False)

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.amplitudes), default=0)

    def __getitem__(self, w: Word) -> complex:
        return self.amplitudes.get(tuple(w), 0.0)

    def __len__(self):
        return len(self.amplitudes)

    def items(self):
        return self.amplitudes.items()

    def _check(self, other: "ToyVector"):
        if self.multiplicity != other.multiplicity:
            raise ValueError("multiplicity mismatch")

    def __add__(self, other: "ToyVector") -> "ToyVector":
        self._check(other)
        out = dict(self.amplitudes)
        for w, a in other.amplitudes.items():
            out[w] = out.get(w, 0.0) + a
        return ToyVector(_pruned(out), self.multiplicity, check=False)

    def __sub__(self, other: "ToyVector") -> "ToyVector":
        return self + (-1.0) * other

    def __rmul__(self, c: complex) -> "ToyVector":
        return ToyVector(_pruned({w: c * a for w, a in self.amplitudes.items()}),
                         self.multiplicity, check=False)

    __mul__ = __rmul__

    def __neg__(self):
        return (-1.0) * self

    def truncate(self, max_len: int) -> "ToyVector":
        return ToyVector({w: a for w, a in self.amplitudes.items() if len(w) <= max_len},
                         self.multiplicity, check=False)

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values())))

    def allclose(self, other: "ToyVector", tol: float = TOL) -> bool:
        return (self - other).norm() <= tol

    def __repr__(self):
        return f"ToyVector({len(self.amplitudes)} words, N={self.multiplicity})"


def _pruned(amps: dict) -> dict:
    return {w: a for w, a in amps.items() if abs(a) > PRUNE}


def inner(v: ToyVector, w: ToyVector) -> complex:
    """``<v, w>``, antilinear in ``v``."""
    v._check(w)
    small, big = (v, w) if len(v) <= len(w) else (w, v)
    total = 0j
    for word_, a in small.amplitudes.items():
        b = big.amplitudes.get(word_)
        if b is not None:
            total += np.conj(a) * b if small is v else a * np.conj(b)
    return complex(total)


# -- single-factor operators -------------------------------------------------


@dataclass(frozen=True, eq=False)
class SiteMatrix:
    """An operator on the ``site``-th copy of ``C^{N+1}``."""

    entries: np.ndarray
    site: int

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise ValueError(f"site matrix must be square of size >= 2, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("site matrix has non-finite entries")
        if self.site < 0:
            raise ValueError("site must be non-negative")
        object.__setattr__(self, "entries", m)

    @property
    def multiplicity(self) -> int:
        return self.entries.shape[0] - 1


def unit_matrix(src: int, dst: int, multiplicity: int = 1) -> np.ndarray:
    """Matrix unit sending ``X^src`` to ``X^dst`` (``X^0`` is the vacuum)."""
    if not (0 <= src <= multiplicity and 0 <= dst <= multiplicity):
        raise ValueError(f"matrix unit indices ({src}, {dst}) outside 0..{multiplicity}")
    m = np.zeros((multiplicity + 1, multiplicity + 1), dtype=complex)
    m[dst, src] = 1.0
    return m


ELEMENTARY = {
    "+": unit_matrix(0, 1),
    "-": unit_matrix(1, 0),
    "o": unit_matrix(1, 1),
    "x": unit_matrix(0, 0),
}


def _eps(e: str) -> str:
    aliases = {"∘": "o", "×": "x", "gauge": "o", "times": "x", "plus": "+", "minus": "-"}
    e = aliases.get(e, e)
    if e not in ELEMENTARY:
        raise ValueError(f"unknown elementary operator {e!r}")
    return e


def embed_apply(m: SiteMatrix, v: ToyVector) -> ToyVector:
    """Apply the free-product lift of a single-factor matrix to ``v``."""
    if m.multiplicity != v.multiplicity:
        raise ValueError(f"multiplicity mismatch: matrix {m.multiplicity}, vector {v.multiplicity}")
    k, mat = m.site, m.entries
    n = mat.shape[0]
    nz_cols = [np.flatnonzero(mat[:, c]) for c in range(n)]
    out: dict[Word, complex] = {}
    for w, a in v.amplitudes.items():
        if w and w[0][0] == k:
            col, rest = w[0][1], w[1:]
        else:
            col, rest = 0, w
        for r in nz_cols[col]:
            key = rest if r == 0 else ((k, int(r)),) + rest
            out[key] = out.get(key, 0.0) + mat[r, col] * a
    return ToyVector(_pruned(out), v.multiplicity, check=False)


def apply_elementary(eps: str, site: int, v: ToyVector) -> ToyVector:
    """The four basic operators of multiplicity one, acting on basis words directly."""
    if v.multiplicity != 1:
        raise ValueError("apply_elementary requires multiplicity 1; use embed_apply")
    eps = _eps(eps)
    letter = (site, 1)
    out: dict[Word, complex] = {}
    for w, a in v.amplitudes.items():
        head = bool(w) and w[0][0] == site
        if eps == "+":
            if not head:
                out[(letter,) + w] = a
        elif eps == "-":
            if head:
                out[w[1:]] = a
        elif eps == "o":
            if head:
                out[w] = a
        else:
            if not head:
                out[w] = a
    return ToyVector(out, 1, check=False)


# -- operator expressions ----------------------------------------------------


class ToyOperator:
    """Formal expression over site matrices.

    ``*`` composes two operators (right factor acts first) or scales by a
    number; ``+``/``-`` add; ``**`` is a power.
    """

    multiplicity: int

    def apply(self, v: ToyVector) -> ToyVector:
        raise NotImplementedError

    def factors(self) -> list["ToyOperator"]:
        """Flatten into a product of factors, leftmost first."""
        return [self]

    def sites(self) -> frozenset[int]:
        """Factors of the free product this expression touches."""
        return frozenset()

    def __call__(self, v: ToyVector) -> ToyVector:
        return self.apply(v)

    def __add__(self, other):
        if not isinstance(other, ToyOperator):
            return NotImplemented
        return Sum(((1.0, self), (1.0, other)))

    def __sub__(self, other):
        if not isinstance(other, ToyOperator):
            return NotImplemented
        return Sum(((1.0, self), (-1.0, other)))

    def __neg__(self):
        return Sum(((-1.0, self),))

    def __mul__(self, other):
        if isinstance(other, ToyOperator):
            return Product((self, other))
        return Sum(((complex(other), self),))

    def __rmul__(self, other):
        return Sum(((complex(other), self),))

    __matmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        return Power(self, int(k))


@dataclass(frozen=True, eq=False)
class Site(ToyOperator):
    matrix: SiteMatrix

    @property
    def multiplicity(self):
        return self.matrix.multiplicity

    def sites(self):
        return frozenset((self.matrix.site,))

    def apply(self, v):
        return embed_apply(self.matrix, v)


@dataclass(frozen=True, eq=False)
class Identity(ToyOperator):
    multiplicity: int = 1

    def apply(self, v):
        return v


@dataclass(frozen=True, eq=False)
class Sum(ToyOperator):
    terms: tuple[tuple[complex, ToyOperator], ...]

    @property
    def multiplicity(self):
        return self.terms[0][1].multiplicity

    def sites(self):
        return frozenset().union(*(op.sites() for _, op in self.terms))

    def apply(self, v):
        out: dict[Word, complex] = {}
        for c, op in self.terms:
            for w, a in op.apply(v).amplitudes.items():
                out[w] = out.get(w, 0.0) + c * a
        return ToyVector(_pruned(out), v.multiplicity, check=False)


@dataclass(frozen=True, eq=False)
class Product(ToyOperator):
    ops: tuple[ToyOperator, ...]

    @property
    def multiplicity(self):
        return self.ops[0].multiplicity

    def factors(self):
        return [f for op in self.ops for f in op.factors()]

    def sites(self):
        return frozenset().union(*(op.sites() for op in self.ops))

    def apply(self, v):
        for op in reversed(self.ops):
            v = op.apply(v)
        return v


@dataclass(frozen=True, eq=False)
class Power(ToyOperator):
    base: ToyOperator
    exponent: int

    @property
    def multiplicity(self):
        return self.base.multiplicity

    def factors(self):
        return self.base.factors() * self.exponent

    def sites(self):
        return self.base.sites()

    def apply(self, v):
        for _ in range(self.exponent):
            v = self.base.apply(v)
        return v


def site_op(matrix, site: int) -> Site:
    return Site(SiteMatrix(np.asarray(matrix), site))


def elementary(eps: str, site: int) -> Site:
    return site_op(ELEMENTARY[_eps(eps)], site)


def matrix_unit(src: int, dst: int, site: int, multiplicity: int = 1) -> Site:
    return site_op(unit_matrix(src, dst, multiplicity), site)


def operator_sum(ops: Iterable[ToyOperator], scale: complex = 1.0) -> ToyOperator:
    return Sum(tuple((scale, op) for op in ops))


# -- states ------------------------------------------------------------------


def apply_pruned(ops: Sequence[ToyOperator], v: ToyVector) -> ToyVector:
    """Apply ``ops[0] ... ops[-1]`` to ``v``, keeping only words that can still reach the vacuum.

    Each factor changes word length by at most one, so after the ``j``-th
    application from the right only words of length ``<= len(ops) - j``
    contribute to the vacuum amplitude of the full product.
    """
    remaining = len(ops)
    for op in reversed(ops):
        remaining -= 1
        v = op.apply(v).truncate(remaining)
    return v


def vacuum_state(expr: ToyOperator, multiplicity: int | None = None) -> complex:
    """``<Omega, expr Omega>``."""
    n = multiplicity or expr.multiplicity
    out = apply_pruned(expr.factors(), ToyVector.vacuum(n))
    return complex(out[EMPTY])


def alternating_moment(factors: Sequence[tuple[ToyOperator, int]]) -> complex:
    """Vacuum expectation of the ordered product of ``(operator, site)`` factors.

    Adjacent equal sites are allowed (the value then need not vanish). Each
    operator must act on its declared site only.
    """
    if not factors:
        return 1.0 + 0j
    for op, site in factors:
        if not op.sites() <= {site}:
            raise ValueError(f"factor acts on sites {sorted(op.sites())}, expected {site}")
    ops = [op for op, _ in factors]
    out = apply_pruned(ops, ToyVector.vacuum(ops[0].multiplicity))
    return complex(out[EMPTY])


def centered(matrix: np.ndarray) -> np.ndarray:
    """Subtract the vacuum expectation ``<Omega_i, M Omega_i>`` times the identity."""
    m = np.asarray(matrix, dtype=complex)
    return m - m[0, 0] * np.eye(m.shape[0])
