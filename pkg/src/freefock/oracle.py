"""Non-crossing partitions and the free moment-cumulant machinery.

Everything here is plain combinatorics, independent of any operator model.
Moment and cumulant sequences are 1-indexed lists ``[m_1, ..., m_k]``; the
arithmetic is generic, so ``Fraction`` inputs give exact results.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import comb, fsum, prod
from typing import Sequence

MAX_ORDER = 12

Partition = tuple[tuple[int, ...], ...]


def catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


@lru_cache(maxsize=None)
def _nc(elements: tuple[int, ...]) -> list[Partition]:
    # the block containing the first element splits the rest into independent gaps
    if not elements:
        return [()]
    first, rest = elements[0], elements[1:]
    out = []
    for mask in range(1 << len(rest)):
        chosen = [i for i in range(len(rest)) if mask >> i & 1]
        block = (first,) + tuple(rest[i] for i in chosen)
        cuts = [-1] + chosen + [len(rest)]
        gaps = [rest[a + 1:b] for a, b in zip(cuts, cuts[1:])]
        combos = [[block]]
        for gap in gaps:
            combos = [c + list(p) for c in combos for p in _nc(gap)]
        out.extend(tuple(c) for c in combos)
    return out


@lru_cache(maxsize=None)
def noncrossing_partitions(k: int) -> tuple[Partition, ...]:
    """All non-crossing partitions of ``{1..k}``; blocks and elements sorted."""
    if not 1 <= k <= MAX_ORDER:
        raise ValueError(f"k must be in 1..{MAX_ORDER}")
    return tuple(_nc(tuple(range(1, k + 1))))


def is_noncrossing(partition: Partition) -> bool:
    owner = {x: i for i, block in enumerate(partition) for x in block}
    elems = sorted(owner)
    for a in elems:
        for b in elems:
            if b <= a or owner[a] == owner[b]:
                continue
            for c in elems:
                if c <= b or owner[c] != owner[a]:
                    continue
                for d in elems:
                    if d > c and owner[d] == owner[b]:
                        return False
    return True


@lru_cache(maxsize=None)
def _block_profile(k: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Multiset of block sizes over NC(k), with multiplicities."""
    c = Counter(tuple(sorted(len(b) for b in p)) for p in noncrossing_partitions(k))
    return tuple(sorted(c.items()))


def _summer(values: Sequence):
    # exact rationals stay exact; floats get a compensated sum
    return fsum if all(isinstance(v, float) for v in values) else sum


def cumulants_to_moments(kappa: Sequence) -> list:
    """``m_n = sum over NC(n) of prod kappa_|V|`` for ``n = 1..len(kappa)``."""
    total = _summer(kappa)
    out = []
    for n in range(1, len(kappa) + 1):
        out.append(total(mult * prod(kappa[s - 1] for s in sizes)
                       for sizes, mult in _block_profile(n)))
    return out


def moments_to_cumulants(moments: Sequence) -> list:
    """Inverse of :func:`cumulants_to_moments`; the one-block term carries ``kappa_n``."""
    total = _summer(moments)
    kappa: list = []
    for n in range(1, len(moments) + 1):
        lower = total(mult * prod(kappa[s - 1] for s in sizes)
                    for sizes, mult in _block_profile(n) if sizes != (n,))
        kappa.append(moments[n - 1] - lower)
    return kappa


def measure_moments(atoms: Sequence[tuple[float, float]], k: int) -> list:
    """``[m_1..m_k]`` of a discrete measure given as ``(location, weight)`` pairs."""
    return [sum(w * x ** j for x, w in atoms) for j in range(1, k + 1)]


def free_sum_moments(base_moments: Sequence, summands: int, scale=1.0, max_order: int | None = None) -> list:
    """Moments of ``scale * (x_1 + ... + x_s)`` for free copies ``x_j`` of the base law."""
    if summands < 1:
        raise ValueError("summands must be >= 1")
    k = len(base_moments) if max_order is None else max_order
    if k > len(base_moments):
        raise ValueError("not enough base moments")
    # rescale the law first: keeps intermediate magnitudes O(1) for large s
    scaled = [m * scale ** (j + 1) for j, m in enumerate(base_moments[:k])]
    kappa = moments_to_cumulants(scaled)
    return cumulants_to_moments([summands * c for c in kappa])


def semicircle_moments(k: int, variance=1.0) -> list:
    return [0 * variance if j % 2 else catalan(j // 2) * variance ** (j // 2) for j in range(1, k + 1)]


def free_poisson_moments(k: int, rate=1.0) -> list:
    """``sum over NC(j) of rate^|pi|``: all free cumulants equal ``rate``."""
    return cumulants_to_moments([rate] * k)
