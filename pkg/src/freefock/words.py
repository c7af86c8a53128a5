"""Adapted words: the basis index set of the free toy Fock space.

A word is a tuple of letters ``(site, color)``. Neighbouring letters must
sit on distinct sites; colors are unconstrained and range over ``1..N``.
The empty tuple is the vacuum word.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Sequence

Letter = tuple[int, int]
Word = tuple[Letter, ...]

EMPTY: Word = ()


def is_adapted(letters: Sequence[Letter]) -> bool:
    return all(a[0] != b[0] for a, b in zip(letters, letters[1:]))


def word(*sites: int, color: int = 1) -> Word:
    """Build a single-color word from site indices, e.g. ``word(1, 2, 1)``."""
    return tuple((s, color) for s in sites)


def make_word(letters: Iterable[Sequence[int]], multiplicity: int | None = None) -> Word:
    """Validate and normalize ``letters`` into a :data:`Word`."""
    w = tuple((int(s), int(c)) for s, c in letters)
    for s, c in w:
        if s < 0:
            raise ValueError(f"negative site {s}")
        if c < 1 or (multiplicity is not None and c > multiplicity):
            raise ValueError(f"color {c} outside 1..{multiplicity or 'N'}")
    if not is_adapted(w):
        raise ValueError(f"word {w} has equal neighbouring sites")
    return w


def sites_of(w: Word) -> tuple[int, ...]:
    return tuple(s for s, _ in w)


def word_key(w: Word) -> tuple:
    """Length-first, then lexicographic on ``(site, color)`` pairs."""
    return (len(w), w)


def adapted_count(site_count: int, multiplicity: int, max_len: int) -> int:
    """Closed-form number of adapted words of length ``<= max_len``."""
    m, n = site_count, multiplicity
    return 1 + sum(m * n * ((m - 1) * n) ** (l - 1) for l in range(1, max_len + 1))


def enumerate_adapted(site_count: int, multiplicity: int = 1, max_len: int = 3) -> list[Word]:
    """All adapted words over sites ``0..m-1`` and colors ``1..N`` in canonical order."""
    if site_count < 1 or multiplicity < 1:
        raise ValueError("site_count and multiplicity must be >= 1")
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    letters = list(product(range(site_count), range(1, multiplicity + 1)))
    out: list[Word] = [EMPTY]
    layer: list[Word] = [EMPTY]
    for _ in range(max_len):
        # extending in sorted letter order keeps each layer lexicographically sorted
        layer = [w + (l,) for w in layer for l in letters if not w or w[-1][0] != l[0]]
        out.extend(layer)
    return out


def group_by_site(w: Word) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """Group maximal runs of equal sites of a (not necessarily adapted) word.

    An arbitrary word over ``m`` sites is a basis tensor of the full Fock
    space over ``m`` orthogonal summands; its runs are the letters of the
    corresponding free-product basis element.
    """
    runs: list[tuple[int, list[int]]] = []
    for s, c in w:
        if runs and runs[-1][0] == s:
            runs[-1][1].append(c)
        else:
            runs.append((s, [c]))
    return tuple((s, tuple(cs)) for s, cs in runs)
