"""Admissible words, block sets and the chain of copies a word walks through."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Sequence, Tuple, Union

import numpy as np

from ..dirichlet import DirichletDomain
from ..errors import InadmissibleWord
from ..geometry import BoundaryPoint, Point, Segment
from ..group import GroupElement

Word = Tuple[str, ...]


def as_word(word: Union[str, Sequence[str]]) -> Word:
    """Accept a tuple of letters or a comma separated string."""
    if isinstance(word, str):
        return tuple(w.strip() for w in word.split(",") if w.strip())
    return tuple(word)


def _check_letters(domain: DirichletDomain, word: Word):
    labels = set(domain.labels)
    for w in word:
        if w not in labels:
            raise InadmissibleWord(f"{w!r} is not a label of the domain ({', '.join(domain.labels)})")


def admissible(domain: DirichletDomain, word: Sequence[str]) -> bool:
    """No letter is immediately followed by its inverse."""
    word = as_word(word)
    _check_letters(domain, word)
    return all(domain.inverse_label(a) != b for a, b in zip(word, word[1:]))


def require_admissible(domain: DirichletDomain, word: Sequence[str]) -> Word:
    word = as_word(word)
    if not admissible(domain, word):
        raise InadmissibleWord(f"word {','.join(word)} contains a letter followed by its inverse")
    return word


def enumerate_admissible(domain: DirichletDomain, k: int) -> List[Word]:
    """All admissible words of length k, lexicographic in the edge order of the domain."""
    if k < 0:
        raise ValueError("k must be non-negative")
    labels = domain.labels
    inv = {a: domain.inverse_label(a) for a in labels}
    out: List[Word] = [()]
    for _ in range(k):
        out = [w + (a,) for w in out for a in labels if not w or inv[w[-1]] != a]
    return out


def admissible_count(n: int, k: int) -> int:
    return 1 if k == 0 else n * (n - 1) ** (k - 1)


@dataclass(frozen=True)
class BlockSet:
    k: int
    blocks: FrozenSet[Word]

    def __len__(self):
        return len(self.blocks)

    def __contains__(self, block):
        return tuple(block) in self.blocks


def blocks_of(words: Iterable[Sequence[str]], k: int) -> BlockSet:
    """The (k+1)-blocks occurring as factors of the given words."""
    m = k + 1
    found = set()
    for w in words:
        w = tuple(w)
        for i in range(len(w) - m + 1):
            found.add(w[i:i + m])
    return BlockSet(k, frozenset(found))


# --------------------------------------------------------------------------
# chain of copies


@dataclass(frozen=True)
class ChainEdge:
    """Edge shared by copies i and i+1, oriented as an edge of copy i.

    The domain copy i lies to the left of ``start -> end``; a geodesic reading
    the letter leaves copy i with ``start`` on its right and ``end`` on its left.
    """

    local_index: int
    start: Union[Point, BoundaryPoint]
    end: Union[Point, BoundaryPoint]
    start_vec: np.ndarray = field(repr=False, compare=False)
    end_vec: np.ndarray = field(repr=False, compare=False)

    @property
    def segment(self) -> Segment:
        return Segment.between(self.start, self.end)

    @property
    def boundary_ends(self):
        if isinstance(self.start, BoundaryPoint) and isinstance(self.end, BoundaryPoint):
            return self.start.theta, self.end.theta
        return None


@dataclass(frozen=True)
class DomainChain:
    word: Word
    elements: Tuple[GroupElement, ...]
    shared_edges: Tuple[ChainEdge, ...]

    def __len__(self):
        return len(self.shared_edges)


def _end(vec, finite):
    return Point.from_vector(vec) if finite else BoundaryPoint.from_vector(vec)


def domain_chain(domain: DirichletDomain, word: Sequence[str]) -> DomainChain:
    word = require_admissible(domain, word)
    g = GroupElement.identity()
    elements = [g]
    shared = []
    for name in word:
        i = domain.label_index(name)
        e = domain.edges[i]
        lor = g.matrix.lorentz
        vs, ve = domain.vertices[e.start], domain.vertices[e.end]
        xs, xe = lor @ vs.vec, lor @ ve.vec
        if not vs.is_finite:
            xs = xs / xs[2]
        if not ve.is_finite:
            xe = xe / xe[2]
        shared.append(ChainEdge(i, _end(xs, vs.is_finite), _end(xe, ve.is_finite), xs, xe))
        g = GroupElement(g.matrix @ e.label.matrix, g.word + e.label.word)
        elements.append(g)
    return DomainChain(word, tuple(elements), tuple(shared))


def factors(word: Sequence[str], length: int) -> List[Word]:
    word = tuple(word)
    return [word[i:i + length] for i in range(len(word) - length + 1)]


def random_admissible(domain: DirichletDomain, length: int, rng: np.random.Generator) -> Word:
    labels = domain.labels
    out: List[str] = []
    for _ in range(length):
        choices = [a for a in labels if not out or domain.inverse_label(out[-1]) != a]
        out.append(choices[int(rng.integers(len(choices)))])
    return tuple(out)

