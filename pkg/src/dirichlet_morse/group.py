"""Generators, group elements with witness words, presets and orbits."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .errors import DegenerateInput, FixedBasePoint, UsageError
from .geometry import Isometry, Point, mink, vector_distance
from .tolerances import current as _tol

INVERSE_MARK = "⁻¹"  # superscript minus one


def formal_inverse_name(name: str) -> str:
    if name.endswith(INVERSE_MARK):
        return name[: -len(INVERSE_MARK)]
    return name + INVERSE_MARK


@dataclass(frozen=True)
class Letter:
    name: str
    matrix: Isometry
    inverse: str


@dataclass(frozen=True)
class GeneratorAlphabet:
    """Named generators, closed under formal inverses.

    A generator that is projectively an involution is its own inverse letter.
    """

    generators: Tuple[Tuple[str, Isometry], ...]
    metadata: Dict = field(default_factory=dict, compare=False)
    letters: Tuple[Letter, ...] = field(init=False, compare=False)

    def __post_init__(self):
        names = [n for n, _ in self.generators]
        if len(set(names)) != len(names):
            raise DegenerateInput("generator names must be unique")
        letters = []
        for name, m in self.generators:
            if not name or INVERSE_MARK in name:
                raise DegenerateInput(f"bad generator name {name!r}")
            if m.is_identity(1e-9):
                raise DegenerateInput(f"generator {name} is the identity")
            if (m @ m).is_identity(1e-9):
                letters.append(Letter(name, m, name))
            else:
                inv = formal_inverse_name(name)
                letters.append(Letter(name, m, inv))
                letters.append(Letter(inv, m.inverse(), name))
        object.__setattr__(self, "letters", tuple(letters))

    @classmethod
    def from_pairs(cls, pairs, **metadata) -> "GeneratorAlphabet":
        return cls(tuple((n, m) for n, m in pairs), dict(metadata))

    def letter(self, name: str) -> Letter:
        for letter in self.letters:
            if letter.name == name:
                return letter
        raise KeyError(name)

    def inverse_of(self, name: str) -> str:
        return self.letter(name).inverse

    def evaluate(self, word: Sequence[str]) -> Isometry:
        g = Isometry.identity()
        for name in word:
            g = g @ self.letter(name).matrix
        return g

    def invert_word(self, word: Sequence[str]) -> Tuple[str, ...]:
        return tuple(self.inverse_of(n) for n in reversed(word))

    def reduce(self, word: Sequence[str]) -> Tuple[str, ...]:
        out: List[str] = []
        for n in word:
            if out and self.inverse_of(out[-1]) == n:
                out.pop()
            else:
                out.append(n)
        return tuple(out)


@dataclass(frozen=True)
class GroupElement:
    matrix: Isometry
    word: Tuple[str, ...] = ()

    @property
    def name(self) -> str:
        return "".join(self.word) if self.word else "e"

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.matrix @ other.matrix, self.word + other.word)

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(Isometry.identity(), ())


# --------------------------------------------------------------------------
# presets


def preset_modular() -> GeneratorAlphabet:
    s = Isometry(0, -1, 1, 0)
    t = Isometry(1, 1, 0, 1)
    return GeneratorAlphabet.from_pairs(
        [("S", s), ("T", t)], preset="modular", default_center="0+2i"
    )


def preset_gamma2() -> GeneratorAlphabet:
    a = Isometry(1, 2, 0, 1)
    b = Isometry(1, 0, 2, 1)
    comm = a @ b @ a.inverse() @ b.inverse()
    return GeneratorAlphabet.from_pairs(
        [("A", a), ("B", b)],
        preset="gamma2",
        default_center="0+2i",
        commutator_trace=comm.trace(),
        commutator_parabolic=abs(abs(comm.trace()) - 2.0) < 1e-12,
    )


def ideal_square_offset() -> float:
    """Distance from the centre to a side of the regular ideal quadrilateral."""
    return math.log(1.0 + math.sqrt(2.0))


def preset_ideal_square() -> GeneratorAlphabet:
    # translation length 2d along the real diameter; on the half-plane this is z -> e^{2d} z
    d = ideal_square_offset()
    a = Isometry(math.exp(d), 0.0, 0.0, math.exp(-d))
    r = Isometry.rotation(math.pi / 2)
    b = r @ a @ r.inverse()
    return GeneratorAlphabet.from_pairs(
        [("A", a), ("B", b)],
        preset="ideal-square",
        default_center="0+1i",
        translation_length=2 * d,
        commutator_trace=(a @ b @ a.inverse() @ b.inverse()).trace(),
    )


PRESETS = {
    "modular": preset_modular,
    "gamma2": preset_gamma2,
    "ideal-square": preset_ideal_square,
}


def get_preset(name: str) -> GeneratorAlphabet:
    try:
        return PRESETS[name]()
    except KeyError:
        raise UsageError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


def load_group_file(path) -> GeneratorAlphabet:
    """Read ``{"generators": [{"name": "A", "matrix": [[a, b], [c, d]]}, ...]}``.

    A bare list of generator objects is accepted too.  Matrices are row-major
    and act on the upper half-plane.
    """
    with open(path) as fh:
        data = json.load(fh)
    gens = data["generators"] if isinstance(data, dict) else data
    meta = {k: v for k, v in data.items() if k != "generators"} if isinstance(data, dict) else {}
    try:
        pairs = [(str(g["name"]), Isometry.from_matrix(g["matrix"])) for g in gens]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed group file {path}: {exc}") from None
    return GeneratorAlphabet.from_pairs(pairs, **meta)


# --------------------------------------------------------------------------
# orbits


@dataclass(frozen=True)
class OrbitEntry:
    element: GroupElement
    vec: np.ndarray = field(repr=False, compare=False)

    @property
    def image(self) -> Point:
        return Point.from_vector(self.vec)


@dataclass(frozen=True)
class Orbit:
    base: Point
    entries: Tuple[OrbitEntry, ...]
    depth: int

    def __len__(self):
        return len(self.entries)


def orbit(alphabet: GeneratorAlphabet, base: Point, depth: int) -> Orbit:
    """Breadth-first images of ``base`` under reduced words of length <= depth."""
    if depth < 0:
        raise DegenerateInput("depth must be non-negative")
    tau = _tol().vertex
    x0 = base.vec
    ident = GroupElement.identity()
    seen = {ident.matrix.key()}
    entries = [OrbitEntry(ident, x0)]
    frontier = [ident]
    for _ in range(depth):
        nxt = []
        for g in frontier:
            last_inv = alphabet.inverse_of(g.word[-1]) if g.word else None
            for letter in alphabet.letters:
                if letter.name == last_inv:
                    continue
                h = GroupElement(g.matrix @ letter.matrix, g.word + (letter.name,))
                k = h.matrix.key()
                if k in seen:
                    continue
                seen.add(k)
                if h.matrix.is_identity(1e-7):
                    continue
                x = h.matrix.lorentz @ x0
                if vector_distance(x, x0) < tau:
                    raise FixedBasePoint(f"{h.name} fixes the base point (within {tau})")
                entries.append(OrbitEntry(h, x))
                nxt.append(h)
        frontier = nxt
    return Orbit(base, tuple(entries), depth)
