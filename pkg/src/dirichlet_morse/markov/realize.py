"""Does some geodesic read a given word?

A geodesic reads ``w`` from the identity copy exactly when it crosses every
shared edge of the chain of copies of ``w`` with the edge's start on its right
and its end on its left.  Three ways of answering are provided:

* ideal domains: nested boundary arcs give a witness directly;
* separation certificates: a geodesic ``c`` with chain edges i < j < l whose
  interiors lie on sides R, L, R of ``c`` (or L, R, L) rules the word out,
  because any geodesic crossing all three would meet ``c`` twice;
* subdivision of the torus of endpoint pairs with interval side tests.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..coder import walk
from ..dirichlet import DirichletDomain
from ..errors import NestingViolation, NonGeneric, NotIdeal
from ..geometry import (
    TWO_PI,
    BoundaryPoint,
    DirectedGeodesic,
    Point,
    Segment,
    Side,
    boost_from,
    ccw_length,
    geodesic_normal_at,
    geodesic_through,
    ideal_vector,
    side_of,
    wrap,
)
from ..group import GroupElement
from ..errors import DegenerateInput
from .words import DomainChain, Word, domain_chain, require_admissible

DEFAULT_RESOLUTION = 1e-9
DEFAULT_MAX_RECTANGLES = 50_000
# fractions tried inside an arc or rectangle, midpoint first
_GRID_OFFSET = (0.1234567890123, 0.3141592653589 * math.sqrt(2.0))
_FRACTIONS = (0.5, 0.381966011250105, 0.618033988749895, 0.3, 0.7, 0.45, 0.55, 0.2, 0.8)


@dataclass(frozen=True)
class Realizable:
    witness: DirectedGeodesic
    status = "realizable"


@dataclass(frozen=True)
class SeparationCertificate:
    """Chain edges whose position relative to ``geodesic`` rules the word out.

    Either three edges i < j < l with interiors strictly on sides (s, t, s),
    t opposite to s, or two edges both lying on ``geodesic`` (sides ON, ON).
    A geodesic crossing the listed edges would have to meet ``geodesic`` twice.
    """

    geodesic: DirectedGeodesic
    edges: Tuple[int, ...]
    sides: Tuple[Side, ...]
    segments: Tuple[Segment, ...]

    def recheck(self) -> bool:
        """Re-verify with side tests alone."""
        if list(self.edges) != sorted(set(self.edges)) or len(self.segments) != len(self.edges):
            return False
        ends = [(side_of(self.geodesic, seg.e1), side_of(self.geodesic, seg.e2)) for seg in self.segments]
        if len(self.edges) == 2:
            return self.sides == (Side.ON, Side.ON) and all(e == (Side.ON, Side.ON) for e in ends)
        if len(self.edges) != 3:
            return False
        if self.sides[0] is not self.sides[2] or self.sides[1] is self.sides[0] or Side.ON in self.sides:
            return False
        for got, want in zip(ends, self.sides):
            if any(s not in (want, Side.ON) for s in got) or got == (Side.ON, Side.ON):
                return False
        return True


@dataclass(frozen=True)
class SubdivisionCertificate:
    rectangles: int
    max_depth: int


@dataclass(frozen=True)
class Unrealizable:
    certificate: Union[SeparationCertificate, SubdivisionCertificate]
    status = "unrealizable"


@dataclass(frozen=True)
class Unknown:
    resolution: float
    undecided: int
    status = "unknown"


@dataclass(frozen=True)
class RealizabilityResult:
    word: Word
    verdict: Union[Realizable, Unrealizable, Unknown]

    @property
    def status(self) -> str:
        return self.verdict.status

    @property
    def realizable(self) -> bool:
        return isinstance(self.verdict, Realizable)


def reads_word(domain: DirichletDomain, gamma: DirectedGeodesic, word: Word,
               start: Optional[GroupElement] = None) -> bool:
    """Trace ``gamma`` from ``start`` (the identity copy by default) and compare."""
    start = GroupElement.identity() if start is None else start
    try:
        cs = walk(domain, gamma, start, len(word))
    except NonGeneric:
        return False
    return cs.word == tuple(word)


def _generic_through_domain(domain: DirichletDomain) -> DirectedGeodesic:
    c = domain.center.vec
    for k in range(64):
        psi = wrap(k * 2.399963229728653)  # golden angle steps
        gamma = DirectedGeodesic.from_normal(geodesic_normal_at(c, psi))
        try:
            walk(domain, gamma, GroupElement.identity(), 0)
            return gamma
        except NonGeneric:
            continue
    raise NonGeneric("no generic geodesic through the domain centre found")


# --------------------------------------------------------------------------
# ideal domains


def realize_word_ideal(domain: DirichletDomain, word: Sequence[str]) -> RealizabilityResult:
    """Witness from the innermost forward and backward arcs of the chain."""
    if not domain.is_ideal:
        raise NotIdeal("domain has finite vertices")
    word = require_admissible(domain, word)
    if not word:
        return RealizabilityResult(word, Realizable(_generic_through_domain(domain)))
    chain = domain_chain(domain, word)
    arcs = []  # forward arc of edge i: counter-clockwise from its start to its end
    for e in chain.shared_edges:
        p, q = e.boundary_ends
        arcs.append((p, ccw_length(p, q)))
    for (p0, l0), (p1, l1) in zip(arcs, arcs[1:]):
        d = ccw_length(p0, p1)
        if d > TWO_PI - 1e-9:  # shared endpoint, rounded the wrong way
            d -= TWO_PI
        if not (d >= -1e-9 and d + l1 <= l0 + 1e-9):
            raise NestingViolation(f"forward arcs do not nest at {p1}")
    fp, fl = arcs[-1]
    q0, p0 = chain.shared_edges[0].boundary_ends[1], chain.shared_edges[0].boundary_ends[0]
    bl = ccw_length(q0, p0)
    for ft in _FRACTIONS:
        for bt in _FRACTIONS:
            gamma = DirectedGeodesic.from_angles(wrap(q0 + bt * bl), wrap(fp + ft * fl))
            if reads_word(domain, gamma, word):
                return RealizabilityResult(word, Realizable(gamma))
    raise NonGeneric("no arc point gave a generic witness")


# --------------------------------------------------------------------------
# separation certificates


def _edge_status(vals, tol):
    """'R' / 'L' when the open edge lies strictly on that side, else None."""
    a, b = vals
    on_a, on_b = abs(a) < tol, abs(b) < tol
    if on_a and on_b:
        return "C"
    if (a < 0 or on_a) and (b < 0 or on_b):
        return "R"
    if (a > 0 or on_a) and (b > 0 or on_b):
        return "L"
    return None


def _pattern(statuses):
    on = [i for i, s in enumerate(statuses) if s == "C"]
    if len(on) >= 2:
        return on[0], on[1]
    for outer, inner in (("R", "L"), ("L", "R")):
        idx = [i for i, s in enumerate(statuses) if s == outer]
        if len(idx) < 2:
            continue
        i, l = idx[0], idx[-1]
        for j in range(i + 1, l):
            if statuses[j] == inner:
                return i, j, l
    return None


_SIDE = {"R": Side.RIGHT, "L": Side.LEFT, "C": Side.ON}


def separation_certificate(domain: DirichletDomain, chain: DomainChain,
                           extra: Sequence[DirectedGeodesic] = ()) -> Optional[SeparationCertificate]:
    """Search geodesics through pairs of chain vertices (plus ``extra``)."""
    from ..tolerances import current

    tol = current().on
    ends = []
    seen = []
    for e in chain.shared_edges:
        for p in (e.start, e.end):
            v = p.vec
            if not any(np.allclose(v, s, atol=1e-9) for s in seen):
                seen.append(v)
                ends.append(p)
    candidates = list(extra)
    for p, q in itertools.combinations(ends, 2):
        try:
            candidates.append(geodesic_through(p, q))
        except DegenerateInput:
            continue
    edges = chain.shared_edges
    for c in candidates:
        n = c.normal
        statuses = []
        for e in edges:
            vals = (float(e.start.vec @ (np.array([1, 1, -1]) * n)), float(e.end.vec @ (np.array([1, 1, -1]) * n)))
            statuses.append(_edge_status(vals, tol))
        hit = _pattern(statuses)
        if hit is None:
            continue
        cert = SeparationCertificate(
            c, hit, tuple(_SIDE[statuses[k]] for k in hit), tuple(edges[k].segment for k in hit)
        )
        if cert.recheck():
            return cert
    return None


# --------------------------------------------------------------------------
# subdivision


class _Constraints:
    """Side requirements for every chain vertex, evaluated on rectangles of endpoint pairs."""

    def __init__(self, chain: DomainChain):
        finite, boundary = [], []
        for e in chain.shared_edges:
            for p, want in ((e.start, -1), (e.end, 1)):
                if isinstance(p, Point):
                    finite.append((boost_from(p.vec), want))
                else:
                    boundary.append((p.theta, want))
        self.boosts = np.array([b for b, _ in finite]) if finite else np.zeros((0, 3, 3))
        self.fwant = np.array([w for _, w in finite], dtype=int)
        self.alphas = np.array([a for a, _ in boundary])
        self.bwant = np.array([w for _, w in boundary], dtype=int)
        self.size = len(finite) + len(boundary)

    def _f(self, idx, theta):
        v = self.boosts[idx] @ ideal_vector(theta)
        return np.mod(np.arctan2(v[..., 1], v[..., 0]), TWO_PI)

    def evaluate(self, rect, fidx, bidx):
        """Statuses (+1 satisfied, -1 violated, 0 undecided) for the given constraint indices."""
        a, la, b, lb = rect
        fs = np.zeros(len(fidx), dtype=int)
        bs = np.zeros(len(bidx), dtype=int)
        if len(fidx) and la < math.pi and lb < math.pi:
            fa1, fa2 = self._f(fidx, a), self._f(fidx, a + la)
            fb1, fb2 = self._f(fidx, b), self._f(fidx, b + lb)
            wa = np.mod(fa2 - fa1, TWO_PI)
            wb = np.mod(fb2 - fb1, TWO_PI)
            lo = np.mod(fb1 - fa2, TWO_PI)
            hi = lo + wa + wb
            side = np.where((lo > 0) & (hi < math.pi), 1, np.where((lo > math.pi) & (hi < TWO_PI), -1, 0))
            fs = np.where(side == 0, 0, np.where(side == self.fwant[fidx], 1, -1))
        if len(bidx):
            overlap = ccw_length(a, b) <= la or ccw_length(b, a) <= lb
            if not overlap:
                al = self.alphas[bidx]
                in_a = np.mod(al - a, TWO_PI) <= la
                in_b = np.mod(al - b, TWO_PI) <= lb
                tp, tm = wrap(b + lb / 2), wrap(a + la / 2)
                left = np.mod(al - tp, TWO_PI) < ccw_length(tp, tm)
                side = np.where(left, 1, -1)
                bs = np.where(in_a | in_b, 0, np.where(side == self.bwant[bidx], 1, -1))
        return fs, bs


def realize_word(domain: DirichletDomain, word: Sequence[str], resolution: float = DEFAULT_RESOLUTION,
                 max_rectangles: int = DEFAULT_MAX_RECTANGLES, certificate_first: bool = True,
                 extra_separators: Sequence[DirectedGeodesic] = ()) -> RealizabilityResult:
    """Decide realizability of a finite word, with a witness or a certificate."""
    word = require_admissible(domain, word)
    if not word:
        return RealizabilityResult(word, Realizable(_generic_through_domain(domain)))
    chain = domain_chain(domain, word)
    if certificate_first:
        cert = separation_certificate(domain, chain, extra_separators)
        if cert is not None:
            return RealizabilityResult(word, Unrealizable(cert))
    cons = _Constraints(chain)
    all_f = np.arange(len(cons.fwant))
    all_b = np.arange(len(cons.bwant))
    counter = itertools.count()
    # offsets keep the dyadic grid away from angles like k pi / 4 where presets have vertices
    root = (_GRID_OFFSET[0], TWO_PI, _GRID_OFFSET[1], TWO_PI)
    heap = [(cons.size, 0, next(counter), root, all_f, all_b)]
    processed = 0
    floor_hits = 0
    max_depth = 0
    rng = np.random.default_rng(0)
    while heap:
        if processed >= max_rectangles:
            return RealizabilityResult(word, Unknown(resolution, len(heap) + floor_hits))
        _, depth, _, rect, fidx, bidx = heapq.heappop(heap)
        processed += 1
        max_depth = max(max_depth, depth)
        fs, bs = cons.evaluate(rect, fidx, bidx)
        if (fs < 0).any() or (bs < 0).any():
            continue
        fidx, bidx = fidx[fs == 0], bidx[bs == 0]
        a, la, b, lb = rect
        if len(fidx) == 0 and len(bidx) == 0:
            for s, t in itertools.islice(itertools.chain([(0.5, 0.5)], rng.uniform(0.05, 0.95, (8, 2))), 9):
                gamma = DirectedGeodesic.from_angles(wrap(a + s * la), wrap(b + t * lb))
                if reads_word(domain, gamma, word):
                    return RealizabilityResult(word, Realizable(gamma))
        if max(la, lb) < resolution:
            floor_hits += 1
            continue
        if la >= lb:
            halves = [(a, la / 2, b, lb), (a + la / 2, la / 2, b, lb)]
        else:
            halves = [(a, la, b, lb / 2), (a, la, b + lb / 2, lb / 2)]
        pending = len(fidx) + len(bidx)
        for r in halves:
            heapq.heappush(heap, (pending, depth + 1, next(counter), r, fidx, bidx))
    if floor_hits:
        return RealizabilityResult(word, Unknown(resolution, floor_hits))
    return RealizabilityResult(word, Unrealizable(SubdivisionCertificate(processed, max_depth)))
