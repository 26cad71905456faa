"""Cutting sequences of directed geodesics across the tessellation.

Tracing keeps the geodesic's endpoints in the frame of the current copy: on
leaving copy ``g D`` through the edge labelled ``h`` the endpoints are pulled
back by ``h^-1`` and the walk continues in ``D`` itself.  The crossed edges of
the current copy are found from the signs of the vertices with respect to the
geodesic, so no intersection points are ever computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .dirichlet import DirichletDomain
from .errors import DegenerateInput, NonGeneric, NonTerminating, OnBoundary, SamplingExhausted
from .geometry import (
    TWO_PI,
    BoundaryPoint,
    DirectedGeodesic,
    Isometry,
    J,
    Point,
    angular_gap,
    mink,
    normal_through,
    normalize_null,
    normalize_spacelike,
)
from .group import GroupElement
from .tolerances import current as _tol

_JD = np.array([1.0, 1.0, -1.0])


@dataclass(frozen=True)
class TraceConfig:
    max_steps: int = 25
    margin: Optional[float] = None  # genericity margin; None -> tolerances.margin
    basepoint: Optional[Point] = None

    def __post_init__(self):
        if self.max_steps < 0:
            raise DegenerateInput("max_steps must be >= 0")
        if self.margin is not None and not self.margin > 0:
            raise DegenerateInput("genericity margin must be positive")

    @property
    def delta(self) -> float:
        return _tol().margin if self.margin is None else self.margin


@dataclass(frozen=True)
class CuttingSequence:
    word: Tuple[str, ...]
    start_element: GroupElement
    geodesic: DirectedGeodesic
    complete: Tuple[bool, bool]  # (backward end, forward end); False = truncated by the window
    chain: Tuple[GroupElement, ...] = field(default=(), repr=False)
    offset: int = 0  # index in ``word`` of the first letter read after the start copy

    def __len__(self):
        return len(self.word)


def _pullbacks(domain: DirichletDomain):
    cached = domain.__dict__.get("_pullbacks")
    if cached is None:
        cached = [e.label.matrix.inverse().lorentz for e in domain.edges]
        object.__setattr__(domain, "_pullbacks", cached)
    return cached


def _fixed_array(domain: DirichletDomain):
    cached = domain.__dict__.get("_fixed_arr")
    if cached is None:
        fps = domain.edge_interior_fixed_points
        cached = np.array([p.vec for p in fps]) if fps else np.zeros((0, 3))
        object.__setattr__(domain, "_fixed_arr", cached)
    return cached


class Walker:
    """Step a directed geodesic through consecutive copies of the domain.

    ``companions`` are further geodesic normals (world coordinates) carried
    along into each frame so that callers can compare vertices against them.
    ``skip`` lists vertex indices of the *starting* copy that are allowed to
    lie on the geodesic (used for rays issued from a vertex).
    """

    def __init__(self, domain: DirichletDomain, source: np.ndarray, target: np.ndarray,
                 start: GroupElement, margin: Optional[float] = None,
                 companions: Sequence[np.ndarray] = (), skip: Sequence[int] = ()):
        self.domain = domain
        self.delta = _tol().margin if margin is None else margin
        pull = start.matrix.inverse().lorentz
        self.S = normalize_null(pull @ source)
        self.T = normalize_null(pull @ target)
        self.companions = [normalize_spacelike(pull @ c) for c in companions]
        self.forward_element = start
        self.backward_element = start
        self._fwd = (self.S.copy(), self.T.copy(), list(self.companions))
        self._bwd = (self.S.copy(), self.T.copy(), list(self.companions))
        self._skip_fwd = set(skip)
        self._skip_bwd = set(skip)
        self._kinds = np.array([v.is_finite for v in domain.vertices])
        self._limits = np.where(self._kinds, math.sinh(self.delta), self.delta)
        self._starts = np.array([e.start for e in domain.edges])
        self._ends = np.array([e.end for e in domain.edges])

    # ------------------------------------------------------------------

    def _sides(self, S, T, element, skip):
        n = normal_through(S, T)
        vals = self.domain.vertex_array() @ (_JD * n)
        sinh_d = math.sinh(self.delta)
        close = np.abs(vals) < self._limits
        if close.any():
            for i in np.nonzero(close)[0]:
                if int(i) not in skip:
                    x = element.matrix.lorentz @ self.domain.vertices[i].vec
                    raise NonGeneric(f"geodesic passes within {self.delta} of a vertex", vertex=int(i), position=x)
        fps = _fixed_array(self.domain)
        if len(fps):
            fv = fps @ (_JD * n)
            k = int(np.argmin(np.abs(fv)))
            if abs(fv[k]) < sinh_d:
                x = element.matrix.lorentz @ fps[k]
                raise NonGeneric("geodesic passes through an elliptic fixed point", vertex=None, position=x)
        return n, vals

    def crossed(self, forward: bool = True):
        """Indices (entry edge, exit edge) of the current copy, or None entries."""
        S, T, _ = self._fwd if forward else self._bwd
        el = self.forward_element if forward else self.backward_element
        _, vals = self._sides(S, T, el, self._skip_fwd if forward else self._skip_bwd)
        a, b = vals[self._starts], vals[self._ends]
        exits = np.nonzero((a < 0) & (b > 0))[0]
        entries = np.nonzero((a > 0) & (b < 0))[0]
        ex = int(exits[0]) if len(exits) == 1 else None
        en = int(entries[0]) if len(entries) == 1 else None
        if len(exits) > 1 or len(entries) > 1:
            raise NonGeneric("geodesic meets the copy in more than two edges")
        return en, ex

    def frame_values(self, forward: bool = True):
        """Vertex residuals of the current frame w.r.t. the geodesic and companions."""
        S, T, comps = self._fwd if forward else self._bwd
        n = normal_through(S, T)
        V = self.domain.vertex_array()
        return V @ (_JD * n), [V @ (_JD * c) for c in comps]

    def step_forward(self):
        S, T, comps = self._fwd
        en, ex = self.crossed(True)
        if ex is None:
            raise NonGeneric("geodesic has no exit edge in the current copy")
        edge = self.domain.edges[ex]
        before = self.forward_element
        pull = _pullbacks(self.domain)[ex]
        self._fwd = (normalize_null(pull @ S), normalize_null(pull @ T),
                     [normalize_spacelike(pull @ c) for c in comps])
        self.forward_element = GroupElement(before.matrix @ edge.label.matrix, before.word + edge.label.word)
        self._skip_fwd = set()
        return edge.name, ex, before

    def step_backward(self):
        S, T, comps = self._bwd
        en, ex = self.crossed(False)
        if en is None:
            raise NonGeneric("geodesic has no entry edge in the current copy")
        edge = self.domain.edges[en]
        before = self.backward_element
        pull = _pullbacks(self.domain)[en]
        self._bwd = (normalize_null(pull @ S), normalize_null(pull @ T),
                     [normalize_spacelike(pull @ c) for c in comps])
        self.backward_element = GroupElement(before.matrix @ edge.label.matrix, before.word + edge.label.word)
        self._skip_bwd = set()
        return self.domain.edges[edge.paired_edge_index].name, en, before


def walk(domain: DirichletDomain, gamma: DirectedGeodesic, start: GroupElement,
         forward: int, backward: int = 0, margin: Optional[float] = None) -> CuttingSequence:
    """Trace from a copy ``start`` that ``gamma`` is known to pass through."""
    w = Walker(domain, gamma.source.vec, gamma.target.vec, start, margin)
    fwd, bwd = [], []
    chain_f, chain_b = [], []
    for _ in range(forward):
        name, _, _ = w.step_forward()
        fwd.append(name)
        chain_f.append(w.forward_element)
    for _ in range(backward):
        name, _, _ = w.step_backward()
        bwd.append(name)
        chain_b.append(w.backward_element)
    if forward == 0 and backward == 0:
        w.crossed(True)
    word = tuple(reversed(bwd)) + tuple(fwd)
    chain = tuple(reversed(chain_b)) + (start,) + tuple(chain_f)
    return CuttingSequence(word, start, gamma, (False, False), chain, len(bwd))


def locate(domain: DirichletDomain, p, max_steps: int = 10000, margin: Optional[float] = None) -> GroupElement:
    """Group element g with p in g D, by walking across violated sides."""
    delta = _tol().margin if margin is None else margin
    x = p.vec if isinstance(p, Point) else np.asarray(p, dtype=float)
    g = GroupElement.identity()
    pull = _pullbacks(domain)
    for _ in range(max_steps):
        m = domain.margins(x)
        i = int(np.argmin(m))
        if m[i] >= 0:
            if m[i] < math.sinh(delta):
                raise OnBoundary(f"point lies within {delta} of edge {domain.edges[i].name}")
            return g
        edge = domain.edges[i]
        g = GroupElement(g.matrix @ edge.label.matrix, g.word + edge.label.word)
        x = pull[i] @ x
    raise NonTerminating(f"locate did not settle within {max_steps} steps")


def default_basepoint(domain: DirichletDomain, gamma: DirectedGeodesic) -> np.ndarray:
    return gamma.closest_point(domain.center.vec)


def trace(domain: DirichletDomain, gamma: DirectedGeodesic, cfg: TraceConfig = TraceConfig()) -> CuttingSequence:
    """Symmetric window of the Morse code of ``gamma`` around a basepoint."""
    delta = cfg.delta
    if cfg.basepoint is not None:
        x = cfg.basepoint.vec
        if abs(mink(x, gamma.normal)) > 1e-9:
            raise DegenerateInput("basepoint is not on the geodesic")
        g0 = locate(domain, x, margin=delta)
    else:
        base = default_basepoint(domain, gamma)
        g0 = None
        for k in range(40):
            t = 0.0 if k == 0 else (0.05 * ((k + 1) // 2)) * (1 if k % 2 else -1)
            x = gamma.point_at(base, t) if t else base
            try:
                g0 = locate(domain, x, margin=delta)
                break
            except OnBoundary:
                continue
        if g0 is None:
            raise OnBoundary("no basepoint on the geodesic away from the edges")
    g0 = GroupElement(g0.matrix, domain.alphabet.reduce(g0.word))
    return walk(domain, gamma, g0, cfg.max_steps, cfg.max_steps, delta)


def sample_generic(domain: DirichletDomain, count: int, window: int, seed: int,
                   margin: Optional[float] = None) -> List[CuttingSequence]:
    """Codes of ``count`` random generic geodesics; deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    cfg = TraceConfig(max_steps=window, margin=margin)
    out: List[CuttingSequence] = []
    draws = rejected = 0
    tau = _tol().geodesic
    while len(out) < count:
        a, b = rng.uniform(0.0, TWO_PI, size=2)
        draws += 1
        if angular_gap(a, b) <= tau:
            rejected += 1
            continue
        gamma = DirectedGeodesic(BoundaryPoint(a), BoundaryPoint(b))
        try:
            out.append(trace(domain, gamma, cfg))
        except (NonGeneric, OnBoundary):
            rejected += 1
        if draws >= 100 and rejected > 0.99 * draws:
            raise SamplingExhausted(f"{rejected} of {draws} draws were rejected; margin too large?")
    return out


def has_inverse_pair(word: Sequence[str], inverse) -> bool:
    return any(inverse(a) == b for a, b in zip(word, word[1:]))


def contains_factor(word: Sequence[str], factor: Sequence[str]) -> bool:
    m = len(factor)
    if m == 0:
        return True
    return any(tuple(word[i:i + m]) == tuple(factor) for i in range(len(word) - m + 1))
