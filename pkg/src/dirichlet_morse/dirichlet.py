"""Dirichlet domains: construction, side pairing, vertex classes, metrics.

The domain is the intersection of the half-planes ``<Y, x - g x> >= 0`` over a
truncated orbit.  In the Klein model each of these is a Euclidean half-plane,
so the polygon is obtained by ordinary convex clipping and then read back as a
hyperbolic polygon whose vertices are either interior (finite) or on the unit
circle (infinite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import NoFiniteVertices, PairingFailure, UnstableTruncation
from .geometry import (
    BoundaryPoint,
    Isometry,
    Point,
    Segment,
    angular_gap,
    ideal_vector,
    mink,
    normalize_spacelike,
    normalize_timelike,
    vector_distance,
    vector_of_disk,
)
from .group import GeneratorAlphabet, GroupElement, orbit
from .tolerances import current as _tol

FINITE = "finite"
INFINITE = "infinite"
HOROBALL_RADIUS = 0.05
DEFAULT_DEPTH = 4
MAX_DEPTH = 9


@dataclass(frozen=True)
class Vertex:
    position: Union[Point, BoundaryPoint]
    kind: str
    edges: Tuple[int, int]  # (incoming edge, outgoing edge) in CCW order
    vec: np.ndarray = field(repr=False, compare=False)
    angle: float = 0.0  # interior angle; 0 at infinite vertices

    @property
    def is_finite(self) -> bool:
        return self.kind == FINITE


@dataclass(frozen=True)
class LabeledEdge:
    segment: Segment
    label: GroupElement
    neighbor: GroupElement
    paired_edge_index: int
    start: int
    end: int
    normal: np.ndarray = field(repr=False, compare=False)  # unit, positive towards the domain

    @property
    def name(self) -> str:
        return self.label.name


@dataclass(frozen=True)
class DirichletDomain:
    center: Point
    alphabet: GeneratorAlphabet
    edges: Tuple[LabeledEdge, ...]
    vertices: Tuple[Vertex, ...]
    depth: int
    stable: bool
    orbit_size: int
    edge_interior_fixed_points: Tuple[Point, ...] = ()

    @property
    def alphabet_size(self) -> int:
        return len(self.edges)

    @property
    def labels(self) -> List[str]:
        return [e.name for e in self.edges]

    @property
    def is_ideal(self) -> bool:
        return not any(v.is_finite for v in self.vertices)

    def label_index(self, name: str) -> int:
        for i, e in enumerate(self.edges):
            if e.name == name:
                return i
        raise KeyError(name)

    def inverse_label(self, name: str) -> str:
        return self.edges[self.edges[self.label_index(name)].paired_edge_index].name

    def vertex_array(self) -> np.ndarray:
        cached = self.__dict__.get("_varr")
        if cached is None:
            cached = np.array([v.vec for v in self.vertices])
            object.__setattr__(self, "_varr", cached)
        return cached

    def normal_array(self) -> np.ndarray:
        cached = self.__dict__.get("_narr")
        if cached is None:
            cached = np.array([e.normal for e in self.edges])
            object.__setattr__(self, "_narr", cached)
        return cached

    def margins(self, x: np.ndarray) -> np.ndarray:
        """sinh of the signed distance from x to each edge carrier (>= 0 inside)."""
        return self.normal_array() @ (np.array([1.0, 1.0, -1.0]) * x)

    def contains(self, p: Union[Point, np.ndarray], tol: float = 0.0) -> bool:
        x = p.vec if isinstance(p, Point) else p
        return bool(np.all(self.margins(x) >= -tol))


@dataclass(frozen=True)
class DomainMetrics:
    phi_max: float
    a_min: float
    epsilon: Optional[float]
    diameter: Optional[float]  # None means unbounded


# --------------------------------------------------------------------------
# Klein-model clipping


def _line(m: np.ndarray) -> np.ndarray:
    """Half-plane <Y, m> >= 0 as (u, v, w) with u x + v y - w >= 0, |(u, v)| = 1."""
    h = math.hypot(m[0], m[1])
    return np.array([m[0] / h, m[1] / h, m[2] / h])


def _cut(p, q, fp, fq):
    t = fp / (fp - fq)
    return p + t * (q - p)


def _clip(poly, line, ident, eps=1e-13):
    out = []
    n = len(poly)
    vals = [line[0] * p[0] + line[1] * p[1] - line[2] for p, _ in poly]
    if all(v >= -eps for v in vals):
        return poly
    for i in range(n):
        (p, e), (q, _) = poly[i], poly[(i + 1) % n]
        fp, fq = vals[i], vals[(i + 1) % n]
        pin, qin = fp >= -eps, fq >= -eps
        if pin:
            out.append((p, e))
            if not qin:
                out.append((_cut(p, q, fp, fq), ident))
        elif qin:
            out.append((_cut(p, q, fp, fq), e))
    return out


def _line_meet(l1, l2):
    a = np.array([[l1[0], l1[1]], [l2[0], l2[1]]])
    det = np.linalg.det(a)
    if abs(det) < 1e-14:
        return None
    return np.linalg.solve(a, np.array([l1[2], l2[2]]))


def _merge_short(poly, lines, tau):
    changed = True
    while changed and len(poly) > 2:
        changed = False
        n = len(poly)
        for i in range(n):
            (p, e), (q, f) = poly[i], poly[(i + 1) % n]
            if np.linalg.norm(p - q) < tau:
                prev_e = poly[i - 1][1]
                x = None
                if prev_e >= 0 and f >= 0:
                    x = _line_meet(lines[prev_e], lines[f])
                if x is None or np.linalg.norm(x - p) > 10 * tau:
                    x = (p + q) / 2
                j = (i + 1) % n
                poly[i] = (x, f)
                del poly[j]
                changed = True
                break
    return poly


@dataclass
class _RawPolygon:
    vertices: List[np.ndarray]  # Klein coordinates
    edge_ids: List[int]         # index into orbit entries, -1 for the initial box
    finite_area: bool


def _raw_polygon(entries, x0) -> _RawPolygon:
    tau = _tol().vertex
    lines = []
    box = 2.0
    poly = [(np.array(c, dtype=float), -1) for c in [(-box, -box), (box, -box), (box, box), (-box, box)]]
    order = sorted(range(1, len(entries)), key=lambda i: entries[i].vec[2])
    line_of = {}
    for idx in order:
        m = x0 - entries[idx].vec
        line = _line(m)
        line_of[idx] = line
        poly = _clip(poly, line, idx)
        if not poly:
            raise UnstableTruncation("half-plane intersection is empty")
    poly = _merge_short(poly, line_of, tau)
    finite_area = True
    for p, e in poly:
        if e < 0 or np.linalg.norm(p) > 1.0 + tau:
            finite_area = False
    return _RawPolygon([p for p, _ in poly], [e for _, e in poly], finite_area)


# --------------------------------------------------------------------------
# construction


def _ideal_or_finite(k: np.ndarray, tau: float):
    r = float(np.linalg.norm(k))
    if abs(r - 1.0) <= tau:
        theta = math.atan2(k[1], k[0])
        bp = BoundaryPoint(theta)
        return bp, INFINITE, bp.vec
    x = normalize_timelike(np.array([k[0], k[1], 1.0]))
    return Point.from_vector(x), FINITE, x


def _domain_from_raw(raw: _RawPolygon, alphabet, center, entries, depth, stable) -> DirichletDomain:
    tau = _tol().vertex
    x0 = center.vec
    n = len(raw.vertices)
    classified = [_ideal_or_finite(k, tau) for k in raw.vertices]
    normals = [normalize_spacelike(x0 - entries[e].vec) for e in raw.edge_ids]
    vertices = []
    for i, (pos, kind, vec) in enumerate(classified):
        incoming, outgoing = (i - 1) % n, i
        angle = 0.0
        if kind == FINITE:
            c = -mink(normals[incoming], normals[outgoing])
            angle = math.acos(max(-1.0, min(1.0, c)))
        vertices.append(Vertex(pos, kind, (incoming, outgoing), vec, angle))
    edges = []
    for i, e in enumerate(raw.edge_ids):
        j = (i + 1) % n
        seg = Segment.between(vertices[i].position, vertices[j].position)
        el = entries[e].element
        edges.append(LabeledEdge(seg, el, el, -1, i, j, normals[i]))
    return DirichletDomain(
        center=center,
        alphabet=alphabet,
        edges=tuple(edges),
        vertices=tuple(vertices),
        depth=depth,
        stable=stable,
        orbit_size=len(entries),
    )


def _edge_keys(raw: _RawPolygon, entries):
    return sorted(entries[e].element.matrix.key(1e-6) for e in raw.edge_ids)


def dirichlet_polygon(alphabet: GeneratorAlphabet, center: Point, depth: int):
    """Raw truncated construction without stability enforcement.

    Returns ``(domain_or_None, finite_area, keys)``.
    """
    orb = orbit(alphabet, center, depth)
    raw = _raw_polygon(orb.entries, center.vec)
    keys = _edge_keys(raw, orb.entries)
    if not raw.finite_area:
        return None, False, keys
    return _domain_from_raw(raw, alphabet, center, orb.entries, depth, False), True, keys


def build_dirichlet(alphabet: GeneratorAlphabet, center: Point, depth: int = DEFAULT_DEPTH) -> DirichletDomain:
    """Dirichlet domain from the depth-``depth`` orbit, checked against depth+1."""
    dom, finite, keys = dirichlet_polygon(alphabet, center, depth)
    _, finite_next, keys_next = dirichlet_polygon(alphabet, center, depth + 1)
    if not finite or not finite_next:
        raise UnstableTruncation(f"depth {depth}: intersection has infinite area (orbit too short)")
    if keys != keys_next:
        raise UnstableTruncation(f"depth {depth} and {depth + 1} give different edge sets")
    dom = replace(dom, stable=True)
    return label_edges(dom)


def build_stable_dirichlet(alphabet, center, depth=DEFAULT_DEPTH, max_depth=MAX_DEPTH) -> DirichletDomain:
    last = None
    for d in range(depth, max_depth + 1):
        try:
            return build_dirichlet(alphabet, center, d)
        except UnstableTruncation as exc:
            last = exc
    raise UnstableTruncation(f"no stable truncation up to depth {max_depth}: {last}")


def _same_vertex(u: Vertex, vec: np.ndarray, tol: float) -> bool:
    if u.is_finite:
        if vec[2] == 1.0 and abs(mink(vec, vec)) < 1e-9:
            return False
        return vector_distance(u.vec, normalize_timelike(vec)) < tol
    if abs(mink(vec, vec)) > 1e-6 * vec[2] ** 2:
        return False
    return angular_gap(math.atan2(vec[1], vec[0]), math.atan2(u.vec[1], u.vec[0])) < tol


def label_edges(domain: DirichletDomain) -> DirichletDomain:
    """Pair sides: the edge labelled g is carried by g^-1 onto the edge labelled g^-1."""
    edges = list(domain.edges)
    n = len(edges)
    alphabet = domain.alphabet
    partner = [-1] * n
    for i, e in enumerate(edges):
        inv = e.neighbor.matrix.inverse()
        for j, f in enumerate(edges):
            if f.neighbor.matrix.close_to(inv, 1e-8):
                partner[i] = j
                break
        if partner[i] < 0:
            raise PairingFailure(f"no edge labelled by the inverse of {e.name}")
        j = partner[i]
        lor = inv.lorentz
        if np.abs(lor @ e.normal + edges[j].normal).max() > 1e-8:
            raise PairingFailure(f"{e.name}^-1 does not carry its edge onto edge {j}")
        vs = domain.vertices
        if not (_same_vertex(vs[edges[j].end], lor @ vs[e.start].vec, 1e-7)
                and _same_vertex(vs[edges[j].start], lor @ vs[e.end].vec, 1e-7)):
            raise PairingFailure(f"{e.name}^-1 does not match the endpoints of edge {j}")
    for i in range(n):
        if partner[partner[i]] != i:
            raise PairingFailure("side pairing is not an involution")
    new = list(edges)
    for i in range(n):
        j = partner[i]
        label = edges[i].label
        if j < i:
            w = alphabet.invert_word(edges[j].label.word)
            label = GroupElement(edges[i].label.matrix, w)
        new[i] = replace(edges[i], label=label, neighbor=label, paired_edge_index=j)
    fixed = []
    for i, e in enumerate(new):
        if e.paired_edge_index == i:
            fp = e.label.matrix.fixed_point()
            if fp is not None and abs(mink(fp.vec, e.normal)) < 1e-8:
                fixed.append(fp)
    return replace(domain, edges=tuple(new), edge_interior_fixed_points=tuple(fixed))


def classify_vertices(domain: DirichletDomain):
    finite = [v for v in domain.vertices if v.is_finite]
    infinite = [v for v in domain.vertices if not v.is_finite]
    return finite, infinite


def _horocycle_level(xi: np.ndarray, radius: float = HOROBALL_RADIUS) -> float:
    # disk circle tangent at xi with Euclidean radius r: its point nearest the origin is (1 - 2r) xi
    w = complex(xi[0], xi[1]) * (1.0 - 2.0 * radius)
    return -mink(vector_of_disk(w), xi)


def usable_edge_length(domain: DirichletDomain, edge: LabeledEdge) -> Optional[float]:
    """Length of an edge, truncated at the horoball cutoff when one end is ideal."""
    u, v = domain.vertices[edge.start], domain.vertices[edge.end]
    if u.is_finite and v.is_finite:
        return vector_distance(u.vec, v.vec)
    if not u.is_finite and not v.is_finite:
        return None
    p, xi = (u, v) if u.is_finite else (v, u)
    level = _horocycle_level(xi.vec)
    # horofunction decays like e^{-t} along the geodesic from p to xi
    return max(0.0, math.log(-mink(p.vec, xi.vec) / level))


def proximity_epsilon(domain: DirichletDomain) -> DomainMetrics:
    """Radius below which a geodesic near a finite vertex must cut an edge at it.

    Uses ``sinh(eps) = sinh(a) sin(phi / 2)`` with ``phi`` the largest interior
    angle and ``a`` the shortest usable edge length.
    """
    finite, infinite = classify_vertices(domain)
    if not finite:
        raise NoFiniteVertices("domain is an ideal polygon; epsilon is undefined")
    phi = max(v.angle for v in finite)
    lengths = [usable_edge_length(domain, e) for e in domain.edges]
    a = min(x for x in lengths if x is not None)
    eps = math.asinh(math.sinh(a) * math.sin(phi / 2.0))
    diameter = None
    if not infinite:
        vs = [v.vec for v in finite]
        diameter = max(vector_distance(p, q) for p in vs for q in vs)
    return DomainMetrics(phi, a, eps, diameter)


def domain_metrics(domain: DirichletDomain) -> DomainMetrics:
    """Like :func:`proximity_epsilon` but returns ``epsilon=None`` for ideal domains."""
    try:
        return proximity_epsilon(domain)
    except NoFiniteVertices:
        return DomainMetrics(0.0, math.inf, None, None)


def copy_of_domain(domain: DirichletDomain, g: Union[GroupElement, Isometry]) -> List[LabeledEdge]:
    """Edges of the copy g D, with labels carried over unchanged."""
    m = g.matrix if isinstance(g, GroupElement) else g
    lor = m.lorentz
    out = []
    for e in domain.edges:
        ends = []
        for idx in (e.start, e.end):
            v = domain.vertices[idx]
            x = lor @ v.vec
            ends.append(Point.from_vector(x) if v.is_finite else BoundaryPoint.from_vector(x))
        seg = Segment.between(*ends)
        out.append(replace(e, segment=seg, normal=normalize_spacelike(lor @ e.normal)))
    return out
