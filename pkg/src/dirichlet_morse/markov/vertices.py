"""Tessellation vertices: searching by direction, and walking around one."""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from ..coder import locate
from ..dirichlet import DirichletDomain
from ..errors import BudgetExhausted, DegenerateInput, NoFiniteVertices, OnBoundary
from ..geometry import TWO_PI, Point, Segment, ccw_length, direction_at, in_open_arc, mink
from ..group import GroupElement

DEFAULT_BUDGET = 20_000


@dataclass(frozen=True)
class VertexHit:
    position: Point
    element: GroupElement
    local_index: int
    direction: float
    copies_searched: int


def sector_width(theta1: float, theta2: float) -> float:
    """Counter-clockwise width from theta1 to theta2; a raw difference of 2 pi means the full circle."""
    raw = theta2 - theta1
    if 0 < raw <= TWO_PI:
        return raw
    w = ccw_length(theta1, theta2)
    if w == 0:
        raise DegenerateInput("sector bounds coincide")
    return w


def find_vertex_in_sector(domain: DirichletDomain, y: Point, theta1: float, theta2: float,
                          budget: int = DEFAULT_BUDGET) -> VertexHit:
    """A finite tessellation vertex seen from y strictly inside the sector (theta1, theta2).

    Copies are visited in order of the distance of their centre from y.
    """
    finite = [i for i, v in enumerate(domain.vertices) if v.is_finite]
    if not finite:
        raise NoFiniteVertices("domain has no finite vertices")
    width = sector_width(theta1, theta2)
    yv = y.vec
    cv = domain.center.vec
    try:
        start = locate(domain, yv)
    except OnBoundary:
        start = GroupElement.identity()
    counter = itertools.count()
    heap = [(0.0, next(counter), start)]
    seen = {start.matrix.key()}
    popped = 0
    while heap and popped < budget:
        _, _, g = heapq.heappop(heap)
        popped += 1
        lor = g.matrix.lorentz
        for i in finite:
            x = lor @ domain.vertices[i].vec
            if -mink(x, yv) < 1.0 + 1e-12:
                continue  # the vertex is y itself
            psi = direction_at(yv, x)
            if in_open_arc(psi, theta1, width, pad=1e-12):
                return VertexHit(Point.from_vector(x), g, i, psi, popped)
        for e in domain.edges:
            h = GroupElement(g.matrix @ e.label.matrix, g.word + e.label.word)
            k = h.matrix.key()
            if k in seen:
                continue
            seen.add(k)
            heapq.heappush(heap, (-mink(h.matrix.lorentz @ cv, yv), next(counter), h))
    raise BudgetExhausted(f"no vertex found in the sector after {popped} copies")


@dataclass(frozen=True)
class StarEntry:
    element: GroupElement
    local_index: int
    angle: float


def vertex_star(domain: DirichletDomain, element: GroupElement, local_index: int,
                max_steps: int = 10_000) -> List[StarEntry]:
    """Copies around the finite vertex ``element . v_local``, counter-clockwise.

    Crossing the outgoing edge of the vertex moves to the next copy; there the
    same point is the end vertex of the paired edge.
    """
    if not domain.vertices[local_index].is_finite:
        raise DegenerateInput("vertex star is only defined at finite vertices")
    out = [StarEntry(element, local_index, domain.vertices[local_index].angle)]
    g, j = element, local_index
    for _ in range(max_steps):
        e = domain.edges[domain.vertices[j].edges[1]]
        g = GroupElement(g.matrix @ e.label.matrix, g.word + e.label.word)
        j = domain.edges[e.paired_edge_index].end
        if j == local_index and g.matrix.close_to(element.matrix, 1e-7):
            return out
        out.append(StarEntry(g, j, domain.vertices[j].angle))
    raise BudgetExhausted("vertex star did not close")


def star_edges(domain: DirichletDomain, element: GroupElement, local_index: int) -> List[Segment]:
    """World segments of all tessellation edges ending at the vertex."""
    from ..geometry import BoundaryPoint

    segs = []
    for entry in vertex_star(domain, element, local_index):
        lor = entry.element.matrix.lorentz
        e = domain.edges[domain.vertices[entry.local_index].edges[1]]
        ends = []
        for idx in (e.start, e.end):
            v = domain.vertices[idx]
            x = lor @ v.vec
            ends.append(Point.from_vector(x) if v.is_finite else BoundaryPoint.from_vector(x))
        segs.append(Segment.between(*ends))
    return segs


def angle_sum(star: List[StarEntry]) -> float:
    return math.fsum(s.angle for s in star)
