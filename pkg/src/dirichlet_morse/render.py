"""Figures of domains, tessellation patches and geodesics in the Poincaré disk.

Geodesic segments are drawn as arcs of circles orthogonal to the unit circle
(or as diameters).  Output is SVG by default and reproducible: the date stamp
is dropped and element ids are salted with a fixed string.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Arc, Circle  # noqa: E402

import numpy as np  # noqa: E402

from .dirichlet import DirichletDomain  # noqa: E402
from .errors import DegenerateInput  # noqa: E402
from .geometry import (  # noqa: E402
    BoundaryPoint,
    DirectedGeodesic,
    Point,
    Segment,
    jcross,
    normalize_timelike,
    point_along,
    direction_at,
)
from .group import GroupElement  # noqa: E402

FINITE_COLOR = "#c0392b"
INFINITE_COLOR = "#2471a3"
PATCH_COLOR = "#b8b8b8"


@dataclass(frozen=True)
class ArcSpec:
    """A geodesic piece in disk coordinates: a circular arc or a straight chord."""

    center: Optional[Tuple[float, float]]
    radius: Optional[float]
    theta1: float  # degrees, counter-clockwise from theta1 to theta2
    theta2: float
    p: Tuple[float, float]
    q: Tuple[float, float]

    @property
    def is_line(self) -> bool:
        return self.center is None

    def orthogonality_residual(self) -> float:
        """| |c|^2 - r^2 - 1 |, zero for circles meeting the unit circle at right angles."""
        if self.is_line:
            return 0.0
        cx, cy = self.center
        return abs(cx * cx + cy * cy - self.radius ** 2 - 1.0)


def _disk(p) -> complex:
    return p.z


def geodesic_arc(u: Union[Point, BoundaryPoint], v: Union[Point, BoundaryPoint]) -> ArcSpec:
    """The arc of the geodesic between two points (interior or ideal)."""
    zu, zv = _disk(u), _disk(v)
    n = jcross(u.vec, v.vec)
    scale = float(np.max(np.abs(n)))
    if abs(n[2]) < 1e-12 * scale:
        return ArcSpec(None, None, 0.0, 0.0, (zu.real, zu.imag), (zv.real, zv.imag))
    c = complex(n[0] / n[2], n[1] / n[2])
    r = math.sqrt(max(abs(c) ** 2 - 1.0, 0.0))
    a1 = math.degrees(math.atan2((zu - c).imag, (zu - c).real))
    a2 = math.degrees(math.atan2((zv - c).imag, (zv - c).real))
    if (a2 - a1) % 360.0 > 180.0:
        a1, a2 = a2, a1
    return ArcSpec((c.real, c.imag), r, a1, a2, (zu.real, zu.imag), (zv.real, zv.imag))


def _draw_arc(ax, spec: ArcSpec, **style):
    if spec.is_line:
        ax.plot([spec.p[0], spec.q[0]], [spec.p[1], spec.q[1]], **style)
        return
    kw = {k: v for k, v in style.items() if k in ("color", "linewidth", "linestyle", "alpha", "zorder")}
    ax.add_patch(Arc(spec.center, 2 * spec.radius, 2 * spec.radius, theta1=spec.theta1,
                     theta2=spec.theta2, fill=False, **kw))


def _copy_edges(domain: DirichletDomain, g: GroupElement) -> List[Tuple[Segment, str]]:
    """Edges of the copy g D; empty when the copy is too close to the circle to draw."""
    lor = g.matrix.lorentz
    out = []
    try:
        for e in domain.edges:
            ends = []
            for idx in (e.start, e.end):
                v = domain.vertices[idx]
                x = lor @ v.vec
                ends.append(Point.from_vector(x) if v.is_finite else BoundaryPoint.from_vector(x))
            out.append((Segment.between(*ends), e.name))
    except DegenerateInput:
        return []
    return out


def _label_point(seg: Segment, center: np.ndarray) -> complex:
    a, b = seg.e1, seg.e2
    if isinstance(a, Point) and isinstance(b, Point):
        return Point.from_vector(normalize_timelike(a.vec + b.vec)).z
    if isinstance(a, Point) or isinstance(b, Point):
        p, xi = (a, b) if isinstance(a, Point) else (b, a)
        return Point.from_vector(point_along(p.vec, direction_at(p.vec, xi.vec), 1.0)).z
    return Point.from_vector(seg.carrier.closest_point(center)).z


def patch_elements(domain: DirichletDomain, depth: int) -> List[GroupElement]:
    """Group elements of word length <= depth in the edge labels, without repeats."""
    out = [GroupElement.identity()]
    seen = {out[0].matrix.key()}
    frontier = list(out)
    for _ in range(depth):
        nxt = []
        for g in frontier:
            for e in domain.edges:
                h = GroupElement(g.matrix @ e.label.matrix, g.word + e.label.word)
                k = h.matrix.key()
                if k not in seen:
                    seen.add(k)
                    nxt.append(h)
        out.extend(nxt)
        frontier = nxt
    return out


def _figure():
    plt.rcParams["svg.hashsalt"] = "dirichlet-morse"
    fig = plt.figure(figsize=(6, 6))
    # axes fill the figure so the viewBox is exactly the square [-1.02, 1.02]^2
    ax = fig.add_axes((0, 0, 1, 1))
    ax.set_xlim(-1.02, 1.02)
    ax.set_ylim(-1.02, 1.02)
    ax.set_aspect("equal")
    ax.axis("off")
    ax.add_patch(Circle((0, 0), 1.0, fill=False, color="black", linewidth=1.0))
    return fig, ax


def _save(fig, path):
    fmt = str(path).rsplit(".", 1)[-1].lower() if "." in str(path) else "svg"
    meta = {"Date": None} if fmt in ("svg", "pdf") else None
    fig.savefig(path, format=fmt, metadata=meta)
    plt.close(fig)


def _draw_patch(ax, domain, depth):
    for g in patch_elements(domain, depth)[1:]:
        for seg, _ in _copy_edges(domain, g):
            _draw_arc(ax, geodesic_arc(seg.e1, seg.e2), color=PATCH_COLOR, linewidth=0.5)


def _draw_domain(ax, domain, element=None, color="black", labels=True, linewidth=1.6):
    g = GroupElement.identity() if element is None else element
    for seg, name in _copy_edges(domain, g):
        _draw_arc(ax, geodesic_arc(seg.e1, seg.e2), color=color, linewidth=linewidth)
        if labels:
            z = _label_point(seg, domain.center.vec)
            ax.annotate(name, (z.real, z.imag), fontsize=9, ha="center", va="center",
                        bbox=dict(boxstyle="round,pad=0.15", fc="white", ec="none", alpha=0.8))
    if element is None:
        for v in domain.vertices:
            z = v.position.z
            if v.is_finite:
                ax.plot([z.real], [z.imag], "o", color=FINITE_COLOR, markersize=5)
            else:
                ax.plot([z.real], [z.imag], "o", markerfacecolor="white", markeredgecolor=INFINITE_COLOR, markersize=6)


def _draw_geodesic(ax, gamma: DirectedGeodesic, color, label=None, linestyle="-"):
    spec = geodesic_arc(gamma.source, gamma.target)
    _draw_arc(ax, spec, color=color, linewidth=1.4, linestyle=linestyle)
    tz = gamma.target.z
    ax.plot([tz.real], [tz.imag], marker=">", color=color, markersize=5)
    if label:
        ax.annotate(label, (tz.real * 1.05, tz.imag * 1.05), fontsize=8, color=color, ha="center")


def render_domain(domain: DirichletDomain, path, patch_depth: int = 2):
    fig, ax = _figure()
    _draw_patch(ax, domain, patch_depth)
    _draw_domain(ax, domain)
    _save(fig, path)


def render_trace(domain: DirichletDomain, cs, path, patch_depth: int = 1):
    fig, ax = _figure()
    _draw_patch(ax, domain, patch_depth)
    for g in cs.chain:
        _draw_domain(ax, domain, g, color="#7d7d7d", labels=False, linewidth=0.8)
    _draw_domain(ax, domain)
    _draw_geodesic(ax, cs.geodesic, "#d35400")
    _save(fig, path)


def render_realize(domain: DirichletDomain, result, path, patch_depth: int = 1):
    from .markov.realize import Realizable, SeparationCertificate
    from .markov.words import domain_chain

    fig, ax = _figure()
    _draw_patch(ax, domain, patch_depth)
    chain = domain_chain(domain, result.word)
    for e in chain.shared_edges:
        _draw_arc(ax, geodesic_arc(e.start, e.end), color="#16a085", linewidth=1.6)
    _draw_domain(ax, domain)
    v = result.verdict
    if isinstance(v, Realizable):
        _draw_geodesic(ax, v.witness, "#d35400", "witness")
    elif isinstance(getattr(v, "certificate", None), SeparationCertificate):
        _draw_geodesic(ax, v.certificate.geodesic, "#8e44ad", "separator", linestyle="--")
    _save(fig, path)


def render_forbidden(domain: DirichletDomain, rep, path, patch_depth: int = 1):
    fig, ax = _figure()
    _draw_patch(ax, domain, patch_depth)
    _draw_domain(ax, domain)
    for seg in rep.certificate.segments:
        _draw_arc(ax, geodesic_arc(seg.e1, seg.e2), color="#16a085", linewidth=2.2)
    _draw_geodesic(ax, rep.critical, "#8e44ad", "c", linestyle="--")
    _draw_geodesic(ax, rep.gamma_a, "#d35400", "a")
    _draw_geodesic(ax, rep.gamma_b, "#2e86c1", "b")
    z = rep.vertex.z
    ax.plot([z.real], [z.imag], "o", color=FINITE_COLOR, markersize=6)
    _save(fig, path)


def render_markov(domain: DirichletDomain, rep, path, patch_depth: int = 2):
    if rep.forbidden:
        render_forbidden(domain, rep.forbidden[-1], path, patch_depth=min(patch_depth, 1))
    else:
        render_domain(domain, path, patch_depth)
