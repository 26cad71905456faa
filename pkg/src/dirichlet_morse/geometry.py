"""Hyperbolic plane primitives in the Poincare disk.

Public values (:class:`Point`, :class:`BoundaryPoint`, :class:`DirectedGeodesic`,
:class:`Isometry`) speak disk coordinates.  Underneath, every predicate is
evaluated in the hyperboloid (Minkowski) model ``R^{2,1}`` with the form
``<u, v> = u0 v0 + u1 v1 - u2 v2``:

* an interior point ``p`` is the unit timelike vector
  ``(2 Re p, 2 Im p, 1 + |p|^2) / (1 - |p|^2)``;
* a boundary point ``e^{i theta}`` is the null vector ``(cos, sin, 1)``;
* a directed geodesic from ``S`` to ``T`` has unit spacelike normal
  ``n ~ J (S x T)``; ``<X, n>`` is ``sinh`` of the signed distance of ``X``
  to the geodesic and is positive on the LEFT.

Isometries are stored as ``SL(2, R)`` matrices acting on the upper half-plane;
the disk action is the conjugate by the Cayley map ``z -> (z - i)/(z + i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import numpy as np

from .errors import DegenerateInput
from .tolerances import current as _tol

TWO_PI = 2.0 * math.pi
J = np.diag([1.0, 1.0, -1.0])
ORIGIN = np.array([0.0, 0.0, 1.0])

_S1 = np.array([[0, 1], [1, 0]], dtype=complex)
_S2 = np.array([[0, 1j], [-1j, 0]], dtype=complex)
_S3 = np.eye(2, dtype=complex)
_SIGMAS = (_S1, _S2, _S3)


# --------------------------------------------------------------------------
# raw Minkowski helpers


def mink(u, v) -> float:
    return float(u[0] * v[0] + u[1] * v[1] - u[2] * v[2])


def jcross(u, v) -> np.ndarray:
    """J (u x v): the Minkowski-orthogonal complement of span(u, v)."""
    return np.array([
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[1] * v[0] - u[0] * v[1],
    ])


def normalize_timelike(x: np.ndarray) -> np.ndarray:
    q = -mink(x, x)
    if not q > 0:
        raise DegenerateInput("vector is not timelike")
    x = x / math.sqrt(q)
    return x if x[2] > 0 else -x


def normalize_spacelike(n: np.ndarray) -> np.ndarray:
    q = mink(n, n)
    if not q > 0:
        raise DegenerateInput("vector is not spacelike")
    return n / math.sqrt(q)


def normalize_null(x: np.ndarray) -> np.ndarray:
    """Scale a future null vector to the form (cos t, sin t, 1)."""
    h = math.hypot(x[0], x[1])
    return np.array([x[0] / h, x[1] / h, 1.0])


def vector_of_disk(z: complex) -> np.ndarray:
    r2 = z.real * z.real + z.imag * z.imag
    s = 1.0 - r2
    return np.array([2.0 * z.real / s, 2.0 * z.imag / s, (1.0 + r2) / s])


def disk_of_vector(x: np.ndarray) -> complex:
    x = normalize_timelike(x)
    return complex(x[0], x[1]) / (1.0 + x[2])


def ideal_vector(theta: float) -> np.ndarray:
    return np.array([math.cos(theta), math.sin(theta), 1.0])


def wrap(theta: float) -> float:
    t = theta % TWO_PI
    return 0.0 if t >= TWO_PI else t


def angle_of(x: np.ndarray) -> float:
    return wrap(math.atan2(x[1], x[0]))


def normal_through(x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """Unit normal of the geodesic through x1 then x2 (timelike or null)."""
    return normalize_spacelike(jcross(x1, x2))


def meet(n1: np.ndarray, n2: np.ndarray) -> Optional[np.ndarray]:
    """Intersection point of two geodesics given by normals, or None."""
    x = jcross(n1, n2)
    if not -mink(x, x) > 0:
        return None
    return normalize_timelike(x)


def boost_to(x: np.ndarray) -> np.ndarray:
    """Lorentz boost carrying the origin to the timelike unit vector x."""
    x = normalize_timelike(x)
    s = x[:2]
    out = np.empty((3, 3))
    out[:2, :2] = np.eye(2) + np.outer(s, s) / (1.0 + x[2])
    out[:2, 2] = s
    out[2, :2] = s
    out[2, 2] = x[2]
    return out


def boost_from(x: np.ndarray) -> np.ndarray:
    """Inverse of :func:`boost_to` (carries x to the origin)."""
    x = normalize_timelike(x)
    return boost_to(np.array([-x[0], -x[1], x[2]]))


def direction_at(base: np.ndarray, target: np.ndarray) -> float:
    """Angle of the tangent direction at ``base`` pointing at ``target``.

    ``target`` may be timelike (interior) or null (boundary)."""
    y = boost_from(base) @ target
    if abs(y[0]) + abs(y[1]) == 0.0:
        raise DegenerateInput("direction to the base point itself")
    return wrap(math.atan2(y[1], y[0]))


def geodesic_normal_at(base: np.ndarray, psi: float) -> np.ndarray:
    """Unit normal of the geodesic through ``base`` with heading ``psi``."""
    b = boost_to(base)
    s = b @ ideal_vector(psi + math.pi)
    t = b @ ideal_vector(psi)
    return normal_through(s, t)


def point_along(base: np.ndarray, psi: float, t: float) -> np.ndarray:
    """Point at distance t from ``base`` along heading ``psi``."""
    local = np.array([math.sinh(t) * math.cos(psi), math.sinh(t) * math.sin(psi), math.cosh(t)])
    return normalize_timelike(boost_to(base) @ local)


def endpoints_of_normal(n: np.ndarray):
    """Oriented endpoint angles (source, target) of the geodesic with normal n."""
    rho = math.hypot(n[0], n[1])
    if not rho > abs(n[2]):
        raise DegenerateInput("normal vector is not spacelike")
    phi = math.atan2(n[1], n[0])
    delta = math.acos(max(-1.0, min(1.0, n[2] / rho)))
    s, t = phi + delta, phi - delta
    if np.dot(np.cross(ideal_vector(s), ideal_vector(t)), n) < 0:
        s, t = t, s
    return wrap(s), wrap(t)


def ccw_length(a: float, b: float) -> float:
    """Length of the counter-clockwise arc from angle a to angle b."""
    return (b - a) % TWO_PI


def in_open_arc(x: float, start: float, length: float, pad: float = 0.0) -> bool:
    d = (x - start) % TWO_PI
    return pad < d < length - pad


# --------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class Point:
    """Interior point, disk coordinates."""

    x: float
    y: float
    _vec: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        r2 = self.x * self.x + self.y * self.y
        if not r2 < 1.0 - _tol().boundary:
            raise DegenerateInput(f"point ({self.x}, {self.y}) is not inside the disk")
        object.__setattr__(self, "_vec", vector_of_disk(complex(self.x, self.y)))

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @property
    def vec(self) -> np.ndarray:
        return self._vec

    @property
    def half_plane(self) -> complex:
        w = self.z
        return 1j * (1 + w) / (1 - w)

    @classmethod
    def from_complex(cls, z: complex) -> "Point":
        return cls(float(z.real), float(z.imag))

    @classmethod
    def from_half_plane(cls, z: complex) -> "Point":
        z = complex(z)
        if not z.imag > 0:
            raise DegenerateInput(f"{z} is not in the upper half-plane")
        return cls.from_complex((z - 1j) / (z + 1j))

    @classmethod
    def from_vector(cls, v: np.ndarray) -> "Point":
        return cls.from_complex(disk_of_vector(v))

    @classmethod
    def checked(cls, z: complex) -> "Point":
        """Constructor for user input: rejects points too close to the circle."""
        if abs(z) > 1.0 - _tol().near_boundary:
            raise DegenerateInput(f"point {z} is too close to the boundary circle")
        return cls.from_complex(z)


@dataclass(frozen=True)
class BoundaryPoint:
    """Point of the circle at infinity, as an angle in [0, 2 pi)."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", wrap(float(self.theta)))

    @property
    def vec(self) -> np.ndarray:
        return ideal_vector(self.theta)

    @property
    def z(self) -> complex:
        return complex(math.cos(self.theta), math.sin(self.theta))

    @classmethod
    def from_half_plane(cls, x: float) -> "BoundaryPoint":
        if math.isinf(x):
            return cls(0.0)
        w = complex(x, -1.0) / complex(x, 1.0)
        return cls(math.atan2(w.imag, w.real))

    @classmethod
    def from_vector(cls, v: np.ndarray) -> "BoundaryPoint":
        return cls(angle_of(v))

    @property
    def half_plane(self) -> float:
        s = math.sin(self.theta / 2)
        if abs(s) < _tol().boundary:
            return math.inf
        return -math.cos(self.theta / 2) / s


End = Union[Point, BoundaryPoint]


def angular_gap(a: float, b: float) -> float:
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class DirectedGeodesic:
    source: BoundaryPoint
    target: BoundaryPoint
    _normal: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not angular_gap(self.source.theta, self.target.theta) > _tol().geodesic:
            raise DegenerateInput("geodesic endpoints coincide")
        n = jcross(self.source.vec, self.target.vec)
        object.__setattr__(self, "_normal", normalize_spacelike(n))

    @property
    def normal(self) -> np.ndarray:
        return self._normal

    @classmethod
    def from_angles(cls, source: float, target: float) -> "DirectedGeodesic":
        return cls(BoundaryPoint(source), BoundaryPoint(target))

    @classmethod
    def from_normal(cls, n: np.ndarray) -> "DirectedGeodesic":
        s, t = endpoints_of_normal(n)
        return cls(BoundaryPoint(s), BoundaryPoint(t))

    def reversed(self) -> "DirectedGeodesic":
        return DirectedGeodesic(self.target, self.source)

    def closest_point(self, x: np.ndarray) -> np.ndarray:
        """Orthogonal projection of a timelike vector onto the geodesic."""
        n = self._normal
        return normalize_timelike(x - mink(x, n) * n)

    def point_at(self, base: np.ndarray, t: float) -> np.ndarray:
        """Point at signed arclength t from ``base`` (a point on the geodesic)."""
        psi = direction_at(base, self.target.vec)
        return point_along(base, psi, t)


@dataclass(frozen=True)
class Isometry:
    """Projective SL(2, R) matrix acting on the upper half-plane."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        a, b, c, d = (float(v) for v in (self.a, self.b, self.c, self.d))
        det = a * d - b * c
        if not det > 0:
            raise DegenerateInput("isometry matrix must have positive determinant")
        s = math.sqrt(det)
        a, b, c, d = a / s, b / s, c / s, d / s
        for v in (a, b, c, d):
            if abs(v) > 1e-14:
                if v < 0:
                    a, b, c, d = -a, -b, -c, -d
                break
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    # construction ---------------------------------------------------------

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_matrix(cls, m) -> "Isometry":
        (a, b), (c, d) = m
        return cls(a, b, c, d)

    @classmethod
    def from_disk(cls, alpha: complex, beta: complex) -> "Isometry":
        """From the SU(1,1) matrix [[alpha, beta], [conj beta, conj alpha]]."""
        return cls(
            alpha.real + beta.real,
            alpha.imag - beta.imag,
            -alpha.imag - beta.imag,
            alpha.real - beta.real,
        )

    @classmethod
    def translation_to(cls, v: complex) -> "Isometry":
        """Boost along the diameter through v carrying 0 to v."""
        s = math.sqrt(1.0 - abs(v) ** 2)
        return cls.from_disk(complex(1.0 / s), complex(v) / s)

    @classmethod
    def rotation(cls, angle: float) -> "Isometry":
        """Rotation about the disk centre by ``angle``."""
        return cls.from_disk(complex(math.cos(angle / 2), math.sin(angle / 2)), 0j)

    # algebra --------------------------------------------------------------

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def __matmul__(self, other: "Isometry") -> "Isometry":
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        det = a * d - b * c
        if 0.5 < det < 2.0:
            return Isometry(a, b, c, d)
        # long products: the determinant is 1 analytically but the float
        # evaluation of ad - bc has cancelled away, so keep the entries as they are
        out = object.__new__(Isometry)
        sign = -1.0 if next((v for v in (a, b, c, d) if abs(v) > 1e-14), 1.0) < 0 else 1.0
        for k, v in zip("abcd", (a, b, c, d)):
            object.__setattr__(out, k, sign * v)
        return out

    def inverse(self) -> "Isometry":
        return Isometry(self.d, -self.b, -self.c, self.a)

    def trace(self) -> float:
        return self.a + self.d

    def key(self, scale: float = 1e-7) -> tuple:
        return tuple(int(round(v / scale)) for v in (self.a, self.b, self.c, self.d))

    def close_to(self, other: "Isometry", tol: float = 1e-9) -> bool:
        m, o = self.matrix, other.matrix
        return min(np.abs(m - o).max(), np.abs(m + o).max()) < tol

    def is_identity(self, tol: float = 1e-9) -> bool:
        return self.close_to(Isometry.identity(), tol)

    # actions --------------------------------------------------------------

    @property
    def disk(self):
        a, b, c, d = self.a, self.b, self.c, self.d
        return complex((a + d) / 2, (b - c) / 2), complex((a - d) / 2, -(b + c) / 2)

    @property
    def lorentz(self) -> np.ndarray:
        cached = self.__dict__.get("_lorentz")
        if cached is None:
            alpha, beta = self.disk
            m = np.array([[alpha, beta], [beta.conjugate(), alpha.conjugate()]])
            mh = m.conj().T
            cached = np.empty((3, 3))
            for k, sk in enumerate(_SIGMAS):
                inner = mh @ sk @ m
                for j, sj in enumerate(_SIGMAS):
                    cached[k, j] = 0.5 * np.trace(sj @ inner).real
            object.__setattr__(self, "_lorentz", cached)
        return cached

    def act_disk(self, w: complex) -> complex:
        alpha, beta = self.disk
        return (alpha * w + beta) / (beta.conjugate() * w + alpha.conjugate())

    def act_half_plane(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def fixed_point(self) -> Optional[Point]:
        """Interior fixed point of an elliptic element."""
        tr = abs(self.trace())
        if tr >= 2.0 or abs(self.c) < 1e-300:
            return None
        z = complex(self.a - self.d, math.sqrt(4.0 - tr * tr)) / (2.0 * self.c)
        if z.imag < 0:
            z = z.conjugate()
        return Point.from_half_plane(z)


# --------------------------------------------------------------------------
# operations


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"
    ON = "on"


def compose(g: Isometry, h: Isometry) -> Isometry:
    return g @ h


def apply(g: Isometry, p: Point) -> Point:
    return Point.from_complex(g.act_disk(p.z))


def apply_boundary(g: Isometry, b: BoundaryPoint) -> BoundaryPoint:
    w = g.act_disk(b.z)
    return BoundaryPoint(math.atan2(w.imag, w.real))


def apply_geodesic(g: Isometry, gamma: DirectedGeodesic) -> DirectedGeodesic:
    return DirectedGeodesic(apply_boundary(g, gamma.source), apply_boundary(g, gamma.target))


def distance(p: Point, q: Point) -> float:
    num = abs(p.z - q.z)
    den = math.sqrt((1.0 - abs(p.z) ** 2) * (1.0 - abs(q.z) ** 2))
    return 2.0 * math.asinh(num / den)


def vector_distance(x: np.ndarray, y: np.ndarray) -> float:
    d = x - y
    return 2.0 * math.asinh(math.sqrt(max(0.0, mink(d, d))) / 2.0)


def geodesic_through(p: End, q: End) -> DirectedGeodesic:
    """Directed geodesic meeting p then q (points or boundary points)."""
    if isinstance(p, Point) and isinstance(q, Point):
        if not distance(p, q) > _tol().geodesic:
            raise DegenerateInput("points coincide")
    elif isinstance(p, BoundaryPoint) and isinstance(q, BoundaryPoint):
        return DirectedGeodesic(p, q)
    n = jcross(p.vec, q.vec)
    if not mink(n, n) > 0:
        raise DegenerateInput("points coincide")
    return DirectedGeodesic.from_normal(normalize_spacelike(n))


def signed_residual(gamma: DirectedGeodesic, p: End) -> float:
    """sinh of signed distance for points; horocyclic analogue for boundary points."""
    return mink(p.vec, gamma.normal)


def side_of(gamma: DirectedGeodesic, p: End, tol: Optional[float] = None) -> Side:
    tol = _tol().on if tol is None else tol
    r = signed_residual(gamma, p)
    if abs(r) < tol:
        return Side.ON
    return Side.LEFT if r > 0 else Side.RIGHT


@dataclass(frozen=True)
class HalfPlane:
    """The closed region to the left of ``carrier``."""

    carrier: DirectedGeodesic

    def contains(self, p: End) -> bool:
        return side_of(self.carrier, p) is not Side.RIGHT


def perpendicular_bisector(p: Point, q: Point) -> HalfPlane:
    """Half-plane of points at least as close to p as to q."""
    if not distance(p, q) > _tol().geodesic:
        raise DegenerateInput("bisector of coincident points")
    n = normalize_spacelike(p.vec - q.vec)
    return HalfPlane(DirectedGeodesic.from_normal(n))


@dataclass(frozen=True)
class Segment:
    carrier: DirectedGeodesic
    e1: End
    e2: End

    def __post_init__(self):
        for e in (self.e1, self.e2):
            if abs(signed_residual(self.carrier, e)) > 1e-9:
                raise DegenerateInput("segment endpoint is not on its carrier")

    @classmethod
    def between(cls, e1: End, e2: End) -> "Segment":
        return cls(geodesic_through(e1, e2), e1, e2)


class CrossingKind(Enum):
    NO = "no"
    YES = "yes"
    TOUCHES = "touches"


@dataclass(frozen=True)
class Crossing:
    kind: CrossingKind
    point: Optional[Point] = None


def crosses(gamma: DirectedGeodesic, s: Segment) -> Crossing:
    s1, s2 = side_of(gamma, s.e1), side_of(gamma, s.e2)
    if Side.ON in (s1, s2):
        return Crossing(CrossingKind.TOUCHES)
    if s1 is s2:
        return Crossing(CrossingKind.NO)
    x = meet(gamma.normal, s.carrier.normal)
    return Crossing(CrossingKind.YES, Point.from_vector(x))


class ArcSide(Enum):
    LEFT = "left"
    RIGHT = "right"
    ENDPOINT = "endpoint"


def boundary_interval_side(gamma: DirectedGeodesic, b: BoundaryPoint) -> ArcSide:
    tol = _tol().on
    if angular_gap(b.theta, gamma.source.theta) < tol or angular_gap(b.theta, gamma.target.theta) < tol:
        return ArcSide.ENDPOINT
    left_arc = ccw_length(gamma.target.theta, gamma.source.theta)
    if in_open_arc(b.theta, gamma.target.theta, left_arc):
        return ArcSide.LEFT
    return ArcSide.RIGHT
