"""Construct a word whose (k+1)-blocks are all realizable but which is not.

Outline, with D_0 a copy having the finite vertex V as a corner:

1. a ray from V into D_0 crosses edges e_1..e_k (A_i on its left, B_i on its
   right); e_0 = [V, B_0] and [A_0, V] are the two edges of D_0 at V;
2. rotating the ray clockwise about V, the first B_j it meets gives the
   critical geodesic c through V and B_j;
3. a small turn of the ray about a point u beyond e_k gives gamma_b, which
   crosses e_0 near V and then e_1..e_k;
4. a small turn of c about a point w beyond e_k gives gamma_a, which crosses
   [A_0, V] near V, then e_1..e_k, and is followed until it leaves through an
   edge lying strictly to the right of c.

The word read by gamma_b on e_0 followed by everything gamma_a reads from e_1
on is then forbidden: e_0 and the last edge lie right of c, e_j lies left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..coder import Walker
from ..dirichlet import DirichletDomain
from ..errors import ConstructionFailed, NoFiniteVertices, NonGeneric, DegenerateInput
from ..geometry import (
    TWO_PI,
    BoundaryPoint,
    DirectedGeodesic,
    Point,
    Segment,
    Side,
    direction_at,
    geodesic_normal_at,
    geodesic_through,
    meet,
    mink,
    point_along,
    wrap,
)
from ..group import GroupElement
from .realize import (
    RealizabilityResult,
    SeparationCertificate,
    Unrealizable,
    realize_word,
)
from .words import Word, factors

DEFAULT_ATTEMPTS = 400
_STRICT = 1e-6  # residual margin used for "strictly on a side" during the construction
_MAX_TAIL = 60


@dataclass(frozen=True)
class ForbiddenWordReport:
    k: int
    word: Word
    vertex: Point
    critical: DirectedGeodesic      # c, through V and B_j
    gamma_a: DirectedGeodesic
    gamma_b: DirectedGeodesic
    certificate: SeparationCertificate
    full: RealizabilityResult
    blocks: Tuple[RealizabilityResult, ...]
    attempts: int
    z_finite: bool
    diagnostics: Dict = field(default_factory=dict, compare=False)

    @property
    def verified(self) -> bool:
        return (isinstance(self.full.verdict, Unrealizable)
                and all(b.realizable for b in self.blocks)
                and self.certificate.recheck())


def _end(domain, element, idx):
    v = domain.vertices[idx]
    x = element.matrix.lorentz @ v.vec
    return (Point.from_vector(x) if v.is_finite else BoundaryPoint.from_vector(x)), x


def _res(x, n):
    if x[2] != 0 and abs(mink(x, x)) < 1e-6 * x[2] ** 2:
        x = x / x[2]
    return mink(x, n)


class _Attempt:
    def __init__(self, domain: DirichletDomain, k: int, vertex_index: int, fraction: float):
        self.domain = domain
        self.k = k  # number of edges the ray crosses; at least the block size minus one
        self.iv = vertex_index
        self.fraction = fraction

    def fail(self, stage, msg):
        raise ConstructionFailed(stage, msg, {"vertex": self.iv, "fraction": self.fraction})

    def run(self):
        d = self.domain
        vx = d.vertices[self.iv]
        V = vx.vec
        e_in, e_out = d.edges[vx.edges[0]], d.edges[vx.edges[1]]
        psi_out = direction_at(V, d.vertices[e_out.end].vec)
        psi0 = wrap(psi_out + self.fraction * vx.angle)
        g0 = GroupElement.identity()

        # (1) the ray from V
        n0 = geodesic_normal_at(V, psi0)
        gamma0 = DirectedGeodesic.from_normal(n0)
        walker = Walker(d, gamma0.source.vec, gamma0.target.vec, g0, skip=[self.iv])
        crossed = []  # (letter, element of copy left, local edge index)
        try:
            for _ in range(self.k):
                el = walker.forward_element
                name, ex, _ = walker.step_forward()
                crossed.append((name, el, ex))
        except NonGeneric as exc:
            self.fail("ray", str(exc))
        A, B, Avec, Bvec = [], [], [], []
        for _, el, ex in crossed:
            e = d.edges[ex]
            b, bv = _end(d, el, e.start)
            a, av = _end(d, el, e.end)
            B.append(b); Bvec.append(bv); A.append(a); Avec.append(av)
        B0, B0v = _end(d, g0, e_out.end)

        # (2) clockwise rotation about V
        turns = []
        for b, bv in zip(B, Bvec):
            turns.append((psi0 - direction_at(V, bv)) % TWO_PI)
        order = np.argsort(turns)
        j = int(order[0])
        phi = turns[j]
        if not isinstance(B[j], Point):
            self.fail("rotation", "first right endpoint met is ideal")
        if not (psi0 - psi_out) % TWO_PI > phi + 1e-6:
            self.fail("rotation", "rotation reaches the edge [V, B_0] first")
        c = geodesic_through(Point.from_vector(V), B[j])
        nc = c.normal
        if not _res(B0v, nc) < -_STRICT:
            self.fail("rotation", "B_0 is not strictly right of the critical geodesic")
        for i in range(self.k):
            if not _res(Avec[i], nc) > _STRICT:
                self.fail("rotation", f"A_{i + 1} is not strictly left of the critical geodesic")
            # endpoints shared with B_j (a ray passing a vertex star) sit on c
            if not _res(Bvec[i], nc) < (_STRICT if turns[i] - phi < 1e-9 else -_STRICT):
                self.fail("rotation", f"B_{i + 1} is not strictly right of the critical geodesic")

        letters = [x[0] for x in crossed]

        # (3) gamma_b: turn the ray about u beyond e_k
        xk = meet(n0, _carrier(d, crossed[-1]))
        if xk is None:
            self.fail("gamma_b", "ray does not meet the carrier of e_k")
        u = point_along(xk, direction_at(xk, gamma0.target.vec), 0.4)
        psi_u = direction_at(u, gamma0.target.vec)
        gamma_b, h0 = None, None
        beta = 0.2
        while beta > 1e-9 and gamma_b is None:
            g = DirectedGeodesic.from_normal(geodesic_normal_at(u, psi_u + beta))
            got = self._reads(g, g0, letters, entry=vx.edges[1])
            if got is not None:
                gamma_b, h0 = g, got
            beta /= 2
        if gamma_b is None:
            self.fail("gamma_b", "no small turn crosses [V, B_0] and then e_1..e_k")

        # (4) gamma_a: turn c about w beyond e_k, then follow it to the right of c
        xk = meet(nc, _carrier(d, crossed[-1]))
        if xk is None:
            self.fail("gamma_a", "critical geodesic does not meet the carrier of e_k")
        w = point_along(xk, direction_at(xk, c.target.vec), 0.4)
        psi_w = direction_at(w, c.target.vec)
        alpha = 0.2
        found = None
        while alpha > 1e-9 and found is None:
            g = DirectedGeodesic.from_normal(geodesic_normal_at(w, psi_w - alpha))
            if _res(V, g.normal) < -math.sinh(_STRICT) and self._reads(g, g0, letters, entry=vx.edges[0]) is not None:
                found = self._tail(g, g0, nc)
                if found is not None:
                    gamma_a = g
            alpha /= 2
        if found is None:
            self.fail("gamma_a", "no small turn of the critical geodesic leaves to its right")
        tail, last_edge, z_finite = found
        word = (h0,) + tuple(letters) + tuple(tail)
        e0 = Segment.between(Point.from_vector(V), B0)
        ej = Segment.between(A[j], B[j])
        cert = SeparationCertificate(c, (0, j + 1, len(word) - 1), (Side.RIGHT, Side.LEFT, Side.RIGHT),
                                     (e0, ej, last_edge))
        if not cert.recheck():
            self.fail("certificate", "side re-check of the construction certificate failed")
        return word, c, gamma_a, gamma_b, cert, z_finite, {"j": j + 1, "phi": phi, "psi0": psi0}

    def _reads(self, gamma, g0, letters, entry):
        """Backward letter if gamma enters D_0 through ``entry`` and then reads ``letters``."""
        try:
            w = Walker(self.domain, gamma.source.vec, gamma.target.vec, g0)
            en, _ = w.crossed(False)
            if en != entry:
                return None
            back, _, _ = w.step_backward()
            for name in letters:
                got, _, _ = w.step_forward()
                if got != name:
                    return None
            return back
        except NonGeneric:
            return None

    def _tail(self, gamma, g0, nc):
        d = self.domain
        w = Walker(d, gamma.source.vec, gamma.target.vec, g0, companions=[nc])
        try:
            for _ in range(self.k):
                w.step_forward()
            tail = []
            for _ in range(_MAX_TAIL):
                _, comp = w.frame_values(True)
                en, ex = w.crossed(True)
                e = d.edges[ex]
                el = w.forward_element
                name, _, _ = w.step_forward()
                tail.append(name)
                rz, rb = comp[0][e.end], comp[0][e.start]
                if rz < -_STRICT and rb < -_STRICT:
                    z, _ = _end(d, el, e.end)
                    b, _ = _end(d, el, e.start)
                    return tail, Segment.between(z, b), isinstance(z, Point)
        except NonGeneric:
            return None
        return None


def _carrier(domain, crossed_entry):
    _, el, ex = crossed_entry
    from ..geometry import normalize_spacelike

    return normalize_spacelike(el.matrix.lorentz @ domain.edges[ex].normal)


def find_forbidden_word(domain: DirichletDomain, k: int, budget: int = DEFAULT_ATTEMPTS, seed: int = 0,
                        verify: bool = True, extra_edges: int = 6) -> ForbiddenWordReport:
    """A word unrealizable by any geodesic although all its (k+1)-blocks are realizable.

    The ray from V is allowed to cross up to ``k + extra_edges`` edges: a word
    built from a longer ray is forbidden for every smaller block size too.
    """
    if k < 1:
        raise DegenerateInput("k must be at least 1")
    finite = [i for i, v in enumerate(domain.vertices) if v.is_finite]
    if not finite:
        raise NoFiniteVertices("the construction needs a finite vertex; ideal domains have none")
    rng = np.random.default_rng(seed)
    stages: Dict[str, int] = {}
    last: Optional[ConstructionFailed] = None
    for attempt in range(1, budget + 1):
        iv = finite[(attempt - 1) % len(finite)]
        n = k + ((attempt - 1) // len(finite)) % (extra_edges + 1)
        frac = float(rng.uniform(0.02, 0.98))
        try:
            word, c, ga, gb, cert, zf, diag = _Attempt(domain, n, iv, frac).run()
        except ConstructionFailed as exc:
            stages[exc.stage] = stages.get(exc.stage, 0) + 1
            last = exc
            continue
        if not verify:
            return ForbiddenWordReport(k, word, Point.from_vector(domain.vertices[iv].vec), c, ga, gb, cert,
                                       None, (), attempt, zf, diag)
        full = realize_word(domain, word)
        if not isinstance(full.verdict, Unrealizable):
            stages["verify-full"] = stages.get("verify-full", 0) + 1
            continue
        blocks = tuple(realize_word(domain, b) for b in factors(word, k + 1))
        if not all(b.realizable for b in blocks):
            stages["verify-blocks"] = stages.get("verify-blocks", 0) + 1
            continue
        diag = dict(diag, ray_edges=n, failures=dict(stages))
        return ForbiddenWordReport(k, word, Point.from_vector(domain.vertices[iv].vec), c, ga, gb, cert,
                                   full, blocks, attempt, zf, diag)
    raise ConstructionFailed(last.stage if last else "search", f"no forbidden word after {budget} attempts",
                             {"failures": stages})
