"""JSON-ready report dictionaries and a deterministic JSON writer."""

from __future__ import annotations

import json
import math
from importlib import resources
from typing import Any, Dict, Iterable, List, Optional, Sequence

from .coder import CuttingSequence
from .dirichlet import DirichletDomain, DomainMetrics, domain_metrics
from .geometry import BoundaryPoint, DirectedGeodesic, Point, Segment, Side
from .group import GroupElement
from .markov.check import MarkovReport
from .markov.forbidden import ForbiddenWordReport
from .markov.realize import (
    RealizabilityResult,
    Realizable,
    SeparationCertificate,
    SubdivisionCertificate,
    Unknown,
    Unrealizable,
)

SCHEMA_VERSION = "1"


# --------------------------------------------------------------------------
# writer


def _dump(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        if obj == 0.0:
            return "0.0"
        return format(obj, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_dump(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, str)) and not isinstance(v, bool) for v in obj) and len(obj) <= 4:
            return "[" + ", ".join(_dump(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _dump(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):  # numpy scalar
        return _dump(obj.item(), indent, level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    """JSON text with floats written to 17 significant digits."""
    return _dump(obj, indent, 0) + "\n"


def load_schema(name: str) -> Dict:
    text = resources.files("dirichlet_morse").joinpath("schemas", f"{name}.json").read_text()
    return json.loads(text)


# --------------------------------------------------------------------------
# pieces


def _f(x: float) -> float:
    return float(x)


def point_json(p) -> Dict:
    if isinstance(p, Point):
        h = p.half_plane
        return {"kind": "point", "disk": [_f(p.x), _f(p.y)], "half_plane": [_f(h.real), _f(h.imag)]}
    h = p.half_plane
    return {"kind": "boundary", "theta": _f(p.theta), "half_plane": None if math.isinf(h) else _f(h)}


def geodesic_json(g: DirectedGeodesic) -> Dict:
    return {"source": _f(g.source.theta), "target": _f(g.target.theta)}


def segment_json(s: Segment) -> Dict:
    return {"start": point_json(s.e1), "end": point_json(s.e2)}


def element_json(g: GroupElement) -> Dict:
    m = g.matrix
    return {"word": list(g.word), "matrix": [[_f(m.a), _f(m.b)], [_f(m.c), _f(m.d)]]}


def _header(kind: str, config: Optional[Dict]) -> Dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "config": dict(config or {})}


def metrics_json(m: DomainMetrics) -> Dict:
    return {
        "phi_max": _f(m.phi_max),
        "a_min": None if math.isinf(m.a_min) else _f(m.a_min),
        "epsilon": None if m.epsilon is None else _f(m.epsilon),
        "diameter": None if m.diameter is None else _f(m.diameter),
    }


# --------------------------------------------------------------------------
# reports


def domain_report(domain: DirichletDomain, config: Optional[Dict] = None) -> Dict:
    out = _header("domain", config)
    c = domain.center
    out.update({
        "center": point_json(c),
        "depth": domain.depth,
        "stable": domain.stable,
        "orbit_size": domain.orbit_size,
        "is_ideal": domain.is_ideal,
        "alphabet": domain.labels,
        "edges": [
            {
                "label": e.name,
                "paired_with": e.paired_edge_index,
                "inverse_label": domain.edges[e.paired_edge_index].name,
                "start_vertex": e.start,
                "end_vertex": e.end,
                "matrix": element_json(e.label)["matrix"],
            }
            for e in domain.edges
        ],
        "vertices": [
            {"position": point_json(v.position), "kind": v.kind, "angle": _f(v.angle)}
            for v in domain.vertices
        ],
        "finite_vertices": sum(v.is_finite for v in domain.vertices),
        "elliptic_fixed_points": [point_json(p) for p in domain.edge_interior_fixed_points],
        "metrics": metrics_json(domain_metrics(domain)),
    })
    return out


def trace_report(domain: DirichletDomain, cs: CuttingSequence, config: Optional[Dict] = None) -> Dict:
    out = _header("trace", config)
    out.update({
        "geodesic": geodesic_json(cs.geodesic),
        "word": list(cs.word),
        "start_copy": list(cs.start_element.word),
        "offset": cs.offset,
        "complete": list(cs.complete),
        "copy_chain": [list(domain.alphabet.reduce(g.word)) for g in cs.chain],
    })
    return out


def sample_report(domain: DirichletDomain, codes: Sequence[CuttingSequence], config: Optional[Dict] = None) -> Dict:
    out = _header("sample", config)
    out.update({
        "count": len(codes),
        "codes": [{"geodesic": geodesic_json(c.geodesic), "word": list(c.word)} for c in codes],
    })
    return out


def verdict_json(result: RealizabilityResult) -> Dict:
    v = result.verdict
    if isinstance(v, Realizable):
        return {"status": "realizable", "witness": geodesic_json(v.witness)}
    if isinstance(v, Unknown):
        return {"status": "unknown", "resolution": _f(v.resolution), "undecided": v.undecided}
    cert = v.certificate
    if isinstance(cert, SeparationCertificate):
        return {"status": "unrealizable", "certificate": certificate_json(cert)}
    return {"status": "unrealizable",
            "certificate": {"kind": "subdivision", "rectangles": cert.rectangles, "max_depth": cert.max_depth}}


def certificate_json(cert: SeparationCertificate) -> Dict:
    return {
        "kind": "separation",
        "geodesic": geodesic_json(cert.geodesic),
        "edges": list(cert.edges),
        "sides": [s.value for s in cert.sides],
        "segments": [segment_json(s) for s in cert.segments],
        "recheck": cert.recheck(),
    }


def realize_report(result: RealizabilityResult, method: str, config: Optional[Dict] = None) -> Dict:
    out = _header("realize", config)
    out.update({"word": list(result.word), "method": method, "verdict": verdict_json(result)})
    return out


def forbidden_json(rep: ForbiddenWordReport) -> Dict:
    return {
        "k": rep.k,
        "word": list(rep.word),
        "vertex": point_json(rep.vertex),
        "critical_geodesic": geodesic_json(rep.critical),
        "gamma_a": geodesic_json(rep.gamma_a),
        "gamma_b": geodesic_json(rep.gamma_b),
        "z_finite": rep.z_finite,
        "certificate": certificate_json(rep.certificate),
        "full_word": verdict_json(rep.full) if rep.full is not None else None,
        "blocks": [{"word": list(b.word), "verdict": verdict_json(b)} for b in rep.blocks],
        "attempts": rep.attempts,
        "verified": rep.verified if rep.full is not None else None,
    }


def forbidden_report(rep: ForbiddenWordReport, config: Optional[Dict] = None) -> Dict:
    out = _header("forbidden", config)
    out.update(forbidden_json(rep))
    return out


def markov_report(rep: MarkovReport, config: Optional[Dict] = None) -> Dict:
    out = _header("markov", config)
    out.update({
        "k": rep.k,
        "samples": rep.samples,
        "window": rep.window,
        "is_ideal": rep.is_ideal,
        "passed": rep.passed,
        "rule": {"passed": rep.rule_pass, "offending_words": [list(w) for w in rep.inverse_pair_words]},
        "blocks": {"observed": rep.observed_blocks, "admissible": rep.admissible_blocks},
        "realization": None if not rep.is_ideal else {
            "passed": rep.realization_pass,
            "tested": len(rep.word_checks),
            "failures": [list(c.word) for c in rep.word_checks if not (c.result.realizable and c.round_trip)],
        },
        "forbidden": None if rep.is_ideal else {
            "passed": rep.forbidden_pass,
            "reports": [forbidden_json(f) for f in rep.forbidden],
            "failures": [{"k": k, "message": m} for k, m in rep.forbidden_failures],
        },
        "note": rep.note,
    })
    return out
