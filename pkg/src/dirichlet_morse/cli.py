"""Command line entry point: ``dirichlet-morse <command> [options]``.

The JSON report goes to ``--json PATH`` (or to stdout when no path is given);
a short human-readable summary goes to stderr.  ``--svg PATH`` renders a
figure next to it.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from . import render
from .coder import TraceConfig, sample_generic, trace
from .dirichlet import DEFAULT_DEPTH, build_dirichlet, build_stable_dirichlet
from .errors import DirichletMorseError, NonGeneric, UsageError
from .geometry import DirectedGeodesic, Point
from .group import PRESETS, get_preset, load_group_file
from .markov.check import markov_check
from .markov.forbidden import find_forbidden_word
from .markov.realize import realize_word, realize_word_ideal
from .markov.words import as_word, require_admissible
from .report import (
    domain_report,
    dumps,
    forbidden_report,
    markov_report,
    realize_report,
    sample_report,
    trace_report,
)
from .tolerances import Tolerances, use_tolerances

_ANGLE = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


def parse_angle(text: str) -> float:
    """Radians; accepts plain numbers and forms like ``pi``, ``-pi/2``, ``3pi/4``."""
    m = _ANGLE.match(text)
    if m:
        coef = m.group(1)
        c = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
        d = float(m.group(2)) if m.group(2) else 1.0
        return c * math.pi / d
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


def parse_half_plane(text: str) -> complex:
    try:
        z = complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot parse {text!r} as a half-plane point like 0+2i") from None
    if not z.imag > 0:
        raise UsageError(f"{text} is not in the upper half-plane")
    return z


def parse_seed(text: str) -> int:
    try:
        s = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= s < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits (0 <= seed < 2**64)")
    return s


def _tol_flag(name: str) -> str:
    return "--tol-" + name.replace("_", "-")


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerances must be positive")
    return v


@dataclass
class RunConfig:
    preset: Optional[str]
    group_file: Optional[str]
    center: str
    depth: Optional[int]
    seed: int
    tolerances: Dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> Dict:
        out = {"preset": self.preset, "group_file": self.group_file, "center": self.center,
               "depth": self.depth, "seed": self.seed}
        if self.tolerances:
            out["tolerances"] = dict(sorted(self.tolerances.items()))
        return out


def _config(args) -> RunConfig:
    if args.preset and args.group_file:
        raise UsageError("give either --preset or --group-file, not both")
    preset = args.preset or (None if args.group_file else "modular")
    if preset is not None and preset not in PRESETS:
        raise UsageError(f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")
    tols = {n: getattr(args, "tol_" + n) for n in Tolerances.names() if getattr(args, "tol_" + n) is not None}
    return RunConfig(preset, args.group_file, args.center, args.depth, args.seed, tols)


def _domain(cfg: RunConfig):
    alphabet = get_preset(cfg.preset) if cfg.preset else load_group_file(cfg.group_file)
    center_text = cfg.center or alphabet.metadata.get("default_center", "0+2i")
    cfg.center = center_text
    z = parse_half_plane(center_text)
    w = (z - 1j) / (z + 1j)
    center = Point.checked(w)
    if cfg.depth is not None:
        return build_dirichlet(alphabet, center, cfg.depth)
    return build_stable_dirichlet(alphabet, center, DEFAULT_DEPTH)


def _emit(args, report: Dict):
    text = dumps(report)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _say(msg: str):
    print(msg, file=sys.stderr)


# --------------------------------------------------------------------------
# commands


def cmd_domain(args, cfg):
    d = _domain(cfg)
    _say(f"domain: {len(d.edges)} edges [{', '.join(d.labels)}], "
         f"{sum(v.is_finite for v in d.vertices)} finite vertices, ideal={d.is_ideal}, depth={d.depth}")
    if args.svg:
        render.render_domain(d, args.svg)
    _emit(args, domain_report(d, cfg.as_dict()))


def cmd_trace(args, cfg):
    d = _domain(cfg)
    gamma = DirectedGeodesic.from_angles(args.source, args.target)
    try:
        cs = trace(d, gamma, TraceConfig(max_steps=args.window))
    except NonGeneric as exc:
        where = ""
        if exc.position is not None:
            where = f" at disk point {Point.from_vector(exc.position).z:.6g}"
        raise NonGeneric(f"{exc}{where}", exc.vertex, exc.position) from None
    _say("word: " + " ".join(cs.word))
    if args.svg:
        render.render_trace(d, cs, args.svg)
    conf = dict(cfg.as_dict(), source=args.source, target=args.target, window=args.window)
    _emit(args, trace_report(d, cs, conf))


def cmd_sample(args, cfg):
    d = _domain(cfg)
    codes = sample_generic(d, args.samples, args.window, args.seed)
    _say(f"sampled {len(codes)} generic geodesics, window {args.window}")
    conf = dict(cfg.as_dict(), samples=args.samples, window=args.window)
    _emit(args, sample_report(d, codes, conf))


def cmd_check_markov(args, cfg):
    d = _domain(cfg)
    rep = markov_check(d, args.k, args.samples, args.word_length, args.seed, args.window, args.words)
    _say(f"check-markov k={args.k}: {'PASS' if rep.passed else 'FAIL'} "
         f"(no-inverse rule {'ok' if rep.rule_pass else 'violated'}; "
         + (f"{len(rep.word_checks)} words realized" if d.is_ideal
            else f"{len(rep.forbidden)} forbidden words") + ")")
    if args.svg:
        render.render_markov(d, rep, args.svg)
    conf = dict(cfg.as_dict(), k=args.k, samples=args.samples, window=args.window,
                words=args.words, word_length=args.word_length)
    _emit(args, markov_report(rep, conf))
    return 0 if rep.passed else 4


def cmd_forbidden(args, cfg):
    d = _domain(cfg)
    rep = find_forbidden_word(d, args.k, args.budget, seed=args.seed)
    _say(f"forbidden word (k={args.k}): {','.join(rep.word)}; certificate edges {rep.certificate.edges} "
         f"sides {[s.value for s in rep.certificate.sides]}; verified={rep.verified}")
    if args.svg:
        render.render_forbidden(d, rep, args.svg)
    conf = dict(cfg.as_dict(), k=args.k, budget=args.budget)
    _emit(args, forbidden_report(rep, conf))
    return 0 if rep.verified else 4


def cmd_realize(args, cfg):
    d = _domain(cfg)
    if not args.word:
        raise UsageError("--word is required")
    word = require_admissible(d, as_word(args.word))
    if d.is_ideal and not args.general:
        res, method = realize_word_ideal(d, word), "ideal"
    else:
        res, method = realize_word(d, word, resolution=args.resolution), "general"
    msg = f"{','.join(word)}: {res.status}"
    if res.realizable:
        w = res.verdict.witness
        msg += f" (witness {w.source.theta:.12g} -> {w.target.theta:.12g})"
    _say(msg)
    if args.svg:
        render.render_realize(d, res, args.svg)
    conf = dict(cfg.as_dict(), word=list(word))
    _emit(args, realize_report(res, method, conf))


COMMANDS = {
    "domain": cmd_domain,
    "trace": cmd_trace,
    "sample": cmd_sample,
    "check-markov": cmd_check_markov,
    "forbidden": cmd_forbidden,
    "realize": cmd_realize,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", help=f"one of: {', '.join(PRESETS)} (default modular)")
    common.add_argument("--group-file", help="JSON file with named generator matrices")
    common.add_argument("--center", help="domain centre in half-plane form, e.g. 0+2i")
    common.add_argument("--depth", type=int, help="orbit truncation depth (default: smallest stable from 4)")
    common.add_argument("--seed", type=parse_seed, default=0)
    common.add_argument("--json", help="write the JSON report here instead of stdout")
    common.add_argument("--svg", help="render a figure to this path")
    for name in Tolerances.names():
        common.add_argument(_tol_flag(name), dest="tol_" + name, type=_positive, default=None)

    p = argparse.ArgumentParser(prog="dirichlet-morse", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("domain", parents=[common], help="build and describe the Dirichlet domain")
    t = sub.add_parser("trace", parents=[common], help="cutting sequence of one geodesic")
    t.add_argument("--source", type=parse_angle, required=True, help="backward endpoint angle (radians, 'pi' allowed)")
    t.add_argument("--target", type=parse_angle, required=True, help="forward endpoint angle")
    t.add_argument("--window", type=int, default=10)
    s = sub.add_parser("sample", parents=[common], help="codes of random generic geodesics")
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--window", type=int, default=50)
    m = sub.add_parser("check-markov", parents=[common], help="test the 1-step Markov property")
    m.add_argument("--k", type=int, default=1)
    m.add_argument("--samples", type=int, default=500)
    m.add_argument("--window", type=int, default=50)
    m.add_argument("--words", type=int, default=100, help="random admissible words to realize (ideal domains)")
    m.add_argument("--word-length", type=int, default=12)
    f = sub.add_parser("forbidden", parents=[common], help="construct a forbidden word")
    f.add_argument("--k", type=int, default=1)
    f.add_argument("--budget", type=int, default=400)
    r = sub.add_parser("realize", parents=[common], help="find a geodesic reading a word")
    r.add_argument("--word", help="comma separated letters, e.g. A,B,A")
    r.add_argument("--general", action="store_true", help="use the subdivision search even on ideal domains")
    r.add_argument("--resolution", type=float, default=1e-9)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        with use_tolerances(**cfg.tolerances):
            code = COMMANDS[args.command](args, cfg)
        return code or 0
    except DirichletMorseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
