import json
import math
import re

import jsonschema
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dirichlet_morse.cli import main, parse_angle, parse_seed
from dirichlet_morse.geometry import BoundaryPoint, Point
from dirichlet_morse.render import geodesic_arc
from dirichlet_morse.report import dumps, load_schema


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_domain_modular(capsys):
    code, out, err = run(capsys, "domain", "--preset", "modular", "--center", "0+2i", "--depth", "4")
    assert code == 0
    report = json.loads(out)
    assert report["is_ideal"] is False
    assert report["finite_vertices"] == 2
    assert report["config"]["depth"] == 4
    assert "3 edges" in err


def test_domain_ideal_square(capsys):
    code, out, _ = run(capsys, "domain", "--preset", "ideal-square")
    assert code == 0 and json.loads(out)["is_ideal"] is True


def test_bad_preset(capsys):
    code, out, err = run(capsys, "domain", "--preset", "square")
    assert code == 2 and out == ""
    assert "unknown preset" in err


def test_bad_center(capsys):
    assert run(capsys, "domain", "--center", "1-1i")[0] == 2
    assert run(capsys, "domain", "--center", "banana")[0] == 2


def test_modular_center_on_elliptic_point(capsys):
    code, _, err = run(capsys, "domain", "--center", "0+1i")
    assert code == 4 and "error:" in err


def test_trace_axis(capsys):
    code, out, err = run(capsys, "trace", "--preset", "ideal-square", "--source", "pi", "--target", "0",
                         "--window", "10")
    assert code == 0
    assert json.loads(out)["word"] == ["A"] * 20
    assert err.startswith("word: A A")


def test_trace_equal_endpoints(capsys):
    assert run(capsys, "trace", "--source", "1", "--target", "1")[0] == 2


def test_trace_through_vertex(capsys):
    # both finite modular vertices sit on the imaginary diameter of the disk;
    # this geodesic passes through the upper one transversally
    code, _, err = run(capsys, "trace", "--source", "2.8992966432025735", "--target", "0.7657900221957581")
    assert code == 3
    assert "vertex" in err and re.search(r"0\+0\.26794\d*j", err)


def test_check_markov_summary(capsys):
    code, out, err = run(capsys, "check-markov", "--preset", "ideal-square", "--k", "1", "--samples", "500",
                         "--seed", "7")
    assert code == 0 and "PASS" in err
    assert json.loads(out)["passed"] is True


def test_forbidden_command(capsys, tmp_path):
    svg = tmp_path / "f.svg"
    code, out, err = run(capsys, "forbidden", "--preset", "modular", "--k", "2", "--svg", str(svg))
    assert code == 0
    rep = json.loads(out)
    assert rep["verified"] is True and rep["certificate"]["recheck"] is True
    assert "S,T,T,S" in err and svg.exists()


def test_forbidden_on_ideal_domain(capsys):
    assert run(capsys, "forbidden", "--preset", "ideal-square")[0] == 4


def test_realize_prints_witness(capsys):
    code, out, err = run(capsys, "realize", "--preset", "ideal-square", "--word", "A,B,A")
    assert code == 0
    assert "witness" in err
    w = json.loads(out)["verdict"]["witness"]
    assert set(w) == {"source", "target"}


def test_realize_bad_letter(capsys):
    assert run(capsys, "realize", "--preset", "ideal-square", "--word", "A,Q")[0] == 2
    assert run(capsys, "realize", "--preset", "ideal-square")[0] == 2


def test_tolerance_override(capsys):
    code, out, _ = run(capsys, "domain", "--tol-vertex", "1e-6")
    assert code == 0
    assert json.loads(out)["config"]["tolerances"] == {"vertex": 1e-6}


def test_usage_errors_exit_2():
    for argv in (["domain", "--seed", "-3"], ["domain", "--seed", str(2**64)], ["domain", "--tol-on", "0"],
                 ["nope"]):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 2


@pytest.mark.parametrize("kind,args", [
    ("domain", ["domain", "--preset", "gamma2", "--center", "0.3+2i"]),
    ("trace", ["trace", "--source", "0.3", "--target", "2.5"]),
    ("sample", ["sample", "--preset", "ideal-square", "--samples", "5", "--window", "6"]),
    ("markov", ["check-markov", "--preset", "modular", "--k", "1", "--samples", "20"]),
    ("forbidden", ["forbidden", "--k", "1"]),
    ("realize", ["realize", "--word", "S,T,S,T"]),
])
def test_reports_match_schemas(capsys, tmp_path, kind, args):
    path = tmp_path / "r.json"
    assert main(args + ["--json", str(path)]) == 0
    capsys.readouterr()
    report = json.loads(path.read_text())
    jsonschema.validate(report, load_schema(kind))
    assert report["schema_version"] == "1" and report["kind"] == kind


def test_svg_is_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for p in (a, b):
        assert main(["trace", "--source", "0.3", "--target", "2.5", "--svg", str(p), "--json", str(tmp_path / "t.json")]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert "<svg" in text and "dc:date" not in text


@given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_geodesic_arcs_meet_the_circle_at_right_angles(s, t):
    if abs(math.remainder(s - t, 2 * math.pi)) < 1e-3:
        return
    spec = geodesic_arc(BoundaryPoint(s), BoundaryPoint(t))
    assert spec.orthogonality_residual() < 1e-6


def test_arc_between_interior_points():
    spec = geodesic_arc(Point.from_complex(0.2 + 0.1j), Point.from_complex(-0.3 + 0.4j))
    assert spec.orthogonality_residual() < 1e-6
    for p in (spec.p, spec.q):
        assert math.hypot(p[0] - spec.center[0], p[1] - spec.center[1]) == pytest.approx(spec.radius, rel=1e-9)


def test_dumps_format():
    text = dumps({"x": 0.1, "z": 0.0, "n": float("nan"), "l": [1, 2], "s": "T⁻¹"})
    assert '"x": 0.10000000000000001' in text
    assert '"z": 0.0' in text and '"n": null' in text
    assert '"l": [1, 2]' in text and "T⁻¹" in text
    assert json.loads(text)["x"] == 0.1


def test_parsers():
    assert parse_angle("pi") == pytest.approx(math.pi)
    assert parse_angle("-pi/2") == pytest.approx(-math.pi / 2)
    assert parse_angle("3pi/4") == pytest.approx(3 * math.pi / 4)
    assert parse_angle("0.25") == 0.25
    assert parse_seed("0x10") == 16
