import io
import json
from fractions import Fraction

import pytest

from conftest import GOLDEN
from oracles import projective_i
from toricqd.cli import run


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


def test_fan_check_p2(fixture_path, tmp_path):
    out = tmp_path / "r.json"
    code, text = call("fan-check", "--spec", fixture_path("p2"), "--json", str(out))
    assert code == 0
    rep = json.loads(out.read_text())["base"]
    assert (rep["rays"], rep["cones"], rep["cohomology_dim"]) == (3, 3, 3)
    assert "dim H* = 3" in text


def test_mori_f1_bundle(fixture_path, tmp_path):
    out = tmp_path / "r.json"
    code, _ = call("mori", "--spec", fixture_path("f1_bundle"), "--json", str(out))
    rep = json.loads(out.read_text())
    assert code == 0
    assert len(rep["bundle"]["mori_generators"]) == 2
    assert rep["wall_curves_match_lifts"]


def test_non_nef_bundle_flagged(fixture_path):
    code, text = call("fan-check", "--spec", fixture_path("p1_nonnef"))
    assert code == 0
    assert "[FAIL] L_1 nef" in text
    code, _ = call("fan-check", "--spec", fixture_path("p1_nonnef"), "--strict")
    assert code == 1


def test_jfunction_golden(fixture_path):
    code, text = call("jfunction", "--spec", fixture_path("p1"), "--bound", "3", "--golden", str(GOLDEN / "p1_jfunction.json"))
    assert code == 0 and "golden: match" in text
    # the golden file itself agrees with the hand expansion of prod (p + m hbar)^-2
    data = json.loads((GOLDEN / "p1_jfunction.json").read_text())
    for entry in data["series"]["coefficients"]:
        d = entry["key"][0]
        got = {(e, tuple(m)): Fraction(c) for e, terms in entry["laurent"] for m, c in terms}
        assert got == (projective_i(1, d) if d else {(0, (0,)): 1})


def test_twist_golden(fixture_path):
    code, text = call("twist", "--spec", fixture_path("f1_bundle"), "--golden", str(GOLDEN / "f1_twist.json"))
    assert code == 0 and "golden: match" in text
    # T_{1,0} = 1 / ((z + hbar)(z - p + hbar)): hbar^-2 + (p - 2z) hbar^-3 in the ring z^2 = pz, p^2 = 0
    assert "T[nu=1, beta=[0]] = hbar^-2 + (p1 - 2*z)*hbar^-3" in text


def test_verify_golden(fixture_path):
    code, text = call("verify-conjecture", "--spec", fixture_path("f1_bundle"), "--golden", str(GOLDEN / "f1_verify.json"))
    assert code == 0 and "golden: match" in text


def test_golden_mismatch(fixture_path, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    code, text = call("jfunction", "--spec", fixture_path("p1"), "--golden", str(bad))
    assert code == 1 and "MISMATCH" in text


def test_gw_p2_line(fixture_path):
    code, text = call("gw", "--spec", fixture_path("p2"))
    assert code == 0
    block = text.split("beta = [1]:")[1].split("beta = [2]:")[0]
    assert "k=1: 1" in block and "k=2: -3*p1" in block and "k=3: 6*p1^2" in block


@pytest.mark.parametrize(
    "name,relations",
    [
        ("f1_bundle", ["-p1*z + z^2 - q1 = 0", "p1^2 + q2*(p1 - z) = 0"]),
        ("p1xp1_bundle", ["z^2 - q1 = 0", "p1^2 - q2 = 0"]),
    ],
)
def test_verify_end_to_end(fixture_path, name, relations):
    code, text = call("verify-conjecture", "--spec", fixture_path(name))
    assert code == 0 and "RESULT: PASS" in text
    for r in relations:
        assert r in text


def test_cubic_end_to_end(fixture_path, tmp_path):
    out = tmp_path / "r.json"
    code, text = call("verify-conjecture", "--spec", fixture_path("p3_cubic"), "--json", str(out))
    rep = json.loads(out.read_text())
    assert code == 0
    assert rep["routes"]["P2_support"] == [[1]]
    assert rep["lambda"]["lambda2"] == [[1]]


def test_relations_command(fixture_path):
    code, text = call("relations", "--spec", fixture_path("p2_bundle"))
    assert code == 0
    assert "lifted relation: p1^3 + q2*(p1 - z) = 0" in text


def test_input_errors(tmp_path, fixture_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"rays": [[1], [-1]],\n "cones": [[0], [1]\n}')
    assert call("fan-check", "--spec", str(bad))[0] == 2
    bad.write_text(json.dumps({"rays": [[1], [-1]], "cones": [[0], [5]]}))
    assert call("fan-check", "--spec", str(bad))[0] == 2
    bad.write_text(json.dumps({"rays": [[1], [-1]]}))
    assert call("fan-check", "--spec", str(bad))[0] == 2
    bad.write_text(json.dumps({"rays": [[1], [-1]], "cones": [[0], [1]], "bundle": {"matrix": [[1], [0]]}}))
    assert call("fan-check", "--spec", str(bad))[0] == 2
    assert call("fan-check", "--spec", str(tmp_path / "missing.json"))[0] == 2
    assert call("verify-conjecture", "--spec", fixture_path("p1"))[0] == 2
    assert call("jfunction", "--spec", fixture_path("p1"), "--bound", "-1")[0] == 2


def test_json_parse_error_names_line(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"rays": [[1], [-1]],\n "cones": [[0], [1]\n}')
    run(["fan-check", "--spec", str(bad)])
    assert "line 3" in capsys.readouterr().err


def test_h_guard(tmp_path):
    spec = tmp_path / "g.json"
    spec.write_text(json.dumps({"rays": [[1], [-1]], "cones": [[0], [1]], "bounds": {"h_guard": 4}}))
    assert call("jfunction", "--spec", str(spec), "--bound", "1")[0] == 0
    assert call("jfunction", "--spec", str(spec), "--bound", "2")[0] == 2
