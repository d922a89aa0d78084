import json
import math

import pytest

from octamap.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, ORBIT_HEADER, main
from octamap.emit import read_csv

S = math.sqrt(0.5)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_only_mir(capsys):
    code, out, err = run(capsys, "verify", "--only", "mir", "--trials", "5")
    report = json.loads(out)
    assert code == EXIT_OK and report["passed"]
    assert {c["group"] for c in report["checks"]} == {"mir"}
    assert "PASS" in err


def test_verify_mutant_fails(capsys):
    code, out, _ = run(capsys, "verify", "--only", "pullback", "--only", "poisson", "--trials", "5", "--mutate")
    report = json.loads(out)
    assert code == EXIT_FAIL and not report["passed"]
    failed = {c["name"] for c in report["checks"] if not c["passed"]}
    assert {"Delta pullback", "T3 pullback", "Poisson bracket"} <= failed


def test_verify_known_discrepancies_do_not_fail(capsys):
    code, out, err = run(capsys, "verify", "--only", "v", "--only", "w", "--trials", "5")
    report = json.loads(out)
    assert code == EXIT_OK
    known = [c for c in report["checks"] if c["known_discrepancy"]]
    assert known and not any(c["passed"] for c in known)
    assert "KNOWN" in err


def test_verify_unknown_group(capsys):
    code, _, err = run(capsys, "verify", "--only", "nosuchgroup")
    assert code == EXIT_INPUT and "groups are" in err


def test_orbit_regular_is_fixed(capsys):
    code, out, _ = run(capsys, "orbit", "--coords", "regular", "--steps", "200", "--format", "csv")
    header, rows = read_csv(out)
    assert code == EXIT_OK and tuple(header) == ORBIT_HEADER
    assert {tuple(r[1:5]) for r in rows} == {("1/2*sqrt(2)",) * 4}
    assert all(r[5] == "1" for r in rows)


def test_orbit_float_drift(capsys):
    code, out, _ = run(capsys, "orbit", "--coords", "0.9,0.8,0.9,0.7", "--backend", "float", "--steps", "4096")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["rows"] == 4097 and rep["max_drift"] < 1e-6


def test_orbit_exact_csv_round_trip(capsys):
    code, out, _ = run(capsys, "orbit", "--coords", "9/10,4/5,9/10,7/10", "--steps", "3", "--back", "2", "--format", "csv")
    header, rows = read_csv(out)
    assert code == EXIT_OK and [int(r[0]) for r in rows] == [-2, -1, 0, 1, 2, 3]
    assert {r[6] for r in rows} == {"18161/4200"} and {r[9] for r in rows} == {"0.0"}


def test_orbit_exact_step_limit(capsys):
    code, _, err = run(capsys, "orbit", "--coords", "9/10,4/5,9/10,7/10", "--steps", "100")
    assert code == EXIT_INPUT and "limited" in err


@pytest.mark.parametrize("coords", ["1,2,3", "a,b,c,d", "1/0,1,1,1"])
def test_orbit_bad_coords(capsys, coords):
    code, _, _ = run(capsys, "orbit", "--coords", coords)
    assert code == EXIT_INPUT


def test_orbit_domain_error(capsys):
    code, _, err = run(capsys, "orbit", "--coords", "0,1,1,1", "--steps", "2")
    assert code == EXIT_INPUT and "error" in err


def test_svg_projection_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "ab.svg", tmp_path / "cd.svg"
    common = ["orbit", "--coords", "0.9,0.8,0.9,0.7", "--backend", "float", "--steps", "300", "--format", "svg"]
    assert main(common + ["--out", str(a)]) == EXIT_OK
    assert main(common + ["--out", str(b), "--project", "c,d"]) == EXIT_OK
    again = tmp_path / "ab2.svg"
    assert main(common + ["--out", str(again)]) == EXIT_OK
    text = a.read_text()
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
    assert "projection a,b" in text and "projection c,d" in b.read_text()
    assert text == again.read_text()
    assert text.count("<circle") == 301


def test_bad_projection(capsys):
    code, _, _ = run(capsys, "orbit", "--coords", "regular", "--project", "a,a")
    assert code == EXIT_INPUT


def test_fixedpoints_origin(capsys):
    code, out, _ = run(capsys, "explore", "fixedpoints", "--k", "0", "--ell", "0")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["D"] == "32"
    assert rep["attractor"] == pytest.approx([S] * 4) and rep["repeller"] == pytest.approx([-S] * 4)
    assert rep["type"] == "hyperbolic" and rep["repeller_is_star_reorder"]


def test_fixedpoints_outside_K(capsys):
    code, _, _ = run(capsys, "explore", "fixedpoints", "--k", "1", "--ell", "0")
    assert code == EXIT_INPUT


def test_fixedpoints_grid_csv(capsys):
    code, out, _ = run(capsys, "explore", "fixedpoints", "--grid", "4", "--workers", "2", "--format", "csv")
    header, rows = read_csv(out)
    assert code == EXIT_OK and header == ["k", "ell", "D", "x0", "y0", "multiplier"] and len(rows) == 16
    assert all(float(r[2]) > 0 for r in rows)
    code2, out2, _ = run(capsys, "explore", "fixedpoints", "--grid", "4", "--workers", "1", "--format", "csv")
    assert out2 == out


def test_niceloop(capsys):
    code, out, _ = run(capsys, "explore", "niceloop", "--f1", "3", "--f2", "4")
    rep = json.loads(out)
    assert code == EXIT_OK and len(rep["cusps"]) == 2 and rep["closure_error"] < 1e-8
    assert rep["endpoints_c"] == pytest.approx([(17 - math.sqrt(33)) / 32, (17 + math.sqrt(33)) / 32], abs=1e-12)


def test_niceloop_bad_level(capsys):
    code, _, _ = run(capsys, "explore", "niceloop", "--f1", "3", "--f2", "3")
    assert code == EXIT_INPUT
