from __future__ import annotations

import json

import numpy as np
import pytest

from polybraid.cli import ERROR, NEGATIVE, OK, main
from polybraid.family import PolyFamily, ScalarLoopSamples, circle, wedge_of_circles
from polybraid.schema import dumps, family_to_json, scalar_loop_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(path, doc):
    path.write_text(dumps(doc))
    return str(path)


@pytest.fixture
def sqrt_family(tmp_path):
    F = PolyFamily.from_function(circle(24), 2, lambda _e, t: [-np.exp(2j * np.pi * t), 0.0])
    return write(tmp_path / "sqrt.json", family_to_json(F))


@pytest.fixture
def constant_family(tmp_path):
    F = PolyFamily.constant(wedge_of_circles(2, 4), [-1.0, 0.0])
    return write(tmp_path / "const.json", family_to_json(F))


class TestPolynomials:
    def test_disc_exact(self, capsys):
        code, out, _ = run(capsys, "disc", "[0, -1]")
        assert code == OK and json.loads(out)["discriminant"] == 4

    def test_disc_rational_free_float(self, capsys):
        code, out, _ = run(capsys, "disc", "[0.0, -1.0]")
        re, im = json.loads(out)["discriminant"]
        assert code == OK and re == pytest.approx(4.0) and im == pytest.approx(0.0)

    def test_roots(self, capsys):
        code, out, _ = run(capsys, "roots", "[0, -1]")
        rs = json.loads(out)["roots"]
        assert code == OK and np.allclose([complex(*z) for z in rs], [-1, 1])

    def test_bad_coeffs(self, capsys):
        code, _, err = run(capsys, "disc", "[true]")
        assert code == ERROR and json.loads(err)["error"] == "parse_error"

    def test_invalid_json(self, capsys):
        code, _, err = run(capsys, "roots", "[1,")
        assert code == ERROR and "message" in json.loads(err)


class TestFamilies:
    def test_track(self, capsys, sqrt_family, tmp_path):
        svg = tmp_path / "t.svg"
        code, out, _ = run(capsys, "track", sqrt_family, "--svg", str(svg))
        doc = json.loads(out)["trajectories"]["loop"]
        assert code == OK and len(doc["positions"][0]) == 2
        assert svg.read_text().startswith("<?xml")

    def test_braid(self, capsys, sqrt_family):
        code, out, _ = run(capsys, "braid", sqrt_family)
        m = json.loads(out)["monodromy"][0]
        assert code == OK and m["permutation"] == [2, 1] and len(m["braid"]["word"]) == 1

    def test_solve_negative(self, capsys, sqrt_family):
        code, out, _ = run(capsys, "solve", sqrt_family)
        assert code == NEGATIVE and json.loads(out)["exact_root_exists"] is False

    def test_solve_positive(self, capsys, constant_family, tmp_path):
        out_path = tmp_path / "v.json"
        code, out, _ = run(capsys, "solve", constant_family, "--out", str(out_path))
        doc = json.loads(out_path.read_text())
        assert code == OK and out == "" and doc["completely_solvable"] is True

    def test_perturb_seed(self, capsys, tmp_path, monkeypatch):
        F = PolyFamily.constant(circle(4), [0.0, 0.0])
        path = write(tmp_path / "d.json", family_to_json(F))
        monkeypatch.setenv("POLYBRAID_SEED", "7")
        code, out, _ = run(capsys, "perturb", path, "--tol", "1e-3")
        doc = json.loads(out)
        assert code == OK and doc["seed"] == 7 and doc["min_discriminant"] >= 1e-3
        _, again, _ = run(capsys, "perturb", path, "--tol", "1e-3")
        assert again == out

    def test_bad_seed(self, capsys, tmp_path, monkeypatch):
        path = write(tmp_path / "d.json", family_to_json(PolyFamily.constant(circle(4), [0.0, 0.0])))
        monkeypatch.setenv("POLYBRAID_SEED", "x")
        code, _, _ = run(capsys, "perturb", path)
        assert code == ERROR

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "track", str(tmp_path / "none.json"))
        assert code == ERROR and json.loads(err)["error"] == "parse_error"

    def test_mthroot(self, capsys, tmp_path):
        f = ScalarLoopSamples.from_function(lambda t: np.exp(4j * np.pi * t), 64)
        path = write(tmp_path / "f.json", scalar_loop_to_json(f))
        assert run(capsys, "mthroot", path, "--m", "2")[0] == OK
        code, out, _ = run(capsys, "mthroot", path, "--m", "3")
        assert code == NEGATIVE and json.loads(out)["winding"] == 2

    def test_render(self, capsys, tmp_path):
        path = write(tmp_path / "b.json", {"strands": 3, "word": [1, -2]})
        code, out, _ = run(capsys, "render", path)
        assert code == OK and "<svg" in out


class TestProGroups:
    def test_examples_and_divisibility(self, capsys, tmp_path):
        code, out, _ = run(capsys, "examples", "dyadic")
        sys_path = write(tmp_path / "dy.json", json.loads(out)["system"])
        phi = write(tmp_path / "phi.json", {"stage": 1, "target": {"kind": "integers", "size": 1}, "images": [[1]]})
        code, out, _ = run(capsys, "pro-divisible", sys_path, "--phi", phi, "--m", "4")
        assert code == OK and json.loads(out)["divisible"] is True
        code, out, _ = run(capsys, "pro-divisible", sys_path, "--m", "3")
        assert code == NEGATIVE

    def test_star_deg_n(self, capsys, tmp_path):
        code, out, _ = run(capsys, "examples", "deg-n", "--n", "5", "--wedge")
        doc = json.loads(out)
        assert code == OK and doc["wedge_system"]["stages"][0]["circles"] == 2
        s = write(tmp_path / "s.json", doc["system"])
        m = write(tmp_path / "m.json", doc["morphism"])
        code, out, _ = run(capsys, "pro-star", s, m)
        res = json.loads(out)
        assert code == NEGATIVE and res["stable_order"] == 60 and res["star_n"] is False

    def test_acyclic(self, capsys):
        code, out, _ = run(capsys, "examples", "acyclic", "--stages", "3")
        assert code == OK and len(json.loads(out)["system"]["bondings"]) == 3

    def test_sl2z_verify(self, capsys):
        code, out, _ = run(capsys, "sl2z-verify", "--budget", "6")
        doc = json.loads(out)
        assert code == OK and doc["normal_forms"]["U"] == "SQSQSQS" and doc["image_rank_sum"] == 2
        assert [c["sign"] for c in doc["identities"]] == [-1, -1]


class TestReport:
    def test_report(self, capsys, tmp_path):
        out_dir = tmp_path / "rep"
        code, out, _ = run(capsys, "report", "--out-dir", str(out_dir))
        assert code == OK
        assert out.count("[PASS]") == 12
        names = {p.name for p in out_dir.iterdir()}
        assert {"acceptance.tsv", "acceptance.json", "acceptance.svg", "braid_n2.svg", "b4_u.svg"} <= names
        rows = (out_dir / "acceptance.tsv").read_text().splitlines()
        assert len(rows) == 13 and rows[0].startswith("criterion\tname")
        assert all(r["passed"] for r in json.loads((out_dir / "acceptance.json").read_text()))
