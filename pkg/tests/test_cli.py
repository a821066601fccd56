"""Command-line interface: subcommands, file formats, exit codes and
deterministic artifacts."""

import json
import math
import os

import pytest

from diffgeo.cli import main
from diffgeo.report import dump_json, format_float

HELIX_PC = """
curve helix
param t in [0, 6.283185307179586]
const a = 1
const b = 0.5
x = a*cos(t)
y = a*sin(t)
z = b*t
"""

DIAGONAL_SC = """
surfacecurve diag
param t in [0, 1]
u = 0.5 + t
v = 1.0 + 0.5*t
"""

HEMISPHERE_LOOP = """
loop hemisphere
region -pi pi 0 pi/2
arc t in [-pi, pi]
u = t
v = 0
corner 0
"""


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out


class TestEval:
    def test_sphere_gaussian_curvature(self, capsys, tmp_path):
        out_json = tmp_path / "r.json"
        code, out = run(capsys, "eval", "--shape", "sphere", "--param",
                        "R=2", "--at", "u=0.3,v=0.4", "--quantity", "K",
                        "--json", str(out_json))
        assert code == 0
        data = json.loads(out_json.read_text())
        assert data["schema"] == "diffgeo-report/1"
        (rec,) = data["records"]
        assert abs(rec["value"] - 0.25) <= 1e-9

    def test_definition_file_frenet(self, capsys, tmp_path):
        pc = tmp_path / "helix.pc"
        pc.write_text(HELIX_PC)
        code, out = run(capsys, "eval", "--file", str(pc), "--at", "t=0",
                        "--quantity", "frenet")
        assert code == 0
        assert "0.8" in out and "0.4" in out

    def test_grid_all_zero_on_plane(self, capsys, tmp_path):
        out_json = tmp_path / "grid.json"
        code, _ = run(capsys, "eval", "--shape", "plane", "--grid", "3x3",
                      "--quantity", "curvatures", "--json", str(out_json))
        assert code == 0
        data = json.loads(out_json.read_text())
        assert len(data["records"]) == 9
        assert all(r["value"]["K"] == 0.0 for r in data["records"])

    def test_evaluation_error_exit_code(self, capsys):
        code, _ = run(capsys, "eval", "--shape", "helix", "--at", "t=0",
                      "--quantity", "nonsense")
        assert code == 3

    def test_out_of_domain_rejected_then_clamped(self, capsys):
        code, _ = run(capsys, "eval", "--shape", "helix", "--at", "t=100",
                      "--quantity", "kappa")
        assert code == 3
        code, _ = run(capsys, "eval", "--shape", "helix", "--at", "t=100",
                      "--quantity", "kappa", "--clamp")
        assert code == 0

    def test_argument_error_exit_code(self):
        with pytest.raises(SystemExit) as exc:
            main(["eval", "--shape"])
        assert exc.value.code == 2

    def test_singular_point_recorded_with_location(self, capsys, tmp_path):
        out_json = tmp_path / "r.json"
        code, _ = run(capsys, "eval", "--shape", "cone", "--at", "u=0,v=1",
                      "--quantity", "K", "--json", str(out_json))
        assert code == 3
        data = json.loads(out_json.read_text())
        (rec,) = data["records"]
        assert rec["value"] is None
        assert "SingularSurfacePoint" in rec["status"]

    def test_curve_grid(self, capsys, tmp_path):
        out_json = tmp_path / "r.json"
        code, _ = run(capsys, "eval", "--shape", "helix", "--grid", "5",
                      "--quantity", "kappa", "--json", str(out_json))
        assert code == 0
        data = json.loads(out_json.read_text())
        assert len(data["records"]) == 5
        assert all(abs(r["value"] - 0.8) < 1e-10 for r in data["records"])


class TestVerify:
    def test_torus_passes(self, capsys, tmp_path):
        out_json = tmp_path / "v.json"
        code, out = run(capsys, "verify", "--shape", "torus",
                        "--samples", "12", "--json", str(out_json))
        assert code == 0
        data = json.loads(out_json.read_text())
        assert data["passed"] is True
        assert data["max_residual"] <= 1e-7

    def test_byte_identical_reruns(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "verify", "--shape", "torus", "--seed", "7",
            "--samples", "10", "--json", str(a))
        run(capsys, "verify", "--shape", "torus", "--seed", "7",
            "--samples", "10", "--json", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_different_seed_different_points(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "verify", "--shape", "torus", "--seed", "1",
            "--samples", "10", "--json", str(a))
        run(capsys, "verify", "--shape", "torus", "--seed", "2",
            "--samples", "10", "--json", str(b))
        assert a.read_bytes() != b.read_bytes()

    def test_suite_filter(self, capsys, tmp_path):
        out_json = tmp_path / "v.json"
        code, _ = run(capsys, "verify", "--shape", "sphere", "--suite",
                      "egregium", "--samples", "15", "--json", str(out_json))
        assert code == 0
        data = json.loads(out_json.read_text())
        assert [s["suite"] for s in data["suites"]] == ["egregium"]
        assert data["suites"][0]["max_residual"] <= 1e-9

    def test_curve_suites(self, capsys):
        code, out = run(capsys, "verify", "--shape", "helix",
                        "--samples", "15")
        assert code == 0
        assert "frenet-serret" in out


class TestGeodesic:
    def test_plane_bvp(self, capsys, tmp_path):
        csv = tmp_path / "g.csv"
        code, out = run(capsys, "geodesic", "--shape", "plane", "--from",
                        "0,0", "--to", "3,4", "--csv", str(csv))
        assert code == 0
        header, *rows = csv.read_text().strip().splitlines()
        assert header == "s,u,v,x,y,z"
        last = rows[-1].split(",")
        assert abs(float(last[0]) - 5.0) <= 1e-6

    def test_sphere_bvp_length(self, capsys, tmp_path):
        out_json = tmp_path / "g.json"
        code, _ = run(capsys, "geodesic", "--shape", "sphere", "--param",
                      "R=1", "--from", "u=0,v=0", "--to", "u=1.2,v=0",
                      "--json", str(out_json))
        assert code == 0
        data = json.loads(out_json.read_text())
        assert abs(data["summary"]["length"] - 1.2) <= 1e-6
        assert data["summary"]["endpoint_error"] <= 1e-6

    def test_cylinder_ivp_helix(self, capsys, tmp_path):
        out_json = tmp_path / "g.json"
        code, _ = run(capsys, "geodesic", "--shape", "cylinder", "--from",
                      "0,0", "--dir", "1,1", "--length", "10",
                      "--json", str(out_json))
        assert code == 0
        data = json.loads(out_json.read_text())
        assert data["summary"]["max_kappa_g"] <= 1e-7

    def test_solver_failure_exit_code(self, capsys):
        # antipodal points: degenerate multiplicity propagates as exit 5
        code, _ = run(capsys, "geodesic", "--shape", "sphere", "--from",
                      "0,0", "--to", "pi,0")
        assert code == 5


class TestTransport:
    def test_latitude_loop_summary(self, capsys, tmp_path):
        csv = tmp_path / "t.csv"
        out_json = tmp_path / "t.json"
        code, _ = run(capsys, "transport", "--shape", "sphere", "--loop",
                      "const-v:pi/6", "--vector", "1,0",
                      "--csv", str(csv), "--json", str(out_json))
        assert code == 0
        data = json.loads(out_json.read_text())
        colat = math.pi / 2 - math.pi / 6
        cap = 2 * math.pi * (1 - math.cos(colat))
        two_pi = 2 * math.pi
        mism = (data["summary"]["holonomy"] - cap + math.pi) % two_pi - math.pi
        assert abs(mism) <= 1e-6
        assert abs(data["summary"]["enclosed_total_curvature"] - cap) <= 1e-6
        assert data["summary"]["norm_drift"] <= 1e-8
        header, *rows = csv.read_text().strip().splitlines()
        assert header == "t,A1,A2,norm,angle"
        norms = [float(r.split(",")[3]) for r in rows]
        assert max(norms) - min(norms) <= 1e-8

    def test_surfacecurve_file(self, capsys, tmp_path):
        sc = tmp_path / "diag.sc"
        sc.write_text(DIAGONAL_SC)
        code, _ = run(capsys, "transport", "--shape", "torus", "--curve",
                      str(sc), "--vector", "0.5,0.5")
        assert code == 0

    def test_const_u_loop(self, capsys, tmp_path):
        # a tube circle on the torus: closed loop, small holonomy exists
        out_json = tmp_path / "t.json"
        code, _ = run(capsys, "transport", "--shape", "torus", "--loop",
                      "const-u:1.0", "--vector", "1,0",
                      "--json", str(out_json))
        assert code == 0
        data = json.loads(out_json.read_text())
        assert data["summary"]["norm_drift"] <= 1e-8


class TestGaussBonnet:
    def test_global_sphere(self, capsys, tmp_path):
        out_json = tmp_path / "gb.json"
        code, _ = run(capsys, "gauss-bonnet", "--shape", "sphere",
                      "--global", "--chi", "2", "--json", str(out_json))
        assert code == 0
        data = json.loads(out_json.read_text())
        assert abs(data["summary"]["defect"]) <= 1e-5
        assert abs(data["summary"]["total_curvature"] - 4 * math.pi) <= 1e-5

    def test_global_torus_chi_from_catalog(self, capsys, tmp_path):
        out_json = tmp_path / "gb.json"
        code, _ = run(capsys, "gauss-bonnet", "--shape", "torus", "--global",
                      "--json", str(out_json))
        assert code == 0
        data = json.loads(out_json.read_text())
        assert data["summary"]["chi"] == 0
        assert abs(data["summary"]["defect"]) <= 1e-5

    def test_loop_file_auto_corners_triangle(self, capsys, tmp_path):
        # planar triangle with straight sides: kappa_g = 0, K = 0, so the
        # computed exterior angles must sum to 2 pi on their own
        loop = tmp_path / "tri.loop"
        loop.write_text("""
loop triangle
region 0 0 0 0
arc t in [0, 1]
u = t
v = 0
corner auto
arc t in [0, 1]
u = 1 - t
v = t
corner auto
arc t in [0, 1]
u = 0
v = 1 - t
corner auto
""")
        out_json = tmp_path / "gb.json"
        code, _ = run(capsys, "gauss-bonnet", "--shape", "plane",
                      "--loop-file", str(loop), "--json", str(out_json))
        assert code == 0
        data = json.loads(out_json.read_text())
        assert abs(data["summary"]["sum_corner_angles"] - 2 * math.pi) <= 1e-9
        assert abs(data["summary"]["defect"]) <= 1e-8

    def test_loop_file_hemisphere(self, capsys, tmp_path):
        loop = tmp_path / "hemi.loop"
        loop.write_text(HEMISPHERE_LOOP)
        out_json = tmp_path / "gb.json"
        code, _ = run(capsys, "gauss-bonnet", "--shape", "sphere",
                      "--loop-file", str(loop), "--json", str(out_json))
        assert code == 0
        data = json.loads(out_json.read_text())
        assert abs(data["summary"]["sum_kappa_g"]) <= 1e-6
        assert abs(data["summary"]["total_curvature"] - 2 * math.pi) <= 1e-5
        assert abs(data["summary"]["defect"]) <= 1e-5


class TestReconstruct:
    def test_circle_closure(self, capsys, tmp_path):
        csv = tmp_path / "r.csv"
        code, _ = run(capsys, "reconstruct", "--kappa", "0.5", "--tau", "0",
                      "--length", "12.566370614359172", "--csv", str(csv))
        assert code == 0
        header, *rows = csv.read_text().strip().splitlines()
        assert header == "s,x,y,z"
        first = [float(x) for x in rows[0].split(",")[1:]]
        last = [float(x) for x in rows[-1].split(",")[1:]]
        gap = math.sqrt(sum((a - b) ** 2 for a, b in zip(first, last)))
        assert gap <= 1e-6

    def test_roundtrip_deviation_reported(self, capsys, tmp_path):
        out_json = tmp_path / "r.json"
        code, _ = run(capsys, "reconstruct", "--kappa", "0.8", "--tau",
                      "0.4", "--length", "12.566370614359172",
                      "--json", str(out_json))
        assert code == 0
        data = json.loads(out_json.read_text())
        assert data["summary"]["roundtrip_kappa_tau_dev"] <= 1e-6

    def test_zero_kappa_rejected(self, capsys):
        code, _ = run(capsys, "reconstruct", "--kappa", "0", "--tau", "0",
                      "--length", "1.0")
        assert code == 3


class TestReportFormat:
    def test_float_formatting(self):
        assert format_float(0.25) == "0.25"
        assert format_float(1.0) == "1.0"
        assert format_float(math.pi) == "3.1415926535897931"
        assert "e" in format_float(1.5e-20)
        with pytest.raises(ValueError):
            format_float(float("nan"))

    def test_json_escaping_and_order(self):
        s = dump_json({"b": 1, "a": [True, None, "x\"y"]})
        assert s == '{"b":1,"a":[true,null,"x\\"y"]}'

    def test_no_partial_file_on_serialization_failure(self, tmp_path):
        from diffgeo.report import write_json
        target = tmp_path / "out.json"
        with pytest.raises(TypeError):
            write_json(str(target), {"bad": object()})
        assert not target.exists()
        assert list(tmp_path.iterdir()) == []  # no stray temp files either

    def test_env_tolerance_override(self, capsys, monkeypatch):
        monkeypatch.setenv("DIFFGEO_TOL", "1e-8")
        code, _ = run(capsys, "geodesic", "--shape", "plane", "--from",
                      "0,0", "--to", "1,1")
        assert code == 0
