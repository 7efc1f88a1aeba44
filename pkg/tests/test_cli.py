import json
import math

import numpy as np
import pytest

from gaussform import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestZooCommands:
    def test_list_families(self, capsys):
        code, out, _ = run_cli(capsys, "zoo", "list")
        assert code == 0
        report = json.loads(out)
        assert report["schema_version"] == 1
        keys = [f["key"] for f in report["families"]]
        assert "ruled-6.2-2" in keys and "translational-6.4" in keys
        assert keys == sorted(keys)

    def test_sample_row_count(self, capsys, tmp_path):
        out_file = tmp_path / "m.csv"
        code, out, _ = run_cli(capsys, "zoo", "sample", "ruled-6.2-2",
                               "--param", "c=1", "--u", "0.5:2:16",
                               "--v", "0.1:1.5:16", "--out", str(out_file))
        assert code == 0
        assert json.loads(out)["rows"] == 256
        lines = out_file.read_text().splitlines()
        assert lines[0] == "i,j,u,v,x1,x2,x3"
        assert len(lines) == 257

    def test_unknown_family_exits_two(self, capsys):
        code, _, err = run_cli(capsys, "zoo", "sample", "nosuchfamily",
                               "--u", "0:1:2", "--v", "0:1:2")
        assert code == 2
        assert "UnknownFamily" in err

    def test_bad_grid_exits_two(self, capsys):
        code, _, _ = run_cli(capsys, "zoo", "sample", "horosphere",
                             "--u", "0:1", "--v", "0:1:2")
        assert code == 2


class TestCheckCommands:
    def test_forms_pass(self, capsys):
        code, out, _ = run_cli(capsys, "check", "forms", "horosphere")
        assert code == 0
        report = json.loads(out)
        assert all(report["summary"]["pass"].values())

    def test_forms_single_point(self, capsys):
        code, out, _ = run_cli(capsys, "check", "forms", "translational-6.4",
                               "--at", "0.3,-0.2")
        assert code == 0
        assert len(json.loads(out)["points"]) == 1

    def test_forms_free_graph(self, capsys):
        code, out, _ = run_cli(capsys, "check", "forms", "--graph", "1+u^2/8",
                               "--space", "h3",
                               "--grid=-0.5:0.5:5x-0.5:0.5:5")
        assert code == 0

    def test_conformal_expected_classes(self, capsys):
        for family, expect in [("ruled-6.7", 0), ("vertical-plane", 0),
                               ("control-bowl", 0)]:
            code, out, _ = run_cli(capsys, "check", "conformal", family)
            assert code == expect
        report = json.loads(out)
        assert report["expected_classification"] == "not_conformal"

    def test_points_outside_domain_fail(self, capsys):
        code, out, _ = run_cli(capsys, "check", "forms", "horosphere",
                               "--at", "10,10")
        assert code == 1
        assert json.loads(out)["points"][0]["status"] == "OutsideDomain"


class TestPdeCommand:
    def test_corollary_solution(self, capsys):
        code, out, _ = run_cli(capsys, "pde", "residual", "--eq", "6.2",
                               "--graph", "u*v/sqrt(1+v^2)",
                               "--grid", "0.1:0.9:9x0.1:0.9:9")
        assert code == 0
        report = json.loads(out)
        assert report["summary"]["max_abs_residual"] <= 1e-10
        assert report["points"][0]["regime"] == "space_like"

    def test_non_solution_fails(self, capsys):
        code, out, _ = run_cli(capsys, "pde", "residual", "--eq", "6.1",
                               "--graph", "1+u^2+v^2",
                               "--grid=-0.2:0.2:5x-0.2:0.2:5")
        assert code == 1


class TestDualize:
    def test_fit_isometry(self, capsys):
        code, out, _ = run_cli(capsys, "dualize", "translational-6.6",
                               "--fit-isometry")
        assert code == 0
        fit = json.loads(out)["summary"]["isometry_fit"]
        assert fit["target_family"] == "translational-6.4"
        assert abs(abs(fit["theta"]) - math.pi / 2) < 1e-12
        assert fit["max_gap"] <= 1e-6

    def test_plain_dualize(self, capsys):
        code, out, _ = run_cli(capsys, "dualize", "ruled-6.2-2",
                               "--grid", "0.3:0.8:4x0.3:1.2:4")
        assert code == 0
        report = json.loads(out)
        assert report["summary"]["max_transfer_residual"] <= 1e-8


class TestWeierstrassBuild:
    def test_radial_problem(self, capsys, tmp_path):
        out_file = tmp_path / "surface.csv"
        code, out, _ = run_cli(capsys, "weierstrass", "build",
                               "--g", "builtin:z", "--case", "1",
                               "--domain", "1.5:2.5:0.1:0.9", "--grid", "17",
                               "--boundary", "builtin:radial",
                               "--out", str(out_file))
        assert code == 0
        summary = json.loads(out)["summary"]
        assert summary["discrete_residual"] <= 1e-10
        assert summary["identity_defect"] <= 1e-10
        assert summary["kept_samples"] == 225
        assert out_file.exists()

    def test_expression_g_equivalent_to_builtin(self, capsys):
        code, out, _ = run_cli(capsys, "weierstrass", "build",
                               "--g", "u + i*v", "--case", "1",
                               "--domain", "1.5:2.5:0.1:0.9", "--grid", "9",
                               "--boundary", "builtin:radial")
        # expression g equals builtin:z, so the build must succeed the same way
        assert code == 2  # builtin:radial demands --g builtin:z
        code, out, _ = run_cli(capsys, "weierstrass", "build",
                               "--g", "builtin:z", "--case", "1",
                               "--domain", "1.5:2.5:0.1:0.9", "--grid", "9",
                               "--boundary", "builtin:radial")
        assert code == 0

    def test_incompatible_boundary_reports_failure(self, capsys):
        code, out, _ = run_cli(capsys, "weierstrass", "build",
                               "--g", "builtin:z", "--case", "1",
                               "--domain", "1.5:2.5:0.1:0.9", "--grid", "9",
                               "--boundary", "u + i*v")
        assert code == 1
        assert json.loads(out)["summary"]["error"] == "EmptyOutput"

    def test_modulus_violation_exits_two(self, capsys):
        code, _, err = run_cli(capsys, "weierstrass", "build",
                               "--g", "builtin:z", "--case", "1",
                               "--domain", "0.5:2.5:0.1:0.9", "--grid", "9",
                               "--boundary", "builtin:radial")
        assert code == 2
        assert "ConstraintViolation" in err


class TestExportObj:
    def _write_grid_csv(self, path, n, drop=()):
        lines = ["i,j,u,v,x1,x2,x3"]
        for i in range(n):
            for j in range(n):
                if (i, j) in drop:
                    continue
                lines.append(f"{i},{j},{i},{j},{float(i)},{float(j)},1.0")
        path.write_text("\n".join(lines) + "\n")

    def test_two_by_two(self, capsys, tmp_path):
        src = tmp_path / "g.csv"
        self._write_grid_csv(src, 2)
        dst = tmp_path / "g.obj"
        code, out, _ = run_cli(capsys, "export", "obj", "--in", str(src),
                               "--out", str(dst))
        assert code == 0
        text = dst.read_text()
        assert text.count("\nf ") + text.startswith("f ") == 2
        assert text.count("v ") == 4
        assert "\r" not in text

    def test_sixteen_square(self, capsys, tmp_path):
        src = tmp_path / "g.csv"
        self._write_grid_csv(src, 16)
        dst = tmp_path / "g.obj"
        code, out, _ = run_cli(capsys, "export", "obj", "--in", str(src),
                               "--out", str(dst))
        assert code == 0
        report = json.loads(out)
        assert report["vertices"] == 256
        assert report["faces"] == 450

    def test_hole_policy(self, capsys, tmp_path):
        src = tmp_path / "g.csv"
        self._write_grid_csv(src, 4, drop={(1, 1)})
        dst = tmp_path / "g.obj"
        code, out, err = run_cli(capsys, "export", "obj", "--in", str(src),
                                 "--out", str(dst))
        assert code == 0
        report = json.loads(out)
        assert report["vertices"] == 15
        assert report["cells_skipped"] == 4
        assert report["faces"] == (9 - 4) * 2
        assert "omitted" in err

    def test_indices_are_one_based(self, capsys, tmp_path):
        src = tmp_path / "g.csv"
        self._write_grid_csv(src, 2)
        dst = tmp_path / "g.obj"
        run_cli(capsys, "export", "obj", "--in", str(src), "--out", str(dst))
        faces = [line for line in dst.read_text().splitlines()
                 if line.startswith("f ")]
        indices = [int(tok) for line in faces for tok in line.split()[1:]]
        assert min(indices) == 1
        assert max(indices) == 4

    def test_empty_grid(self, capsys, tmp_path):
        src = tmp_path / "g.csv"
        src.write_text("i,j,u,v,x1,x2,x3\n")
        code, _, err = run_cli(capsys, "export", "obj", "--in", str(src),
                               "--out", str(tmp_path / "g.obj"))
        assert code == 2
        assert "EmptyGrid" in err

    def test_full_pipeline_roundtrip(self, capsys, tmp_path):
        surf = tmp_path / "w.csv"
        run_cli(capsys, "weierstrass", "build", "--g", "builtin:z",
                "--case", "1", "--domain", "1.5:2.5:0.1:0.9", "--grid", "9",
                "--boundary", "builtin:radial", "--out", str(surf))
        dst = tmp_path / "w.obj"
        code, out, _ = run_cli(capsys, "export", "obj", "--in", str(surf),
                               "--out", str(dst))
        assert code == 0
        report = json.loads(out)
        assert report["vertices"] == 49
        assert report["faces"] == 72


class TestDeterminism:
    @pytest.mark.parametrize("argv", [
        ("zoo", "list"),
        ("check", "conformal", "ruled-6.7"),
        ("pde", "residual", "--eq", "6.2", "--graph", "u*v/sqrt(1+v^2)",
         "--grid", "0.1:0.9:5x0.1:0.9:5"),
        ("dualize", "translational-6.6", "--grid", "0.5:2:4x0.5:2:4"),
    ])
    def test_reports_byte_identical(self, capsys, argv):
        _, first, _ = run_cli(capsys, *argv)
        _, second, _ = run_cli(capsys, *argv)
        assert first == second
