import json

import numpy as np
import pytest

from cliquereg.cli import main

WORKED_EXAMPLE = """\
p edge 5 4
e 1 4
e 2 3
e 2 5
e 3 5
"""


@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "example.clq"
    path.write_text(WORKED_EXAMPLE)
    return str(path)


class TestSolve:
    @pytest.mark.parametrize("algo", ["greedy", "relax", "clipper+", "exact"])
    def test_all_algorithms(self, graph_file, algo, capsys):
        assert main(["solve", graph_file, "--algo", algo]) == 0
        out = capsys.readouterr().out
        assert "clique size: 3" in out
        assert "clique (1-based): 2 3 5" in out

    def test_default_algorithm_reports_early_termination(self, graph_file, capsys):
        assert main(["solve", graph_file]) == 0
        assert "early termination: yes" in capsys.readouterr().out

    def test_missing_file_is_input_error(self, capsys):
        assert main(["solve", "/nonexistent/path.clq"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_malformed_graph_is_input_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.clq"
        bad.write_text("e 1 2\n")
        assert main(["solve", str(bad)]) == 1

    def test_budget_exhaustion_exit_code(self, tmp_path, capsys):
        rng = np.random.default_rng(3)
        n = 40
        lines = ["p edge 40 0"]
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                if rng.random() < 0.6:
                    lines.append(f"e {i} {j}")
        lines[0] = f"p edge 40 {len(lines) - 1}"
        path = tmp_path / "dense.clq"
        path.write_text("\n".join(lines) + "\n")
        assert main(["solve", str(path), "--algo", "exact", "--budget", "3"]) == 2
        assert "solver failure" in capsys.readouterr().err

    def test_params_file(self, graph_file, tmp_path):
        params = tmp_path / "params.json"
        params.write_text(json.dumps({"sigma": 0.02, "tol": 1e-9}))
        assert main(["solve", graph_file, "--algo", "relax", "--params", str(params)]) == 0

    def test_unknown_param_rejected(self, graph_file, tmp_path, capsys):
        params = tmp_path / "params.json"
        params.write_text(json.dumps({"gamma": 1.0}))
        assert main(["solve", graph_file, "--params", str(params)]) == 1
        assert "unknown solver parameters" in capsys.readouterr().err

    def test_invalid_param_value_rejected(self, graph_file, tmp_path, capsys):
        params = tmp_path / "params.json"
        params.write_text(json.dumps({"sigma": 2.0}))
        assert main(["solve", graph_file, "--params", str(params)]) == 1


class TestUsageErrors:
    def test_no_command(self, capsys):
        assert main([]) == 1
        assert "error:" in capsys.readouterr().err

    def test_unknown_flag(self, graph_file, capsys):
        assert main(["solve", graph_file, "--frobnicate"]) == 1

    def test_bad_algo_choice(self, graph_file, capsys):
        assert main(["solve", graph_file, "--algo", "magic"]) == 1


class TestBenchDimacs:
    def test_csv_output(self, graph_file, tmp_path, capsys):
        out = tmp_path / "records.csv"
        code = main(
            ["bench-dimacs", graph_file, "--algo", "greedy", "--algo", "exact",
             "--out", str(out)]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("graph_id,")
        assert len(lines) == 3

    def test_omega_table_fills_ratio(self, graph_file, tmp_path):
        table = tmp_path / "omega.json"
        table.write_text(json.dumps({"example": 3}))
        out = tmp_path / "records.csv"
        assert main(
            ["bench-dimacs", graph_file, "--algo", "greedy",
             "--omega-gt", str(table), "--out", str(out)]
        ) == 0
        row = out.read_text().splitlines()[1].split(",")
        assert row[5] == "3" and row[6] == "1.0"

    def test_algo_required(self, graph_file, tmp_path, capsys):
        assert main(["bench-dimacs", graph_file, "--out", str(tmp_path / "o.csv")]) == 1


class TestBenchSynthetic:
    def test_small_sweep(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code = main(
            ["bench-synthetic", "--outlier-start", "0", "--outlier-stop", "30",
             "--outlier-step", "30", "--trials", "2", "--points", "30",
             "--clutter", "30", "--associations", "20", "--out", str(out)]
        )
        assert code == 0
        assert len(out.read_text().splitlines()) == 1 + 2 * 2 * 2
        stdout = capsys.readouterr().out
        assert "mean_r" in stdout

    def test_bad_range_is_input_error(self, tmp_path, capsys):
        assert main(
            ["bench-synthetic", "--outlier-start", "50", "--outlier-stop", "40",
             "--out", str(tmp_path / "o.csv")]
        ) == 1


class TestRegisterAndGenScene:
    def test_gen_scene_then_register(self, tmp_path, capsys):
        scene_path = tmp_path / "scene.json"
        assert main(
            ["gen-scene", "--points", "60", "--clutter", "30",
             "--associations", "40", "--outlier-ratio", "0.5", "--seed", "11",
             "--out", str(scene_path)]
        ) == 0
        result_path = tmp_path / "result.json"
        code = main(
            ["register", "--scenario", str(scene_path), "--out", str(result_path)]
        )
        assert code == 0
        stdout = capsys.readouterr().out
        assert "rotation error:" in stdout
        payload = json.loads(result_path.read_text())
        assert payload["rotation_error_deg"] < 5.0
        rot = np.array(payload["rotation"])
        assert np.allclose(rot @ rot.T, np.eye(3), atol=1e-9)

    def test_register_raw_files(self, tmp_path):
        rng = np.random.default_rng(2)
        pts = rng.uniform(-1.0, 1.0, size=(10, 3))
        cloud = "\n".join(f"{x} {y} {z}" for x, y, z in pts)
        a = tmp_path / "a.xyz"
        b = tmp_path / "b.xyz"
        a.write_text("# cloud A\n" + cloud + "\n")
        b.write_text(cloud + "\n")
        assoc = tmp_path / "assoc.txt"
        assoc.write_text("\n".join(f"{i} {i}" for i in range(10)) + "\n")
        code = main(
            ["register", "--cloud-a", str(a), "--cloud-b", str(b),
             "--associations", str(assoc), "--epsilon", "1e-6"]
        )
        assert code == 0

    def test_register_requires_epsilon_for_raw_files(self, tmp_path, capsys):
        a = tmp_path / "a.xyz"
        a.write_text("0 0 0\n1 0 0\n0 1 0\n")
        assoc = tmp_path / "assoc.txt"
        assoc.write_text("0 0\n1 1\n2 2\n")
        assert main(
            ["register", "--cloud-a", str(a), "--cloud-b", str(a),
             "--associations", str(assoc)]
        ) == 1

    def test_register_scenario_excludes_raw_files(self, tmp_path, capsys):
        scene_path = tmp_path / "scene.json"
        main(["gen-scene", "--points", "20", "--clutter", "5",
              "--associations", "10", "--out", str(scene_path)])
        assert main(
            ["register", "--scenario", str(scene_path), "--cloud-a", "x.xyz"]
        ) == 1

    def test_register_too_few_consistent_raises_exit_3(self, tmp_path, capsys):
        # Three collinear points: every pair is consistent but the max
        # clique over 2 distinct associations cannot reach 3.
        a = tmp_path / "a.xyz"
        a.write_text("0 0 0\n1 0 0\n")
        assoc = tmp_path / "assoc.txt"
        assoc.write_text("0 0\n1 1\n")
        code = main(
            ["register", "--cloud-a", str(a), "--cloud-b", str(a),
             "--associations", str(assoc), "--epsilon", "0.5"]
        )
        assert code == 3
        assert "registration failure" in capsys.readouterr().err

    def test_malformed_cloud_line(self, tmp_path, capsys):
        a = tmp_path / "a.xyz"
        a.write_text("0 0\n")
        assert main(
            ["register", "--cloud-a", str(a), "--cloud-b", str(a),
             "--associations", str(a), "--epsilon", "0.5"]
        ) == 1
        assert ":1:" in capsys.readouterr().err

    def test_gen_scene_infeasible_is_input_error(self, tmp_path, capsys):
        assert main(
            ["gen-scene", "--points", "5", "--associations", "10",
             "--outlier-ratio", "0.0", "--out", str(tmp_path / "s.json")]
        ) == 1


class TestConsoleEntryPoint:
    def test_module_invocation(self, graph_file):
        import subprocess
        import sys

        proc = subprocess.run(
            [sys.executable, "-m", "cliquereg", "solve", graph_file],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "clique size: 3" in proc.stdout
