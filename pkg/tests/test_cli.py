import json

import pytest

from bicombing.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main


@pytest.fixture()
def files(tmp_path):
    def write(name, doc):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)

    return write


@pytest.fixture()
def e2(files):
    return files("space.json", {"kind": "euclidean", "dim": 2})


@pytest.fixture()
def seq_space(files):
    return files("seq.json", {"kind": "star-seq", "window": [-10, 10]})


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


class TestSpaceCheck:
    def test_passes_on_euclidean(self, capsys, e2):
        code, out = run(capsys, ["space-check", "--space", e2, "--n", "200"])
        assert code == EXIT_OK
        doc = json.loads(out)
        assert all(c["passed"] for c in doc["result"]["checks"])
        assert doc["command"] == "space-check"

    def test_unknown_property_is_usage_error(self, e2):
        assert main(["space-check", "--space", e2, "--props", "bogus"]) == EXIT_USAGE

    def test_missing_file_is_usage_error(self):
        assert main(["space-check", "--space", "/nonexistent.json"]) == EXIT_USAGE

    def test_csv_format(self, capsys, e2):
        code, out = run(
            capsys, ["--format", "csv", "space-check", "--space", e2, "--n", "50"]
        )
        assert code == EXIT_OK
        assert out.splitlines()[0] == "name,passed,margin,tolerance"


class TestWasserstein:
    def test_line_example(self, capsys, files):
        space = files("line.json", {"kind": "euclidean", "dim": 1})
        mu = files(
            "mu.json",
            {"atoms": [{"point": [0.0], "mass": "1/2"}, {"point": [2.0], "mass": "1/2"}]},
        )
        nu = files("nu.json", {"atoms": [{"point": [1.0], "mass": "1"}]})
        code, out = run(
            capsys, ["wasserstein", "--space", space, "--mu", mu, "--nu", nu]
        )
        assert code == EXIT_OK
        assert json.loads(out)["result"]["w1"] == pytest.approx(1.0, abs=1e-15)

    def test_bad_masses_is_usage_error(self, files):
        space = files("line.json", {"kind": "euclidean", "dim": 1})
        mu = files("mu.json", {"atoms": [{"point": [0.0], "mass": "1/2"}]})
        nu = files("nu.json", {"atoms": [{"point": [1.0], "mass": "1"}]})
        assert main(["wasserstein", "--space", space, "--mu", mu, "--nu", nu]) == EXIT_USAGE


class TestBarycenter:
    def test_uniform_triangle(self, capsys, e2, files):
        measure = files(
            "m.json",
            {
                "atoms": [
                    {"point": [0.0, 0.0], "mass": "1/3"},
                    {"point": [3.0, 0.0], "mass": "1/3"},
                    {"point": [0.0, 3.0], "mass": "1/3"},
                ]
            },
        )
        code, out = run(
            capsys, ["barycenter", "--space", e2, "--measure", measure, "--certify"]
        )
        assert code == EXIT_OK
        doc = json.loads(out)["result"]
        assert doc["point"] == pytest.approx([1.0, 1.0], abs=1e-7)
        assert doc["locality"]["passed"]

    def test_tree_cap_exceeded_is_failure(self, capsys, files):
        space = files("tree.json", {"kind": "tree", "legs": 3})
        measure = files(
            "m.json",
            {
                "atoms": [
                    {"point": {"leg": 0, "t": 0.0}, "mass": "1/5"},
                    {"point": {"leg": 1, "t": 1.0}, "mass": "4/5"},
                ]
            },
        )
        code, out = run(capsys, ["barycenter", "--space", space, "--measure", measure])
        assert code == EXIT_FAILURE
        assert "error" in json.loads(out)["result"]


class TestFixpoint:
    def test_rotation_fixpoint(self, capsys, e2, files):
        iso = files("iso.json", {"kind": "rotation", "angle_pi": "2/3"})
        x0 = files("x0.json", [1.0, 0.0])
        target = files(
            "target.json", {"kind": "ball", "center": [0.0, 0.0], "radius": 1.0}
        )
        argv = [
            "fixpoint",
            "--space", e2, "--iso", iso, "--x0", x0, "--target", target,
            "--schedule", "3,30,300",
        ]
        code, out = run(capsys, argv)
        assert code == EXIT_OK
        doc = json.loads(out)["result"]
        assert doc["status"] == "converged"
        assert doc["point"] == pytest.approx([0.0, 0.0], abs=1e-10)
        assert doc["density"] == "1"

    def test_bad_schedule_is_usage_error(self, e2, files):
        iso = files("iso.json", {"kind": "rotation", "angle_pi": "2/3"})
        x0 = files("x0.json", [1.0, 0.0])
        target = files(
            "target.json", {"kind": "ball", "center": [0.0, 0.0], "radius": 1.0}
        )
        argv = [
            "fixpoint",
            "--space", e2, "--iso", iso, "--x0", x0, "--target", target,
            "--schedule", "3,x",
        ]
        assert main(argv) == EXIT_USAGE

    def test_csv_residual_series(self, capsys, e2, files):
        iso = files("iso.json", {"kind": "rotation", "angle_pi": "2/3"})
        x0 = files("x0.json", [1.0, 0.0])
        target = files(
            "target.json", {"kind": "ball", "center": [0.0, 0.0], "radius": 1.0}
        )
        argv = [
            "--format", "csv",
            "fixpoint",
            "--space", e2, "--iso", iso, "--x0", x0, "--target", target,
            "--schedule", "3,30",
        ]
        code, out = run(capsys, argv)
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == "horizon,residual" and len(lines) == 3


class TestDensity:
    def test_shift_multiples_of_three(self, capsys, seq_space, files):
        # visiting exactly every third index gives density 1/3
        iso = files("iso.json", {"kind": "composition", "parts": [
            {"kind": "shift", "power": 1}]})
        x0 = files("x0.json", {"entries": [[0, "1"]]})
        target = files(
            "target.json",
            {
                "kind": "points",
                "points": [{"entries": [[k, "1"]]} for k in range(0, 903, 3)],
            },
        )
        argv = [
            "density",
            "--space", seq_space, "--iso", iso, "--x0", x0, "--target", target,
            "--K", "30", "--L", "30",
        ]
        code, out = run(capsys, argv)
        assert code == EXIT_OK
        assert json.loads(out)["result"]["density"] == "1/3"

    def test_determinism_byte_identical(self, capsys, seq_space, files, tmp_path):
        iso = files("iso.json", {"kind": "shift", "power": 1})
        x0 = files("x0.json", {"entries": [[0, "1"]]})
        target = files(
            "target.json",
            {"kind": "ball", "center": {"entries": []}, "radius": 0.5},
        )
        argv = [
            "density",
            "--space", seq_space, "--iso", iso, "--x0", x0, "--target", target,
            "--K", "20", "--L", "20",
        ]
        _, out1 = run(capsys, argv)
        _, out2 = run(capsys, argv)
        assert out1 == out2

    def test_out_file(self, capsys, seq_space, files, tmp_path):
        iso = files("iso.json", {"kind": "shift", "power": 1})
        x0 = files("x0.json", {"entries": [[0, "1"]]})
        target = files(
            "target.json", {"kind": "ball", "center": {"entries": []}, "radius": 0.5}
        )
        out_path = tmp_path / "report.json"
        argv = [
            "--out", str(out_path),
            "density",
            "--space", seq_space, "--iso", iso, "--x0", x0, "--target", target,
            "--K", "20", "--L", "20",
        ]
        code, out = run(capsys, argv)
        assert code == EXIT_OK and out == ""
        doc = json.loads(out_path.read_text())
        assert doc["result"]["density"] == "0"


class TestCounterexample:
    def test_verify_passes(self, capsys):
        code, out = run(
            capsys,
            ["--seed", "7", "counterexample", "verify", "--samples", "300",
             "--max-support", "8"],
        )
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["seed"] == 7
        assert len(doc["result"]["checks"]) == 7
        assert all(c["passed"] for c in doc["result"]["checks"])

    def test_determinism(self, capsys):
        argv = ["counterexample", "verify", "--samples", "150", "--max-support", "6"]
        _, out1 = run(capsys, argv)
        _, out2 = run(capsys, argv)
        assert out1 == out2


class TestUsage:
    def test_no_command(self):
        assert main([]) == EXIT_USAGE

    def test_unknown_command(self):
        assert main(["frobnicate"]) == EXIT_USAGE

    def test_bad_flag_value(self):
        assert main(["--seed", "not-an-int", "counterexample", "verify"]) == EXIT_USAGE
