import json
import subprocess
import sys
from pathlib import Path

import pytest

from spin2cv.cli import main
from spin2cv.serialize import dumps

DEMO = Path(__file__).resolve().parents[1] / "demo"


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc), encoding="utf-8")
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestCompile:
    def test_emits_universal_circuit(self, capsys):
        code, out, _ = run(["compile", "--input", str(DEMO / "heisenberg_pair.json"), "--steps", "2"], capsys)
        doc = json.loads(out)
        assert code == 0 and doc["level"] == "universal"
        assert doc["modes"] == 5  # four site modes and one ancilla
        assert {g["kind"] for g in doc["gates"]} <= {"R", "G", "V", "Fourier", "Cz"}
        assert doc["trotter"]["steps"] == 2 and doc["model"]["sites"] == 2

    def test_output_file(self, tmp_path, capsys):
        out = tmp_path / "c.json"
        code, stdout, _ = run(["compile", "--input", str(DEMO / "ising_chain.json"), "--output", str(out)], capsys)
        assert code == 0 and stdout == ""
        assert json.loads(out.read_text())["level"] == "universal"

    def test_byte_identical_across_processes(self, tmp_path):
        outs = []
        for i in range(2):
            target = tmp_path / f"run{i}.json"
            subprocess.run(
                [sys.executable, "-m", "spin2cv.cli", "compile", "--input", str(DEMO / "heisenberg_pair.json"),
                 "--output", str(target)],
                check=True, capture_output=True,
            )
            outs.append(target.read_bytes())
        assert outs[0] == outs[1]


class TestCount:
    def test_flat_report(self, capsys):
        code, out, _ = run(["count", "--input", str(DEMO / "heisenberg_pair.json"), "--steps", "3"], capsys)
        doc = json.loads(out)
        assert code == 0
        assert doc["raw.Q"] == 3 * doc["per_step.raw.Q"]
        assert doc["per_q.Cz.quoted"] == 9 and doc["per_q.Cz.derived"] == 12
        assert doc["trotter_factors"] == 11 and doc["gamma"] > 0

    def test_identity_changes_shift2_count(self, tmp_path, capsys):
        path = write(tmp_path, "xx.json", {"sites": 2, "couplings": [{"k": 0, "l": 1, "jx": 1.0}]})
        counts = {}
        for ident in ("eight_term", "fifteen_term"):
            _, out, _ = run(["count", "--input", path, "--identity", ident], capsys)
            counts[ident] = json.loads(out)["shift.Shift2"]
        assert counts == {"eight_term": 4 * 24, "fifteen_term": 4 * 45}


class TestVerify:
    def test_model(self, capsys):
        code, out, err = run(["verify", "--input", str(DEMO / "heisenberg_pair.json")], capsys)
        assert code == 0 and json.loads(out)["passed"]
        assert "PASS  bosonization_subspace" in err

    def test_compiled_circuit_and_tampering(self, tmp_path, capsys):
        compiled = tmp_path / "c.json"
        assert main(["compile", "--input", str(DEMO / "heisenberg_pair.json"), "--output", str(compiled)]) == 0
        code, _, _ = run(["verify", "--input", str(compiled)], capsys)
        assert code == 0

        doc = json.loads(compiled.read_text())
        i = next(i for i, g in enumerate(doc["gates"]) if g["kind"] == "Cz")
        doc["gates"][i]["param"] += 0.1
        tampered = tmp_path / "t.json"
        tampered.write_text(dumps(doc))
        code, _, err = run(["verify", "--input", str(tampered)], capsys)
        assert code == 4 and "recompile_match" in err


class TestGbs:
    def test_quadrature_estimator(self, capsys):
        code, out, _ = run(["gbs", "--input", str(DEMO / "wick_pair.json")], capsys)
        doc = json.loads(out)
        assert code == 0
        assert doc["haf_sigma"] == pytest.approx(0.09)
        assert doc["sqrt_haf_A"] == pytest.approx(0.09, rel=1e-8)

    def test_ladder_probabilities(self, tmp_path, capsys):
        path = write(tmp_path, "vac.json", {"basis": "ladder", "matrix": [[0.5, 0], [0, 0.5]]})
        code, out, _ = run(["gbs", "--input", path], capsys)
        probs = json.loads(out)["probabilities"]
        assert code == 0 and probs == [{"pattern": [0], "probability": 1.0}, {"pattern": [1], "probability": 0.0}]

    def test_unphysical(self, tmp_path, capsys):
        path = write(tmp_path, "bad.json", {"basis": "ladder", "matrix": [[0.1, 0], [0, 0.1]]})
        assert run(["gbs", "--input", path], capsys)[0] == 2


class TestExitCodes:
    @pytest.mark.parametrize(
        "doc",
        [
            {"sites": 2, "couplings": [{"k": 1, "l": 0}]},
            {"sites": 2, "couplings": [{"k": 0, "l": 1, "jx": "one"}]},
        ],
    )
    def test_input_errors(self, tmp_path, capsys, doc):
        assert run(["compile", "--input", write(tmp_path, "m.json", doc)], capsys)[0] == 2

    def test_missing_file(self, tmp_path, capsys):
        assert run(["count", "--input", str(tmp_path / "none.json")], capsys)[0] == 2

    @pytest.mark.parametrize(
        "flags", [["--steps", "0"], ["--cutoff", "1"], ["--tolerance", "0"], ["--time", "inf"], ["--identity", "x"]]
    )
    def test_bad_flags(self, capsys, flags):
        assert run(["count", "--input", str(DEMO / "heisenberg_pair.json"), *flags], capsys)[0] == 2

    def test_unknown_command(self, capsys):
        assert run(["simulate", "--input", "x"], capsys)[0] == 2

    def test_guard(self, tmp_path, capsys):
        path = write(tmp_path, "big.json", {"sites": 5, "couplings": [{"k": 0, "l": 1, "jz": 1.0}]})
        code, _, err = run(["verify", "--input", path], capsys)
        assert code == 3 and "error" in err

    def test_help(self, capsys):
        assert run(["--help"], capsys)[0] == 0
