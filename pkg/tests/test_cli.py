import io
import json
import math
import os

import numpy as np
import pytest

from qubitkit import cli
from qubitkit.statevec import load_dump


def invoke(argv, env=None, monkeypatch=None):
    cfg = cli.parse_args(argv)
    out, err = io.StringIO(), io.StringIO()
    status = cli.run(cfg, out, err)
    return status, out.getvalue(), err.getvalue()


def payload(text):
    report = json.loads(text)
    report.pop("wall_time_ms")
    return report


class TestParse:
    def test_shor(self):
        cfg = cli.parse_args(["shor", "--n", "15", "--seed", "42", "--json"])
        assert (cfg.subcommand, cfg.seed, cfg.output, cfg.params["n"]) == ("shor", 42, "json", 15)
        assert cfg.params["premeasure"] is True

    def test_premeasure_flag(self):
        assert cli.parse_args(["shor", "--n", "15", "--premeasure", "false"]).params["premeasure"] is False

    @pytest.mark.parametrize("argv", [
        ["grover", "--qubits", "0", "--marked", "0"],
        ["grover", "--qubits", "0"],
        ["grover", "--qubits", "3", "--marked", "8"],
        ["shor", "--n", "abc"],
        ["shor", "--n", "15", "--bogus"],
        ["evolve", "--qubits", "6"],
        ["qecc", "--error", "Q7"],
        ["frobnicate"],
    ])
    def test_usage_errors(self, argv, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.parse_args(argv)
        assert exc.value.code == 2

    def test_evolve(self):
        cfg = cli.parse_args(["evolve", "--qubits", "6", "--length", "20", "--dt", "0.01", "--steps", "100",
                              "--potential", "harmonic", "--psi0", "gaussian(10,1,0)"])
        assert cfg.params["order"] == "lie" and cfg.params["steps"] == 100

    def test_seed_from_environment(self, monkeypatch):
        monkeypatch.setenv(cli.SEED_ENV, "99")
        assert cli.parse_args(["grover", "--qubits", "3", "--marked", "1"]).seed == 99
        assert cli.parse_args(["grover", "--qubits", "3", "--marked", "1", "--seed", "5"]).seed == 5

    def test_default_seed(self, monkeypatch):
        monkeypatch.delenv(cli.SEED_ENV, raising=False)
        assert cli.parse_args(["grover", "--qubits", "3", "--marked", "1"]).seed == cli.DEFAULT_SEED


class TestRun:
    def test_shor_report(self):
        status, out, _ = invoke(["shor", "--n", "15", "--seed", "7", "--json"])
        report = json.loads(out)
        assert status == 0
        assert report["factors"] == [3, 5]
        for key in ("seed", "version", "subcommand", "wall_time_ms", "n", "attempts"):
            assert key in report
        assert set(report["attempts"][0]) == {"a", "measured", "period", "outcome"}

    def test_shor_fixed_base_exhausts(self):
        status, out, _ = invoke(["shor", "--n", "15", "--a", "14", "--attempts", "2", "--json"])
        assert status == 1
        assert json.loads(out)["factors"] is None

    def test_shor_capacity(self):
        status, _, err = invoke(["shor", "--n", "4097"])
        assert status == 2 and "qubits" in err

    def test_grover_report(self):
        status, out, _ = invoke(["grover", "--qubits", "6", "--marked", "40", "--json"])
        report = json.loads(out)
        assert status == 0
        assert report["queries"] == math.floor(math.pi / 4 * 8) + 1
        assert report["success_prob_analytic"] == pytest.approx(0.9965856807867991)

    def test_qecc_roundtrip(self):
        status, out, _ = invoke(["qecc", "--mode", "roundtrip", "--error", "X2", "--json"])
        report = json.loads(out)
        assert report["fidelity"] >= 1 - 1e-10
        assert len(report["syndrome_table"]) == 16

    def test_qecc_all_errors(self):
        _, out, _ = invoke(["qecc", "--json"])
        assert len(json.loads(out)["results"]) == 16

    def test_qecc_montecarlo(self):
        _, out, _ = invoke(["qecc", "--mode", "montecarlo", "--p", "0.1", "--trials", "500", "--json"])
        report = json.loads(out)
        assert 0 < report["logical_rate"] < 0.5 and report["stderr"] > 0

    def test_print_code(self):
        _, out, _ = invoke(["qecc", "--print-code"])
        blocks = out.split("# logical 1\n")
        zero, one = load_dump(blocks[0], 5), load_dump(blocks[1], 5)
        assert abs(np.vdot(zero.amplitudes, one.amplitudes)) < 1e-12
        assert zero.norm() == pytest.approx(1) and one.norm() == pytest.approx(1)

    def test_qft_basis_zero(self, tmp_path):
        (tmp_path / "basis0.dump").write_text("0\t1.0\t0.0\n")
        _, out, _ = invoke(["qft", "--qubits", "3", "--input", str(tmp_path / "basis0.dump")])
        s = load_dump(out, 3)
        np.testing.assert_allclose(s.amplitudes, np.full(8, 1 / math.sqrt(8)), atol=1e-15)

    def test_qft_bad_input(self, tmp_path):
        status, _, err = invoke(["qft", "--qubits", "3", "--input", str(tmp_path / "missing")])
        assert status == 2

    def test_evolve_outputs(self, tmp_path):
        trace, final = tmp_path / "trace.csv", tmp_path / "final.dump"
        status, out, _ = invoke(["evolve", "--qubits", "6", "--length", "20", "--dt", "0.01", "--steps", "50",
                                 "--potential", "harmonic", "--psi0", "gaussian(10,1,0)", "--order", "strang",
                                 "--out", str(trace), "--dump-final", str(final), "--json"])
        assert status == 0
        rows = trace.read_text().splitlines()
        assert rows[0] == "step,time,norm,mean_x,mean_p,energy" and len(rows) == 52
        assert load_dump(final.read_text(), 6).norm() == pytest.approx(1, abs=1e-12)
        report = json.loads(out)
        assert report["energy"] == pytest.approx(0.5, abs=1e-3)
        assert sorted(os.listdir(tmp_path)) == ["final.dump", "trace.csv"]

    def test_evolve_file_inputs(self, tmp_path):
        (tmp_path / "v.txt").write_text("\n".join("0.0" for _ in range(8)))
        (tmp_path / "psi.txt").write_text("\n".join(f"{math.cos(j)} {math.sin(j)}" for j in range(8)))
        status, out, _ = invoke(["evolve", "--qubits", "3", "--length", "8", "--dt", "0.1", "--steps", "3",
                                 "--potential", str(tmp_path / "v.txt"), "--psi0", str(tmp_path / "psi.txt"),
                                 "--json"])
        assert status == 0 and json.loads(out)["norm"] == pytest.approx(1)

    def test_evolve_unknown_potential(self):
        status, _, err = invoke(["evolve", "--qubits", "3", "--length", "8", "--dt", "0.1", "--steps", "3",
                                 "--potential", "nonexistent", "--psi0", "gaussian(4,1)"])
        assert status == 2 and "potential" in err

    def test_human_matches_json(self):
        _, js, _ = invoke(["grover", "--qubits", "5", "--marked", "3", "--seed", "1", "--json"])
        _, human, _ = invoke(["grover", "--qubits", "5", "--marked", "3", "--seed", "1"])
        report = json.loads(js)
        fields = dict(line.split(": ", 1) for line in human.strip().splitlines())
        assert float(fields["success_prob_analytic"]) == pytest.approx(report["success_prob_analytic"], rel=1e-11)
        assert int(fields["found"]) == report["found"]
        assert fields["seed"] == "1"


def test_main_returns_status(capsys):
    assert cli.main(["grover", "--qubits", "3", "--marked", "2", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["subcommand"] == "grover"
