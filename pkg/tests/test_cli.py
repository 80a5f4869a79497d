import subprocess
import sys

from monopat.cli import main
from monopat.sequence import decreasing_perm, read_sequence, write_sequence


def test_generate(tmp_path, capsys):
    out = tmp_path / "inst.txt"
    assert main(["generate", "--n", "256", "--k", "4", "--seed", "3", "--out", str(out)]) == 0
    seq = read_sequence(out)
    assert sorted(seq.tolist()) == list(range(256))
    meta = dict(line.split("=", 1) for line in (tmp_path / "inst.txt.meta").read_text().splitlines())
    assert meta["n"] == "256" and meta["k"] == "4" and meta["seed"] == "3"
    assert "disjoint copies=64" in capsys.readouterr().out


def test_test_command(tmp_path):
    csv_path = tmp_path / "r.csv"
    assert main(["test", "--n", "1024", "--k", "2", "--eps", "1/4", "--trials", "30", "--out", str(csv_path)]) == 0
    assert csv_path.read_text().startswith("n,k,epsilon,seed,instance_id,outcome,queries_used,wall_time_ms")


def test_test_command_on_free_file(tmp_path, capsys):
    path = tmp_path / "free.txt"
    write_sequence(decreasing_perm(500), path)
    assert main(["test", "--instance", str(path), "--k", "2", "--trials", "20"]) == 0
    assert "0/20" in capsys.readouterr().out


def test_acceptance_failure_exit_code(monkeypatch):
    import monopat.cli as cli

    def low_rate(spec):
        return [], [{"n": 1024, "k": 2, "epsilon": 0.25, "trials": 100, "successes": 70, "fraction": 0.7,
                     "wilson_low": 0.6, "wilson_high": 0.78, "far": True, "pattern_present": True}]

    monkeypatch.setattr(cli, "run_success_rate", low_rate)
    assert main(["test", "--n", "1024", "--k", "2"]) == 1


def test_invalid_input_exit_code(capsys):
    assert main(["test", "--n", "1024", "--k", "2", "--eps", "2"]) == 2
    assert main(["test", "--instance", "/nonexistent/file.txt"]) == 2
    assert "error:" in capsys.readouterr().err


def test_other_commands():
    assert main(["adversary", "--n", "1024", "--k", "2", "--trials", "2"]) == 0
    assert main(["profiles", "--n", "256", "--k", "2", "--trials", "50"]) == 0
    assert main(["validate-oracles", "--trials", "50"]) == 0
    assert main(["scale", "--n", "256,1024,4096,16384", "--k", "2", "--eps", "1/4", "--trials", "5"]) in (0, 1)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "monopat", "validate-oracles", "--trials", "20"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "agree" in res.stdout
