"""Exit-code and output contract of the command-line front end."""

import json
import os
import subprocess
import sys
import tempfile

BIN = os.environ["NKLAB_BIN"]


def run(*args, **kw):
    return subprocess.run([BIN, *args], capture_output=True, text=True, **kw)


def test_exit_codes():
    assert run("--help").returncode == 0
    assert run("theory", "--beta-c").returncode == 0
    assert run().returncode == 2                      # a subcommand is required
    assert run("bogus").returncode == 2
    assert run("theory").returncode == 2              # no quantity picked
    assert run("count", "--n", "12").returncode == 2  # neither --k nor --alpha
    assert run("count", "--n", "12", "--k", "2", "--alpha", "0.5").returncode == 2
    assert run("exact", "--n", "40", "--k", "2").returncode == 2  # over the scan cap
    assert run("theory", "--beta-p", "3").returncode == 2
    assert run("orthant", "--t", "2.0", "--x", "0").returncode == 2


def test_theory_values():
    out = run("theory", "--beta-c")
    assert out.stdout == "1.177410\n"
    j = json.loads(run("theory", "--beta-c", "--json").stdout)
    assert abs(j["beta_c"] - 1.1774100225154747) < 1e-12

    gap = run("theory", "--gap", "--alpha", "0.1", "--delta", "0.5").stdout.splitlines()
    pairs = dict(line.split("=", 1) for line in gap)
    assert abs(float(pairs["rhs_q"]) + 0.059588327326374056) < 1e-15
    assert abs(float(pairs["energy_gap"]) - 1.2072041861786618) < 1e-15


def test_count_output():
    assert run("count", "--n", "4", "--k", "1").stdout == "{0:7,1:4,2:4,4:1}\n"
    assert run("count", "--n", "5", "--k", "4").stdout == "{0:31,5:1}\n"
    j = json.loads(run("count", "--n", "4", "--k", "1", "--json").stdout)
    assert j["counts"] == {"0": "7", "1": "4", "2": "4", "4": "1"}


def test_exact_and_path_tables():
    out = run("exact", "--n", "10", "--k", "4", "--beta", "1.0", "--seed", "7").stdout
    lines = out.strip().splitlines()
    assert lines[0] == "n,k,beta,seed,free_energy,mean_energy,p_q1,max_fitness,argmax"
    fields = lines[1].split(",")
    assert fields[:4] == ["10", "4", "1", "7"]
    assert float(fields[4]) >= float(fields[5])  # free energy dominates mean energy

    path = run("path", "--n", "22", "--steps", "10", "--k", "1", "--seed", "3").stdout
    rows = path.strip().splitlines()
    assert rows[0] == "l,Q,R,fitness"
    assert len(rows) == 12  # header + 11 nodes
    assert rows[1].startswith("0,1,1,")

    # Identical invocations must produce identical bytes.
    again = run("path", "--n", "22", "--steps", "10", "--k", "1", "--seed", "3").stdout
    assert again == path


def test_out_redirects_to_file():
    with tempfile.TemporaryDirectory(prefix="nklab_cli_") as d:
        target = os.path.join(d, "beta.txt")
        res = run("theory", "--beta-c", "--out", target)
        assert res.returncode == 0 and res.stdout == ""
        with open(target) as fh:
            assert fh.read() == "1.177410\n"


def test_sweep_round_trip():
    with tempfile.TemporaryDirectory(prefix="nklab_cli_") as d:
        cfg = {
            "experiment": "count_check",
            "n": [12],
            "k": [5],
            "output": {"dir": os.path.join(d, "out")},
        }
        cfg_path = os.path.join(d, "cfg.json")
        with open(cfg_path, "w") as fh:
            json.dump(cfg, fh)

        dry = run("sweep", cfg_path, "--dry")
        assert dry.returncode == 0
        assert not os.path.exists(os.path.join(d, "out"))

        wet = run("sweep", cfg_path)
        assert wet.returncode == 0
        assert os.path.exists(os.path.join(d, "out", "count_check.csv"))
        assert os.path.exists(os.path.join(d, "out", "MANIFEST.json"))

        # An unwritable output directory is a runtime failure, not a usage one.
        cfg["output"]["dir"] = "/proc/nklab_denied/out"
        with open(cfg_path, "w") as fh:
            json.dump(cfg, fh)
        denied = run("sweep", cfg_path)
        assert denied.returncode == 1


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for fn in tests:
        fn()
        print(f"{fn.__name__}: ok")
    print(f"{len(tests)} cli contract tests passed")


if __name__ == "__main__":
    main()
