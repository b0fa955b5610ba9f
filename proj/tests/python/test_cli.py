"""End-to-end checks of the command-line surface: subcommands, output
formats, exit codes, and byte-level determinism of reports."""

import json
import os
import subprocess
import sys
import tempfile

CLI = os.environ["NCTORI_CLI"]


def run(*args, expect=0):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True)
    assert proc.returncode == expect, (args, proc.returncode, proc.stderr)
    return proc.stdout


def test_chain():
    cert = json.loads(run("chain", "3/7"))
    assert cert["theta_start"] == "3"
    assert cert["theta_end"] == "3/7"
    assert cert["replay_ok"]
    cert = json.loads(run("chain", "5"))
    assert cert["steps"][0]["kind"] == "int_shift"
    cert = json.loads(run("chain", "1/7", "--matrix", "Z:[1,1;0,1]"))
    assert cert["K_accum"] == [[-1, 0], [0, 1]]


def test_decide():
    d = json.loads(run("decide", "1/2", "3/7", "Z4"))
    assert d["verdict"] == "equivalent"
    d = json.loads(run("decide", "1/2", "(0+1√2)/1", "Z2"))
    assert d["verdict"] == "not_equivalent"
    d = json.loads(run("decide", "1/3", "1/5", "Z:[1,1;0,1]", "Z:[1,2;0,1]"))
    assert d["verdict"] == "not_equivalent"
    assert d["smith_forms"] == [[1, 0], [2, 0]]


def test_weyl_dump():
    out = run("weyl", "J0", "--gaussian", "--N", "256", "--m", "2")
    lines = out.strip().split("\n")
    assert lines[0].startswith("# 256 3 ")
    assert len(lines) == 1 + 256 * 3
    j, q, re, im = lines[1].split()
    assert (j, q) == ("0", "0")


def test_error_paths():
    proc = subprocess.run([CLI, "chain", "x/y"], capture_output=True, text=True)
    assert proc.returncode == 2
    proc = subprocess.run(
        [CLI, "verify", "--theta", "-1/3", "--c", "3"], capture_output=True, text=True
    )
    assert proc.returncode == 2
    assert "theta = -1/c" in proc.stderr


def test_report_determinism():
    with tempfile.TemporaryDirectory() as tmp:
        a = os.path.join(tmp, "a.json")
        b = os.path.join(tmp, "b.json")
        args = ["verify", "--N", "512", "--m", "2", "--seed", "7"]
        run(*args, "--out", a)
        run(*args, "--out", b)
        with open(a, "rb") as fa, open(b, "rb") as fb:
            assert fa.read() == fb.read()
        reports = json.load(open(a))
        assert all(r["pass"] for r in reports)
        assert reports == sorted(reports, key=lambda r: r["check_id"])
        # tolerance 0 on the quadrature tier surfaces honest failures
        proc = subprocess.run(
            [CLI, "verify", "--N", "512", "--m", "2", "--tol", "0"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 1


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"{t.__name__}: ok")
    print(f"{len(tests)} cli tests passed")


if __name__ == "__main__":
    sys.exit(main())
