import json
import os
import re
import shlex
import sys
from meroforms.cli import main

README = os.path.join(os.path.dirname(__file__), os.pardir, "README.md")


def run_cli(argv):
    return main(argv)


def test_construct_golden(capsys):
    assert run_cli(["construct", "--k", "4", "--D", "-7", "--r", "2"]) == 0
    out = capsys.readouterr().out
    assert "19, -91125" in out
    assert run_cli(["construct", "--k", "6", "--D", "-4", "--r", "3"]) == 0
    out = capsys.readouterr().out
    assert "13, 31104" in out


def test_construct_invalid(capsys):
    assert run_cli(["construct", "--k", "4", "--D", "-5", "--r", "1"]) == 2
    assert run_cli(["construct", "--k", "4", "--D", "-7", "--r", "0"]) == 2


def test_expand(tmp_path, capsys):
    out = str(tmp_path / "series.txt")
    rc = run_cli(
        ["expand", "--k", "4", "--c", "-3375", "--r", "1", "--prec", "12", "--out", out]
    )
    assert rc == 0
    from meroforms.qseries import series_from_text

    ser = series_from_text(open(out).read())
    assert ser.coeff(1) == 1
    # curve preset resolves c = -3375
    rc = run_cli(["expand", "--k", "4", "--curve", "49.a4", "--prec", "6"])
    assert rc == 0
    assert "a_1=1" in capsys.readouterr().out
    assert run_cli(["expand", "--k", "4", "--r", "0", "--c", "1", "--prec", "5"]) == 2
    assert run_cli(["expand", "--k", "4", "--prec", "5"]) == 2


def test_verify_exit_codes(tmp_path, capsys):
    out = str(tmp_path / "rep.json")
    rc = run_cli(["verify", "--id", "KS", "--json", out])
    assert rc == 0
    doc = json.loads(open(out).read())
    assert doc["id"] == "KS" and doc["summary"]["FAIL"] == 0
    assert run_cli(["verify", "--id", "NOPE"]) == 2


def test_sweep(tmp_path, capsys):
    cfg = {"ids": ["KS", "C1.4"], "parallel": 2, "out": str(tmp_path / "reports")}
    cfg_path = str(tmp_path / "cfg.json")
    with open(cfg_path, "w") as fh:
        json.dump(cfg, fh)
    assert run_cli(["sweep", "--config", cfg_path]) == 0
    assert sorted(os.listdir(cfg["out"])) == ["C1.4.json", "KS.json"]
    bad = {"ids": ["KS"], "bogus": 1}
    with open(cfg_path, "w") as fh:
        json.dump(bad, fh)
    assert run_cli(["sweep", "--config", cfg_path]) == 2


def test_crosscheck(capsys):
    assert run_cli(["crosscheck", "ramanujan", "--prec", "30"]) == 0
    assert run_cli(["crosscheck", "prop62", "--s", "2", "--d", "-7", "--d0", "1", "--prec", "10"]) == 0
    assert run_cli(["crosscheck", "moebius", "--s", "2", "--D", "-12", "--prec", "8"]) == 0


def _readme_commands():
    text = open(README).read()
    cmds = []
    for block in re.findall(r"```console\n(.*?)```", text, re.S):
        for line in block.splitlines():
            line = line.strip()
            if line.startswith("$ meroforms "):
                cmds.append(shlex.split(line[len("$ meroforms "):]))
    return cmds


def test_readme_examples(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cmds = _readme_commands()
    assert cmds, "README must show runnable CLI examples"
    for argv in cmds:
        rc = run_cli(argv)
        assert rc == 0, f"README example failed: meroforms {' '.join(argv)}"


def test_cross_process_report_determinism(tmp_path):
    # two fresh interpreter runs produce byte-identical report files
    import subprocess

    outs = []
    for i in (1, 2):
        out = str(tmp_path / f"rep{i}.json")
        proc = subprocess.run(
            [
                sys.executable, "-m", "meroforms.cli",
                "verify", "--id", "C1.4", "--json", out,
            ],
            capture_output=True,
            text=True,
            cwd=str(tmp_path),
        )
        assert proc.returncode == 0, proc.stderr
        outs.append(open(out, "rb").read())
    assert outs[0] == outs[1]
