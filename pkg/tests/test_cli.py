from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from conftest import WORKED

from decswamp import cli, selfcheck
from decswamp.document import load, parse_config


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def doc(name):
    return str(WORKED / name)


def test_stab_unstable_with_witness(capsys):
    code, out, _ = run(capsys, "stab", "--input", doc("swamp_r2.json"))
    assert code == 0
    lines = out.splitlines()
    assert "verdict: unstable" in lines
    assert 'witness.generic: [[["0", "1"]]]' in lines
    assert "candidates[2].value: -1/2" in lines


def test_delta_override_and_walls(capsys):
    code, out, _ = run(capsys, "walls", "--input", doc("swamp_r2.json"))
    assert code == 0 and 'walls: ["2"]' in out
    _, out, _ = run(capsys, "stab", "--input", doc("swamp_r2.json"), "--delta2", "0")
    assert "delta2: 0" in out and "candidates[1].value: 0" in out


def test_json_output(capsys):
    code, out, _ = run(capsys, "mu", "--input", doc("swamp_r2.json"), "--json")
    assert code == 0
    assert isinstance(json.loads(out), dict)


def test_df_roundtrip(capsys, tmp_path):
    code, out, _ = run(capsys, "df", "--input", doc("df_r2.json"))
    assert code == 0
    deformed = parse_config(json.loads(out))
    assert deformed.s.coefficients == {(0, (0,)): 1}
    target = tmp_path / "out.json"
    assert run(capsys, "df", "--input", doc("df_r2.json"), "--output", str(target))[0] == 0
    assert parse_config(load(str(target))) == deformed


def test_gieseker_parabolic_level(capsys):
    code, out, _ = run(capsys, "gieseker", "--input", doc("split_r2.json"), "--n", "2")
    assert code == 0 and "p: 6" in out and "eta: 16" in out
    code, out, _ = run(capsys, "parabolic", "--input", doc("parabolic_r2.json"))
    assert code == 0 and "equivalent: true" in out
    code, out, _ = run(capsys, "level", "--input", doc("level_r2.json"))
    assert code == 0 and "false" not in out


@pytest.mark.parametrize("argv, expected", [
    (["stab"], 2),
    (["bogus"], 2),
    (["stab", "--input", "/nonexistent/doc.json"], 2),
    (["stab", "--input", doc("swamp_r2.json"), "--delta2", "-1"], 3),
    (["stab", "--input", doc("swamp_r2.json"), "--delta2", "0.5"], 2),
])
def test_exit_codes(capsys, argv, expected):
    assert run(capsys, *argv)[0] == expected


def test_float_in_document(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text((WORKED / "swamp_r2.json").read_text().replace('"1/2"', "0.5"))
    code, _, err = run(capsys, "stab", "--input", str(bad))
    assert code == 2 and "float" in err


def test_selftest_mismatch_exit(capsys, monkeypatch):
    def broken(seed):
        res = selfcheck.SweepResult("broken")
        res.check(False, "forced")
        return res
    monkeypatch.setattr(selfcheck, "ALL_SWEEPS", (broken,))
    code, out, _ = run(capsys, "selftest", "--seed", "0")
    assert code == 4 and "result: mismatch" in out


def test_repeated_runs_are_identical(capsys):
    first = run(capsys, "level", "--input", doc("level_r2.json"))
    assert run(capsys, "level", "--input", doc("level_r2.json")) == first


@pytest.mark.skipif(shutil.which("decswamp") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["decswamp", "walls", "--input", doc("swamp_r2.json")], capture_output=True, text=True)
    assert proc.returncode == 0 and 'walls: ["2"]' in proc.stdout


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "decswamp", "stab"], capture_output=True, text=True)
    assert proc.returncode == 2 and "--input" in proc.stderr
