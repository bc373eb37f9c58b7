import json
import shutil
import subprocess
import sys

import pytest

from quasilee.cli import main
from quasilee.reproduce import golden_dir


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "argv,fixture",
    [
        (["--family", "cubic", "--p", "17"], "cubic_p17"),
        (["--family", "cubic", "--p", "19"], "cubic_p19"),
        (["--family", "cubic", "--p", "23"], "cubic_p23"),
        (["--family", "hyperbola", "--p", "17"], "hyperbola_p17"),
        (["--family", "hyperbola", "--p", "23"], "hyperbola_p23"),
        (["--family", "cubic", "--p", "5", "--k", "2", "--modulus", "x2-2", "--primitive", "3+4s"], "cubic_q25"),
    ],
)
def test_build_matches_golden(capsys, argv, fixture):
    code, out, _ = run(capsys, "build", *argv)
    assert code == 0
    assert out == (golden_dir() / f"{fixture}.txt").read_text()


def test_build_out_prefix(capsys, tmp_path):
    prefix = tmp_path / "c17"
    code, _, _ = run(capsys, "build", "--family", "cubic", "--p", "17", "--out", str(prefix), "--quiet")
    assert code == 0
    assert (tmp_path / "c17.pcm.txt").read_text().startswith("1 2 3")
    assert len((tmp_path / "c17.gen.txt").read_text().splitlines()) == 6
    meta = json.loads((tmp_path / "c17.meta.json").read_text())
    assert meta["dimension"] == 6 and meta["field"]["p"] == 17


def test_build_json_format(capsys):
    code, out, _ = run(capsys, "build", "--family", "cubic", "--p", "17", "--format", "json")
    assert json.loads(out)["rows"][1] == [1, 8, 10, 13, 6, 12, 3, 2]


@pytest.mark.parametrize(
    "argv",
    [
        ["--family", "cubic", "--p", "15"],
        ["--family", "cubic", "--p", "3", "--k", "2"],
        ["--family", "cubic", "--p", "5", "--k", "2", "--modulus", "x2-1"],
        ["--family", "cubic", "--p", "17", "--primitive", "2"],
        ["--family", "quadratic", "--p", "17"],
        ["--family", "cubic", "--p", "17", "--form", "1,0,1"],
        ["--family", "quadratic", "--p", "17", "--form", "1,2,1"],
        ["--family", "norm", "--p", "17", "--delta", "4"],
    ],
)
def test_invalid_config_exit_2(capsys, argv):
    code, _, err = run(capsys, "build", *argv)
    assert code == 2 and "invalid configuration" in err


def test_cap_exit_3(capsys):
    assert run(capsys, "verify", "--family", "cubic", "--p", "17", "--max-gamma", "100")[0] == 3


def test_verify_both(capsys):
    code, out, _ = run(capsys, "verify", "--family", "cubic", "--p", "17", "--level", "both", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["agree"] and d["brute"]["covering_radius"]["value"] == 3


def test_verify_norm13(capsys):
    assert run(capsys, "verify", "--family", "norm", "--p", "13")[0] == 0


def test_verify_expectation_mismatch(capsys):
    code, out, _ = run(capsys, "verify", "--family", "cubic", "--p", "17", "--expect", "Perfect2")
    assert code == 1 and "result: fail" in out


def test_verify_exploratory_small_q(capsys):
    code, out, _ = run(capsys, "verify", "--family", "cubic", "--p", "7", "--level", "both")
    assert code in (0, 1) and "exploratory" in out


def test_spectrum_assertions(capsys):
    assert run(capsys, "spectrum", "--family", "li", "--p", "17", "--assert-ramanujan")[0] == 0
    code, out, _ = run(capsys, "spectrum", "--family", "cubic", "--p", "17", "--assert-weil")
    assert code == 0 and "bfs_diameter 3" in out
    assert run(capsys, "spectrum", "--family", "cubic", "--p", "13", "--assert-weil")[0] == 1


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--family", "hyperbola", "--p", "5", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "s_index,t_index,eigenvalue" and lines[1] == "0,0,4"


def test_decode_demo(capsys):
    code, out, _ = run(capsys, "decode-demo", "--family", "cubic", "--p", "17", "--seed", "1")
    assert code == 0
    assert "weight <= 2: corrected 725/725" in out
    assert "weight-3 witness" in out


def test_export_variants(capsys):
    code, out, _ = run(capsys, "export", "--family", "norm", "--p", "13", "--what", "generators", "--format", "json")
    assert code == 0 and len(json.loads(out)["reps"]) == 7
    code, out, _ = run(capsys, "export", "--family", "cubic", "--p", "17", "--what", "gen", "--format", "csv")
    assert code == 0 and len(out.splitlines()) == 6


def test_reproduce_only_matrices(capsys):
    code, out, _ = run(capsys, "reproduce-paper", "--only", "matrices")
    assert code == 0 and "golden matrices" in out and "lemma" not in out


def test_reproduce_corrupted_fixture(capsys, tmp_path):
    d = tmp_path / "golden"
    shutil.copytree(golden_dir(), d)
    f = d / "cubic_p19.txt"
    f.write_text(f.read_text().replace("18", "17"))
    code, out, _ = run(capsys, "reproduce-paper", "--only", "matrices", "--golden-dir", str(d))
    assert code == 1
    assert "-1 8 8 7 11 7 1 17 7" in out and "+1 8 8 7 11 7 1 18 7" in out


def test_outputs_are_deterministic():
    cmds = [
        ["decode-demo", "--family", "cubic", "--p", "17", "--seed", "3"],
        ["spectrum", "--family", "norm", "--p", "13", "--format", "json"],
        ["verify", "--family", "hyperbola", "--p", "17", "--level", "both", "--format", "csv"],
    ]
    for argv in cmds:
        outs = [
            subprocess.run([sys.executable, "-m", "quasilee", *argv, "--threads", t], capture_output=True, check=True).stdout
            for t in ("1", "3")
        ]
        assert outs[0] == outs[1]


def test_seed_changes_decode_sample(capsys):
    a = run(capsys, "decode-demo", "--family", "cubic", "--p", "17", "--seed", "1")[1]
    b = run(capsys, "decode-demo", "--family", "cubic", "--p", "17", "--seed", "2")[1]
    assert a != b
