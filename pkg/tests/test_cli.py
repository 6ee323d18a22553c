import json

import pytest

from tetratwist.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_renorm_code(capsys):
    code, out, _ = run(capsys, "renorm", "code", "5/23")
    assert code == 0 and out.split() == ["(2,0,1)", "(2,1,1)", "(0,1,-1)", "(2,1,1)"]


def test_renorm_split_and_eval(capsys):
    _, out, _ = run(capsys, "renorm", "split", "45/178")
    assert out.strip() == "(0;2,0,0,1,-2,-21,-2)"
    _, out, _ = run(capsys, "renorm", "eval", "2,0,0,1,-2,-21,-2")
    assert out.strip() == "45/178"


def test_renorm_interval(capsys):
    _, out, _ = run(capsys, "renorm", "interval", "A,2,3")
    assert "41/99" in out and "29/70" in out


def test_partition_json(capsys, tmp_path):
    path = tmp_path / "p.json"
    code, _, _ = run(capsys, "partition", "--s", "5/13", "--format", "json", "--out", str(path))
    assert code == 0
    data = json.loads(path.read_text())
    assert data["s"] == "5/13" and data["pieces"]


def test_partition_identity_at_zero(capsys):
    code, out, _ = run(capsys, "partition", "--s", "0", "--format", "json")
    assert code == 0 and len(json.loads(out)["pieces"]) == 1


def test_domains_json(capsys):
    code, out, _ = run(capsys, "domains", "--space", "X", "--interval", "1/2:1")
    data = json.loads(out)
    assert code == 0 and data["count"] == 22 and data["volume"] == "1"


def test_domains_cert(capsys):
    code, out, _ = run(capsys, "domains", "--space", "X", "--interval", "1/2:1", "--format", "cert")
    assert code == 0 and "space=X" in out


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "at:41/99")
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "verify", "at:1/3")
    assert code == 1 and "FAIL" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["renorm", "code", "abc"],
        ["renorm", "code", "3/2"],
        ["partition", "--s", "7/5"],
        ["domains", "--interval", "1:1/2"],
        ["verify", "nonsense"],
        ["tiling"],
        ["bogus"],
    ],
)
def test_input_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_tiling_surd_json(capsys):
    code, out, _ = run(capsys, "tiling", "--surd", "sqrt2-1", "--depth", "4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["approximate"] is True and data["complete"]
