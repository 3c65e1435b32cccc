import io
import json

import pytest

from derivcft import __version__
from derivcft.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_pi():
    code, out, _ = call("pi", "--degree", "1", "--mode", "2")
    assert code == 0
    report = json.loads(out)
    assert report["result"]["pi"] == 6
    assert report["version"] == __version__
    assert report["config"]["degree"] == 1


def test_nulls():
    code, out, _ = call("nulls", "--degree", "1", "--level", "2")
    assert code == 0
    r = json.loads(out)["result"]
    assert r["rank"] == 1 and r["null_basis"] == [[[[1, 1], "1"]]]


def test_gram_table():
    code, out, _ = call("gram", "--degree", "1", "--level", "2", "--format", "table")
    assert code == 0 and "rank=1" in out


def test_certify_and_verify_roundtrip(tmp_path):
    code, out, _ = call("certify", "--degree", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["result"]["variant"] == "NullLevelTwo"
    path = tmp_path / "cert.json"
    code, out, _ = call("certify", "--degree", "1")
    path.write_text(out)
    code, vout, _ = call("verify", str(path))
    assert code == 0 and json.loads(vout)["result"]["verified"]


def test_verify_detects_tampering(tmp_path):
    _, out, _ = call("certify", "--degree", "1")
    data = json.loads(out)
    data["result"]["witness"]["gap"] = "47"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, vout, _ = call("verify", str(path))
    assert code == 1
    assert json.loads(vout)["result"]["field"] == "witness.gap"


def test_verify_missing_file_is_usage_error(tmp_path):
    code, _, err = call("verify", str(tmp_path / "nope.json"))
    assert code == 2 and "cannot read" in err


@pytest.mark.parametrize("argv", [
    ("pi", "--degree", "-1", "--mode", "2"),
    ("bogus",),
    ("pi", "--degree", "1"),
    ("nuclearity", "--beta-grid", "0.1:0.5:10"),
    ("bounds", "--precision", "10"),
    ("gram", "--q", "1/0"),
    ("kernel-check", "--degree", "0"),
])
def test_usage_errors(argv):
    code, _, _ = call(*argv)
    assert code == 2


def test_kernel_check():
    code, out, _ = call("kernel-check", "--degree", "5")
    assert code == 0 and json.loads(out)["result"]["passed"]


def test_character():
    code, out, _ = call("character", "--degree", "1", "--level", "6")
    r = json.loads(out)["result"]
    assert code == 0 and r["coefficients"] == [1, 0, 1, 1, 2, 2, 4] and r["agrees"]


def test_bounds_table():
    code, out, _ = call("bounds", "--degree", "1", "--mode", "3", "--level", "4", "--format", "table")
    assert code == 0 and "all passed" in out


def test_nuclearity_csv():
    code, out, _ = call("nuclearity", "--beta0", "1.6", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "beta,p,f,log_f"
    assert len(lines) == 26


def test_nuclearity_divergence_is_not_failure():
    code, out, _ = call("nuclearity", "--beta0", "1.6")
    r = json.loads(out)["result"]
    assert code == 0 and r["verdict"] == "diverging" and r["notes"]


@pytest.mark.parametrize("argv", [
    ("certify", "--degree", "1"),
    ("nuclearity", "--beta0", "1.7", "--format", "csv"),
    ("gram", "--degree", "2", "--level", "5"),
])
def test_deterministic_output(argv):
    assert call(*argv)[1] == call(*argv)[1]
