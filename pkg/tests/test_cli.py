import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from kscontext.cli import main, run

GOLDEN = Path(__file__).parent / "golden"
CASES = {
    "verify_ks_mermin": ["verify-ks", "--model", "mermin-ghz3"],
    "verify_ks_pentagram": ["verify-ks", "--model", "pentagram"],
    "bound_square_b": ["bound", "--model", "square-b"],
    "qvalue_pentagram": ["qvalue", "--model", "pentagram"],
    "reduce_square_c": ["reduce", "--model", "square-c"],
    "equiv_mermin_square_b": ["equiv", "--model", "mermin-ghz3", "--model", "square-b"],
    "ingest_measured": ["ingest", "--data", "ghz3-measured"],
    "list_models": ["list-models"],
    "export_pentagram": ["export-model", "--model", "pentagram"],
}


def _close(a, b, path="$"):
    if isinstance(a, float) or isinstance(b, float):
        assert isinstance(a, (int, float)) and isinstance(b, (int, float)), path
        assert abs(a - b) <= 1e-9 * max(1.0, abs(b)), f"{path}: {a} != {b}"
    elif isinstance(a, dict):
        assert isinstance(b, dict) and list(a) == list(b), path
        for k in a:
            _close(a[k], b[k], f"{path}.{k}")
    elif isinstance(a, list):
        assert isinstance(b, list) and len(a) == len(b), path
        for i, (x, y) in enumerate(zip(a, b)):
            _close(x, y, f"{path}[{i}]")
    else:
        assert a == b, f"{path}: {a!r} != {b!r}"


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, capsys):
    code = main(CASES[name])
    out = json.loads(capsys.readouterr().out)
    path = GOLDEN / f"{name}.json"
    if os.environ.get("KSCONTEXT_UPDATE_GOLDEN"):
        path.write_text(json.dumps(out, indent=2) + "\n")
    assert code == 0 and out["status"] == "ok"
    _close(out, json.loads(path.read_text()))


def test_golden_key_values():
    load = lambda n: json.loads((GOLDEN / f"{n}.json").read_text())["result"]
    assert load("verify_ks_mermin")["certificate"] == [0, 1, 2, 3]
    assert load("bound_square_b")["bound"] == 3
    assert load("reduce_square_c")["reduced_bound"] == 2
    assert abs(load("ingest_measured")["violation_sigma"] - 1.498 / 0.130) < 1e-9


def test_domain_error_exit_1(capsys):
    code = main(["bound", "--model", "no-such-model"])
    captured = capsys.readouterr()
    assert code == 1 and captured.out == ""
    report = json.loads(captured.err)
    assert report["status"] == "error" and "no-such-model" in report["message"]


def test_bad_model_file_exit_1(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"n": 2, "contexts": [{"members": ["XI", "YI"]}]}))
    assert main(["verify-ks", "--model", str(path)]) == 1
    assert "contexts[0]" in json.loads(capsys.readouterr().err)["message"]


@pytest.mark.parametrize(
    "argv",
    [[], ["frobnicate"], ["bound"], ["equiv", "--model", "square-b"], ["ingest", "--data", "x", "--error-mode", "cubic"]],
)
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as info:
        run(argv)
    assert info.value.code == 2


def test_pretty_and_export_file(tmp_path, capsys):
    out = tmp_path / "p.json"
    assert main(["--pretty", "export-model", "--model", "pentagram", "--output", str(out)]) == 0
    text = capsys.readouterr().out
    assert text.startswith("{\n  ")
    assert json.loads(out.read_text()) == json.loads(text)["result"]
    assert main(["verify-ks", "--model", str(out)]) == 0
    assert json.loads(capsys.readouterr().out)["result"]["certificate"] == [0, 1, 2, 3, 4]


def test_threads_flag(capsys):
    assert main(["bound", "--model", "pentagram", "--threads", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["result"]["bound"] == 3


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "kscontext", "verify-ks", "--model", "square-b"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["feasible"] is False
