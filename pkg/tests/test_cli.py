import json
import subprocess
import sys

import pytest

from conftest import BUNDLE, golden
from paralab.cli import dumps, main, run_command

B = str(BUNDLE.relative_to(BUNDLE.parent.parent))

GOLDEN_RUNS = {
    "demo_nat": ["demo", "nat"],
    "demo_curried_nat": ["demo", "curried-nat"],
    "demo_streams": ["demo", "streams"],
    "demo_queues": ["demo", "queues"],
    "demo_sorting": ["demo", "sorting", "--sizes", "2"],
    "demo_wildgroups": ["demo", "wildgroups"],
    "probe_diyoneda_homIdem": ["probe", "diyoneda", "--bundle", B, "--difunctor", "homIdem"],
    "check_badPresheafMap": ["check-transformation", "--bundle", B, "--phi", "badPresheafMap"],
}


@pytest.fixture(autouse=True)
def _at_root(monkeypatch):
    monkeypatch.chdir(BUNDLE.parent.parent)


def _strip(report):
    report = dict(report)
    report.pop("timing")
    return json.loads(json.dumps(report))


@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_golden_reports(name):
    code, report = run_command(GOLDEN_RUNS[name])
    assert _strip(report) == golden(f"cli_{name}.json")
    assert code == report["exit_code"]


@pytest.mark.parametrize("argv,code", [
    (["validate", B], 0),
    (["check-transformation", "--bundle", B, "--phi", "constE", "--formulation", "pullback"], 0),
    (["check-transformation", "--bundle", B, "--phi", "badPresheafMap"], 1),
    (["bisim", "--bundle", B, "--relation", "PQ"], 0),
    (["bisim", "--bundle", B, "--relation", "PR"], 1),
    (["free-theorem", "forall a. a -> a", "--check", "fixtures/candidates/fixed_point.json"], 1),
    (["enumerate", "--bundle", B, "--source", "homIdem", "--target", "homIdem"], 0),
    (["enumerate", "--bundle", B, "--source", "homIdem", "--target", "homIdem", "--limit", "2"], 3),
    (["probe", "universe", "--bound", "2"], 0),
    (["check-transformation", "--bundle", B, "--phi", "nope"], 2),
    (["free-theorem", "forall a. forall b. a -> b"], 2),
])
def test_exit_codes(argv, code):
    got, report = run_command(argv)
    assert got == code, report


def test_argparse_errors_exit_two(capsys):
    assert main(["no-such-command"]) == 2
    assert main(["--version"]) == 0


def test_enumerate_counts():
    _, r = run_command(["enumerate", "--bundle", B, "--source", "homIdem", "--target", "homIdem"])
    assert r["result"]["count"] == 4


def test_dangling_reference_carries_pointer(tmp_path):
    j = json.loads(BUNDLE.read_text())
    j["transformations"]["idHom"]["source"] = "missing"
    p = tmp_path / "b.json"
    p.write_text(json.dumps(j))
    code, r = run_command(["validate", str(p)])
    assert code == 2
    assert r["pointer"] == "/transformations/idHom/source"


def test_non_associative_category_is_rejected(tmp_path):
    table = [["1", x, x] for x in "1ab"] + [[x, "1", x] for x in "ab"]
    table += [["a", "a", "b"], ["a", "b", "a"], ["b", "a", "b"], ["b", "b", "b"]]
    cat = {"objects": ["*"], "morphisms": [{"id": m, "dom": "*", "cod": "*"} for m in "1ab"],
           "identities": {"*": "1"}, "compose": table}
    p = tmp_path / "b.json"
    p.write_text(json.dumps({"schema": "paralab-bundle/1", "categories": {"bad": cat}}))
    code, r = run_command(["validate", str(p)])
    assert code == 2
    assert r["pointer"] == "/categories/bad"
    assert "associativity" in r["error"]


def test_json_parse_error(tmp_path):
    p = tmp_path / "b.json"
    p.write_text("{")
    code, r = run_command(["validate", str(p)])
    assert code == 2 and "line 1" in r["error"]


def test_out_file_and_text_format(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["demo", "nat", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert text.startswith("demo: ok")
    assert json.loads(out.read_text())["result"]["chain_sizes"] == list(range(11))


@pytest.mark.parametrize("argv", [
    ["demo", "nat"],
    ["demo", "streams"],
    ["probe", "diyoneda", "--fixture", "walking_idempotent"],
    ["end", "--gamma", "Hom", "--theta", "Hom"],
    ["coend", "--gamma", "Hom"],
])
def test_reports_are_reproducible(argv):
    a, b = run_command(argv)[1], run_command(argv)[1]
    assert dumps(_strip(a)) == dumps(_strip(b))


def test_timeout_is_a_resource_limit():
    code, r = run_command(["free-theorem", "forall a. (a * a -> Bool) -> List a -> List a", "--check",
                           "fixtures/candidates/insertion_sort.txt", "--sizes", "3,4", "--timeout-seconds", "1"])
    assert code == 3 and r["verdict"] == "resource-limit"


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "paralab.cli", "demo", "nat", "--format", "json"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    assert json.loads(out.stdout)["result"]["stabilized"] is False
