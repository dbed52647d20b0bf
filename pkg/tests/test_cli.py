import csv
import io
import json

import numpy as np
import pytest

from hardyrefl import cli, runs
from hardyrefl.errors import InputError, QuadratureFailure


def run_cli(args, capsys):
    code = cli.run(args)
    out = capsys.readouterr().out
    return code, out


def records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def strip_wall(text):
    out = []
    for r in records(text):
        r.pop("wall_time")
        out.append(json.dumps(r, sort_keys=True))
    return out


@pytest.mark.parametrize("text, value", [
    ("0.3,-0.2", 0.3 - 0.2j), ("0.5@90", 0.5j), ("0.25", 0.25), ("0.1+0.2j", 0.1 + 0.2j),
    ([0.1, 0.4], 0.1 + 0.4j), ("0.2i", 0.2j)])
def test_parse_complex(text, value):
    assert cli.parse_complex(text) == pytest.approx(value, abs=1e-15)


def test_parse_complex_rejects_garbage():
    with pytest.raises(InputError):
        cli.parse_complex("a,b")


def test_json_encoding():
    rec = runs.ResultRecord("x", "y", {"a": 0.3 - 0.2j}, {"v": np.float64(1.5), "arr": np.array([1j, 2])},
                            True, wall_time=0.1)
    d = json.loads(cli.record_line(rec))
    assert d["inputs"]["a"] == [0.3, -0.2]
    assert d["outputs"]["arr"] == [[0.0, 1.0], [2.0, 0.0]]
    assert cli.to_jsonable(float("inf")) == "inf"
    assert list(d) == sorted(d)


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"a": ["0.4@0"], "order": 64, "tol": {"operator": 1e-7}}), encoding="utf-8")
    args = cli.build_parser().parse_args(["verify", "--config", str(cfg), "--order", "128"])
    conf = cli.make_config(args, {"polar": 1e-6})
    assert conf.order == 128
    assert conf.a == [0.4]
    assert conf.tol == {"operator": 1e-7, "polar": 1e-6}
    args = cli.build_parser().parse_args(["verify", "--config", str(cfg)])
    assert cli.make_config(args, {}).order == 64


def test_yaml_config(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("a: [0.3, '0.2,0.1']\norder: 64\nseed: 5\n", encoding="utf-8")
    args = cli.build_parser().parse_args(["verify", "--config", str(cfg)])
    conf = cli.make_config(args, {})
    assert conf.a == [0.3, 0.2 + 0.1j] and conf.seed == 5


@pytest.mark.parametrize("args", [
    ["verify", "--tol.operator", "1e-20"],
    ["verify", "--tol.nonsense", "1e-3"],
    ["verify", "--order", "4"],
    ["verify", "--a", "0.9"],
    ["scan", "--grid-radii", "0.85"],
    ["spectral", "--a", "0"],
    ["subspaces", "--a", "0.7"],
    ["verify", "--a", "x,y"],
])
def test_input_errors_exit_2(args, capsys):
    code, _ = run_cli(args, capsys)
    assert code == 2


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"colour": 1}', encoding="utf-8")
    assert run_cli(["verify", "--config", str(cfg)], capsys)[0] == 2


def test_numerical_failure_exit_3(monkeypatch, capsys):
    def boom(cfg):
        yield from ()
        raise QuadratureFailure("forced")
    monkeypatch.setitem(runs.COMMANDS, "spectral", boom)
    assert run_cli(["spectral"], capsys)[0] == 3


def test_tol_flag_forms(capsys):
    code, out = run_cli(["verify", "--order", "64", "--a", "0.3", "--tol.operator=1e-6", "--tol.polar", "1e-6"],
                        capsys)
    recs = records(out)
    assert code == 0
    assert any(r["check"] == "operator.reflection" and r["tolerance"] == 1e-6 for r in recs)
    assert any(r["check"] == "polar.rho_hermitian" and r["tolerance"] == 1e-6 for r in recs)


def test_verify_small_order_reports_tail(capsys):
    code, out = run_cli(["verify", "--order", "16"], capsys)
    assert code == 1
    failed = [r for r in records(out) if r["passed"] is False]
    assert failed and all("tail_bound" in r for r in failed)
    assert all(r["tail_bound"] > 0 for r in failed)


def test_verify_seed_does_not_change_verdicts(capsys):
    base = ["verify", "--order", "64", "--a", "0.3", "--a", "0.4@60"]
    c1, o1 = run_cli(base + ["--seed", "1"], capsys)
    c2, o2 = run_cli(base + ["--seed", "2"], capsys)
    assert c1 == c2 == 0
    assert [r["passed"] for r in records(o1)] == [r["passed"] for r in records(o2)]


def test_determinism_and_outfile(tmp_path, capsys):
    out = tmp_path / "r.jsonl"
    args = ["verify", "--order", "128", "--a", "0.5", "--out", str(out)]
    assert run_cli(args, capsys)[0] == 0
    first = out.read_text(encoding="utf-8")
    assert run_cli(args, capsys)[0] == 0
    assert strip_wall(first) == strip_wall(out.read_text(encoding="utf-8"))


def test_spectral_csv_dump(capsys):
    code, out = run_cli(["spectral", "--a", "0.6", "--theta-points", "512", "--lambda-points", "64",
                         "--format", "csv", "--dump-rows", "17"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["a", "lambda", "density", "abs_phi0_sq"]
    assert len(rows) == 18
    assert float(rows[1][1]) == pytest.approx(0.390625) and float(rows[-1][1]) == pytest.approx(6.25)
    assert float(rows[1][2]) == 0 and float(rows[-1][2]) == 0


def test_spectral_records(capsys):
    code, out = run_cli(["spectral", "--a", "0.6", "--theta-points", "512", "--lambda-points", "64"], capsys)
    recs = records(out)
    assert code == 0
    sup = next(r for r in recs if r["check"] == "spectral.support")
    assert sup["outputs"]["lambda_min"] == pytest.approx(0.390625)
    assert all(r["passed"] for r in recs if r["check"] == "spectral.mass")
    assert all(r["passed"] for r in recs if r["check"] == "spectral.unsquared_arc_rejected")


def test_scan_threads_preserve_order(capsys):
    base = ["scan", "--order", "64", "--grid-radii", "0.2", "0.5", "--grid-phases", "0", "90"]
    c1, o1 = run_cli(base + ["--workers", "1"], capsys)
    c4, o4 = run_cli(base + ["--workers", "4"], capsys)
    assert c1 == c4 == 0
    assert strip_wall(o1) == strip_wall(o4)
    recs = records(o1)
    assert len(recs) == 16
    diag = [r for r in recs if r["inputs"]["a"] == r["inputs"]["b"]]
    assert len(diag) == 4 and all(v == 0 for r in diag for v in r["outputs"].values())
    off = [r for r in recs if r["inputs"]["a"] != r["inputs"]["b"]]
    assert all(r["outputs"]["delta_sup"] <= r["outputs"]["delta_bound"] for r in off)


def test_scan_csv(capsys):
    code, out = run_cli(["scan", "--order", "64", "--grid-radii", "0.3", "--grid-phases", "0", "180",
                         "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4
    assert {"a", "b", "berkson_gap", "delta_sup", "rho_difference", "gram_difference"} <= set(rows[0])


def test_geodesic_records(capsys):
    code, out = run_cli(["geodesic", "--a", "0.5", "--order", "128", "--k", "16"], capsys)
    recs = {r["check"]: r for r in records(out)}
    g = recs["geodesic.E_0 -> E_a"]
    assert g["passed"] and g["outputs"]["residual"] <= 1e-6
    assert [c["t"] for c in g["outputs"]["checkpoints"]] == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert recs["geodesic.O_0 -> E_a"]["note"].startswith("condition_failed dims")


def test_subspaces_records(capsys):
    code, out = run_cli(["subspaces", "--a", "0.5", "--b", "0", "--order", "128", "--k", "16"], capsys)
    recs = records(out)
    assert len(recs) == 11
    assert all(len(r["outputs"]["cosines"]) == 16 for r in recs)
    assert all(r["outputs"]["dim_ok"] for r in recs[:10])
    assert code == (0 if all(r["passed"] for r in recs) else 1)


def test_module_entry_point():
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "hardyrefl", "verify", "--order", "32", "--a", "0.2"],
                         capture_output=True, text=True)
    assert res.returncode in (0, 1)
    assert all(json.loads(line)["command"] == "verify" for line in res.stdout.splitlines())
