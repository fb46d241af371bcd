import json
import os

import pytest

from db.jacobi_cache import file_sha256, save_jacobi
from main import main
from utils.errors import EXIT_IO, EXIT_METADATA, EXIT_MISSING, EXIT_OK, EXIT_PARTIAL
from utils.helpers import REPORT_FORMAT_TAG


@pytest.fixture
def cache(tmp_path, minkowski_jacobi):
    path = str(tmp_path / "jacobi.tsv")
    save_jacobi(path, minkowski_jacobi, {"n_target": 64, "converged": 1})
    return path


def _rows(path):
    lines = open(path, encoding="utf-8").read().splitlines()
    columns = [line for line in lines if line.startswith("#")][-1][2:].split("\t")
    return columns, [dict(zip(columns, line.split("\t"))) for line in lines if not line.startswith("#")]


def test_q_at_rational(tmp_path):
    out = str(tmp_path / "q.tsv")
    assert main(["q", "--x", "1/3", "--out", out]) == EXIT_OK
    lines = open(out, encoding="utf-8").read().splitlines()
    assert lines[0] == REPORT_FORMAT_TAG
    assert lines[-1] == "1/3\t0.25\t1/4"


def test_q_rejects_point_outside_interval(tmp_path):
    out = str(tmp_path / "q.tsv")
    assert main(["q", "--x", "3/2", "--out", out]) == EXIT_IO
    assert not os.path.exists(out)


def test_q_graph(tmp_path):
    out = str(tmp_path / "graph.tsv")
    assert main(["q", "--n", "2", "--out", out]) == EXIT_OK
    _, rows = _rows(out)
    assert len(rows) == 5
    assert {"x": "1/3", "q": "0.25", "q_exact": "1/4"} in rows


def test_q_json(tmp_path):
    out = str(tmp_path / "q.json")
    assert main(["q", "--x", "2/5", "--format", "json", "--out", out]) == EXIT_OK
    data = json.load(open(out, encoding="utf-8"))
    assert data["q_exact"] == "3/8"
    assert data["command"] == "q"
    assert data["cache_sha256"] is None


def test_missing_cache(tmp_path):
    out = str(tmp_path / "zeros.tsv")
    code = main(["zeros", "--j", "8", "--cache", str(tmp_path / "absent.tsv"), "--out", out])
    assert code == EXIT_MISSING
    assert not os.path.exists(out)


def test_missing_output_directory(tmp_path, cache):
    out = str(tmp_path / "absent" / "zeros.tsv")
    assert main(["zeros", "--j", "8", "--cache", cache, "--out", out]) == EXIT_IO
    assert not os.path.exists(out)


def test_inconsistent_cache(tmp_path, cache):
    text = open(cache, encoding="utf-8").read().replace("# n=65", "# n=70")
    bad = tmp_path / "bad.tsv"
    bad.write_text(text, encoding="utf-8")
    assert main(["zeros", "--j", "8", "--cache", str(bad), "--out", str(tmp_path / "z.tsv")]) == EXIT_METADATA


def test_too_small_cache(tmp_path, cache):
    out = str(tmp_path / "zeros.tsv")
    assert main(["zeros", "--j", "128", "--cache", cache, "--out", out]) == EXIT_MISSING


def test_hausdorff_report(tmp_path, cache):
    out = str(tmp_path / "hausdorff.tsv")
    assert main(["hausdorff", "--max-order", "8", "--cache", cache, "--out", out]) == EXIT_OK
    header = open(out, encoding="utf-8").read()
    assert f"# cache_sha256={file_sha256(cache)}" in header
    columns, rows = _rows(out)
    assert columns[:3] == ["j", "dim_lower", "dim_upper"]
    assert [int(r["j"]) for r in rows] == list(range(2, 9))
    assert float(rows[0]["dim_upper"]) == pytest.approx(0.874761611261160, abs=5e-14)
    assert float(rows[-1]["dim_lower"]) == pytest.approx(0.874716305108207, abs=5e-14)
    assert all(r["contains_reference"] == "1" for r in rows)


def test_reports_are_reproducible(tmp_path, cache):
    first, second = str(tmp_path / "a.tsv"), str(tmp_path / "b.tsv")
    assert main(["discrepancy", "--j", "16,32", "--cache", cache, "--out", first]) == EXIT_OK
    assert main(["discrepancy", "--j", "16,32", "--cache", cache, "--out", second]) == EXIT_OK
    assert open(first, "rb").read() == open(second, "rb").read()


def test_discrepancy_lower_bound(tmp_path, cache):
    out = str(tmp_path / "d.json")
    assert main(["discrepancy", "--j", "16,32,64", "--cache", cache, "--format", "json", "--out", out]) == EXIT_OK
    data = json.load(open(out, encoding="utf-8"))
    for order in data["orders"]:
        assert order["D"] >= 1.0 / order["j"] - 1e-12
        assert order["lower_bound_holds"]
    assert all(data["invariants"].values())
    assert data["params"]["j"] == "16,32,64"


def test_zeros_table(tmp_path, cache):
    out = str(tmp_path / "zeros.tsv")
    assert main(["zeros", "--j", "8,16", "--cache", cache, "--out", out]) == EXIT_OK
    _, rows = _rows(out)
    assert len(rows) == 8 + 16
    zetas = [float(r["zeta"]) for r in rows if r["j"] == "16"]
    assert zetas == sorted(zetas)
    assert all(0.0 < z < 1.0 for z in zetas)


def test_christoffel_overlay(tmp_path, cache):
    out = str(tmp_path / "c.tsv")
    code = main(["christoffel", "--j", "32", "--grid", "0.1:0.5:0.1", "--q", "4", "--cache", cache, "--out", out])
    assert code == EXIT_OK
    _, rows = _rows(out)
    assert len(rows) == 5
    assert rows[0]["lambda_asymptotic"] == "nan"
    assert rows[-1]["lambda_asymptotic"] != "nan"
    for r in rows:
        assert float(r["log_christoffel"]) == -float(r["log_kernel"])


def test_christoffel_grid_outside_interval(tmp_path, cache):
    out = str(tmp_path / "c.tsv")
    assert main(["christoffel", "--grid", "0:1.5:0.5", "--cache", cache, "--out", out]) == EXIT_IO


def test_nevai_tables(tmp_path, cache):
    orders, series = str(tmp_path / "orders.tsv"), str(tmp_path / "series.tsv")
    assert main(["nevai", "--j", "16,32", "--cache", cache, "--out", orders]) == EXIT_OK
    assert main(["nevai", "--j", "16,32", "--table", "series", "--cache", cache, "--out", series]) == EXIT_OK
    _, rows = _rows(orders)
    assert [r["j"] for r in rows] == ["16", "32"]
    assert all(float(r["hutchinson"]) >= 0.0 for r in rows)
    columns, rows = _rows(series)
    assert columns[:2] == ["l", "a_l"]
    assert len(rows) == 32


def test_asymptotics_summary(tmp_path, cache):
    out = str(tmp_path / "a.json")
    assert main(["asymptotics", "--j", "64", "--k", "0:2", "--cache", cache, "--format", "json", "--out", out]) == EXIT_OK
    data = json.load(open(out, encoding="utf-8"))
    assert data["q"] == 2
    assert data["all_within"]
    assert abs(data["weight_ratio_residual_quarter"]) < 1.0


def test_regularity_summary(tmp_path, cache):
    out = str(tmp_path / "r.json")
    assert main(["regularity", "--j", "63", "--cache", cache, "--format", "json", "--out", out]) == EXIT_OK
    data = json.load(open(out, encoding="utf-8"))
    assert data["capacity"] == 0.25
    assert 0.2 < data["gamma_final"] < 0.25


def test_params_file(tmp_path, cache):
    params = tmp_path / "params.json5"
    params.write_text("{\n  // shared settings\n  j: '16',\n  format: 'json',\n}\n", encoding="utf-8")
    out = str(tmp_path / "d.json")
    assert main(["discrepancy", "--params", str(params), "--cache", cache, "--out", out]) == EXIT_OK
    data = json.load(open(out, encoding="utf-8"))
    assert [o["j"] for o in data["orders"]] == [16]


def test_jacobi_then_revalidate(tmp_path):
    cache_path = str(tmp_path / "cache" / "jacobi.tsv")
    out = str(tmp_path / "trace.tsv")
    args = ["jacobi", "--n", "8", "--eps", "1e-10", "--iters", "2000", "--cache", cache_path, "--out", out]
    assert main(args) == EXIT_OK
    digest = file_sha256(cache_path)
    _, rows = _rows(out)
    assert rows
    assert main(args) == EXIT_OK
    assert file_sha256(cache_path) == digest
    _, rows = _rows(out)
    assert rows == []


def test_jacobi_partial(tmp_path):
    cache_path = str(tmp_path / "jacobi.tsv")
    out = str(tmp_path / "trace.tsv")
    assert main(["jacobi", "--n", "8", "--iters", "2", "--cache", cache_path, "--out", out]) == EXIT_PARTIAL
    assert "# converged=0" in open(cache_path, encoding="utf-8").read()


def test_compute_on_demand(tmp_path):
    cache_path = str(tmp_path / "jacobi.tsv")
    out = str(tmp_path / "h.tsv")
    assert main(["hausdorff", "--max-order", "3", "--compute", "--cache", cache_path, "--out", out]) == EXIT_OK
    assert os.path.exists(cache_path)


def test_jacobi_summary_carries_error_spread(tmp_path):
    cache_path = str(tmp_path / "jacobi.tsv")
    out = str(tmp_path / "jacobi.json")
    args = ["jacobi", "--n", "8", "--eps", "1e-10", "--iters", "2000", "--format", "json"]
    assert main(args + ["--cache", cache_path, "--out", out]) == EXIT_OK
    data = json.load(open(out, encoding="utf-8"))
    assert data["converged"]
    assert len(data["error_std"]) == 8
    assert data["error_std_max"] == max(data["error_std"])
    assert data["error_std_max"] < 1e-9


def test_asymptotics_table_columns(tmp_path, cache):
    out = str(tmp_path / "a.tsv")
    assert main(["asymptotics", "--j", "64", "--k", "0:2", "--cache", cache, "--out", out]) == EXIT_OK
    columns, rows = _rows(out)
    assert columns[6:8] == ["observed", "mean_neg_log_weight"]
    filled = [r for r in rows if r["observed"] != "nan"]
    assert filled
    # the mean of logs never exceeds the log of the mean
    assert all(float(r["mean_neg_log_weight"]) >= float(r["observed"]) - 1e-12 for r in filled)
