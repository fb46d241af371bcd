import json
import os
from fractions import Fraction

import numpy as np
import pytest

import config
from utils.errors import DataError, DomainError
from utils.helpers import (
    REPORT_FORMAT_TAG,
    atomic_write_text,
    format_value,
    load_params_file,
    parse_grid,
    parse_int_list,
    parse_rational,
    render_json,
    render_tsv,
)


def test_parse_grid_includes_stop():
    np.testing.assert_allclose(parse_grid("0:1:0.25"), [0.0, 0.25, 0.5, 0.75, 1.0])
    assert parse_grid("0:1:0.01").size == 101


@pytest.mark.parametrize("spec", ["0:1:0", "0:1:-0.1", "1:0:0.1", "0:1", "0:x:0.1"])
def test_parse_grid_rejects(spec):
    with pytest.raises(DomainError):
        parse_grid(spec)


def test_parse_int_list():
    assert parse_int_list("8") == [8]
    assert parse_int_list("8,16:18,20:30:5") == [8, 16, 17, 18, 20, 25, 30]


@pytest.mark.parametrize("spec", ["", "a", "1:5:0", "1:2:3:4"])
def test_parse_int_list_rejects(spec):
    with pytest.raises(DomainError):
        parse_int_list(spec)


def test_parse_rational():
    assert parse_rational("1/3") == Fraction(1, 3)
    assert parse_rational(" 0.1 ") == Fraction(1, 10)
    assert parse_rational("1") == 1
    for bad in ("1/0", "abc"):
        with pytest.raises(DomainError):
            parse_rational(bad)


def test_format_value():
    assert format_value(None) == "nan"
    assert format_value(True) == "1"
    assert format_value(np.int64(7)) == "7"
    assert format_value(Fraction(1, 4)) == "1/4"
    assert format_value(0.1) == "0.10000000000000001"
    assert float(format_value(np.float64(1 / 3))) == 1 / 3


def test_render_tsv_header():
    text = render_tsv("zeros", ("j", "value"), [(8, 0.5), (16, None)], {"seed": 0, "eps": 1e-12}, "abc")
    lines = text.splitlines()
    assert lines[0] == REPORT_FORMAT_TAG
    assert lines[1] == "# command=zeros"
    assert lines[2] == f"# version={config.VERSION}"
    assert lines[3] == "# cache_sha256=abc"
    assert lines[4:6] == ["# eps=9.9999999999999998e-13", "# seed=0"]
    assert lines[6] == "# j\tvalue"
    assert lines[7:] == ["8\t0.5", "16\tnan"]
    assert text.endswith("\n")


def test_render_tsv_without_cache():
    assert "# cache_sha256=none" in render_tsv("q", ("x",), [])


def test_render_tsv_rejects_ragged_rows():
    with pytest.raises(DataError):
        render_tsv("q", ("x", "q"), [(1,)])


def test_render_json():
    text = render_json({"b": np.array([1.0, np.nan]), "a": Fraction(1, 2), "c": np.bool_(True)})
    data = json.loads(text)
    assert list(data) == ["a", "b", "c"]
    assert data == {"a": "1/2", "b": [1.0, None], "c": True}
    assert "NaN" not in text


def test_atomic_write(tmp_path):
    path = str(tmp_path / "report.tsv")
    atomic_write_text(path, "first\n")
    atomic_write_text(path, "second\n")
    assert open(path, encoding="utf-8").read() == "second\n"
    assert os.listdir(tmp_path) == ["report.tsv"]


def test_atomic_write_missing_directory(tmp_path):
    path = str(tmp_path / "absent" / "report.tsv")
    with pytest.raises(OSError):
        atomic_write_text(path, "text\n")
    assert not os.path.exists(path)


def test_load_params_file(tmp_path):
    path = tmp_path / "params.json5"
    path.write_text("{\n  // orders to compare\n  j: '16,32',\n  'max-order': 6,\n}\n", encoding="utf-8")
    assert load_params_file(str(path)) == {"j": "16,32", "max_order": 6}


def test_load_params_file_needs_object(tmp_path):
    path = tmp_path / "params.json5"
    path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(DataError):
        load_params_file(str(path))
