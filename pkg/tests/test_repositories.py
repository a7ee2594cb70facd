"""Tests for grid containers and CSV tables."""

import json
import struct
from pathlib import Path

import numpy as np
import pytest

from anisonorm.exceptions import ContainerFormatError
from anisonorm.models.grid import GridFunction, uniform_axis
from anisonorm.repositories import CsvTableRepository, FileRepository, GridContainerRepository
from anisonorm.repositories.csv_tables import check_table, format_cell, k_curve_table
from anisonorm.repositories.grid_container import decode, encode, sidecar_path
from anisonorm.schemas.estimates import CheckResult, KEstimate


@pytest.fixture
def complex_grid() -> GridFunction:
    x, y = uniform_axis(1.0, 5), uniform_axis(2.0, 3)
    values = np.outer(np.exp(-(x**2)), 1j + y)
    return GridFunction.from_samples([x, y], values, [1.0, 2.0])


def test_file_repository_paths(tmp_path):
    repo = GridContainerRepository(tmp_path)
    assert repo.path("f") == tmp_path / "f.angf"
    assert repo.path("f.bin") == tmp_path / "f.bin"
    assert FileRepository(tmp_path).path("/abs/x") == Path("/abs/x")


def test_container_save_and_load(tmp_path, complex_grid, riesz_two_block):
    repo = GridContainerRepository(tmp_path)
    path = repo.save("out", complex_grid, family=riesz_two_block, tolerance=1e-7, source="test")
    loaded = repo.load("out")
    assert loaded.is_complex
    np.testing.assert_array_equal(loaded.values, complex_grid.values)
    assert loaded.truncation_radii == (1.0, 2.0)
    meta = json.loads(sidecar_path(path).read_text())
    assert meta["lengths"] == [5, 3]
    assert meta["axis_order"] == ["x1", "x2"]
    assert repo.load_sidecar("out").family == riesz_two_block


def test_container_without_sidecar(tmp_path, gaussian_grid):
    path = tmp_path / "plain.angf"
    path.write_bytes(encode(gaussian_grid))
    assert GridContainerRepository(tmp_path).load("plain").l == 1


def test_sidecar_mismatch(tmp_path, gaussian_grid, complex_grid):
    repo = GridContainerRepository(tmp_path)
    path = repo.save("f", gaussian_grid)
    path.write_bytes(encode(complex_grid))
    with pytest.raises(ContainerFormatError, match="does not match"):
        repo.load("f")


def test_malformed_sidecar(tmp_path, gaussian_grid):
    repo = GridContainerRepository(tmp_path)
    path = repo.save("f", gaussian_grid)
    sidecar_path(path).write_text("{}")
    with pytest.raises(ContainerFormatError, match="malformed sidecar"):
        repo.load("f")


@pytest.mark.parametrize(
    ("mutate", "message"),
    [
        (lambda data: b"XXXX" + data[4:], "bad magic"),
        (lambda data: data[:4] + struct.pack("<H", 9) + data[6:], "unsupported container version"),
        (lambda data: data[:6] + b"\x07" + data[7:], "unknown dtype code"),
        (lambda data: data[:-3], "truncated"),
        (lambda data: data + b"\x00", "trailing bytes"),
    ],
)
def test_decode_rejects_corrupt_data(gaussian_grid, mutate, message):
    with pytest.raises(ContainerFormatError, match=message):
        decode(mutate(encode(gaussian_grid)))


def test_decode_rejects_unsorted_axes(gaussian_grid):
    data = bytearray(encode(gaussian_grid))
    first_axis = 8 + 8 + 8
    data[first_axis : first_axis + 8] = struct.pack("<d", 100.0)
    with pytest.raises(ContainerFormatError, match="invalid grid data"):
        decode(bytes(data))


def test_missing_container(tmp_path):
    with pytest.raises(ContainerFormatError, match="cannot read"):
        GridContainerRepository(tmp_path).load("nothing")


def test_format_cell():
    assert format_cell(None) == ""
    assert format_cell(True) == "true"
    assert format_cell(3) == "3"
    assert format_cell(float("inf")) == "inf"
    assert format_cell(1.0 / 3.0) == "0.333333333333"


def test_tables_are_deterministic(tmp_path):
    curve = [
        KEstimate(p=(1.5,), q=(6.0,), lower_bound=2.0, witness={"1.margin": 0.1}),
        KEstimate(p=(1.8,), q=(18.0,), lower_bound=3.0),
    ]
    table = k_curve_table(curve)
    first = CsvTableRepository(tmp_path / "a", "abc").write("k_curve", "k_curve", table)
    second = CsvTableRepository(tmp_path / "b", "abc").write("k_curve", "k_curve", table)
    assert first.read_bytes() == second.read_bytes()
    lines = first.read_text().splitlines()
    assert lines[:3] == [
        "# config_hash=abc",
        "# kind=k_curve",
        "p_1,q_1,lower_bound,degenerate,1.margin,tolerance",
    ]
    assert lines[4] == "1.8,18,3,false,,1e-07"


def test_read_table_back(tmp_path):
    repo = CsvTableRepository(tmp_path, "h")
    results = [CheckResult(name="spike", passed=True, detail="ok, fine")]
    repo.write("checks", "checks", check_table(results))
    meta, header, rows = repo.read("checks")
    assert meta == {"config_hash": "h", "kind": "checks"}
    assert header == ["check", "passed", "worst", "detail"]
    assert rows == [["spike", "true", "0", "ok, fine"]]
