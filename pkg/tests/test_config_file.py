"""Tests for the flat key-value experiment files."""

import math
import os

import pytest

from anisonorm.cli.config_file import (
    config_hash,
    load_config,
    load_config_text,
    parse_scalar,
    parse_text,
    parse_value,
    serialize,
)
from anisonorm.exceptions import ConfigurationError
from anisonorm.schemas.family import FamilyKind

CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "configs")
MINIMAL = """
family.kind = RieszFull   # trailing comment
blocks.1.gamma = 0.5
"""


def test_parse_scalar():
    assert parse_scalar("3") == 3
    assert parse_scalar("0.25") == 0.25
    assert parse_scalar("inf") == math.inf
    assert parse_scalar("TRUE") is True
    assert parse_scalar("plus") == "plus"
    assert parse_scalar('"12"') == "12"


def test_parse_value_lists():
    assert parse_value("1.2, 1.1") == [1.2, 1.1]
    assert parse_value("2.0,") == [2.0]
    assert parse_value('"a, b"') == "a, b"


def test_parse_text_builds_lists_from_indices():
    tree, lines = parse_text(MINIMAL)
    assert tree == {"family": {"kind": "RieszFull"}, "blocks": [{"gamma": 0.5}]}
    assert lines == {"family.kind": 2, "blocks.1.gamma": 3}


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("a = 1\na = 2", "line 2: duplicate key 'a'"),
        ("a = 1\nnot a pair", "line 2: expected 'key = value'"),
        ("blocks.0.gamma = 1", "line 1: malformed key"),
        ("a =", "line 1: empty value for 'a'"),
        ("a = 1\na.b = 2", "line 2: 'a.b' extends a scalar key"),
        ("blocks.2.gamma = 1", "indices must run 1..n"),
    ],
)
def test_parse_errors_name_the_line(text, message):
    with pytest.raises(ConfigurationError, match=message.replace(".", r"\.")):
        parse_text(text)


def test_load_minimal_config():
    config = load_config_text(MINIMAL)
    assert config.family.kind is FamilyKind.RIESZ_FULL
    assert config.blocks[0].gamma == 0.5
    assert config.tolerance == 1e-7
    assert config.operator_family().l == 1


def test_validation_errors_point_at_the_line():
    text = MINIMAL + "scan.ladder = 2\n"
    with pytest.raises(ConfigurationError, match="line 4: scan.ladder"):
        load_config_text(text)


def test_family_invariants_are_configuration_errors():
    with pytest.raises(ConfigurationError, match="alpha_plus_gamma_lt_m"):
        load_config_text("family.kind = RieszFull\nblocks.1.gamma = 1.5\n")


def test_missing_file(tmp_path):
    with pytest.raises(ConfigurationError, match="cannot read config"):
        load_config(tmp_path / "missing.conf")


@pytest.mark.parametrize("name", sorted(os.listdir(CONFIG_DIR)))
def test_bundled_configs_round_trip(name):
    config = load_config(os.path.join(CONFIG_DIR, name))
    again = load_config_text(serialize(config))
    assert again == config
    assert config_hash(again) == config_hash(config)


def test_hash_tracks_content():
    a = load_config_text(MINIMAL)
    b = load_config_text(MINIMAL + "tolerance = 1e-8\n")
    assert config_hash(a) != config_hash(b)
    assert len(config_hash(a)) == 64


def test_bundled_scan_and_transfer_settings():
    log_riesz = load_config(os.path.join(CONFIG_DIR, "log_riesz.conf"))
    assert log_riesz.scan.blowup
    assert log_riesz.scan.endpoint == "plus"
    assert log_riesz.test_family.kind == "PowerCutoff"
    transfer = load_config(os.path.join(CONFIG_DIR, "transfer_fourier.conf")).transfer
    assert (transfer.calibration, transfer.holdout, transfer.tolerance) == (8, 10, 0.05)


def test_log_riesz_header_names_the_implemented_kernel():
    with open(os.path.join(CONFIG_DIR, "log_riesz.conf"), encoding="utf-8") as handle:
        header = handle.readline()
    assert "|x-y|^-1/2 |log|x-y||" in header
    assert "log(e" not in header
