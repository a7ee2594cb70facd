"""Flat key-value experiment files.

One ``dotted.key = value`` per line; ``#`` starts a comment. Numeric path parts
are 1-based list indices (``blocks.2.gamma``). Values are ints, floats, ``inf``,
``true``/``false``, comma lists (a trailing comma makes a one-element list) or
bare strings; double quotes force a string.
"""

from __future__ import annotations

import hashlib
import math
import re
from enum import Enum
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from anisonorm.exceptions import ConfigurationError
from anisonorm.schemas.experiment import ExperimentConfig

_KEY = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*(\.([A-Za-z_][A-Za-z0-9_]*|[1-9][0-9]*))*$")
_INT = re.compile(r"^[+-]?[0-9]+$")


def parse_scalar(text: str) -> Any:
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] == '"':
        return text[1:-1]
    lowered = text.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    if lowered in ("inf", "+inf", "infinity"):
        return math.inf
    if _INT.match(text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        return text


def parse_value(text: str) -> Any:
    if "," not in text or text.strip().startswith('"'):
        return parse_scalar(text)
    items = text.split(",")
    if items[-1].strip() == "":
        items = items[:-1]
    return [parse_scalar(item) for item in items]


def _insert(tree: dict, path: list[str], value: Any, line: int) -> None:
    node = tree
    for part in path[:-1]:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigurationError(f"line {line}: '{'.'.join(path)}' extends a scalar key")
        node = child
    if path[-1] in node:
        raise ConfigurationError(f"line {line}: duplicate key '{'.'.join(path)}'")
    node[path[-1]] = value


def _listify(node: Any, where: str = "") -> Any:
    """Turn dicts keyed 1..n into lists."""
    if not isinstance(node, dict):
        return node
    if node and all(key.isdigit() for key in node):
        indices = sorted(int(key) for key in node)
        if indices != list(range(1, len(indices) + 1)):
            raise ConfigurationError(f"'{where}' indices must run 1..n, got {indices}")
        return [_listify(node[str(i)], f"{where}.{i}") for i in indices]
    return {key: _listify(value, f"{where}.{key}".lstrip(".")) for key, value in node.items()}


def parse_text(text: str) -> tuple[dict, dict[str, int]]:
    """Nested dict plus the line number of every key."""
    tree: dict = {}
    lines: dict[str, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigurationError(f"line {number}: expected 'key = value'")
        if not _KEY.match(key):
            raise ConfigurationError(f"line {number}: malformed key '{key}'")
        if not value.strip():
            raise ConfigurationError(f"line {number}: empty value for '{key}'")
        _insert(tree, key.split("."), parse_value(value), number)
        lines[key] = number
    return _listify(tree), lines


def _describe(error: dict, lines: dict[str, int]) -> str:
    parts = [str(p + 1) if isinstance(p, int) else str(p) for p in error["loc"]]
    key = ".".join(parts)
    message = str(error["msg"]).removeprefix("Value error, ")
    for candidate in (key, *(k for k in lines if k.startswith(key + "."))):
        if candidate in lines and key:
            return f"line {lines[candidate]}: {key}: {message}"
    return f"{key}: {message}" if key else message


def load_config_text(text: str) -> ExperimentConfig:
    tree, lines = parse_text(text)
    try:
        return ExperimentConfig.model_validate(tree)
    except ValidationError as e:
        details = "; ".join(_describe(err, lines) for err in e.errors())
        raise ConfigurationError(f"invalid config: {details}") from e


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigurationError(f"cannot read config {path}: {e}") from e
    return load_config_text(text)


def format_scalar(value: Any) -> str:
    if isinstance(value, Enum):
        value = value.value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "inf" if value == math.inf else repr(value)
    if isinstance(value, int):
        return str(value)
    text = str(value)
    if parse_value(text) != text or "#" in text or text != text.strip():
        return f'"{text}"'
    return text


def _flatten(prefix: str, value: Any, out: list[tuple[str, str]]) -> None:
    if value is None:
        return
    if isinstance(value, dict):
        for key, child in value.items():
            _flatten(f"{prefix}.{key}" if prefix else key, child, out)
        return
    if isinstance(value, (list, tuple)):
        if not value:
            return
        if all(isinstance(item, dict) for item in value):
            for i, item in enumerate(value, start=1):
                _flatten(f"{prefix}.{i}", item, out)
            return
        text = ", ".join(format_scalar(item) for item in value)
        out.append((prefix, text + ("," if len(value) == 1 else "")))
        return
    out.append((prefix, format_scalar(value)))


def serialize(config: ExperimentConfig) -> str:
    """Canonical text; parsing it gives back an equal config."""
    pairs: list[tuple[str, str]] = []
    _flatten("", config.model_dump(mode="python"), pairs)
    return "".join(f"{key} = {value}\n" for key, value in pairs)


def config_hash(config: ExperimentConfig) -> str:
    return hashlib.sha256(serialize(config).encode()).hexdigest()
