"""Binary GridFunction container with a JSON sidecar.

Layout (little endian): magic ``ANGF``, u16 version, u8 dtype code (1 float64,
2 complex128), u8 l, l x u64 axis lengths, l x f64 truncation radii, the axes
as f64 one after another, then the values in C order.
"""

from __future__ import annotations

import logging
import struct
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from anisonorm.exceptions import ConfigurationError, ContainerFormatError
from anisonorm.models.grid import GridFunction
from anisonorm.repositories.base import FileRepository
from anisonorm.schemas.container import GridSidecar
from anisonorm.schemas.family import OperatorFamily

logger = logging.getLogger(__name__)

MAGIC = b"ANGF"
VERSION = 1
_HEADER = struct.Struct("<4sHBB")
_DTYPES = {1: np.dtype("<f8"), 2: np.dtype("<c16")}
_CODES = {"float64": 1, "complex128": 2}


def encode(f: GridFunction) -> bytes:
    code = 2 if f.is_complex else 1
    parts = [
        _HEADER.pack(MAGIC, VERSION, code, f.l),
        struct.pack(f"<{f.l}Q", *(axis.size for axis in f.axes)),
        struct.pack(f"<{f.l}d", *f.truncation_radii),
    ]
    parts += [np.ascontiguousarray(axis, dtype="<f8").tobytes() for axis in f.axes]
    parts.append(np.ascontiguousarray(f.values, dtype=_DTYPES[code]).tobytes())
    return b"".join(parts)


def _take(data: bytes, offset: int, size: int, what: str) -> tuple[bytes, int]:
    if offset + size > len(data):
        raise ContainerFormatError(f"container truncated while reading {what}")
    return data[offset : offset + size], offset + size


def decode(data: bytes) -> GridFunction:
    chunk, offset = _take(data, 0, _HEADER.size, "header")
    magic, version, code, l = _HEADER.unpack(chunk)  # noqa: E741
    if magic != MAGIC:
        raise ContainerFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise ContainerFormatError(f"unsupported container version {version}")
    if code not in _DTYPES:
        raise ContainerFormatError(f"unknown dtype code {code}")
    if l == 0:
        raise ContainerFormatError("container declares zero axes")
    chunk, offset = _take(data, offset, 8 * l, "axis lengths")
    lengths = struct.unpack(f"<{l}Q", chunk)
    chunk, offset = _take(data, offset, 8 * l, "truncation radii")
    radii = struct.unpack(f"<{l}d", chunk)
    axes = []
    for j, n in enumerate(lengths):
        chunk, offset = _take(data, offset, 8 * n, f"axis {j + 1}")
        axes.append(np.frombuffer(chunk, dtype="<f8").astype(float))
    dtype = _DTYPES[code]
    count = int(np.prod(lengths))
    chunk, offset = _take(data, offset, dtype.itemsize * count, "values")
    if offset != len(data):
        raise ContainerFormatError(f"{len(data) - offset} trailing bytes after values")
    values = np.frombuffer(chunk, dtype=dtype).reshape(lengths)
    try:
        return GridFunction(tuple(axes), values, radii)
    except ConfigurationError as e:
        raise ContainerFormatError(f"invalid grid data: {e}") from e


def sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".json")


class GridContainerRepository(FileRepository):
    """Reads and writes ``.angf`` containers plus their sidecars."""

    suffix = ".angf"

    def save(
        self,
        name: str | Path,
        f: GridFunction,
        family: OperatorFamily | None = None,
        tolerance: float | None = None,
        source: str | None = None,
    ) -> Path:
        path = self.path(name)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(encode(f))
        sidecar = GridSidecar(
            dtype="complex128" if f.is_complex else "float64",
            lengths=tuple(axis.size for axis in f.axes),
            truncation_radii=f.truncation_radii,
            axis_order=tuple(f"x{j + 1}" for j in range(f.l)),
            tolerance=tolerance,
            family=family,
            source=source,
        )
        sidecar_path(path).write_text(sidecar.model_dump_json(indent=2) + "\n")
        logger.info("Wrote %s (%s)", path, "x".join(str(n) for n in sidecar.lengths))
        return path

    def load(self, name: str | Path) -> GridFunction:
        path = self.path(name)
        try:
            data = path.read_bytes()
        except OSError as e:
            raise ContainerFormatError(f"cannot read {path}: {e}") from e
        f = decode(data)
        meta = self.load_sidecar(path)
        if meta is not None:
            lengths = tuple(axis.size for axis in f.axes)
            if meta.lengths != lengths or _CODES[meta.dtype] != (2 if f.is_complex else 1):
                raise ContainerFormatError(f"sidecar of {path} does not match the container")
        return f

    def load_sidecar(self, name: str | Path) -> GridSidecar | None:
        path = sidecar_path(self.path(name))
        if not path.exists():
            return None
        try:
            return GridSidecar.model_validate_json(path.read_text())
        except ValidationError as e:
            raise ContainerFormatError(f"malformed sidecar {path}: {e}") from e
