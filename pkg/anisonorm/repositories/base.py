"""Base repository over a flat output directory."""

from __future__ import annotations

from pathlib import Path


class FileRepository:
    """Resolves names inside one directory; writes are single-owner."""

    suffix = ""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def path(self, name: str | Path) -> Path:
        name = Path(name)
        if name.is_absolute():
            return name
        if self.suffix and not name.suffix:
            name = name.with_suffix(self.suffix)
        return self.root / name

    def ensure(self) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        return self.root

    def exists(self, name: str | Path) -> bool:
        return self.path(name).exists()
