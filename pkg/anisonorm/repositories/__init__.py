"""Flat-file persistence for grid functions and result tables."""

from anisonorm.repositories.base import FileRepository
from anisonorm.repositories.csv_tables import CsvTableRepository
from anisonorm.repositories.grid_container import GridContainerRepository

__all__ = [
    "CsvTableRepository",
    "FileRepository",
    "GridContainerRepository",
]
