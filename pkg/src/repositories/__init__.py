"""
Repository package for experiment outputs.

This package contains the CSV repository and the column layouts it writes.
"""

from src.repositories.csv_repository import CsvRepository

__all__ = ["CsvRepository"]
