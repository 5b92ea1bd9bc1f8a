"""Reporting charts for sweep result CSVs."""

from .aggregate import EmptyData, SchemaMismatch, aggregate, load_rows
from .render import render

__version__ = "0.1.0"
