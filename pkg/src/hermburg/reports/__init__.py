"""
Reports

Run manifests, deterministic JSON reports, flat CSV tables and terminal
rendering.
"""

from hermburg.reports.csv_export import save_rows_csv
from hermburg.reports.json_export import dumps, save_field_json, save_json_report
from hermburg.reports.models import MANIFEST_NAME, RunManifest, file_digest
from hermburg.reports.terminal import TerminalReporter

__all__ = [
    "RunManifest",
    "MANIFEST_NAME",
    "file_digest",
    "dumps",
    "save_json_report",
    "save_field_json",
    "save_rows_csv",
    "TerminalReporter",
]
