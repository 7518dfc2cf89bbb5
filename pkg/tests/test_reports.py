"""
Tests for manifests, JSON and CSV export, and terminal rendering.
"""

import hashlib
import json

import numpy as np
from rich.console import Console

from hermburg.checks.base import CheckResult
from hermburg.checks.verifier import VerificationResult
from hermburg.noise.grid import SeedSpec
from hermburg.noise.sampling import sample_sheet
from hermburg.reports.csv_export import save_rows_csv
from hermburg.reports.json_export import dumps, save_field_json, save_json_report
from hermburg.reports.models import MANIFEST_NAME, RunManifest, file_digest
from hermburg.reports.terminal import TerminalReporter


def make_manifest() -> RunManifest:
    return RunManifest(
        command="sample",
        options={"n_samples": 1, "format": "bin"},
        config={"seed": {"master_seed": 3}},
        master_seed=3,
        stream_index=0,
    )


class TestRunManifest:
    """Tests for run manifests."""

    def test_save_and_load(self, temp_dir):
        """A saved manifest loads back with its outputs."""
        output = temp_dir / "sheet_0000.hbf"
        output.write_bytes(b"\x00\x01\x02")
        manifest = make_manifest()
        manifest.record_output(output, temp_dir)

        path = manifest.save(temp_dir)
        assert path.name == MANIFEST_NAME

        loaded = RunManifest.load(temp_dir)
        assert loaded.command == "sample"
        assert loaded.outputs == manifest.outputs
        assert loaded.options == {"n_samples": 1, "format": "bin"}
        assert RunManifest.load(path).master_seed == 3

    def test_digest_is_sha256(self, temp_dir):
        """Digests are plain sha256 of the file bytes."""
        path = temp_dir / "data.bin"
        path.write_bytes(b"hermburg" * 1000)

        assert file_digest(path) == hashlib.sha256(b"hermburg" * 1000).hexdigest()

    def test_to_dict_records_provenance(self):
        """Version and sign convention travel with every manifest."""
        data = make_manifest().to_dict()

        assert {"tool_version", "sign_convention", "outputs", "exit_code"} <= set(data)


class TestJsonExport:
    """Tests for deterministic JSON reports."""

    def test_dumps_sorted_and_numpy_aware(self):
        """Keys are sorted and numpy values become plain JSON."""
        text = dumps({"b": np.float64(1.5), "a": np.arange(3)}, pretty=False)

        assert text == '{"a": [0, 1, 2], "b": 1.5}'

    def test_same_data_same_bytes(self, temp_dir):
        """Writing the same report twice gives identical files."""
        data = {"z": 1, "a": {"y": [1.0, 2.0], "x": None}}
        first = save_json_report(data, temp_dir / "one.json")
        second = save_json_report(dict(reversed(data.items())), temp_dir / "two.json")

        assert first.read_bytes() == second.read_bytes()

    def test_field_json(self, params, unit_grid, temp_dir):
        """Field JSON carries the grid, the model and the values."""
        sheet = sample_sheet(params, unit_grid, SeedSpec())

        data = json.loads(save_field_json(sheet, temp_dir / "sheet.json").read_text())
        assert data["kind"] == "sheet"
        assert np.array_equal(np.array(data["values"]), sheet.values)
        assert data["params"]["q"] == 1


class TestCsvExport:
    """Tests for flat CSV tables."""

    def test_header_and_rows(self, temp_dir):
        """Columns follow first appearance; floats keep full precision."""
        rows = [{"p": 2.0, "z": 0.1}, {"p": 4.0, "z": 1 / 3, "note": "x"}]

        lines = save_rows_csv(rows, temp_dir / "t.csv").read_text().splitlines()
        assert lines[0] == "p,z,note"
        assert lines[1] == "2.0,0.1,"
        assert lines[2] == f"4.0,{1 / 3!r},x"

    def test_empty_table_has_header(self, temp_dir):
        """Even an empty table has a header row."""
        assert save_rows_csv([], temp_dir / "e.csv").read_text() == "empty\n"


class TestTerminalReporter:
    """Tests for rich terminal output."""

    def test_verification_table(self):
        """Passing and failing checks are labelled."""
        console = Console(record=True, width=120)
        result = VerificationResult(
            all_passed=False,
            checks=[
                CheckResult("covariance", True, "max |z| = 1.2"),
                CheckResult("scaling", False, "min p = 1e-9"),
            ],
        )

        TerminalReporter(console).print_verification(result)
        text = console.export_text()
        assert "PASS" in text
        assert "FAIL" in text
        assert "covariance" in text

    def test_digest_check(self):
        """An empty mismatch list reads as reproduced."""
        console = Console(record=True, width=120)

        TerminalReporter(console).print_digest_check({})
        assert "reproduced" in console.export_text()

    def test_manifest_summary(self):
        """The manifest panel names the command."""
        console = Console(record=True, width=120)

        TerminalReporter(console).print_manifest(make_manifest())
        assert "sample" in console.export_text()
