"""
Terminal Report Generator

Renders validation reports, solve diagnostics, check outcomes and run
manifests with rich formatting.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

from rich.console import Console
from rich.json import JSON
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

if TYPE_CHECKING:
    from hermburg.checks.verifier import VerificationResult
    from hermburg.kernels.params import ValidationReport
    from hermburg.reports.models import RunManifest
    from hermburg.solver.picard import SolveResult
    from hermburg.stochint.capital_i import CapitalIResult


def _status(passed: bool) -> Text:
    return Text("PASS", style="bold green") if passed else Text("FAIL", style="bold red")


class TerminalReporter:
    """
    Displays hermburg results in the terminal.

    Every printout is paired with a JSON file on disk; the terminal form is
    for people, the file for CI.
    """

    def __init__(self, console: Console | None = None):
        """
        Initialize the reporter.

        Args:
            console: Rich console (default: new console)
        """
        self.console = console or Console()

    def print_validation(
        self, report: ValidationReport, capital: CapitalIResult | None = None
    ) -> None:
        """Admissibility verdict, both sides of the convolution condition and I(t)."""
        lines = Text()
        lines.append("Parameters: ", style="bold")
        lines.append_text(_status(report.valid))
        lines.append(f"\n2H_0 + sum H_i = {report.lhs:.6g}")
        lines.append(f"\nd + 1 - 1/q    = {report.rhs:.6g}")
        for violation in report.violations:
            lines.append(f"\n  - {violation}", style="red")
        if capital is not None:
            style = "green" if capital.accepted else "yellow"
            lines.append(f"\nI(t_max) = {capital.value:.6g}", style=style)
            lines.append(
                f"  (panels {capital.panels}, relative change {capital.relative_change:.2g})"
            )
        self.console.print(
            Panel(
                lines,
                title="Model Validation",
                border_style="green" if report.valid else "red",
            )
        )

    def print_solve(
        self, result: SolveResult, diagnostics: dict[str, Any] | None = None
    ) -> None:
        """Convergence summary of one solve."""
        table = Table(title="Solve", show_header=False)
        table.add_column("Key", style="cyan")
        table.add_column("Value", justify="right")
        table.add_row("Scheme", result.scheme.value)
        table.add_row("Converged", _status(result.converged))
        table.add_row("Iterations", str(result.iterations))
        if result.iter_distances:
            table.add_row("Last distance", f"{result.iter_distances[-1]:.3e}")
        table.add_row("Max Courant", f"{result.max_courant:.3g}")
        table.add_row("Wall time", f"{result.wall_time:.2f}s")
        for key, value in (diagnostics or {}).items():
            if isinstance(value, float):
                table.add_row(key, f"{value:.3e}")
        self.console.print(table)
        for note in result.notes:
            self.console.print(f"[yellow]Note:[/yellow] {note}")

    def print_verification(self, result: VerificationResult) -> None:
        """One row per check, then a pass/fail panel."""
        table = Table(title="Statistical Checks", show_header=True)
        table.add_column("Check", style="cyan")
        table.add_column("Result", justify="center")
        table.add_column("Details")

        for check in result.checks:
            table.add_row(check.name, _status(check.passed), check.details)

        self.console.print(table)
        style = "green" if result.all_passed else "red"
        self.console.print(
            Panel(
                f"{result.passed_count}/{result.total_count} checks passed",
                border_style=style,
            )
        )

    def print_manifest(self, manifest: RunManifest) -> None:
        """Command, seed and output digests of a run."""
        header = Text()
        header.append(f"hermburg {manifest.tool_version}  ", style="bold blue")
        header.append(f"{manifest.command}  exit {manifest.exit_code}\n")
        header.append(f"seed {manifest.master_seed} / stream {manifest.stream_index}\n")
        header.append(f"sign convention: {manifest.sign_convention}")
        self.console.print(Panel(header, title="Run Manifest", border_style="blue"))

        table = Table(show_header=True)
        table.add_column("Output", style="cyan")
        table.add_column("sha256", style="dim")
        for name, digest in sorted(manifest.outputs.items()):
            table.add_row(name, digest)
        self.console.print(table)

    def print_digest_check(self, mismatches: dict[str, tuple[str, str | None]]) -> None:
        """Outcome of a manifest replay."""
        if not mismatches:
            self.console.print("[green]All output digests reproduced.[/green]")
            return
        table = Table(title="Digest Mismatches", show_header=True)
        table.add_column("Output", style="cyan")
        table.add_column("Recorded")
        table.add_column("Replayed", style="red")
        for name, (recorded, replayed) in sorted(mismatches.items()):
            table.add_row(name, recorded[:16], (replayed or "missing")[:16])
        self.console.print(table)

    def print_report_data(self, data: dict[str, Any]) -> None:
        """Render a JSON report file: check reports as tables, anything else as JSON."""
        if "checks" in data:
            table = Table(title="Statistical Checks", show_header=True)
            table.add_column("Check", style="cyan")
            table.add_column("Result", justify="center")
            table.add_column("Details")
            for check in data["checks"]:
                table.add_row(check["name"], _status(check["passed"]), check["details"])
            self.console.print(table)
        elif {"name", "passed", "details"} <= data.keys():
            self.console.print(
                Panel(
                    data["details"],
                    title=data["name"],
                    border_style="green" if data["passed"] else "red",
                )
            )
        else:
            self.console.print(JSON.from_data(data, sort_keys=True))
