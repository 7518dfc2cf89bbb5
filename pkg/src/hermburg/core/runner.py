"""
hermburg Experiment Runner

High-level interface behind the CLI. Binds one experiment file to the
samplers, the solver and the checks, writes every output next to a run
manifest, and replays a manifest to confirm its digests.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import datetime
from enum import IntEnum
from pathlib import Path
from typing import Any

import numpy as np
from rich.console import Console

from hermburg.checks.verifier import VerificationResult, Verifier
from hermburg.core.config import ExperimentConfig, OutputFormat, RuntimeSettings, load_config
from hermburg.core.errors import GridMismatchError
from hermburg.kernels.params import ValidationReport, require_valid, validate_params
from hermburg.kernels.sigma import validate_model
from hermburg.noise.fieldio import read_field, write_field, write_field_csv
from hermburg.noise.grid import FieldKind, FieldSample
from hermburg.noise.sampling import sample_sheet, sample_sheet_ensemble
from hermburg.reports.csv_export import save_rows_csv
from hermburg.reports.json_export import save_field_json, save_json_report
from hermburg.reports.models import RunManifest
from hermburg.solver.cole_hopf import cole_hopf_exact
from hermburg.solver.picard import SolveResult, solve
from hermburg.stochint.capital_i import CapitalIResult, capital_I

logger = logging.getLogger(__name__)

FIELD_SUFFIX = {OutputFormat.BIN: ".hbf", OutputFormat.CSV: ".csv", OutputFormat.JSON: ".json"}


class ExitCode(IntEnum):
    """Process exit status shared by every subcommand."""

    OK = 0
    INVALID_PARAMETERS = 1
    PARSE_ERROR = 2
    NOT_CONVERGED = 3
    STATISTICAL_FAILURE = 4


@dataclass
class RunOutcome:
    """Manifest of a finished command plus the in-memory result."""

    manifest: RunManifest
    result: Any = None
    files: list[Path] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        """Exit status recorded in the manifest."""
        return self.manifest.exit_code


def write_sample(sample: FieldSample, path: Path, fmt: OutputFormat) -> Path:
    """Write a field in the requested format; path carries no suffix yet."""
    target = path.with_suffix(FIELD_SUFFIX[fmt])
    if fmt == OutputFormat.CSV:
        return write_field_csv(sample, target)
    if fmt == OutputFormat.JSON:
        return save_field_json(sample, target)
    return write_field(sample, target)


class ExperimentRunner:
    """
    Runs the commands of one experiment.

    Example:
        >>> runner = ExperimentRunner("hermburg.yaml", threads=4)
        >>> outcome = runner.sample("results/sheets", n_samples=10)
        >>> outcome.exit_code
        0
    """

    def __init__(
        self,
        config: ExperimentConfig | str | Path,
        console: Console | None = None,
        threads: int | None = None,
        show_progress: bool = True,
    ):
        """
        Initialize the runner.

        Args:
            config: Configuration object or path to config file
            console: Rich console for output
            threads: Worker threads; HB_THREADS when omitted
            show_progress: Whether to show progress bars
        """
        if isinstance(config, (str, Path)):
            self.config = load_config(config)
        else:
            self.config = config

        self.console = console or Console()
        self.threads = threads if threads is not None else RuntimeSettings().threads
        self.show_progress = show_progress

    def _manifest(self, command: str, options: dict[str, Any]) -> RunManifest:
        return RunManifest(
            command=command,
            options=options,
            config=self.config.model_dump(mode="json"),
            master_seed=self.config.seed.master_seed,
            stream_index=self.config.seed.stream_index,
        )

    def _finish(
        self, manifest: RunManifest, out: Path, files: list[Path], result: Any
    ) -> RunOutcome:
        for path in files:
            manifest.record_output(path, out)
        manifest.completed_at = datetime.now()
        manifest.save(out)
        logger.info("%s finished with exit code %d", manifest.command, manifest.exit_code)
        return RunOutcome(manifest=manifest, result=result, files=files)

    def validate(self) -> tuple[ValidationReport, CapitalIResult | None]:
        """
        Admissibility of the model and the noise coefficient.

        I(t) at the solver horizon is evaluated only for admissible models;
        it diverges otherwise.
        """
        report = validate_model(self.config.model, self.config.sigma)
        capital = None
        if validate_params(self.config.model).valid:
            horizon = self.config.solver.domain.t_max
            capital = capital_I(horizon, self.config.model, self.config.quadrature)
        return report, capital

    def sample(
        self,
        out: str | Path,
        n_samples: int = 1,
        fmt: OutputFormat | None = None,
    ) -> RunOutcome:
        """
        Draw n sheets on the experiment grid, member i from seed.spawn(i).

        Raises:
            ParameterError: inadmissible model
        """
        cfg = self.config
        fmt = fmt or cfg.output.format
        out = Path(out)
        require_valid(cfg.model)
        manifest = self._manifest("sample", {"n_samples": n_samples, "format": fmt.value})

        sheets = sample_sheet_ensemble(
            cfg.model,
            cfg.grid,
            cfg.seed,
            n_samples,
            sampler=cfg.sampler.kind,
            trunc=cfg.sampler.truncation,
            m=cfg.sampler.ncl_m,
            threads=self.threads,
            show_progress=self.show_progress,
        )
        files = [write_sample(s, out / f"sheet_{i:04d}", fmt) for i, s in enumerate(sheets)]
        manifest.diagnostics = {
            "n_samples": len(sheets),
            "shape": list(cfg.grid.extent(FieldKind.SHEET)),
        }
        return self._finish(manifest, out, files, sheets)

    def _driving_sheet(self, noise_path: Path | None) -> FieldSample | None:
        cfg = self.config
        grid = cfg.solver.domain.grid()
        if noise_path is not None:
            sheet = read_field(noise_path, seed=cfg.seed, nu=cfg.model.nu)
            if sheet.kind != FieldKind.SHEET:
                raise GridMismatchError(
                    f"{noise_path} holds a {sheet.kind.value} field, not a sheet"
                )
            grid.require_same(sheet.grid)
            return sheet
        if cfg.sigma.is_zero:
            return None
        return sample_sheet(
            cfg.model,
            grid,
            cfg.seed,
            cfg.sampler.kind,
            cfg.sampler.truncation,
            cfg.sampler.ncl_m,
        )

    def solve(
        self,
        out: str | Path,
        noise_path: str | Path | None = None,
        fmt: OutputFormat | None = None,
    ) -> RunOutcome:
        """
        Solve on the solver domain driven by a stored or freshly drawn sheet.

        Without noise the final profile is also compared against the exact
        Cole-Hopf solution. Non-convergence is not an error: the diagnostics
        are written and the exit code is NOT_CONVERGED.
        """
        cfg = self.config
        fmt = fmt or cfg.output.format
        out = Path(out)
        noise = Path(noise_path).resolve() if noise_path is not None else None
        manifest = self._manifest(
            "solve", {"format": fmt.value, "noise_path": str(noise) if noise else None}
        )

        u0 = cfg.solver_u0()
        sheet = self._driving_sheet(noise)
        result: SolveResult = solve(cfg.model, cfg.sigma, u0, sheet, cfg.solver)
        report = result.to_dict()
        if cfg.sigma.is_zero:
            domain = cfg.solver.domain
            exact = cole_hopf_exact(u0, domain.t_max, cfg.model.nu, domain.L)
            error = np.max(np.abs(result.field.values[-1] - exact))
            report["cole_hopf_max_error"] = float(error)

        files = [
            write_sample(result.field, out / "solution", fmt),
            save_json_report(report, out / "solve_report.json"),
        ]
        manifest.diagnostics = {k: v for k, v in report.items() if k != "config"}
        manifest.exit_code = ExitCode.OK if result.converged else ExitCode.NOT_CONVERGED
        if not result.converged:
            logger.warning("solve did not converge after %d iterations", result.iterations)
        return self._finish(manifest, out, files, result)

    def verify(self, names: list[str], out: str | Path) -> RunOutcome:
        """
        Run the named checks; one JSON and one CSV report per check.

        Raises:
            UnknownCheckError: a name is not registered (before any work)
        """
        out = Path(out)
        verifier = Verifier(
            self.config, names, threads=self.threads, show_progress=self.show_progress
        )
        manifest = self._manifest("verify", {"checks": list(names)})

        result: VerificationResult = verifier.verify()
        files: list[Path] = []
        for check in result.checks:
            files.append(save_json_report(check.to_dict(), out / f"{check.name}_report.json"))
            files.append(save_rows_csv(check.rows, out / f"{check.name}.csv"))
        files.append(save_json_report(result.to_dict(), out / "verify_summary.json"))

        manifest.diagnostics = {c.name: c.passed for c in result.checks}
        failed = ExitCode.STATISTICAL_FAILURE
        manifest.exit_code = ExitCode.OK if result.all_passed else failed
        return self._finish(manifest, out, files, result)

    def run_command(
        self, command: str, options: dict[str, Any], out: str | Path
    ) -> RunOutcome:
        """Dispatch a recorded command with its recorded options."""
        if command == "sample":
            fmt = OutputFormat(options["format"])
            return self.sample(out, options.get("n_samples", 1), fmt)
        if command == "solve":
            fmt = OutputFormat(options["format"])
            return self.solve(out, options.get("noise_path"), fmt)
        if command == "verify":
            return self.verify(list(options["checks"]), out)
        raise ValueError(f"cannot replay command {command!r}")


def replay(
    manifest: RunManifest,
    scratch: str | Path,
    console: Console | None = None,
    threads: int | None = None,
) -> dict[str, tuple[str, str | None]]:
    """
    Re-run a manifest's command into scratch and compare output digests.

    Returns:
        Mismatching outputs as name -> (recorded, replayed); empty on success
    """
    config = ExperimentConfig.model_validate(manifest.config)
    runner = ExperimentRunner(config, console=console, threads=threads, show_progress=False)
    outcome = runner.run_command(manifest.command, manifest.options, scratch)
    replayed = outcome.manifest.outputs
    return {
        name: (digest, replayed.get(name))
        for name, digest in manifest.outputs.items()
        if replayed.get(name) != digest
    }
