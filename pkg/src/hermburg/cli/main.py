"""
hermburg CLI Main Entry Point

Provides the main Typer application and command routing.

Exit codes (stable across subcommands):
    0  success
    1  invalid parameters or unsupported setup
    2  malformed or unknown configuration, unknown check name, missing file
    3  solver did not converge (diagnostics are still written)
    4  statistical failure, or digest mismatch on report --check
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import TYPE_CHECKING, NoReturn

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel

from hermburg import __version__

if TYPE_CHECKING:
    from hermburg.core.config import ExperimentConfig, OutputFormat
    from hermburg.core.runner import ExperimentRunner, RunOutcome

app = typer.Typer(
    name="hermburg",
    help="Hermite-sheet driven stochastic Burgers: sampling, solving and statistical checks",
    add_completion=True,
    rich_markup_mode="rich",
)

console = Console()

CONFIG_OPTION = typer.Option(
    Path("hermburg.yaml"),
    "--config",
    "-c",
    help="Path to experiment file",
)
SEED_OPTION = typer.Option(None, "--seed", help="Override seed.master_seed")
STREAM_OPTION = typer.Option(None, "--stream", help="Override seed.stream_index")
OUT_OPTION = typer.Option(None, "--out", "-o", help="Output directory (default: output.path)")
THREADS_OPTION = typer.Option(
    None, "--threads", "-t", help="Worker threads (default: HB_THREADS or 1)"
)
FORMAT_OPTION = typer.Option(None, "--format", help="Field format: csv, bin, json")


def version_callback(value: bool) -> None:
    """Print version and exit."""
    if value:
        console.print(f"[bold blue]hermburg[/bold blue] version {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    version: bool | None = typer.Option(
        None,
        "--version",
        "-v",
        help="Show version and exit.",
        callback=version_callback,
        is_eager=True,
    ),
    verbose: bool = typer.Option(
        False,
        "--verbose",
        help="Log run milestones and numerical caveats.",
    ),
) -> None:
    """
    hermburg - stochastic Burgers equations driven by Hermite sheets

    Sample Hermite sheets, solve the mild equation on a periodic domain and
    verify covariance, isometry, self-similarity, regularity and moments.
    """
    if verbose:
        logging.basicConfig(
            level=logging.INFO,
            format="%(message)s",
            handlers=[RichHandler(console=console, show_path=False)],
            force=True,
        )
        logging.captureWarnings(True)


def _fail(error: Exception) -> NoReturn:
    """Print an error and exit with the code its type maps to."""
    from hermburg.checks.verifier import UnknownCheckError
    from hermburg.core.errors import (
        ConfigParseError,
        InfeasibleSizeError,
        ResourceBudgetError,
    )

    if isinstance(error, (ConfigParseError, UnknownCheckError, FileNotFoundError)):
        code = 2
    else:
        code = 1
    console.print(f"[red]Error:[/red] {error}")
    if isinstance(error, (InfeasibleSizeError, ResourceBudgetError)):
        console.print(
            "[yellow]Hint:[/yellow] reduce the grid, loosen sampler.truncation "
            "or switch sampler.kind to ncl."
        )
    raise typer.Exit(code)


def _load(
    config: Path,
    seed: int | None = None,
    stream: int | None = None,
    n_samples: int | None = None,
) -> ExperimentConfig:
    """Load the experiment file and apply command-line overrides."""
    from pydantic import ValidationError

    from hermburg.core.config import load_config
    from hermburg.core.errors import HermburgError, ParameterError
    from hermburg.noise.grid import SeedSpec

    try:
        cfg = load_config(config)
        updates: dict = {}
        if seed is not None or stream is not None:
            updates["seed"] = SeedSpec(
                master_seed=cfg.seed.master_seed if seed is None else seed,
                stream_index=cfg.seed.stream_index if stream is None else stream,
                path=cfg.seed.path,
            )
        if n_samples is not None:
            updates["verify"] = cfg.verify.model_validate(
                cfg.verify.model_dump() | {"n_samples": n_samples}
            )
        return cfg.model_copy(update=updates) if updates else cfg
    except ValidationError as e:
        _fail(ParameterError(str(e)))
    except (HermburgError, FileNotFoundError) as e:
        _fail(e)


def _runner(cfg: ExperimentConfig, threads: int | None) -> ExperimentRunner:
    from pydantic import ValidationError

    from hermburg.core.errors import ParameterError
    from hermburg.core.runner import ExperimentRunner

    try:
        return ExperimentRunner(cfg, console=console, threads=threads)
    except ValidationError as e:
        _fail(ParameterError(f"invalid HB_* setting: {e}"))


def _out_dir(cfg: ExperimentConfig, out: Path | None, command: str) -> Path:
    return out if out is not None else Path(cfg.output.path) / command


def _format(fmt: str | None) -> OutputFormat | None:
    from hermburg.core.config import OutputFormat

    if fmt is None:
        return None
    try:
        return OutputFormat(fmt)
    except ValueError:
        console.print(f"[red]Error:[/red] unknown format {fmt!r}; use csv, bin or json")
        raise typer.Exit(2)


def _done(outcome: RunOutcome, out: Path) -> NoReturn:
    console.print(
        f"[dim]{len(outcome.files)} file(s) and manifest written to {out}[/dim]"
    )
    raise typer.Exit(outcome.exit_code)


@app.command()
def init(
    path: Path = typer.Argument(
        Path("hermburg.yaml"),
        help="Path for the experiment file",
    ),
    force: bool = typer.Option(
        False,
        "--force",
        "-f",
        help="Overwrite existing experiment file",
    ),
) -> None:
    """
    Initialize a new hermburg experiment file.

    Creates hermburg.yaml with an admissible q = 1 model, a small sampling
    grid and a solver domain suited to the statistical checks.
    """
    from hermburg.core.config import create_default_config

    if path.exists() and not force:
        console.print(
            f"[yellow]Experiment file already exists:[/yellow] {path}\n"
            "Use --force to overwrite."
        )
        raise typer.Exit(1)

    header = (
        "# hermburg experiment file\n"
        "# All quantities are dimensionless model units.\n"
        "# hurst lists H_0 (time) first, then H_1..H_d (space).\n"
    )
    path.write_text(header + create_default_config().to_yaml(), encoding="utf-8")

    console.print(
        Panel(
            f"[green]✓ Created experiment file:[/green] {path}\n\n"
            "Next steps:\n"
            "1. Edit model, grid and solver settings\n"
            "2. Check admissibility: [bold]hermburg validate[/bold]\n"
            "3. Run checks: [bold]hermburg verify covariance isometry[/bold]",
            title="hermburg Initialized",
            border_style="green",
        )
    )


@app.command()
def validate(
    config: Path = CONFIG_OPTION,
) -> None:
    """
    Check the admissibility of the model and the noise coefficient.

    Prints the verdict with both sides of the convolution condition, then
    the same report as one JSON line.
    """
    from hermburg.reports.json_export import dumps
    from hermburg.reports.terminal import TerminalReporter

    cfg = _load(config)
    report, capital = _runner(cfg, 1).validate()
    TerminalReporter(console).print_validation(report, capital)
    data = report.to_dict()
    if capital is not None:
        data["capital_I"] = capital.to_dict()
    typer.echo(dumps(data, pretty=False))
    raise typer.Exit(0 if report.valid else 1)


@app.command()
def sample(
    config: Path = CONFIG_OPTION,
    seed: int | None = SEED_OPTION,
    stream: int | None = STREAM_OPTION,
    n_samples: int = typer.Option(1, "--n-samples", "-n", min=1, help="Sheets to draw"),
    out: Path | None = OUT_OPTION,
    threads: int | None = THREADS_OPTION,
    fmt: str | None = FORMAT_OPTION,
) -> None:
    """Draw Hermite sheets on the experiment grid and write them with a manifest."""
    from hermburg.core.errors import HermburgError

    cfg = _load(config, seed, stream)
    out_dir = _out_dir(cfg, out, "sample")
    try:
        outcome = _runner(cfg, threads).sample(out_dir, n_samples, _format(fmt))
    except HermburgError as e:
        _fail(e)
    _done(outcome, out_dir)


@app.command()
def solve(
    config: Path = CONFIG_OPTION,
    noise: Path | None = typer.Option(
        None,
        "--noise",
        help="HBF1 sheet on the solver lattice (default: draw from the seed)",
    ),
    seed: int | None = SEED_OPTION,
    stream: int | None = STREAM_OPTION,
    out: Path | None = OUT_OPTION,
    fmt: str | None = FORMAT_OPTION,
) -> None:
    """
    Solve the stochastic Burgers equation on the solver domain (d = 1).

    Exits 3 when the Picard iteration does not converge; the solution and
    its diagnostics are written either way.
    """
    from hermburg.core.errors import HermburgError
    from hermburg.noise.fieldio import FieldFormatError
    from hermburg.reports.terminal import TerminalReporter

    cfg = _load(config, seed, stream)
    out_dir = _out_dir(cfg, out, "solve")
    try:
        outcome = _runner(cfg, 1).solve(out_dir, noise, _format(fmt))
    except (HermburgError, FieldFormatError, FileNotFoundError) as e:
        _fail(e)
    TerminalReporter(console).print_solve(outcome.result, outcome.manifest.diagnostics)
    _done(outcome, out_dir)


@app.command()
def verify(
    checks: list[str] = typer.Argument(
        ...,
        help="Checks to run: covariance, isometry, scaling, holder, moments",
    ),
    config: Path = CONFIG_OPTION,
    seed: int | None = SEED_OPTION,
    stream: int | None = STREAM_OPTION,
    n_samples: int | None = typer.Option(
        None, "--n-samples", "-n", help="Override verify.n_samples"
    ),
    out: Path | None = OUT_OPTION,
    threads: int | None = THREADS_OPTION,
) -> None:
    """
    Run statistical checks; writes a JSON and a CSV report per check.

    Exits 4 when any check fails.
    """
    from hermburg.checks.verifier import UnknownCheckError
    from hermburg.core.errors import HermburgError
    from hermburg.reports.terminal import TerminalReporter

    cfg = _load(config, seed, stream, n_samples)
    out_dir = _out_dir(cfg, out, "verify")
    try:
        outcome = _runner(cfg, threads).verify(checks, out_dir)
    except (HermburgError, UnknownCheckError) as e:
        _fail(e)
    TerminalReporter(console).print_verification(outcome.result)
    _done(outcome, out_dir)


@app.command()
def report(
    path: Path = typer.Argument(
        ...,
        help="Report JSON file, manifest.json or an output directory",
    ),
    check: bool = typer.Option(
        False,
        "--check",
        help="Re-run the manifest's command and compare output digests",
    ),
    threads: int | None = THREADS_OPTION,
) -> None:
    """
    View a previous report or manifest.

    With --check the recorded command is replayed into a scratch directory
    and every output digest is compared; any mismatch exits 4.
    """
    import json
    import tempfile

    from hermburg.core.errors import HermburgError
    from hermburg.core.runner import replay
    from hermburg.reports.models import MANIFEST_NAME, RunManifest
    from hermburg.reports.terminal import TerminalReporter

    if not path.exists():
        console.print(f"[red]File not found:[/red] {path}")
        raise typer.Exit(2)

    reporter = TerminalReporter(console)
    is_manifest = path.is_dir() or path.name == MANIFEST_NAME
    try:
        if not is_manifest:
            reporter.print_report_data(json.loads(path.read_text(encoding="utf-8")))
            if check:
                console.print("[red]Error:[/red] --check needs a manifest")
                raise typer.Exit(2)
            return
        manifest = RunManifest.load(path)
    except (json.JSONDecodeError, KeyError, FileNotFoundError) as e:
        console.print(f"[red]Invalid report:[/red] {e}")
        raise typer.Exit(2)

    reporter.print_manifest(manifest)
    if not check:
        return

    with tempfile.TemporaryDirectory(prefix="hermburg-replay-") as scratch:
        console.print(f"[dim]Replaying {manifest.command} into {scratch}...[/dim]")
        try:
            mismatches = replay(manifest, scratch, console=console, threads=threads)
        except (HermburgError, ValueError) as e:
            _fail(e)
    reporter.print_digest_check(mismatches)
    raise typer.Exit(4 if mismatches else 0)


if __name__ == "__main__":
    app()
