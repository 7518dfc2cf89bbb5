"""
Ensemble Runner

Runs independent ensemble members (one random substream each) with bounded
concurrency. Members write into an index-addressed result list, so every
later reduction sees the same order regardless of how many workers ran or
in which order they finished.
"""

from __future__ import annotations

import asyncio
import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from datetime import datetime
from typing import Generic, TypeVar

from rich.console import Console
from rich.progress import (
    BarColumn,
    Progress,
    SpinnerColumn,
    TaskProgressColumn,
    TextColumn,
    TimeRemainingColumn,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")

MAX_THREADS = 64


@dataclass
class EnsembleState:
    """Progress counters of one ensemble run."""

    started_at: datetime = field(default_factory=datetime.now)
    completed_at: datetime | None = None
    total_members: int = 0
    completed_members: int = 0

    @property
    def progress_percentage(self) -> float:
        """Calculate progress percentage."""
        if self.total_members == 0:
            return 0.0
        return (self.completed_members / self.total_members) * 100

    @property
    def duration_seconds(self) -> float:
        """Calculate duration in seconds."""
        end = self.completed_at or datetime.now()
        return (end - self.started_at).total_seconds()


class EnsembleRunner(Generic[T]):
    """
    Evaluates member(i) for i in range(size) with at most `threads` in flight.

    Example:
        >>> runner = EnsembleRunner(lambda i: draw(seed.spawn(i)), size=1000, threads=4)
        >>> samples = runner.run()
    """

    def __init__(
        self,
        member: Callable[[int], T],
        size: int,
        threads: int = 1,
        console: Console | None = None,
        show_progress: bool = False,
        description: str = "Running ensemble...",
    ):
        """
        Initialize the runner.

        Args:
            member: Function producing member i; must only depend on i
            size: Number of members
            threads: Maximum concurrent members
            console: Rich console for progress output
            show_progress: Whether to show a progress bar
            description: Progress bar label
        """
        if size < 0:
            raise ValueError("ensemble size must be >= 0")
        if not 1 <= threads <= MAX_THREADS:
            raise ValueError(f"threads must be in [1, {MAX_THREADS}], got {threads}")
        self.member = member
        self.size = size
        self.threads = threads
        self.console = console or Console()
        self.show_progress = show_progress
        self.description = description
        self.state = EnsembleState()

    def run(self) -> list[T]:
        """Run the ensemble and return members in index order."""
        if self.threads == 1 and not self.show_progress:
            self.state = EnsembleState(total_members=self.size)
            results = []
            for i in range(self.size):
                results.append(self.member(i))
                self.state.completed_members += 1
            self.state.completed_at = datetime.now()
            return results
        return asyncio.run(self.arun())

    async def arun(self) -> list[T]:
        """Async variant of run."""
        self.state = EnsembleState(total_members=self.size)
        results: list[T | None] = [None] * self.size
        semaphore = asyncio.Semaphore(self.threads)

        async def run_member(index: int, advance: Callable[[], None]) -> None:
            async with semaphore:
                results[index] = await asyncio.to_thread(self.member, index)
            self.state.completed_members += 1
            advance()

        if self.show_progress:
            with Progress(
                SpinnerColumn(),
                TextColumn("[progress.description]{task.description}"),
                BarColumn(),
                TaskProgressColumn(),
                TimeRemainingColumn(),
                console=self.console,
            ) as progress:
                task = progress.add_task(self.description, total=self.size)
                await asyncio.gather(
                    *(
                        run_member(i, lambda: progress.update(task, advance=1))
                        for i in range(self.size)
                    )
                )
        else:
            await asyncio.gather(*(run_member(i, lambda: None) for i in range(self.size)))

        self.state.completed_at = datetime.now()
        logger.debug(
            "ensemble of %d finished in %.2fs on %d threads",
            self.size,
            self.state.duration_seconds,
            self.threads,
        )
        return results  # type: ignore[return-value]


def run_ensemble(
    member: Callable[[int], T],
    size: int,
    threads: int = 1,
    show_progress: bool = False,
    console: Console | None = None,
    description: str = "Running ensemble...",
) -> list[T]:
    """Convenience wrapper around EnsembleRunner.run."""
    return EnsembleRunner(
        member,
        size,
        threads=threads,
        console=console,
        show_progress=show_progress,
        description=description,
    ).run()
