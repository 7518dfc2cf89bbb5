"""
Statistical Check Base Types

Each check draws its own ensemble from a dedicated child stream of the
experiment seed and reduces it to a CheckResult.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, ClassVar

if TYPE_CHECKING:
    from hermburg.core.config import ExperimentConfig
    from hermburg.noise.grid import SeedSpec


@dataclass
class CheckResult:
    """Result of a single statistical check."""

    name: str
    passed: bool
    details: str
    metrics: dict[str, Any] = field(default_factory=dict)
    rows: list[dict[str, Any]] = field(default_factory=list)
    """Flat per-probe records for CSV export."""

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "name": self.name,
            "passed": self.passed,
            "details": self.details,
            "metrics": self.metrics,
            "rows": self.rows,
        }


class BaseCheck(ABC):
    """Base class for statistical checks."""

    name: ClassVar[str]
    stream: ClassVar[int]
    """Child stream of the experiment seed reserved for this check."""

    def __init__(
        self,
        config: ExperimentConfig,
        threads: int = 1,
        show_progress: bool = False,
    ):
        """
        Initialize the check.

        Args:
            config: Experiment configuration
            threads: Worker threads for ensemble generation
            show_progress: Whether to show progress bars
        """
        self.config = config
        self.threads = threads
        self.show_progress = show_progress

    @property
    def seed(self) -> SeedSpec:
        """Stream used by this check."""
        return self.config.seed.spawn(self.stream)

    @abstractmethod
    def run(self) -> CheckResult:
        """
        Perform the check.

        Returns:
            CheckResult with pass/fail, metrics and per-probe rows
        """
        ...
