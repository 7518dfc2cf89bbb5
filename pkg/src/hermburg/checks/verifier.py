"""
Check Verifier

Runs the requested statistical checks against one experiment
configuration and collects their results.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from hermburg.checks.base import BaseCheck, CheckResult
from hermburg.checks.statistical import (
    CovarianceCheck,
    HolderRegularityCheck,
    IsometryCheck,
    MomentsCheck,
    ScalingCheck,
)

if TYPE_CHECKING:
    from hermburg.core.config import ExperimentConfig

logger = logging.getLogger(__name__)


# Registry of check classes by name
CHECK_REGISTRY: dict[str, type[BaseCheck]] = {
    "covariance": CovarianceCheck,
    "isometry": IsometryCheck,
    "scaling": ScalingCheck,
    "holder": HolderRegularityCheck,
    "moments": MomentsCheck,
}


class UnknownCheckError(ValueError):
    """A requested check is not registered."""


@dataclass
class VerificationResult:
    """Outcome of one verify run, checks in the requested order."""

    all_passed: bool
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed_count(self) -> int:
        """Checks that passed."""
        return sum(1 for c in self.checks if c.passed)

    @property
    def failed_count(self) -> int:
        """Checks that failed."""
        return sum(1 for c in self.checks if not c.passed)

    @property
    def total_count(self) -> int:
        return len(self.checks)

    def to_dict(self) -> dict:
        return {
            "all_passed": self.all_passed,
            "passed_count": self.passed_count,
            "failed_count": self.failed_count,
            "checks": [c.to_dict() for c in self.checks],
        }


class Verifier:
    """
    Runs registered checks in the order requested.

    Example:
        >>> verifier = Verifier(config, ["covariance", "isometry"], threads=4)
        >>> result = verifier.verify()
        >>> if result.all_passed:
        ...     print(result.passed_count, "of", result.total_count)
    """

    def __init__(
        self,
        config: ExperimentConfig,
        names: list[str],
        threads: int = 1,
        show_progress: bool = False,
    ):
        """
        Initialize the verifier.

        Args:
            config: Experiment configuration
            names: Check names from CHECK_REGISTRY
            threads: Worker threads for ensemble generation
            show_progress: Draw a rich progress bar per ensemble

        Raises:
            UnknownCheckError: If a name is not registered
        """
        self.config = config
        self.checks = self._build_checks(names, threads, show_progress)

    def _build_checks(
        self, names: list[str], threads: int, show_progress: bool
    ) -> list[BaseCheck]:
        """Build check instances from names."""
        checks = []

        for name in names:
            check_cls = CHECK_REGISTRY.get(name)

            if check_cls is None:
                raise UnknownCheckError(
                    f"Unknown check: {name}. "
                    f"Available checks: {list(CHECK_REGISTRY.keys())}"
                )

            checks.append(check_cls(self.config, threads=threads, show_progress=show_progress))

        return checks

    def verify(self) -> VerificationResult:
        """Run every check and aggregate the outcome."""
        results = []

        for check in self.checks:
            logger.info("running %s check", check.name)
            result = check.run()
            status = "pass" if result.passed else "FAIL"
            logger.info("%s: %s (%s)", check.name, status, result.details)
            results.append(result)

        return VerificationResult(
            all_passed=all(r.passed for r in results),
            checks=results,
        )

    @property
    def check_names(self) -> list[str]:
        """Names of the checks, in run order."""
        return [c.name for c in self.checks]
