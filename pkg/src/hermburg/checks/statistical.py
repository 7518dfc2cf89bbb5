"""
Statistical Checks

covariance: empirical sheet covariances at probe pairs against the product formula
isometry:   second moments of stochastic integrals against H norms
scaling:    matched-point KS test of sheet self-similarity
holder:     Hölder exponents of solutions against the guaranteed regularity
moments:    growth of sup-moments of solutions across horizons
"""

from __future__ import annotations

import itertools
import logging

import numpy as np
from scipy.stats import norm

from hermburg.analysis.holder import estimate_holder, holder_bound_check
from hermburg.analysis.moments import empirical_moments, moment_growth_check
from hermburg.analysis.scaling import probe_indices, sheet_scaling_test
from hermburg.checks.base import BaseCheck, CheckResult
from hermburg.core.errors import UnsupportedDimensionError
from hermburg.core.jackknife import jackknife_mean_se
from hermburg.kernels.covariance import sheet_covariance
from hermburg.noise.grid import FieldSample, GridSpec
from hermburg.noise.sampling import sample_sheet_ensemble, stack_values
from hermburg.solver.config import SolverConfig
from hermburg.solver.picard import solve_ensemble
from hermburg.stochint.integral import isometry_report, z_score
from hermburg.stochint.step import StepFunction

logger = logging.getLogger(__name__)

FAMILY_LEVEL = 0.0027
"""Two-sided level of a 3 sigma test, shared by all probe pairs."""

ISOMETRY_Z_LIMIT = 3.0


def sidak_threshold(n_tests: int, level: float = FAMILY_LEVEL) -> float:
    """|z| threshold so that n independent two-sided tests have family level `level`."""
    per_test = 1.0 - (1.0 - level) ** (1.0 / n_tests)
    return float(norm.isf(per_test / 2.0))


class _SheetCheck(BaseCheck):
    def sheets(self) -> list[FieldSample]:
        cfg = self.config
        return sample_sheet_ensemble(
            cfg.model,
            cfg.grid,
            self.seed,
            cfg.verify.n_samples,
            sampler=cfg.sampler.kind,
            trunc=cfg.sampler.truncation,
            m=cfg.sampler.ncl_m,
            threads=self.threads,
            show_progress=self.show_progress,
        )


class CovarianceCheck(_SheetCheck):
    """
    Compare E[Z(a) Z(b)] with the product covariance at every probe pair.

    Example config:
        verify:
          n_samples: 10000
    """

    name = "covariance"
    stream = 0

    def run(self) -> CheckResult:
        """Family-wise 3 sigma test over all distinct probe pairs."""
        cfg = self.config
        values = stack_values(self.sheets())
        probes = probe_indices(values.shape[1:], (1,) * (cfg.grid.d + 1))
        steps = np.array(cfg.grid.axis_steps)
        pairs = list(itertools.combinations_with_replacement(range(len(probes)), 2))
        threshold = sidak_threshold(len(pairs))

        rows = []
        worst = 0.0
        for i, j in pairs:
            a, b = probes[i], probes[j]
            products = values[(slice(None), *a)] * values[(slice(None), *b)]
            estimate = float(products.mean())
            se = float(jackknife_mean_se(products))
            point_a, point_b = np.array(a) * steps, np.array(b) * steps
            target = float(sheet_covariance(point_a, point_b, cfg.model.hurst))
            z = z_score(estimate, target, se)
            worst = max(worst, abs(z))
            rows.append(
                {
                    "point_a": ";".join(f"{c:.6g}" for c in point_a),
                    "point_b": ";".join(f"{c:.6g}" for c in point_b),
                    "estimate": estimate,
                    "target": target,
                    "se": se,
                    "z": z,
                }
            )

        passed = worst < threshold
        return CheckResult(
            name=self.name,
            passed=passed,
            details=f"max |z| = {worst:.3f} over {len(pairs)} pairs (threshold {threshold:.3f})",
            metrics={"max_abs_z": worst, "threshold": threshold, "pairs": len(pairs)},
            rows=rows,
        )


def isometry_battery(grid: GridSpec) -> dict[str, StepFunction]:
    """Five fixed integrands on grid."""
    counts = grid.axis_counts
    mids = np.meshgrid(
        *[(np.arange(n) + 0.5) * s for n, s in zip(counts, grid.axis_steps)], indexing="ij"
    )
    full = np.ones(counts)
    early = np.zeros(counts)
    early[: max(1, counts[0] // 2)] = 1.0
    corner = np.zeros(counts)
    corner[tuple(slice(n - max(1, n // 4), n) for n in counts)] = 1.0
    alternating = np.ones(counts) * ((-1.0) ** np.arange(counts[0])).reshape(
        (-1,) + (1,) * grid.d
    )
    smooth = np.cos(np.pi * mids[0] / grid.t_max)
    for axis in range(1, grid.d + 1):
        smooth = smooth * (1.0 + mids[axis] / grid.L)
    return {
        "full-box": StepFunction(grid, full),
        "early-half": StepFunction(grid, early),
        "far-corner": StepFunction(grid, corner),
        "alternating": StepFunction(grid, alternating),
        "smooth": StepFunction(grid, smooth),
    }


class IsometryCheck(_SheetCheck):
    """Second moment of int phi dZ against <phi, phi>_H for a battery of phi."""

    name = "isometry"
    stream = 1

    def run(self) -> CheckResult:
        """Every |z| below 3 on one shared ensemble."""
        cfg = self.config
        sheets = self.sheets()
        rows = []
        for label, phi in isometry_battery(cfg.grid).items():
            report = isometry_report(phi, cfg.model, len(sheets), self.seed, sheets=sheets)
            rows.append({"integrand": label, **report.to_dict()})
        worst = max(abs(r["z_score"]) for r in rows)
        passed = worst < ISOMETRY_Z_LIMIT
        return CheckResult(
            name=self.name,
            passed=passed,
            details=f"max |z| = {worst:.3f} over {len(rows)} integrands",
            metrics={"max_abs_z": worst, "n_samples": len(sheets)},
            rows=rows,
        )


class ScalingCheck(BaseCheck):
    """
    KS test of Z(lambda t, lambda x) against prod lambda^H Z(t, x).

    Example config:
        verify:
          lam: [4.0, 1.0]
          scaling_exponents: [0.5, 0.7]   # negative control
    """

    name = "scaling"
    stream = 2

    def run(self) -> CheckResult:
        """Minimum probe p-value against alpha / number of probes."""
        cfg = self.config
        report = sheet_scaling_test(
            cfg.model,
            cfg.grid,
            cfg.verify.lam,
            cfg.verify.n_samples,
            self.seed,
            exponents=cfg.verify.scaling_exponents,
            sampler=cfg.sampler.kind,
            alpha=cfg.verify.alpha,
            trunc=cfg.sampler.truncation,
            m=cfg.sampler.ncl_m,
            threads=self.threads,
        )
        return CheckResult(
            name=self.name,
            passed=report.passed,
            details=(
                f"min p = {report.min_p_value:.4g} (threshold {report.threshold:.4g}), "
                f"factor {report.factor:.4g}"
            ),
            metrics=report.to_dict(),
            rows=report.rows(),
        )


class _SolutionCheck(BaseCheck):
    def solutions(self, solver: SolverConfig, stream: int = 0) -> list[FieldSample]:
        cfg = self.config
        if cfg.model.d != 1:
            raise UnsupportedDimensionError("solution checks need d = 1")
        u0 = cfg.initial_condition.profile(solver.domain)
        results = solve_ensemble(
            cfg.model,
            cfg.sigma,
            u0,
            solver,
            self.seed.spawn(stream),
            cfg.verify.n_samples,
            sampler=cfg.sampler.kind,
            trunc=cfg.sampler.truncation,
            m=cfg.sampler.ncl_m,
            threads=self.threads,
            show_progress=self.show_progress,
        )
        failed = sum(not r.converged for r in results)
        if failed:
            logger.warning("%d of %d solves did not converge", failed, len(results))
        return [r.field for r in results]


class HolderRegularityCheck(_SolutionCheck):
    """Hölder exponents in time and space of the solution ensemble."""

    name = "holder"
    stream = 3

    def run(self) -> CheckResult:
        """exponent >= bound - 2 SE in every direction."""
        cfg = self.config
        fields = self.solutions(cfg.solver)
        rows = []
        for direction in ("time", "space-1"):
            fit = estimate_holder(fields, direction, cfg.verify.holder_p, cfg.verify.holder_lags)
            check = holder_bound_check(fit, cfg.model)
            rows.append({**check.to_dict(), "r_squared": fit.r_squared})
        passed = all(r["passed"] for r in rows)
        summary = ", ".join(
            f"{r['direction']}: {r['exponent']:.3f} vs bound {r['bound']:.3f}" for r in rows
        )
        return CheckResult(
            name=self.name,
            passed=passed,
            details=summary,
            metrics={"fits": rows},
            rows=rows,
        )


class MomentsCheck(_SolutionCheck):
    """Sup-moments across horizons against an exponential envelope."""

    name = "moments"
    stream = 4

    def run(self) -> CheckResult:
        """No super-exponential curvature for any moment order."""
        cfg = self.config
        domain = cfg.solver.domain
        stats = []
        for k, horizon in enumerate(sorted(cfg.verify.horizons)):
            steps = max(1, round(domain.n_t * horizon / domain.t_max))
            solver = cfg.solver.model_copy(
                update={"domain": domain.model_copy(update={"t_max": horizon, "n_t": steps})}
            )
            stats.append(empirical_moments(self.solutions(solver, k), cfg.verify.moment_orders))

        reports = [moment_growth_check(stats, p) for p in cfg.verify.moment_orders]
        rows = [
            {
                "p": r.p,
                "horizon": t,
                "sup_moment": v,
                "se": se,
                "growth_rate": r.growth_rate,
                "super_exponential": r.super_exponential,
            }
            for r in reports
            for t, v, se in zip(r.horizons, r.sup_moments, r.standard_errors)
        ]
        passed = all(r.passed for r in reports)
        return CheckResult(
            name=self.name,
            passed=passed,
            details=", ".join(
                f"p={r.p:g}: rate {r.growth_rate:.3g}, curvature {r.curvature:.3g}"
                for r in reports
            ),
            metrics={
                "reports": [r.to_dict() for r in reports],
                "x_norm": {str(p): stats[-1].x_norm(p) for p in cfg.verify.moment_orders},
            },
            rows=rows,
        )
