"""The `verify` command: exact identities between independent representations."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Callable

import numpy as np
from numpy.typing import NDArray

from plateau.config import Settings, VerifyConfig
from plateau.errors import IdentityViolation
from plateau.experiments.runner import CommandResult
from plateau.paths import (
    StepPath,
    idle_H,
    merge_grids,
    plateau_F,
    plateau_F_bruteforce,
    scale_path,
)
from plateau.randomgen import DistSpec, SeededStream, parse_dist_spec
from plateau.tandem import (
    TandemInputs,
    arrivals_Q2,
    arrivals_Q2_via_H,
    build_trajectory,
    idleness_closed_form_all,
    idleness_via_H_all,
    simulate_inputs,
    sojourn_functional,
    sojourn_lindley,
    sojourn_maxformula,
)

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]


def scaled_deviation(a: FloatArray, b: FloatArray) -> float:
    """max |a - b| / max(1, |b|); 0 for empty arrays."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))


def midpoint_grid(*paths: StepPath, min_gap: float = 1e-9) -> FloatArray:
    """
    Points strictly inside the intervals of the merged grid, plus one past the end.

    Breakpoints closer than `min_gap` (relative) are merged first so that two copies of the
    same breakpoint computed in different orders count as one.
    """

    grid = merge_grids(*paths)
    if grid.size == 0:
        return np.array([0.0, 1.0])
    keep = np.concatenate(([True], np.diff(grid) > min_gap * np.maximum(1.0, grid[1:])))
    grid = grid[keep]
    knots = np.concatenate(([0.0], grid))
    mids = 0.5 * (knots[1:] + knots[:-1])
    return np.concatenate((mids, [grid[-1] + 1.0]))


class Suite:
    """Verification suites sharing one instance generator; `corrupt` flips one representation."""

    def __init__(self, cfg: VerifyConfig, arrival: DistSpec, service: DistSpec, seed: int) -> None:
        self.cfg = cfg
        self.arrival = arrival
        self.service = service
        self.stream = SeededStream(seed).child("verify")

    def _sign(self, name: str) -> float:
        return -1.0 if self.cfg.corrupt == name else 1.0

    def instances(self) -> list[TandemInputs]:
        return [
            simulate_inputs(
                self.arrival, self.service, self.cfg.jobs, self.stream.child(f"instance-{i}")
            )
            for i in range(self.cfg.instances)
        ]

    def three_way_sojourn(self, instances: list[TandemInputs]) -> float:
        sign = self._sign("three_way_sojourn")
        worst = 0.0
        for inputs in instances:
            lindley = sign * sojourn_lindley(inputs)
            event = build_trajectory(inputs).M
            for other in (sojourn_maxformula(inputs), sojourn_functional(inputs), event):
                worst = max(worst, scaled_deviation(lindley, other))
        return worst

    def idleness_identities(self, instances: list[TandemInputs]) -> float:
        sign = self._sign("idleness_identities")
        worst = 0.0
        for inputs in instances:
            closed = sign * idleness_closed_form_all(inputs)
            for other in (idleness_via_H_all(inputs), build_trajectory(inputs).I):
                worst = max(worst, scaled_deviation(closed, other))
        return worst

    def transfer_count_forms(self, instances: list[TandemInputs]) -> float:
        sign = self._sign("transfer_count_forms")
        worst = 0.0
        for i, inputs in enumerate(instances):
            traj = build_trajectory(inputs)
            end = float(traj.D[-1]) * 1.05 if traj.n else 1.0
            generator = self.stream.child(f"queries-{i}").generator()
            queries = np.sort(generator.uniform(0.0, end, size=self.cfg.queries))
            direct = sign * arrivals_Q2(traj, queries)
            corollary = arrivals_Q2_via_H(traj, queries)
            worst = max(worst, float(np.max(np.abs(direct - corollary))))
        return worst

    def hscale_identity(self, _: list[TandemInputs]) -> float:
        """a^{-1} H(x, y, c)(n t) = H(x^n, y^n, c / n)(t) with x^n(t) = x(n t) / a."""
        sign = self._sign("hscale_identity")
        generator = self.stream.child("hscale").generator()
        worst = 0.0
        for _ in range(self.cfg.hscale_tuples):
            x = _random_path(generator)
            y = _random_path(generator)
            c = float(generator.uniform(0.0, 2.0))
            a = float(generator.uniform(0.1, 10.0))
            n = float(generator.uniform(0.1, 10.0))
            lhs = scale_path(idle_H(x, y, c), a, n)
            rhs = idle_H(scale_path(x, a, n), scale_path(y, a, n), c / n)
            grid = midpoint_grid(lhs, rhs)
            worst = max(worst, scaled_deviation(sign * lhs.evaluate(grid), rhs.evaluate(grid)))
        return worst

    def plateau_counterexample(self, _: list[TandemInputs]) -> float:
        """F(1[1,inf) + 1[2,inf), 1[1,inf), 0) = 1[1,2)."""
        sign = self._sign("plateau_counterexample")
        x = StepPath.indicator(1.0) + StepPath.indicator(2.0)
        y = StepPath.indicator(1.0)
        expected = StepPath.from_points([1.0, 2.0], [1.0, 0.0])
        got = plateau_F(x, y, 0.0)
        brute = plateau_F_bruteforce(x, y, 0.0)
        grid = np.concatenate(([0.0], merge_grids(got, brute, expected), [3.0]))
        want = expected.evaluate(grid)
        return max(
            scaled_deviation(sign * got.evaluate(grid), want),
            scaled_deviation(brute.evaluate(grid), want),
        )


def _random_path(generator: np.random.Generator, size: int = 20) -> StepPath:
    times = generator.uniform(0.0, 10.0, size=size)
    values = generator.normal(0.0, 3.0, size=size)
    return StepPath.from_points(times, values, float(generator.normal(0.0, 1.0)))


def run_suites(settings: Settings) -> dict[str, Any]:
    cfg = settings.verify
    suite = Suite(
        cfg,
        parse_dist_spec(settings.simulate.arrival),
        parse_dist_spec(settings.simulate.service),
        settings.seed,
    )
    needs_instances = {"three_way_sojourn", "idleness_identities", "transfer_count_forms"}
    instances = suite.instances() if needs_instances & set(cfg.suites) else []
    checks: dict[str, Callable[[list[TandemInputs]], float]] = {
        "three_way_sojourn": suite.three_way_sojourn,
        "idleness_identities": suite.idleness_identities,
        "transfer_count_forms": suite.transfer_count_forms,
        "hscale_identity": suite.hscale_identity,
        "plateau_counterexample": suite.plateau_counterexample,
    }
    results: dict[str, Any] = {}
    for name in cfg.suites:
        deviation = checks[name](instances)
        results[name] = {"max_deviation": deviation, "passed": deviation <= cfg.tol}
        logger.info("Identity suite", extra={"suite": name, "max_deviation": deviation})
    return results


def run_verify(settings: Settings, run_dir: Path) -> CommandResult:
    results = run_suites(settings)
    failing = [name for name, entry in results.items() if not entry["passed"]]
    report = {
        "tolerance": settings.verify.tol,
        "suites": results,
        "passed": not failing,
        "failing": failing,
    }
    return CommandResult(report, IdentityViolation(failing) if failing else None)

