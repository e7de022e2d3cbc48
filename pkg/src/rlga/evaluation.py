"""Cost, objective, fitness and efficiency of a turbine layout.

The objective is cost per unit power, so lower is better; fitness is
``1 / (f_obj - f_ideal)`` and higher is better.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .layouts import CandidateLayout
from .wake import DEFAULT_TURBINE, POWER_COEFF, TurbineSpec, wake_weights, wind_frame_offsets
from .wind import WindScenario, expected_power

COST_DECAY = 0.00174
FITNESS_FLOOR = 1e-12


class FitnessClampWarning(RuntimeWarning):
    """Objective at or below the ideal bound; points at an evaluation bug."""


def cost(n_turbines):
    """Annual cost in single-turbine units, with up to 1/3 saving per turbine for large farms."""
    n = np.asarray(n_turbines, dtype=float)
    if np.any(n < 0):
        raise ValueError("turbine count must be non-negative")
    out = n * (2.0 / 3.0 + np.exp(-COST_DECAY * n**2) / 3.0)
    return float(out) if out.ndim == 0 else out


def objective(power: float, n_turbines: int) -> float:
    """Cost per kW."""
    if power <= 0:
        raise ValueError("objective is undefined for non-positive power")
    return cost(n_turbines) / power


def ideal_objective(scenario: WindScenario) -> float:
    """Limit of the objective for an infinite, wake-free farm."""
    return (2.0 / 3.0) / scenario.free_stream_power()


def fitness(f_obj, f_ideal: float):
    """``1 / (f_obj - f_ideal)``.

    A non-positive gap cannot come from a real layout; it is clamped to
    ``1e-12`` and reported with :class:`FitnessClampWarning` instead of
    raising, so one bad individual does not kill a run.
    """
    gap = np.asarray(f_obj, dtype=float) - f_ideal
    bad = gap <= 0
    if np.any(bad):
        warnings.warn(f"{int(np.sum(bad))} objective value(s) at or below the ideal bound", FitnessClampWarning, stacklevel=2)
        gap = np.where(bad, FITNESS_FLOOR, gap)
    out = 1.0 / gap
    return float(out) if out.ndim == 0 else out


def efficiency(power: float, n_turbines: int, scenario: WindScenario) -> float:
    """Actual power over the wake-free power of the same turbines."""
    if n_turbines < 1:
        raise ValueError("efficiency needs at least one turbine")
    return power / (n_turbines * scenario.free_stream_power())


@dataclass(frozen=True)
class EvaluationResult:
    n_turbines: int
    total_power: float
    cost: float
    objective: float
    fitness: float
    efficiency: float
    clamped: bool = False


def evaluate(genome, layout: CandidateLayout, scenario: WindScenario, spec: TurbineSpec = DEFAULT_TURBINE) -> EvaluationResult:
    """Full objective stack for one genome, computed turbine by turbine."""
    n = int(np.count_nonzero(genome))
    power = expected_power(genome, layout, scenario, spec)
    f_obj = objective(power, n)
    f_ideal = ideal_objective(scenario)
    return EvaluationResult(
        n_turbines=n,
        total_power=power,
        cost=cost(n),
        objective=f_obj,
        fitness=fitness(f_obj, f_ideal),
        efficiency=efficiency(power, n, scenario),
        clamped=f_obj <= f_ideal,
    )


class FarmEvaluator:
    """Batch evaluator with the pairwise wake terms cached per wind direction.

    For a fixed candidate set the squared fractional deficit that candidate
    ``j`` imposes on candidate ``i`` does not depend on which other turbines
    are present, so each genome costs one matrix-vector product per
    direction.
    """

    def __init__(self, layout: CandidateLayout, scenario: WindScenario, spec: TurbineSpec = DEFAULT_TURBINE):
        self.layout = layout
        self.scenario = scenario
        self.spec = spec
        self.f_ideal = ideal_objective(scenario)
        self._groups = []
        for d in dict.fromkeys(b.direction for b in scenario.bins):
            down, cross = wind_frame_offsets(layout.positions, d)
            sq = wake_weights(down, cross, spec) ** 2
            members = [(b.speed, b.probability) for b in scenario.bins if b.direction == d]
            self._groups.append((np.ascontiguousarray(sq.T), members))

    def __len__(self):
        return len(self.layout)

    def power(self, genomes) -> np.ndarray:
        """Expected power (kW) for a batch of genomes, shape ``(k, n)`` -> ``(k,)``."""
        g = np.atleast_2d(np.asarray(genomes, dtype=float))
        out = np.zeros(len(g))
        for sq_t, members in self._groups:
            frac = 1.0 - np.sqrt(g @ sq_t)
            np.maximum(frac, 0.0, out=frac)
            cube = np.sum(g * frac**3, axis=1)
            for speed, prob in members:
                out += prob * POWER_COEFF * speed**3 * cube
        return out

    def __call__(self, genomes):
        """Return ``(power, n_turbines, objective, fitness)`` arrays for a batch.

        Empty genomes get an infinite objective and zero fitness.
        """
        g = np.atleast_2d(np.asarray(genomes, dtype=bool))
        power = self.power(g)
        n = g.sum(axis=1)
        with np.errstate(divide="ignore"):
            f_obj = np.where(power > 0, cost(n) / np.where(power > 0, power, 1.0), np.inf)
        fit = np.zeros(len(g))
        ok = np.isfinite(f_obj)
        if np.any(ok):
            fit[ok] = fitness(f_obj[ok], self.f_ideal)
        return power, n, f_obj, fit

    def result(self, genome) -> EvaluationResult:
        power, n, f_obj, fit = self(genome)
        n0 = int(n[0])
        return EvaluationResult(
            n_turbines=n0,
            total_power=float(power[0]),
            cost=cost(n0),
            objective=float(f_obj[0]),
            fitness=float(fit[0]),
            efficiency=efficiency(float(power[0]), n0, self.scenario) if n0 else math.nan,
            clamped=bool(f_obj[0] <= self.f_ideal),
        )
