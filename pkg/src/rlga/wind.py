"""Wind scenarios and probability-weighted farm power."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .wake import DEFAULT_TURBINE, POWER_COEFF, TurbineSpec, farm_speeds, total_power

SPREAD_IDEAL_OBJECTIVE = 6.785e-4  # per kW
ROSE_GATE = 0.005  # relative tolerance on the rose's implied ideal objective


@dataclass(frozen=True)
class WindBin:
    direction: float
    speed: float
    probability: float


@dataclass(frozen=True)
class WindScenario:
    bins: tuple[WindBin, ...]
    name: str = ""

    def __post_init__(self):
        bins = tuple(WindBin(*b) if not isinstance(b, WindBin) else b for b in self.bins)
        object.__setattr__(self, "bins", bins)
        if not bins:
            raise ValueError("a wind scenario needs at least one bin")
        for b in bins:
            if b.probability < 0:
                raise ValueError(f"negative probability in bin {b}")
            if b.speed <= 0:
                raise ValueError(f"non-positive speed in bin {b}")
            if not 0.0 <= b.direction < 360.0:
                raise ValueError(f"direction outside [0, 360) in bin {b}")
        total = math.fsum(b.probability for b in bins)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"bin probabilities sum to {total!r}, not 1")

    def __len__(self):
        return len(self.bins)

    @property
    def directions(self) -> np.ndarray:
        return np.array([b.direction for b in self.bins])

    @property
    def speeds(self) -> np.ndarray:
        return np.array([b.speed for b in self.bins])

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([b.probability for b in self.bins])

    def free_stream_power(self) -> float:
        """Expected power of one wake-free turbine, kW."""
        return POWER_COEFF * math.fsum(b.probability * b.speed**3 for b in self.bins)


def scenario_unidirectional() -> WindScenario:
    """12 m/s from the north, all the time."""
    return WindScenario((WindBin(0.0, 12.0, 1.0),), name="A")


def scenario_omnidirectional() -> WindScenario:
    """12 m/s from 36 equally likely directions, 10 deg apart."""
    return WindScenario(tuple(WindBin(float(d), 12.0, 1.0 / 36.0) for d in range(0, 360, 10)), name="B")


def read_rose(path) -> list[tuple[float, float, float]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        expected = {"direction_deg", "speed_ms", "probability"}
        if set(reader.fieldnames or ()) != expected:
            raise ValueError(f"rose file {path} must have columns {sorted(expected)}")
        return [(float(r["direction_deg"]), float(r["speed_ms"]), float(r["probability"])) for r in reader]


def default_rose_path() -> Path:
    return Path(str(resources.files("rlga") / "data" / "spread_rose.csv"))


def scenario_spread(table=None) -> WindScenario:
    """Three-speed (8/12/17 m/s) rose over 36 directions.

    ``table`` is an iterable of ``(direction, speed, probability)`` rows or a
    path to a rose CSV; the bundled rose is used when omitted. The table is
    rejected unless its implied ideal objective is within 0.5% of
    6.785e-4 / kW, which catches transcription slips.
    """
    if table is None:
        table = default_rose_path()
    if isinstance(table, (str, Path)):
        table = read_rose(table)
    scenario = WindScenario(tuple(WindBin(*row) for row in table), name="C")
    implied = (2.0 / 3.0) / scenario.free_stream_power()
    if abs(implied / SPREAD_IDEAL_OBJECTIVE - 1.0) > ROSE_GATE:
        raise ValueError(
            f"rose implies an ideal objective of {implied:.4e} / kW, "
            f"more than {ROSE_GATE:.1%} away from {SPREAD_IDEAL_OBJECTIVE:.4e}"
        )
    return scenario


SCENARIOS = {
    "A": scenario_unidirectional,
    "B": scenario_omnidirectional,
    "C": scenario_spread,
}


def expected_power(genome, layout, scenario: WindScenario, spec: TurbineSpec = DEFAULT_TURBINE) -> float:
    """Probability-weighted total power (kW) of the turbines switched on in ``genome``."""
    turbines = layout.select(genome)
    if len(turbines) == 0:
        return 0.0
    # fixed bin order keeps the sum bitwise reproducible
    return math.fsum(
        b.probability * total_power(farm_speeds(turbines, b.direction, b.speed, spec)) for b in scenario.bins
    )
