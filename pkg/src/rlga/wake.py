"""Jensen top-hat wake model with quadratic-sum superposition.

Positions are in an east/north frame (x east, y north). Wind directions are
meteorological bearings: 0 deg means wind coming *from* the north, so the
flow moves toward -y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

# branch classification slack for overlap_area
_BRANCH_TOL = 1e-12

POWER_COEFF = 0.3  # kW per (m/s)^3


def entrainment_constant(hub_height: float, roughness: float) -> float:
    """Wake expansion rate ``0.5 / ln(z_h / z_0)``."""
    if hub_height <= 0 or roughness <= 0:
        raise ValueError("hub height and roughness must be positive")
    if hub_height <= roughness:
        raise ValueError("hub height must exceed the roughness length")
    return 0.5 / math.log(hub_height / roughness)


def axial_induction(thrust_coeff: float) -> float:
    """Axial induction factor from 1-D momentum theory."""
    if not 0.0 <= thrust_coeff <= 1.0:
        raise ValueError(f"thrust coefficient must be in [0, 1], got {thrust_coeff}")
    return (1.0 - math.sqrt(1.0 - thrust_coeff)) / 2.0


def initial_wake_radius(rotor_radius: float, induction: float) -> float:
    """Wake radius immediately behind the rotor, ``r * sqrt((1-a)/(1-2a))``."""
    if rotor_radius <= 0:
        raise ValueError("rotor radius must be positive")
    if not 0.0 <= induction < 0.5:
        raise ValueError(f"axial induction must be in [0, 0.5), got {induction}")
    return rotor_radius * math.sqrt((1.0 - induction) / (1.0 - 2.0 * induction))


@dataclass(frozen=True)
class TurbineSpec:
    """Rotor geometry and site roughness.

    The wake constants are derived in ``__post_init__``; the class is frozen,
    so use :func:`dataclasses.replace` to change an input and get consistent
    derived values.
    """

    rotor_radius: float = 20.0
    hub_height: float = 60.0
    roughness: float = 0.3
    thrust_coeff: float = 0.88
    induction: float = field(init=False)
    wake_radius0: float = field(init=False)
    entrainment: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.thrust_coeff < 1.0:
            raise ValueError("thrust coefficient must be in (0, 1)")
        a = axial_induction(self.thrust_coeff)
        object.__setattr__(self, "induction", a)
        object.__setattr__(self, "wake_radius0", initial_wake_radius(self.rotor_radius, a))
        object.__setattr__(self, "entrainment", entrainment_constant(self.hub_height, self.roughness))

    @property
    def rotor_area(self) -> float:
        return math.pi * self.rotor_radius**2

    def wake_radius(self, downstream):
        """Top-hat wake radius at ``downstream`` metres behind the rotor."""
        return self.wake_radius0 + self.entrainment * downstream


DEFAULT_TURBINE = TurbineSpec()


def single_wake_deficit(downstream, spec: TurbineSpec = DEFAULT_TURBINE):
    """Fractional velocity deficit ``dU/U`` at ``downstream`` metres.

    Accepts scalars or arrays. Negative distances are rejected: callers have
    to drop upstream turbines before asking for a deficit.
    """
    x = np.asarray(downstream, dtype=float)
    if np.any(x < 0):
        raise ValueError("downstream distance must be non-negative")
    out = (1.0 - math.sqrt(1.0 - spec.thrust_coeff)) / (1.0 + spec.entrainment * x / spec.wake_radius0) ** 2
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class WindFramePosition:
    downstream: float
    crosswind: float


def downwind_unit(wind_dir: float) -> tuple[float, float]:
    phi = math.radians(wind_dir)
    return -math.sin(phi), -math.cos(phi)


def relative_in_wind_frame(pos_i, pos_j, wind_dir: float) -> WindFramePosition:
    """Coordinates of turbine ``i`` in a wind-aligned frame centred on ``j``.

    ``downstream`` is positive when ``i`` sits downwind of ``j``. The
    crosswind axis is the downwind axis rotated +90 deg (counter-clockwise).
    """
    ex, ey = downwind_unit(wind_dir)
    dx = pos_i[0] - pos_j[0]
    dy = pos_i[1] - pos_j[1]
    return WindFramePosition(dx * ex + dy * ey, -dx * ey + dy * ex)


def wind_frame_offsets(xy: np.ndarray, wind_dir: float) -> tuple[np.ndarray, np.ndarray]:
    """Pairwise ``(downstream, crosswind)`` matrices; entry ``[i, j]`` is i relative to j."""
    xy = np.asarray(xy, dtype=float).reshape(-1, 2)
    ex, ey = downwind_unit(wind_dir)
    dx = xy[:, 0][:, None] - xy[:, 0][None, :]
    dy = xy[:, 1][:, None] - xy[:, 1][None, :]
    return dx * ex + dy * ey, -dx * ey + dy * ex


def overlap_area(d, r, r_w):
    """Area of a rotor disc (radius ``r``) covered by a wake disc (radius ``r_w``).

    ``d`` is the centre-to-centre crosswind distance. Vectorised over all
    three arguments. The full-immersion branch returns ``pi r^2`` whenever
    ``d <= |r_w - r|``; wakes are always wider than rotors here, so the
    ``r_w < r`` corner of that branch is never reached in practice.
    """
    d, r, r_w = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (d, r, r_w)))
    out = np.zeros(d.shape)
    full = d <= np.abs(r_w - r) + _BRANCH_TOL
    partial = ~full & (d < r + r_w - _BRANCH_TOL)
    out[full] = np.pi * r[full] ** 2
    if np.any(partial):
        dp, rp, rwp = d[partial], r[partial], r_w[partial]
        d1 = (rwp**2 + dp**2 - rp**2) / (2.0 * dp)
        d2 = dp - d1
        t1 = 2.0 * np.arccos(np.clip(d1 / rwp, -1.0, 1.0))
        t2 = 2.0 * np.arccos(np.clip(d2 / rp, -1.0, 1.0))
        area = 0.5 * rwp**2 * (t1 - np.sin(t1)) + 0.5 * rp**2 * (t2 - np.sin(t2))
        out[partial] = np.clip(area, 0.0, np.pi * rp**2)
    return float(out) if out.ndim == 0 else out


def wake_weights(downstream: np.ndarray, crosswind: np.ndarray, spec: TurbineSpec = DEFAULT_TURBINE) -> np.ndarray:
    """Per-pair fractional deficit ``(A_w / pi r^2) * dU/U``; zero when there is no wake.

    A pair contributes only if the target is strictly downstream and the wake
    disc overlaps the rotor disc.
    """
    x = np.asarray(downstream, dtype=float)
    y = np.abs(np.asarray(crosswind, dtype=float))
    out = np.zeros(np.broadcast(x, y).shape)
    down = x > 0
    if np.any(down):
        xd = x[down]
        frac = overlap_area(y[down], spec.rotor_radius, spec.wake_radius(xd)) / spec.rotor_area
        out[down] = frac * single_wake_deficit(xd, spec)
    return out


def effective_speed(
    i: int,
    positions: Sequence,
    wind_dir: float,
    free_speed: float,
    spec: TurbineSpec = DEFAULT_TURBINE,
) -> float:
    """Wind speed at turbine ``i`` of the farm ``positions`` (all active).

    Each upwind turbine ``j`` contributes a deficit velocity
    ``(A_w / pi r^2) * (U - U_ij)``; the contributions combine as a root sum
    of squares. The result is clamped at zero.
    """
    total = 0.0
    for j, pos_j in enumerate(positions):
        if j == i:
            continue
        rel = relative_in_wind_frame(positions[i], pos_j, wind_dir)
        if rel.downstream <= 0:
            continue
        r_w = spec.wake_radius(rel.downstream)
        a_w = overlap_area(abs(rel.crosswind), spec.rotor_radius, r_w)
        if a_w <= 0:
            continue
        u_ij = free_speed * (1.0 - single_wake_deficit(rel.downstream, spec))
        total += (a_w / spec.rotor_area * (free_speed - u_ij)) ** 2
    return max(0.0, free_speed - math.sqrt(total))


def farm_speeds(positions, wind_dir: float, free_speed: float, spec: TurbineSpec = DEFAULT_TURBINE) -> np.ndarray:
    """Vectorised :func:`effective_speed` for every turbine in ``positions``."""
    xy = np.asarray(positions, dtype=float).reshape(-1, 2)
    if len(xy) == 0:
        return np.zeros(0)
    down, cross = wind_frame_offsets(xy, wind_dir)
    w = wake_weights(down, cross, spec)
    speeds = free_speed * (1.0 - np.sqrt(np.sum(w**2, axis=1)))
    return np.maximum(speeds, 0.0)


def total_power(speeds) -> float:
    """Farm power in kW for the ideal ``P = 0.3 U^3`` power curve."""
    u = np.asarray(speeds, dtype=float)
    if np.any(u < 0):
        raise ValueError("speeds must be non-negative")
    return float(POWER_COEFF * np.sum(u**3))


@dataclass(frozen=True)
class GridSpec:
    origin: tuple[float, float]
    cell_size: float
    nx: int
    ny: int

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        xs = self.origin[0] + (np.arange(self.nx) + 0.5) * self.cell_size
        ys = self.origin[1] + (np.arange(self.ny) + 0.5) * self.cell_size
        return xs, ys


@dataclass
class VelocityGrid:
    grid: GridSpec
    values: np.ndarray  # shape (ny, nx)

    @property
    def origin(self):
        return self.grid.origin

    @property
    def cell_size(self):
        return self.grid.cell_size

    @property
    def nx(self):
        return self.grid.nx

    @property
    def ny(self):
        return self.grid.ny


def velocity_field(
    turbines,
    wind_dir: float,
    free_speed: float,
    grid: GridSpec,
    spec: TurbineSpec = DEFAULT_TURBINE,
) -> VelocityGrid:
    """Point-probe wind speed at every grid cell centre.

    ``turbines`` are the active turbine positions. A probe inside a wake cone
    takes that wake's full deficit; outside it takes none.
    """
    if grid.nx < 1 or grid.ny < 1 or grid.cell_size <= 0:
        raise ValueError("grid must have at least one cell and a positive cell size")
    xs, ys = grid.centers()
    px, py = np.meshgrid(xs, ys)
    probes = np.column_stack([px.ravel(), py.ravel()])
    sq = np.zeros(len(probes))
    ex, ey = downwind_unit(wind_dir)
    for tx, ty in np.asarray(turbines, dtype=float).reshape(-1, 2):
        dx = probes[:, 0] - tx
        dy = probes[:, 1] - ty
        down = dx * ex + dy * ey
        cross = -dx * ey + dy * ex
        inside = (down > 0) & (np.abs(cross) <= spec.wake_radius(np.maximum(down, 0.0)))
        if np.any(inside):
            sq[inside] += single_wake_deficit(down[inside], spec) ** 2
    values = np.maximum(free_speed * (1.0 - np.sqrt(sq)), 0.0)
    return VelocityGrid(grid, values.reshape(grid.ny, grid.nx))
