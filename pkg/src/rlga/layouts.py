"""Candidate turbine positions for a rectangular farm.

Four generators: aligned and staggered lattices, a Vogel (sunflower) spiral
and a Poisson-disk sample. Genomes index into ``CandidateLayout.positions``,
so every generator is deterministic in its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

KINDS = ("aligned", "staggered", "sunflower", "unstructured")

UNSTRUCTURED_DIST_FRAC = math.sqrt(3.0) / 2.0

GOLDEN_ANGLE_DEG = 180.0 * (3.0 - math.sqrt(5.0))  # 137.50776...


@dataclass(frozen=True)
class CandidateLayout:
    kind: str
    extent: tuple[float, float]
    spacing: float
    positions: np.ndarray = field(repr=False)
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown layout kind {self.kind!r}")
        pos = np.asarray(self.positions, dtype=float).reshape(-1, 2)
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    def __len__(self):
        return len(self.positions)

    def select(self, genome) -> np.ndarray:
        """Positions of the turbines switched on in ``genome``."""
        g = np.asarray(genome, dtype=bool)
        if g.shape != (len(self),):
            raise ValueError(f"genome length {g.size} does not match layout size {len(self)}")
        return self.positions[g]


def _check_grid_args(extent, spacing):
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    if extent[0] < spacing or extent[1] < spacing:
        raise ValueError("extent must be at least one spacing wide in each direction")


def _lattice(extent, spacing):
    nx = int(math.floor(extent[0] / spacing + 1e-9))
    ny = int(math.floor(extent[1] / spacing + 1e-9))
    xs = (np.arange(nx) + 0.5) * spacing
    ys = (np.arange(ny) + 0.5) * spacing
    return xs, ys


def aligned_grid(extent, spacing: float) -> CandidateLayout:
    """Square lattice of cell centres, row-major from the south-west corner."""
    _check_grid_args(extent, spacing)
    xs, ys = _lattice(extent, spacing)
    gx, gy = np.meshgrid(xs, ys)
    return CandidateLayout("aligned", tuple(extent), spacing, np.column_stack([gx.ravel(), gy.ravel()]))


def staggered_grid(extent, spacing: float) -> CandidateLayout:
    """Aligned lattice with every odd row shifted east by half a spacing.

    Shifted points that would leave the farm are dropped, not wrapped.
    """
    _check_grid_args(extent, spacing)
    xs, ys = _lattice(extent, spacing)
    rows = []
    for k, y in enumerate(ys):
        row_x = xs + 0.5 * spacing if k % 2 else xs
        row_x = row_x[row_x <= extent[0] + 1e-9]
        rows.append(np.column_stack([row_x, np.full(len(row_x), y)]))
    return CandidateLayout("staggered", tuple(extent), spacing, np.vstack(rows))


def sunflower_layout(extent, n: int) -> CandidateLayout:
    """Vogel spiral of ``n`` points centred on the farm.

    Point ``k`` (1-based) sits at radius ``c sqrt(k)`` and angle ``k`` times
    the golden angle; ``c`` puts the last point on the inscribed circle.
    """
    if n < 1:
        raise ValueError("sunflower layout needs at least one point")
    cx, cy = extent[0] / 2.0, extent[1] / 2.0
    radius = min(extent) / 2.0
    k = np.arange(1, n + 1)
    rho = radius * np.sqrt(k / n)
    theta = np.radians(k * GOLDEN_ANGLE_DEG)
    pos = np.column_stack([cx + rho * np.cos(theta), cy + rho * np.sin(theta)])
    return CandidateLayout("sunflower", tuple(extent), float(n), pos)


def unstructured_layout(extent, min_dist: float, seed: int, attempts: int = 30) -> CandidateLayout:
    """Saturated Poisson-disk sample by dart throwing in the closed farm rectangle.

    Darts are uniform over the farm and accepted when no accepted point lies
    closer than ``min_dist``. Throwing stops after ``attempts`` consecutive
    rejections per accepted point, which leaves the sample near the
    random-sequential-adsorption jamming limit. Conflict tests go through a
    KD-tree rebuilt once per batch.
    """
    width, height = float(extent[0]), float(extent[1])
    if min_dist <= 0:
        raise ValueError("minimum distance must be positive")
    if min_dist > math.hypot(width, height):
        raise ValueError("minimum distance exceeds the farm diagonal")
    rng = np.random.default_rng(seed)
    points = rng.uniform((0.0, 0.0), (width, height), size=(1, 2))
    misses = 0
    batch = 256
    while misses < attempts * len(points):
        tree = cKDTree(points)
        darts = rng.uniform((0.0, 0.0), (width, height), size=(batch, 2))
        gap, _ = tree.query(darts)
        accepted: list[np.ndarray] = []
        for dart, clear in zip(darts, gap >= min_dist):
            if clear and all(np.sum((dart - q) ** 2) >= min_dist**2 for q in accepted):
                accepted.append(dart)
                misses = 0
            else:
                misses += 1
                if misses >= attempts * (len(points) + len(accepted)):
                    break
        if accepted:
            points = np.vstack([points, accepted])
    points = _fill_gaps(points, width, height, min_dist, rng)
    return CandidateLayout("unstructured", (width, height), float(min_dist), points, seed=seed)


def _fill_gaps(points, width, height, min_dist, rng, pitch_frac=0.125):
    # last pass over a shuffled, jittered fine lattice; closes the holes that
    # random darts take too long to find
    pitch = min_dist * pitch_frac
    xs = np.arange(0.0, width + 1e-9, pitch)
    ys = np.arange(0.0, height + 1e-9, pitch)
    gx, gy = np.meshgrid(xs, ys)
    cand = np.column_stack([gx.ravel(), gy.ravel()])
    cand += rng.uniform(-0.5 * pitch, 0.5 * pitch, size=cand.shape)
    cand = np.clip(cand, (0.0, 0.0), (width, height))
    cand = cand[rng.permutation(len(cand))]
    gap, _ = cKDTree(points).query(cand)
    extra: list[np.ndarray] = []
    for c in cand[gap >= min_dist]:
        if all(np.sum((c - q) ** 2) >= min_dist**2 for q in extra):
            extra.append(c)
    return np.vstack([points, extra]) if extra else points


def make_layout(kind: str, extent, spacing: float, seed: int = 0) -> CandidateLayout:
    """Build a candidate layout of ``kind`` for a farm with lattice pitch ``spacing``.

    The sunflower spiral gets as many points as the aligned lattice so genome
    lengths match. The Poisson-disk sample uses a minimum distance of
    ``sqrt(3)/2 * spacing``: a saturated sample packs about 0.75 points per
    squared minimum distance, so this lands close to the lattice count.
    """
    if kind == "aligned":
        return aligned_grid(extent, spacing)
    if kind == "staggered":
        return staggered_grid(extent, spacing)
    if kind == "sunflower":
        return sunflower_layout(extent, len(aligned_grid(extent, spacing)))
    if kind == "unstructured":
        return unstructured_layout(extent, UNSTRUCTURED_DIST_FRAC * spacing, seed)
    raise ValueError(f"unknown layout kind {kind!r}; expected one of {', '.join(KINDS)}")
