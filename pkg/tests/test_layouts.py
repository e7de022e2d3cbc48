import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.spatial.distance import pdist

from rlga.io import read_layout, write_layout
from rlga.layouts import (
    GOLDEN_ANGLE_DEG,
    UNSTRUCTURED_DIST_FRAC,
    aligned_grid,
    make_layout,
    staggered_grid,
    sunflower_layout,
    unstructured_layout,
)

# measured over seeds 0..99 for a 2 km square at 200 m: 70..81, mean 75.4
POISSON_COUNT_BOUNDS = (68, 84)


def _inside(layout):
    p = layout.positions
    return bool(np.all((p >= 0).all(axis=1) & (p[:, 0] <= layout.extent[0]) & (p[:, 1] <= layout.extent[1])))


@pytest.mark.parametrize("extent, spacing, count", [(2000, 200, 100), (2000, 80, 625), (6000, 200, 900)])
def test_aligned_counts(extent, spacing, count):
    lay = aligned_grid((extent, extent), spacing)
    assert len(lay) == count
    assert _inside(lay)


def test_aligned_first_cells_and_order():
    lay = aligned_grid((2000, 2000), 200)
    assert tuple(lay.positions[0]) == (100.0, 100.0)
    assert tuple(lay.positions[1]) == (300.0, 100.0)
    assert tuple(lay.positions[10]) == (100.0, 300.0)


def test_aligned_rejects_bad_spacing():
    with pytest.raises(ValueError):
        aligned_grid((2000, 2000), 0)
    with pytest.raises(ValueError):
        aligned_grid((2000, 2000), -5)
    with pytest.raises(ValueError):
        aligned_grid((100, 2000), 200)


def test_staggered_rows():
    al = aligned_grid((2000, 2000), 200).positions
    st_ = staggered_grid((2000, 2000), 200).positions
    row0 = st_[st_[:, 1] == 100.0][:, 0]
    row1 = st_[st_[:, 1] == 300.0][:, 0]
    assert np.array_equal(row0, al[al[:, 1] == 100.0][:, 0])
    # the last shifted point lands exactly on the closed east boundary and stays
    assert np.array_equal(row1, al[al[:, 1] == 300.0][:, 0] + 100.0)
    st80 = staggered_grid((2000, 2000), 80).positions
    assert st80[:, 0].max() <= 2000.0


def test_staggered_count_within_one_row():
    for extent, spacing in ((2000, 200), (2000, 80), (6000, 200)):
        n_al = len(aligned_grid((extent, extent), spacing))
        n_st = len(staggered_grid((extent, extent), spacing))
        assert n_al - extent / spacing <= n_st <= n_al


def test_staggered_large_farm_offsets():
    lay = staggered_grid((6000, 6000), 200)
    assert _inside(lay)
    ys = np.unique(lay.positions[:, 1])
    for k, y in enumerate(ys):
        xs = lay.positions[lay.positions[:, 1] == y][:, 0]
        assert xs[0] == (200.0 if k % 2 else 100.0)


def test_sunflower_single_point_at_centre():
    lay = sunflower_layout((2000, 2000), 1)
    assert len(lay) == 1
    # c puts point n on the inscribed circle, so with n = 1 it sits on it
    assert math.hypot(*(lay.positions[0] - 1000.0)) == pytest.approx(1000.0)


def test_sunflower_rejects_zero():
    with pytest.raises(ValueError):
        sunflower_layout((2000, 2000), 0)


def test_sunflower_inside_and_distinct():
    lay = sunflower_layout((2000, 2000), 100)
    assert _inside(lay)
    assert pdist(lay.positions).min() > 0


def test_sunflower_golden_angle():
    assert GOLDEN_ANGLE_DEG == pytest.approx(137.50776, abs=1e-5)
    lay = sunflower_layout((2000, 2000), 100)
    d = lay.positions - 1000.0
    ang = np.degrees(np.arctan2(d[:, 1], d[:, 0]))
    step = np.mod(np.diff(ang), 360.0)
    assert np.allclose(step, GOLDEN_ANGLE_DEG, atol=1e-9)
    rho = np.hypot(d[:, 0], d[:, 1])
    assert np.allclose(rho, 1000.0 * np.sqrt(np.arange(1, 101) / 100.0))


def test_poisson_deterministic():
    a = unstructured_layout((2000, 2000), 200, seed=5)
    b = unstructured_layout((2000, 2000), 200, seed=5)
    c = unstructured_layout((2000, 2000), 200, seed=6)
    assert np.array_equal(a.positions, b.positions)
    assert not np.array_equal(a.positions, c.positions)


def test_poisson_min_distance_and_containment_many_seeds():
    counts = []
    for seed in range(100):
        lay = unstructured_layout((2000, 2000), 200, seed=seed)
        assert pdist(lay.positions).min() >= 200.0
        assert _inside(lay)
        counts.append(len(lay))
    lo, hi = POISSON_COUNT_BOUNDS
    assert lo <= min(counts) and max(counts) <= hi


def test_poisson_rejects_bad_distance():
    with pytest.raises(ValueError):
        unstructured_layout((100, 100), 0.0, seed=0)
    with pytest.raises(ValueError):
        unstructured_layout((100, 100), 200.0, seed=0)


@settings(max_examples=20, deadline=None)
@given(st.floats(200, 1500), st.floats(200, 1500), st.floats(80, 400), st.integers(0, 10**6))
def test_poisson_property(w, h, dmin, seed):
    assume(dmin <= math.hypot(w, h))
    lay = unstructured_layout((w, h), dmin, seed=seed)
    if len(lay) > 1:
        assert pdist(lay.positions).min() >= dmin
    assert _inside(lay)


def test_make_layout_kinds():
    assert len(make_layout("sunflower", (2000, 2000), 200)) == 100
    un = make_layout("unstructured", (2000, 2000), 200, seed=0)
    assert un.spacing == pytest.approx(UNSTRUCTURED_DIST_FRAC * 200)
    assert 80 <= len(un) <= 120
    with pytest.raises(ValueError):
        make_layout("hexagonal", (2000, 2000), 200)


def test_positions_read_only_and_select():
    lay = aligned_grid((2000, 2000), 200)
    with pytest.raises(ValueError):
        lay.positions[0, 0] = 1.0
    g = np.zeros(100, dtype=bool)
    g[[3, 7]] = True
    assert np.array_equal(lay.select(g), lay.positions[[3, 7]])
    with pytest.raises(ValueError):
        lay.select(np.ones(99, dtype=bool))


@pytest.mark.parametrize("kind", ["aligned", "staggered", "sunflower", "unstructured"])
def test_csv_round_trip_preserves_order(tmp_path, kind):
    lay = make_layout(kind, (2000, 2000), 200, seed=1)
    path = tmp_path / "cand.csv"
    write_layout(path, lay.positions)
    idx, pos = read_layout(path)
    assert np.array_equal(idx, np.arange(len(lay)))
    # six significant digits
    assert np.allclose(pos, lay.positions, rtol=5e-6, atol=0)
