import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rlga import agent
from rlga.agent import (
    Action,
    ActionSpace,
    QTable,
    choose_action,
    init_qtable,
    next_state,
    reward,
    update,
    write_qtable,
)


def test_action_space_order():
    space = ActionSpace()
    assert len(space) == 32
    assert space[0] == Action(2, "single_point", 1)
    assert space[1] == Action(2, "single_point", 2)
    assert space[4] == Action(2, "uniform", 1)
    assert space[16] == Action(3, "single_point", 1)
    assert space[31] == Action(3, "scattered", 4)
    assert space.index(Action(3, "two_points", 2)) == 16 + 8 + 1


def test_action_space_rejects_empty_and_duplicates():
    with pytest.raises(ValueError):
        ActionSpace(parents=())
    with pytest.raises(ValueError):
        ActionSpace(parents=(2, 2))


def test_init_shape_range_determinism():
    q1 = init_qtable(np.random.default_rng(5))
    q2 = init_qtable(np.random.default_rng(5))
    assert q1.values.shape == (2, 32)
    assert np.all((q1.values >= 0) & (q1.values <= 0.01))
    assert np.array_equal(q1.values, q2.values)


@pytest.mark.parametrize("kw", [dict(alpha=1.5), dict(alpha=-0.1), dict(gamma=1.0), dict(epsilon=1.1), dict(epsilon=-0.1)])
def test_hyperparameter_validation(kw):
    with pytest.raises(ValueError):
        init_qtable(np.random.default_rng(0), **kw)


def test_qtable_shape_validation():
    with pytest.raises(ValueError):
        QTable(np.zeros((3, 32)))


def test_greedy_choice():
    q = QTable(np.zeros((2, 32)), epsilon=0.0)
    rng = np.random.default_rng(0)
    assert choose_action(q, 0, rng) == 0  # ties go to the lowest index
    q.values[1, 17] = 1.0
    assert all(choose_action(q, 1, rng) == 17 for _ in range(100))
    assert choose_action(q, 0, rng) == 0


def test_epsilon_one_is_uniform():
    q = QTable(np.zeros((2, 32)), epsilon=1.0)
    q.values[0, 3] = 10.0
    rng = np.random.default_rng(123)
    draws = np.array([choose_action(q, 0, rng) for _ in range(10_000)])
    counts = np.bincount(draws, minlength=32)
    expected = 10_000 / 32
    chi2 = np.sum((counts - expected) ** 2 / expected)
    # chi-square with 31 dof: mean 31, sd sqrt(62); accept within 3 sd
    assert chi2 <= 31 + 3 * np.sqrt(62)
    assert counts[3] < 2 * expected


def test_reward_examples():
    assert reward(10, 8) == 2
    assert reward(8, 8) == 0
    assert reward(3882.3, 3900.0) == pytest.approx(-17.7)


def test_next_state_strict():
    assert next_state(10, 8) == 1
    assert next_state(8, 8) == 0
    assert next_state(7, 8) == 0


def test_bellman_from_zero():
    q = QTable(np.zeros((2, 32)), alpha=0.1, gamma=0.9)
    update(q, 0, 5, 1.0, 1)
    assert q.values[0, 5] == pytest.approx(0.1)


def test_bellman_with_next_value():
    q = QTable(np.zeros((2, 32)), alpha=0.1, gamma=0.9)
    q.values[0, 2] = 0.5
    q.values[1, 9] = 1.0
    update(q, 0, 2, 0.0, 1)
    assert q.values[0, 2] == pytest.approx(0.54)


@given(st.floats(-100, 100), st.integers(0, 1), st.integers(0, 31), st.integers(0, 1))
def test_zero_learning_rate_freezes_table(r, s, a, s2):
    q = init_qtable(np.random.default_rng(1), alpha=0.0)
    before = q.values.copy()
    update(q, s, a, r, s2)
    assert np.array_equal(q.values, before)


@given(st.floats(-10, 10), st.integers(0, 1), st.integers(0, 31), st.integers(0, 1), st.integers(0, 1000))
def test_update_touches_one_cell(r, s, a, s2, seed):
    q = init_qtable(np.random.default_rng(seed))
    before = q.values.copy()
    update(q, s, a, r, s2)
    changed = q.values != before
    changed[s, a] = False
    assert not changed.any()


def test_fixed_point_is_noop():
    q = QTable(np.zeros((2, 32)))
    q.values[1, :] = 0.2
    q.values[0, 4] = 0.3 + 0.9 * 0.2
    before = q.values[0, 4]
    update(q, 0, 4, 0.3, 1)
    assert abs(q.values[0, 4] - before) < 1e-12


def _bandit(seed, updates=1000, good=21):
    # no carry-over between pulls, so no discounting
    rng = np.random.default_rng(seed)
    q = init_qtable(rng, alpha=0.1, gamma=0.0, epsilon=0.1)
    state = 0
    for _ in range(updates):
        a = choose_action(q, state, rng)
        r = 1.0 if a == good else 0.0
        s2 = int(rng.integers(2))
        update(q, state, a, r, s2)
        state = s2
    return q


def test_two_state_bandit_converges():
    q = _bandit(2024)
    assert int(np.argmax(q.values[0])) == 21
    assert int(np.argmax(q.values[1])) == 21
    hits = sum(int(np.all(np.argmax(_bandit(s).values, axis=1) == 21)) for s in range(100))
    assert hits >= 90


def test_write_qtable(tmp_path):
    q = init_qtable(np.random.default_rng(0))
    path = tmp_path / "q.csv"
    write_qtable(path, q, ActionSpace())
    lines = path.read_text().splitlines()
    assert lines[0] == "state,action_index,parents_mating,crossover_kind,mutation_percent,value"
    assert len(lines) == 1 + 64
    first = lines[1].split(",")
    assert first[:5] == ["0", "0", "2", "single_point", "1"]
    assert float(first[5]) == q.values[0, 0]


def test_defaults():
    assert agent.PARENT_OPTIONS == (2, 3)
    assert agent.MUTATION_OPTIONS == (1, 2, 3, 4)
