"""Tabular Q-learning over GA operator settings.

The agent has two states (best fitness improved in the last generation or
not) and one action per combination of parents-mating count, crossover kind
and mutation percent.
"""

from __future__ import annotations

import csv
import itertools
from typing import NamedTuple, Sequence

import numpy as np

N_STATES = 2

PARENT_OPTIONS = (2, 3)
CROSSOVER_OPTIONS = ("single_point", "uniform", "two_points", "scattered")
MUTATION_OPTIONS = (1, 2, 3, 4)


class Action(NamedTuple):
    parents_mating: int
    crossover_kind: str
    mutation_percent: float


class ActionSpace:
    """Cartesian product of the option sets, indexed lexicographically."""

    def __init__(
        self,
        parents: Sequence[int] = PARENT_OPTIONS,
        crossovers: Sequence[str] = CROSSOVER_OPTIONS,
        mutations: Sequence[float] = MUTATION_OPTIONS,
    ):
        self.parents = tuple(parents)
        self.crossovers = tuple(crossovers)
        self.mutations = tuple(mutations)
        self.actions = [Action(*combo) for combo in itertools.product(self.parents, self.crossovers, self.mutations)]
        if not self.actions:
            raise ValueError("action space is empty")
        if len(set(self.actions)) != len(self.actions):
            raise ValueError("option sets contain duplicates")

    def __len__(self):
        return len(self.actions)

    def __getitem__(self, index: int) -> Action:
        return self.actions[index]

    def index(self, action: Action) -> int:
        return self.actions.index(action)


class QTable:
    def __init__(self, values: np.ndarray, alpha: float = 0.1, gamma: float = 0.9, epsilon: float = 0.1):
        # alpha = 0 is allowed: a frozen table is a useful degenerate case
        if not 0.0 <= alpha <= 1.0:
            raise ValueError("learning rate must be in [0, 1]")
        if not 0.0 <= gamma < 1.0:
            raise ValueError("discount factor must be in [0, 1)")
        if not 0.0 <= epsilon <= 1.0:
            raise ValueError("exploration rate must be in [0, 1]")
        self.values = np.asarray(values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[0] != N_STATES:
            raise ValueError(f"Q-table must have shape ({N_STATES}, n_actions)")
        self.alpha = alpha
        self.gamma = gamma
        self.epsilon = epsilon

    @property
    def n_actions(self) -> int:
        return self.values.shape[1]


def init_qtable(
    rng: np.random.Generator,
    n_actions: int = 32,
    alpha: float = 0.1,
    gamma: float = 0.9,
    epsilon: float = 0.1,
) -> QTable:
    """Q-table filled with small uniform values in ``[0, 0.01]``."""
    return QTable(rng.uniform(0.0, 0.01, size=(N_STATES, n_actions)), alpha, gamma, epsilon)


def choose_action(q: QTable, state: int, rng: np.random.Generator) -> int:
    """Epsilon-greedy action index; greedy ties go to the lowest index."""
    if rng.random() < q.epsilon:
        return int(rng.integers(q.n_actions))
    return int(np.argmax(q.values[state]))


def reward(f_now: float, f_prev: float) -> float:
    return f_now - f_prev


def next_state(f_now: float, f_prev: float) -> int:
    return int(f_now > f_prev)


def update(q: QTable, state: int, action: int, r: float, state_next: int) -> None:
    """One-step Bellman backup of ``Q(state, action)`` in place."""
    target = r + q.gamma * np.max(q.values[state_next])
    q.values[state, action] += q.alpha * (target - q.values[state, action])


def write_qtable(path, q: QTable, space: ActionSpace) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["state", "action_index", "parents_mating", "crossover_kind", "mutation_percent", "value"])
        for s in range(N_STATES):
            for k, act in enumerate(space.actions):
                w.writerow([s, k, act.parents_mating, act.crossover_kind, act.mutation_percent, repr(float(q.values[s, k]))])
