"""GA and RLGA optimisation runs over a candidate layout."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import agent
from .cases import get_case
from .evaluation import FarmEvaluator
from .ga import GAParams, RngStreams, evolve_generation, init_population
from .layouts import KINDS, CandidateLayout, make_layout
from .wake import DEFAULT_TURBINE, TurbineSpec
from .wind import SCENARIOS, WindScenario, scenario_spread


@dataclass(frozen=True)
class RunConfig:
    case: str = "IA"
    layout: str = "aligned"
    algorithm: str = "rlga"
    generations: int = 1000
    seed: int = 0
    layout_seed: int = 0
    population_size: int = 5
    # fixed GA operators
    parents_mating: int = 2
    crossover: str = "single_point"
    mutation_percent: float = 4.0
    # RLGA option sets
    parent_options: tuple = agent.PARENT_OPTIONS
    crossover_options: tuple = agent.CROSSOVER_OPTIONS
    mutation_options: tuple = agent.MUTATION_OPTIONS
    alpha: float = 0.1
    gamma: float = 0.9
    epsilon: float = 0.1
    rose: str = ""

    def __post_init__(self):
        object.__setattr__(self, "case", get_case(self.case).name)
        if self.layout not in KINDS:
            raise ValueError(f"unknown layout {self.layout!r}; expected one of {', '.join(KINDS)}")
        if self.algorithm not in ("ga", "rlga"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected 'ga' or 'rlga'")
        if self.generations < 1:
            raise ValueError("generations must be at least 1")
        object.__setattr__(self, "parent_options", tuple(int(v) for v in self.parent_options))
        object.__setattr__(self, "crossover_options", tuple(str(v) for v in self.crossover_options))
        object.__setattr__(self, "mutation_options", tuple(float(v) for v in self.mutation_options))
        object.__setattr__(self, "mutation_percent", float(self.mutation_percent))
        self.ga_params()
        for p in self.parent_options:
            GAParams(self.population_size, p, self.crossover, self.mutation_percent)
        for c in self.crossover_options:
            GAParams(self.population_size, self.parents_mating, c, self.mutation_percent)
        agent.QTable(np.zeros((agent.N_STATES, 1)), self.alpha, self.gamma, self.epsilon)

    def ga_params(self) -> GAParams:
        return GAParams(self.population_size, self.parents_mating, self.crossover, self.mutation_percent)

    def action_space(self) -> agent.ActionSpace:
        return agent.ActionSpace(self.parent_options, self.crossover_options, self.mutation_options)

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    def build_layout(self) -> CandidateLayout:
        c = get_case(self.case)
        return make_layout(self.layout, c.extent, c.spacing, seed=self.layout_seed)

    def build_scenario(self) -> WindScenario:
        letter = get_case(self.case).scenario
        if letter == "C" and self.rose:
            return scenario_spread(self.rose)
        return SCENARIOS[letter]()


@dataclass
class ConvergenceRecord:
    generation: int
    best_fitness: float
    best_fobj: float
    best_power: float
    n_turbines: int
    action: Optional[int] = None
    reward: Optional[float] = None
    state: Optional[int] = None


@dataclass
class RunResult:
    best_genome: np.ndarray
    history: list[ConvergenceRecord]
    layout: CandidateLayout
    scenario: WindScenario
    qtable: Optional[agent.QTable] = None
    action_space: Optional[agent.ActionSpace] = None
    evaluations: int = 0
    extra: dict = field(default_factory=dict)

    def __iter__(self):
        yield self.best_genome
        yield self.history

    @property
    def fitness(self) -> np.ndarray:
        return np.array([r.best_fitness for r in self.history])


class _Population:
    """Population plus cached evaluation columns."""

    def __init__(self, genomes, evaluator: FarmEvaluator):
        self.genomes = genomes
        self.power, self.n, self.fobj, self.fit = evaluator(genomes)
        self.evaluations = len(genomes)

    def advance(self, genomes, parent_idx, evaluator: FarmEvaluator):
        k = len(parent_idx)
        cached = [a[parent_idx] for a in (self.power, self.n, self.fobj, self.fit)]
        fresh = evaluator(genomes[k:]) if len(genomes) > k else [np.zeros(0)] * 4
        self.power, self.n, self.fobj, self.fit = (np.concatenate([c, f]) for c, f in zip(cached, fresh))
        self.genomes = genomes
        self.evaluations += len(genomes) - k

    def best(self) -> int:
        # first maximum, matching the parent-selection tie rule
        return int(np.argmax(self.fit))

    def record(self, generation, **extra) -> ConvergenceRecord:
        b = self.best()
        return ConvergenceRecord(
            generation,
            float(self.fit[b]),
            float(self.fobj[b]),
            float(self.power[b]),
            int(self.n[b]),
            **extra,
        )


def _run(
    config: RunConfig,
    use_agent: bool,
    on_record: Optional[Callable[[ConvergenceRecord], None]] = None,
    spec: TurbineSpec = DEFAULT_TURBINE,
    evaluator: Optional[FarmEvaluator] = None,
) -> RunResult:
    layout = evaluator.layout if evaluator else config.build_layout()
    scenario = evaluator.scenario if evaluator else config.build_scenario()
    evaluator = evaluator or FarmEvaluator(layout, scenario, spec)
    streams = RngStreams(config.seed)
    history: list[ConvergenceRecord] = []

    def emit(rec):
        history.append(rec)
        if on_record is not None:
            on_record(rec)

    pop = _Population(init_population(len(layout), config.population_size, streams.init), evaluator)
    emit(pop.record(0))

    space = q = None
    fixed = config.ga_params()
    if use_agent:
        space = config.action_space()
        q = agent.init_qtable(streams.agent, len(space), config.alpha, config.gamma, config.epsilon)
        state = 0
        f_prev = pop.fit[pop.best()]

    for gen in range(1, config.generations + 1):
        if use_agent:
            a = agent.choose_action(q, state, streams.agent)
            act = space[a]
            params = GAParams(config.population_size, act.parents_mating, act.crossover_kind, act.mutation_percent)
        else:
            params = fixed
        genomes, parent_idx = evolve_generation(pop.genomes, pop.fit, params, streams)
        pop.advance(genomes, parent_idx, evaluator)
        if use_agent:
            f_now = pop.fit[pop.best()]
            r = agent.reward(f_now, f_prev)
            s_next = agent.next_state(f_now, f_prev)
            agent.update(q, state, a, r, s_next)
            emit(pop.record(gen, action=a, reward=float(r), state=s_next))
            state, f_prev = s_next, f_now
        else:
            emit(pop.record(gen))

    return RunResult(
        best_genome=pop.genomes[pop.best()].copy(),
        history=history,
        layout=layout,
        scenario=scenario,
        qtable=q,
        action_space=space,
        evaluations=pop.evaluations,
    )


def run_ga(config: RunConfig, on_record=None, spec: TurbineSpec = DEFAULT_TURBINE, evaluator=None) -> RunResult:
    """Plain GA with the fixed operators in ``config``."""
    return _run(config, False, on_record, spec, evaluator)


def run_rlga(config: RunConfig, on_record=None, spec: TurbineSpec = DEFAULT_TURBINE, evaluator=None) -> RunResult:
    """GA whose operators are picked each generation by a Q-learning agent.

    Per generation: pick an action for the current state, evolve with it,
    reward the change in best fitness, move to the improved/not-improved
    state and back up the Q-table.
    """
    return _run(config, True, on_record, spec, evaluator)


def run(config: RunConfig, on_record=None, spec: TurbineSpec = DEFAULT_TURBINE, evaluator=None) -> RunResult:
    fn = run_rlga if config.algorithm == "rlga" else run_ga
    return fn(config, on_record, spec, evaluator)


def generations_to_target(history, target: float) -> Optional[int]:
    """First generation whose best fitness reaches ``target``, or ``None``."""
    for k, rec in enumerate(history):
        value = rec.best_fitness if isinstance(rec, ConvergenceRecord) else rec
        if value >= target:
            return rec.generation if isinstance(rec, ConvergenceRecord) else k
    return None
