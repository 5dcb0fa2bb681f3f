"""Replicate orchestration: single runs, replicated parameter points, sweeps,
and cost-efficiency frontier extraction.

A parameter point is evaluated on several independently seeded graphs with
several realisations each (defaults follow the 10 x 30 protocol). All seeds
descend from one master seed through a counter-based split, and results are
reduced in a fixed order, so repeated invocations and any degree of worker
parallelism produce identical output.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import dynamics, game, interference, network
from .dynamics import DETERMINISTIC, UpdateRuleConfig
from .game import COOPERATE, PayoffParams
from .interference import InterferenceConfig
from .network import Graph, NetworkConfig

DEFAULT_GRAPHS = 10
DEFAULT_REALISATIONS = 30

# Horizons per update rule; deterministic runs converge much faster.
DEFAULT_GENERATIONS = {dynamics.DETERMINISTIC: 75, dynamics.STOCHASTIC: 500}
DEFAULT_STATS_WINDOW = 25

HOMOGENEOUS_C = "homogeneous-C"
HOMOGENEOUS_D = "homogeneous-D"
MIXED = "mixed"

# Stream tags for the counter-based seed split.
_GRAPH_STREAM = 0
_RUN_STREAM = 1


class ConfigMismatchError(ValueError):
    """Raised when a run configuration and the supplied graph disagree."""


def derive_seed(master_seed: int, *path: int) -> int:
    """Deterministic 64-bit child seed for a (stream, counter...) path."""
    state = np.random.SeedSequence([master_seed, *path]).generate_state(2, np.uint32)
    return int(state[0]) << 32 | int(state[1])


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one replicate.

    network is either a NetworkConfig or a path to a graph JSON file.
    generations defaults by update rule (75 deterministic, 500 stochastic).
    """

    network: NetworkConfig | str
    payoff: PayoffParams = field(default_factory=PayoffParams)
    update: UpdateRuleConfig = field(default_factory=UpdateRuleConfig)
    interference: InterferenceConfig = field(default_factory=InterferenceConfig)
    generations: int | None = None
    stats_window: int = DEFAULT_STATS_WINDOW
    run_seed: int = 0

    def __post_init__(self):
        if self.stats_window > self.horizon:
            raise ValueError(
                f"stats_window {self.stats_window} exceeds horizon {self.horizon}")

    @property
    def horizon(self) -> int:
        if self.generations is not None:
            return self.generations
        return DEFAULT_GENERATIONS[self.update.rule]


@dataclass(frozen=True)
class GenerationStats:
    """State of one generation, measured before the strategy update."""

    generation: int
    coop_fraction: float
    invested: int
    cost: float


@dataclass(frozen=True)
class RunResult:
    trace: list[GenerationStats]
    total_cost: float
    mean_coop: float
    absorbed_at: int | None
    final_state: str
    run_seed: int

    @property
    def coop_series(self) -> np.ndarray:
        return np.array([s.coop_fraction for s in self.trace])


def _classify(s: np.ndarray) -> str:
    if dynamics.is_homogeneous(s):
        return HOMOGENEOUS_C if s[0] == COOPERATE else HOMOGENEOUS_D
    return MIXED


def run_simulation(cfg: RunConfig, g: Graph,
                   rng: np.random.Generator | None = None,
                   initial_strategies: np.ndarray | None = None) -> RunResult:
    """Simulate one replicate on a prepared graph.

    Strategies start C/D with equal probability (or from initial_strategies
    when given). Each generation: payoffs are accumulated, interference
    conditions checked and endowments added, then all strategies update
    synchronously. Deterministic runs freeze as soon as the population is
    homogeneous (state cannot change and no further endowments are paid);
    the frozen state fills the rest of the trace so it always spans the
    full horizon. Stochastic runs never stop early. mean_coop averages the
    trailing stats_window generations.
    """
    expected_n = cfg.network.n if isinstance(cfg.network, NetworkConfig) else None
    if expected_n is not None and g.n != expected_n:
        raise ConfigMismatchError(f"graph has {g.n} nodes, config expects {expected_n}")
    if rng is None:
        rng = np.random.default_rng(cfg.run_seed)

    icfg = cfg.interference
    metrics = interference.node_centrality(g, icfg.centrality) if interference.NI in icfg.schemes else None
    deterministic = cfg.update.rule == DETERMINISTIC
    horizon = cfg.horizon

    if initial_strategies is not None:
        if len(initial_strategies) != g.n:
            raise ConfigMismatchError(
                f"initial strategies have length {len(initial_strategies)}, graph has {g.n}")
        s = np.array(initial_strategies, dtype=np.int8)
    else:
        s = game.random_strategies(g.n, rng)
    trace: list[GenerationStats] = []
    absorbed_at = None

    for gen in range(horizon):
        if deterministic and dynamics.is_homogeneous(s):
            absorbed_at = gen
            break
        scores = game.accumulate_scores(g, s, cfg.payoff)
        invested, cost = 0, 0.0
        if icfg.active:
            eligible = interference.eligible_set(g, metrics, s, icfg)
            scores, record = interference.apply_interference(
                scores, eligible, icfg.theta, generation=gen)
            invested, cost = record.invested, record.cost
        trace.append(GenerationStats(gen, game.coop_fraction(s), invested, cost))
        s = dynamics.step(g, s, scores, cfg.update, rng)

    if absorbed_at is not None:
        frozen = game.coop_fraction(s)
        for gen in range(absorbed_at, horizon):
            trace.append(GenerationStats(gen, frozen, 0, 0.0))

    window = np.array([st.coop_fraction for st in trace[-cfg.stats_window:]])
    return RunResult(
        trace=trace,
        total_cost=float(sum(st.cost for st in trace)),
        mean_coop=float(window.mean()),
        absorbed_at=absorbed_at,
        final_state=_classify(s),
        run_seed=cfg.run_seed,
    )


@dataclass(frozen=True)
class SweepSummary:
    """Mean/std of per-replicate cooperation and total cost at one grid point."""

    config: RunConfig
    replicates: int
    coop_mean: float
    coop_std: float
    cost_mean: float
    cost_std: float
    master_seed: int
    graph_seeds: tuple
    run_seeds: tuple


def _sample_std(values: np.ndarray) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1))


def graph_seeds_for(master_seed: int, graphs: int) -> list[int]:
    return [derive_seed(master_seed, _GRAPH_STREAM, i) for i in range(graphs)]


def _graph_for(cfg: RunConfig, graph_seed: int) -> Graph:
    if isinstance(cfg.network, NetworkConfig):
        return network.generate(replace(cfg.network, seed=graph_seed))
    return network.load_graph(cfg.network)


def _point_graph_task(args):
    """One (grid point, graph) cell: all realisations on one generated graph."""
    cfg, graph_seed, run_seeds = args
    g = _graph_for(cfg, graph_seed)
    out = []
    for run_seed in run_seeds:
        result = run_simulation(replace(cfg, run_seed=run_seed), g)
        out.append((result.mean_coop, result.total_cost))
    return out


def _task_list(cfgs, master_seed, graphs, realisations):
    gseeds = graph_seeds_for(master_seed, graphs)
    tasks = []
    for point_idx, cfg in enumerate(cfgs):
        for graph_idx, gseed in enumerate(gseeds):
            run_seeds = [derive_seed(master_seed, _RUN_STREAM, point_idx, graph_idx, r)
                         for r in range(realisations)]
            tasks.append((cfg, gseed, run_seeds))
    return gseeds, tasks


def sweep(cfgs: list[RunConfig], master_seed: int,
          graphs: int = DEFAULT_GRAPHS, realisations: int = DEFAULT_REALISATIONS,
          jobs: int = 1) -> list[SweepSummary]:
    """Evaluate every configuration over graphs x realisations replicates.

    Workers only parallelise independent replicates; results are reduced in
    (point, graph, realisation) order, so output is identical for any jobs.
    """
    gseeds, tasks = _task_list(cfgs, master_seed, graphs, realisations)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_task = list(pool.map(_point_graph_task, tasks, chunksize=1))
    else:
        per_task = [_point_graph_task(t) for t in tasks]

    summaries = []
    task_iter = iter(zip(tasks, per_task))
    for cfg in cfgs:
        coop, cost, run_seeds = [], [], []
        for _ in range(graphs):
            (_, _, seeds), results = next(task_iter)
            run_seeds.extend(seeds)
            for mean_coop, total_cost in results:
                coop.append(mean_coop)
                cost.append(total_cost)
        coop = np.array(coop)
        cost = np.array(cost)
        summaries.append(SweepSummary(
            config=cfg,
            replicates=len(coop),
            coop_mean=float(coop.mean()),
            coop_std=_sample_std(coop),
            cost_mean=float(cost.mean()),
            cost_std=_sample_std(cost),
            master_seed=master_seed,
            graph_seeds=tuple(gseeds),
            run_seeds=tuple(run_seeds),
        ))
    return summaries


def run_parameter_point(cfg: RunConfig, master_seed: int,
                        graphs: int = DEFAULT_GRAPHS,
                        realisations: int = DEFAULT_REALISATIONS,
                        jobs: int = 1) -> SweepSummary:
    """Replicate one configuration over pre-seeded graphs and fresh initial states."""
    return sweep([cfg], master_seed, graphs=graphs, realisations=realisations,
                 jobs=jobs)[0]


@dataclass(frozen=True)
class FrontierRow:
    """Cheapest configuration reaching a cooperation target, if any does."""

    target: float
    summary: SweepSummary | None

    @property
    def reachable(self) -> bool:
        return self.summary is not None


def _frontier_key(summary: SweepSummary):
    icfg = summary.config.interference

    def missing_last(v):
        return (v is None, v if v is not None else 0.0)

    return (summary.cost_mean, "+".join(icfg.schemes), icfg.theta or 0.0,
            missing_last(icfg.p_c), missing_last(icfg.n_c), missing_last(icfg.c_I))


def efficiency_frontier(summaries: list[SweepSummary],
                        coop_targets: list[float]) -> list[FrontierRow]:
    """Per target, the minimum-mean-cost configuration with coop_mean >= target.

    Configurations that never distribute endowments (zero mean cost) are
    excluded. Cost ties break lexicographically on (schemes, theta,
    thresholds). Unreachable targets yield a row with summary=None.
    """
    candidates = sorted((s for s in summaries if s.cost_mean > 0.0), key=_frontier_key)
    rows = []
    for target in coop_targets:
        chosen = next((s for s in candidates if s.coop_mean >= target), None)
        rows.append(FrontierRow(target=target, summary=chosen))
    return rows
