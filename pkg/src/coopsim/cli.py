"""Command-line surface: JSON configs in, CSV tables out.

Subcommands: gen-net (write a graph file), run (one replicate, per-generation
trace), sweep (grid of parameter points), baseline (single no-interference
point), frontier (minimum-cost configurations per cooperation target).
Every output CSV gets a sibling <out>.meta.json echoing the resolved
configuration and seeds needed to reproduce it bit-exactly.
"""

from __future__ import annotations

import argparse
import copy
import itertools
import json
import os
import sys
from dataclasses import asdict

import numpy as np

from . import __version__, engine, network
from .dynamics import STOCHASTIC, UpdateRuleConfig
from .engine import FrontierRow, RunConfig, SweepSummary
from .game import PayoffParams
from .interference import InterferenceConfig
from .network import NetworkConfig

SWEEP_HEADER = ("model,n,b,update_rule,K,schemes,theta,p_c,n_c,c_I,"
                "replicates,coop_mean,coop_std,cost_mean,cost_std,master_seed")
FRONTIER_HEADER = ("target,status,model,n,b,update_rule,K,schemes,theta,p_c,n_c,c_I,"
                   "coop_mean,cost_mean,cost_std,master_seed")
TRACE_HEADER = "generation,coop_fraction,invested_count,generation_cost"

SEED_ENV_VAR = "COOPSIM_SEED"

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


class ConfigError(Exception):
    """Malformed or inconsistent configuration input."""


# ---------------------------------------------------------------------------
# config parsing

def _fmt(x) -> str:
    """9-significant-digit float field; empty for missing values."""
    if x is None:
        return ""
    return format(float(x), ".9g")


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc


def apply_overrides(config: dict, overrides: list[str]) -> dict:
    """Apply repeatable --set key=value pairs; keys use dotted paths."""
    config = copy.deepcopy(config)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = config
        parts = key.split(".")
        for part in parts[:-1]:
            if not isinstance(node.get(part), dict):
                node[part] = {}
            node = node[part]
        node[parts[-1]] = value
    return config


def _build(cls, payload: dict, where: str):
    try:
        return cls(**payload)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad {where} config: {exc}") from exc


def parse_interference(payload: dict | None) -> InterferenceConfig:
    payload = dict(payload or {})
    if "schemes" in payload:
        payload["schemes"] = tuple(payload["schemes"])
    return _build(InterferenceConfig, payload, "interference")


_RUN_KEYS = ("network", "payoff", "update", "interference",
             "generations", "stats_window", "run_seed")
_POINT_KEYS = ("network", "payoff", "update", "generations", "stats_window",
               "graphs", "realisations", "master_seed")


def _check_keys(payload: dict, allowed: tuple, where: str) -> None:
    unknown = sorted(set(payload) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown {where} config keys: {unknown}")


def parse_run_config(payload: dict) -> RunConfig:
    """Build a RunConfig from its JSON object form."""
    _check_keys(payload, _RUN_KEYS, "run")
    payload = dict(payload)
    net = payload.get("network")
    if isinstance(net, dict):
        if "graph_file" in net:
            net = net["graph_file"]
        else:
            net = _build(NetworkConfig, net, "network")
    elif not isinstance(net, str):
        raise ConfigError("network must be an object or a graph file path")
    kwargs = {
        "network": net,
        "payoff": _build(PayoffParams, payload.get("payoff", {}), "payoff"),
        "update": _build(UpdateRuleConfig, payload.get("update", {}), "update"),
        "interference": parse_interference(payload.get("interference")),
    }
    for key in ("generations", "stats_window", "run_seed"):
        if key in payload:
            kwargs[key] = payload[key]
    return _build(RunConfig, kwargs, "run")


def _as_list(value):
    return value if isinstance(value, list) else [value]


def expand_grid(base: dict, grid: list[dict]) -> list[RunConfig]:
    """Expand grid groups into concrete configurations.

    Each group names a scheme set and per-parameter value lists; the group
    expands to the cartesian product of the lists it provides. An empty
    scheme set expands to the single baseline point.
    """
    configs = []
    for group in grid:
        group = dict(group)
        schemes = tuple(group.pop("schemes", ()))
        axes = {key: _as_list(group.pop(key)) for key in ("theta", "p_c", "n_c", "c_I")
                if key in group}
        if group:
            raise ConfigError(f"unknown grid keys: {sorted(group)}")
        if not schemes:
            if axes:
                raise ConfigError("baseline grid group cannot carry thresholds")
            configs.append(parse_run_config({**base, "interference": {}}))
            continue
        names = sorted(axes)
        for values in itertools.product(*(axes[k] for k in names)):
            icfg = {"schemes": list(schemes), **dict(zip(names, values))}
            configs.append(parse_run_config({**base, "interference": icfg}))
    if not configs:
        raise ConfigError("grid expanded to zero configurations")
    return configs


def resolve_master_seed(config: dict, where: str = "config") -> int:
    seed = config.get("master_seed")
    if seed is None:
        env = os.environ.get(SEED_ENV_VAR)
        if env is None:
            raise ConfigError(
                f"no master_seed in {where} and {SEED_ENV_VAR} is not set")
        try:
            seed = int(env)
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from exc
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError(f"master_seed must be a non-negative integer, got {seed!r}")
    return seed


# ---------------------------------------------------------------------------
# CSV serialisation

def _interference_fields(icfg: InterferenceConfig) -> list[str]:
    return ["+".join(icfg.schemes), _fmt(icfg.theta), _fmt(icfg.p_c),
            _fmt(icfg.n_c), _fmt(icfg.c_I)]


def _config_fields(cfg: RunConfig) -> list[str]:
    net = cfg.network
    model = net.model if isinstance(net, NetworkConfig) else "file"
    n = str(net.n) if isinstance(net, NetworkConfig) else ""
    K = _fmt(cfg.update.K) if cfg.update.rule == STOCHASTIC else ""
    return [model, n, _fmt(cfg.payoff.b), cfg.update.rule, K,
            *_interference_fields(cfg.interference)]


def summary_row(summary: SweepSummary) -> str:
    return ",".join([
        *_config_fields(summary.config),
        str(summary.replicates),
        _fmt(summary.coop_mean), _fmt(summary.coop_std),
        _fmt(summary.cost_mean), _fmt(summary.cost_std),
        str(summary.master_seed),
    ])


def write_sweep_csv(summaries: list[SweepSummary], path) -> None:
    """One row per parameter point under the fixed sweep header."""
    try:
        with open(path, "w") as fh:
            fh.write(SWEEP_HEADER + "\n")
            for summary in summaries:
                fh.write(summary_row(summary) + "\n")
    except OSError as exc:
        raise RuntimeError(f"cannot write sweep CSV {path}: {exc}") from exc


def _float_or_none(field: str):
    return float(field) if field else None


def read_sweep_csv(path) -> list[SweepSummary]:
    """Parse a sweep CSV back into summaries (seeds beyond the master are not kept)."""
    with open(path) as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if not lines or lines[0] != SWEEP_HEADER:
        raise ConfigError(f"{path} is not a sweep CSV (bad header)")
    summaries = []
    for line in lines[1:]:
        fields = line.split(",")
        if len(fields) != len(SWEEP_HEADER.split(",")):
            raise ConfigError(f"malformed sweep CSV row: {line!r}")
        (model, n, b, rule, K, schemes, theta, p_c, n_c, c_I,
         replicates, coop_mean, coop_std, cost_mean, cost_std, master_seed) = fields
        cfg = RunConfig(
            network=NetworkConfig(model=model, n=int(n)),
            payoff=PayoffParams(b=float(b)),
            update=UpdateRuleConfig(rule=rule, K=float(K) if K else 0.1),
            interference=InterferenceConfig(
                schemes=tuple(schemes.split("+")) if schemes else (),
                theta=_float_or_none(theta), p_c=_float_or_none(p_c),
                n_c=_float_or_none(n_c), c_I=_float_or_none(c_I)),
        )
        summaries.append(SweepSummary(
            config=cfg, replicates=int(replicates),
            coop_mean=float(coop_mean), coop_std=float(coop_std),
            cost_mean=float(cost_mean), cost_std=float(cost_std),
            master_seed=int(master_seed), graph_seeds=(), run_seeds=()))
    return summaries


def write_frontier_csv(rows: list[FrontierRow], path) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(FRONTIER_HEADER + "\n")
            for row in rows:
                if row.summary is None:
                    fields = [_fmt(row.target), "unreachable"] + [""] * 13
                else:
                    s = row.summary
                    fields = [_fmt(row.target), "ok", *_config_fields(s.config),
                              _fmt(s.coop_mean), _fmt(s.cost_mean), _fmt(s.cost_std),
                              str(s.master_seed)]
                fh.write(",".join(fields) + "\n")
    except OSError as exc:
        raise RuntimeError(f"cannot write frontier CSV {path}: {exc}") from exc


def write_trace_csv(result, path) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(TRACE_HEADER + "\n")
            for st in result.trace:
                fh.write(f"{st.generation},{_fmt(st.coop_fraction)},"
                         f"{st.invested},{_fmt(st.cost)}\n")
    except OSError as exc:
        raise RuntimeError(f"cannot write trace CSV {path}: {exc}") from exc


def _jsonable(obj):
    if isinstance(obj, RunConfig):
        d = asdict(obj)
        if isinstance(obj.network, NetworkConfig):
            d["network"] = asdict(obj.network)
        return d
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def write_meta(path, command: str, **payload) -> None:
    """Sibling provenance file for an output artifact."""
    meta = {"tool": "coopsim", "version": __version__, "command": command}
    meta.update(payload)
    with open(str(path) + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, default=_jsonable)
        fh.write("\n")


# ---------------------------------------------------------------------------
# subcommands

def _cmd_gen_net(args) -> int:
    cfg = _build(NetworkConfig, {
        "model": args.model.upper(), "n": args.n, "m0": args.m0, "m": args.m,
        "seed": args.seed,
    }, "network")
    g = network.generate(cfg)
    network.save_graph(g, args.out)
    write_meta(args.out, "gen-net", config=asdict(cfg),
               edges=g.n_edges, average_degree=g.average_degree)
    return EXIT_OK


def _cmd_run(args) -> int:
    payload = apply_overrides(_load_json(args.config), args.set)
    cfg = parse_run_config(payload)
    if isinstance(cfg.network, str):
        g = network.load_graph(cfg.network)
    else:
        g = network.generate(cfg.network)
    result = engine.run_simulation(cfg, g)
    write_trace_csv(result, args.out)
    write_meta(args.out, "run", config=cfg, total_cost=result.total_cost,
               mean_coop=result.mean_coop, absorbed_at=result.absorbed_at,
               final_state=result.final_state, run_seed=result.run_seed)
    return EXIT_OK


def _replication(payload: dict) -> tuple[int, int]:
    graphs = payload.get("graphs", engine.DEFAULT_GRAPHS)
    realisations = payload.get("realisations", engine.DEFAULT_REALISATIONS)
    if not (isinstance(graphs, int) and graphs >= 1
            and isinstance(realisations, int) and realisations >= 1):
        raise ConfigError("graphs and realisations must be positive integers")
    return graphs, realisations


def _base_payload(payload: dict) -> dict:
    return {key: payload[key]
            for key in ("network", "payoff", "update", "generations", "stats_window")
            if key in payload}


def _cmd_sweep(args) -> int:
    payload = apply_overrides(_load_json(args.config), args.set)
    _check_keys(payload, _POINT_KEYS + ("grid",), "sweep")
    master_seed = resolve_master_seed(payload)
    graphs, realisations = _replication(payload)
    grid = payload.get("grid")
    if not isinstance(grid, list):
        raise ConfigError("sweep config needs a 'grid' list")
    cfgs = expand_grid(_base_payload(payload), grid)
    summaries = engine.sweep(cfgs, master_seed, graphs=graphs,
                             realisations=realisations, jobs=args.jobs)
    write_sweep_csv(summaries, args.out)
    write_meta(args.out, "sweep", config=payload, master_seed=master_seed,
               graph_seeds=list(summaries[0].graph_seeds), points=len(summaries),
               replicates_per_point=graphs * realisations, jobs=args.jobs)
    return EXIT_OK


def _cmd_baseline(args) -> int:
    payload = apply_overrides(_load_json(args.config), args.set)
    _check_keys(payload, _POINT_KEYS, "baseline")
    master_seed = resolve_master_seed(payload)
    graphs, realisations = _replication(payload)
    cfg = parse_run_config({**_base_payload(payload), "interference": {}})
    summary = engine.run_parameter_point(cfg, master_seed, graphs=graphs,
                                         realisations=realisations, jobs=args.jobs)
    write_sweep_csv([summary], args.out)
    write_meta(args.out, "baseline", config=payload, master_seed=master_seed,
               graph_seeds=list(summary.graph_seeds), jobs=args.jobs)
    return EXIT_OK


def _cmd_frontier(args) -> int:
    summaries = read_sweep_csv(args.infile)
    try:
        targets = [float(t) for t in args.targets.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --targets list: {args.targets!r}") from exc
    if not targets:
        raise ConfigError("--targets must name at least one cooperation target")
    rows = engine.efficiency_frontier(summaries, targets)
    write_frontier_csv(rows, args.out)
    write_meta(args.out, "frontier", source=str(args.infile), targets=targets,
               source_master_seeds=sorted({s.master_seed for s in summaries}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coopsim",
        description="Reward-interference experiments for the Prisoner's Dilemma "
                    "on scale-free networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-net", help="generate a network and write graph JSON")
    p.add_argument("--model", required=True, choices=["ba", "dms", "BA", "DMS"])
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--m0", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_net)

    p = sub.add_parser("run", help="single replicate, per-generation CSV trace")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("sweep", help="replicated grid of parameter points")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("baseline", help="no-interference reference point")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("frontier", help="minimum-cost rows per cooperation target")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--targets", required=True,
                   help="comma-separated cooperation targets, e.g. 0.5,0.75,0.9")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_frontier)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"coopsim: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"coopsim: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
