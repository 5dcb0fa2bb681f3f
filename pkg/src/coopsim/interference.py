"""Reward-based external interference: who gets the endowment, and what it costs.

Three eligibility schemes, all restricted to cooperators:

  POP  invest in every cooperator while the global cooperator fraction is
       at most p_c (all-or-nothing per generation);
  NEB  invest in cooperators whose neighborhood cooperator fraction is at
       most n_c;
  NI   invest in cooperators whose degree percentile is at least c_I.

Several schemes may be active at once; a node is paid the endowment theta
at most once per generation regardless of how many schemes it satisfies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import COOPERATE
from .network import Graph, NodeMetrics, degree_percentiles

POP = "POP"
NEB = "NEB"
NI = "NI"

_SCHEMES = (POP, NEB, NI)

PERCENTILE = "percentile"
DEGREE_FRACTION = "degree_fraction"


@dataclass(frozen=True)
class InterferenceConfig:
    """Active schemes plus their thresholds; empty scheme set means baseline.

    composition controls how multiple active schemes combine: "all" pays a
    node only if every active scheme's condition holds, "any" if at least
    one does. centrality selects the NI normalization: percentile rank of
    degree (default) or degree divided by the maximum degree.
    """

    schemes: tuple = ()
    theta: float | None = None
    p_c: float | None = None
    n_c: float | None = None
    c_I: float | None = None
    composition: str = "all"
    centrality: str = PERCENTILE

    def __post_init__(self):
        schemes = tuple(dict.fromkeys(self.schemes))
        object.__setattr__(self, "schemes", schemes)
        for scheme in schemes:
            if scheme not in _SCHEMES:
                raise ValueError(f"unknown interference scheme: {scheme!r}")
        if self.composition not in ("all", "any"):
            raise ValueError(f"composition must be 'all' or 'any', got {self.composition!r}")
        if self.centrality not in (PERCENTILE, DEGREE_FRACTION):
            raise ValueError(f"unknown centrality mode: {self.centrality!r}")
        if schemes:
            if self.theta is None or self.theta <= 0:
                raise ValueError("theta must be > 0 when any scheme is active")
        elif self.theta is not None:
            raise ValueError("theta given without any active scheme")
        for scheme, name, value in ((POP, "p_c", self.p_c),
                                    (NEB, "n_c", self.n_c),
                                    (NI, "c_I", self.c_I)):
            if scheme in schemes:
                if value is None:
                    raise ValueError(f"{scheme} is active but {name} is missing")
                if not 0.0 <= value <= 1.0:
                    raise ValueError(f"{name} must lie in [0, 1], got {value}")
            elif value is not None:
                raise ValueError(f"{name} given but {scheme} is not active")

    @property
    def active(self) -> bool:
        return bool(self.schemes)


@dataclass(frozen=True)
class InvestmentRecord:
    """Accounting for one generation of interference."""

    generation: int
    invested: int
    cost: float


def pop_eligible(s: np.ndarray, p_c: float) -> np.ndarray:
    """All cooperators if the cooperator fraction is at most p_c, else nobody."""
    coop = s == COOPERATE
    if np.count_nonzero(coop) / len(s) <= p_c:
        return coop
    return np.zeros(len(s), dtype=bool)


def neb_eligible(g: Graph, s: np.ndarray, n_c: float) -> np.ndarray:
    """Cooperators whose fraction of cooperating neighbors is at most n_c."""
    nbr_coop = np.add.reduceat((s[g.indices] == COOPERATE).astype(np.float64),
                               g.indptr[:-1])
    return (s == COOPERATE) & (nbr_coop / g.degrees <= n_c)


def ni_eligible(metrics: NodeMetrics, s: np.ndarray, c_I: float) -> np.ndarray:
    """Cooperators whose centrality is at least c_I."""
    return (s == COOPERATE) & (metrics.percentile >= c_I)


def node_centrality(g: Graph, mode: str = PERCENTILE) -> NodeMetrics:
    """Centrality used by NI under the selected normalization."""
    if mode == PERCENTILE:
        return degree_percentiles(g)
    values = g.degrees / g.degrees.max()
    values.setflags(write=False)
    return NodeMetrics(percentile=values)


def eligible_set(g: Graph, metrics: NodeMetrics | None, s: np.ndarray,
                 cfg: InterferenceConfig) -> np.ndarray:
    """Boolean mask of nodes to pay this generation.

    Active schemes compose per cfg.composition; an empty scheme set yields
    an empty mask. Each eligible node appears once, so the endowment is
    paid at most once however many schemes it satisfies.
    """
    if not cfg.schemes:
        return np.zeros(g.n, dtype=bool)
    masks = []
    for scheme in cfg.schemes:
        if scheme == POP:
            masks.append(pop_eligible(s, cfg.p_c))
        elif scheme == NEB:
            masks.append(neb_eligible(g, s, cfg.n_c))
        else:
            if metrics is None:
                metrics = node_centrality(g, cfg.centrality)
            masks.append(ni_eligible(metrics, s, cfg.c_I))
    combine = np.logical_and if cfg.composition == "all" else np.logical_or
    out = masks[0]
    for mask in masks[1:]:
        out = combine(out, mask)
    return out


def apply_interference(scores: np.ndarray, eligible: np.ndarray, theta: float,
                       generation: int = 0) -> tuple[np.ndarray, InvestmentRecord]:
    """Add theta to each eligible node's score; returns new scores and the record."""
    if theta <= 0:
        raise ValueError(f"theta must be > 0, got {theta}")
    invested = int(np.count_nonzero(eligible))
    new_scores = scores + np.where(eligible, theta, 0.0)
    return new_scores, InvestmentRecord(generation=generation, invested=invested,
                                        cost=theta * invested)
