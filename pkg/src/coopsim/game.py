"""One-shot weak Prisoner's Dilemma payoffs accumulated over graph neighborhoods.

Payoff matrix for the row player (C and D rows/columns):

        C    D
    C   1    0
    D   b    0

with temptation 1 < b <= 2. Strategies are stored as int8 vectors with
COOPERATE = 1 and DEFECT = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import Graph

COOPERATE = 1
DEFECT = 0


@dataclass(frozen=True)
class PayoffParams:
    b: float = 1.8

    def __post_init__(self):
        if not 1.0 < self.b <= 2.0:
            raise ValueError(f"temptation must satisfy 1 < b <= 2, got b={self.b}")


def random_strategies(n: int, rng: np.random.Generator) -> np.ndarray:
    """Each node independently C or D with equal probability."""
    return rng.integers(0, 2, size=n, dtype=np.int8)


def coop_fraction(s: np.ndarray) -> float:
    return float(np.count_nonzero(s == COOPERATE)) / len(s)


def pairwise_payoff(s_row: int, s_col: int, p: PayoffParams) -> float:
    """Payoff of the row player in a single encounter."""
    if s_col == DEFECT:
        return 0.0
    return 1.0 if s_row == COOPERATE else p.b


def accumulate_scores(g: Graph, s: np.ndarray, p: PayoffParams) -> np.ndarray:
    """Sum of one-shot payoffs of each node against all its neighbors.

    A cooperator earns 1 per cooperating neighbor, a defector earns b per
    cooperating neighbor; defecting neighbors contribute nothing.
    """
    if len(s) != g.n:
        raise ValueError(f"strategy vector length {len(s)} != graph size {g.n}")
    # Per-node count of cooperating neighbors; segments are never empty
    # because every node has degree >= 1.
    nbr_is_coop = (s[g.indices] == COOPERATE).astype(np.float64)
    coop_neighbors = np.add.reduceat(nbr_is_coop, g.indptr[:-1])
    return np.where(s == COOPERATE, 1.0, p.b) * coop_neighbors
