"""
Two tours
=========

Red/blue colorings whose two tours approximately minimise the sum (3 beta),
the maximum (6 beta) or the heaviest edge (18).

The sum and max variants cut an approximate tour of all points into an
even number of arcs, colour the arcs alternately, keep the feasible
results plus one random feasible coloring, and return the candidate whose
two tours are cheapest in total. The bottleneck variant folds the two
Hamiltonian paths of the metric bottleneck 2-MST algorithm into cycles.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterator, Optional, Tuple

import numpy as np

from .config import TOLERANCE
from .errors import InvariantError, UsageError
from .graph_primitives import (
    Tour,
    christofides_tour,
    double_tree_tour,
    exact_tsp,
    fold_path_to_cycle,
    minimum_spanning_tree,
)
from .instance_model import Coloring, PairInstance
from .reports import TspReport
from .two_mst import bottleneck_2mst_metric

logger = logging.getLogger(__name__)

SUBROUTINES = ("auto", "christofides", "exact", "double_tree")

# Approximation factor each tour subroutine guarantees on its own
SUBROUTINE_BETA = {"christofides": 1.5, "exact": 1.0, "double_tree": 2.0}

_TOUR_BUILDERS: dict = {
    "christofides": christofides_tour,
    "exact": exact_tsp,
    "double_tree": double_tree_tour,
}


@dataclass(frozen=True)
class TspParams:
    """
    Args:
        mu: Separability parameter in (0, 1/4)
        beta: Approximation factor assumed for the tour subroutine (> 1)
        cap_k: Optional even cap on the number of arcs; below two_k the
            guarantee is void
        seed: Seed for the random feasible candidate
        subroutine: Tour subroutine; "auto" picks Christofides, or the
            double tree on pseudometric instances
        workers: Threads used to evaluate candidates
    """

    mu: float = 1 / 12
    beta: float = 1.5
    cap_k: Optional[int] = None
    seed: int = 0
    subroutine: str = "auto"
    workers: int = 1

    def __post_init__(self):
        if not 0 < self.mu < 0.25:
            raise UsageError(f"mu must lie in (0, 1/4), got {self.mu}")
        if not self.beta > 1:
            raise UsageError(f"beta must exceed 1, got {self.beta}")
        if self.cap_k is not None and (self.cap_k < 2 or self.cap_k % 2):
            raise UsageError(f"cap_k must be an even integer >= 2, got {self.cap_k}")
        if self.subroutine not in SUBROUTINES:
            raise UsageError(f"unknown tour subroutine {self.subroutine!r}")
        if self.workers < 1:
            raise UsageError("workers must be at least 1")

    def resolve(self, inst: PairInstance) -> Tuple[str, float]:
        """Concrete subroutine and the beta the guarantee is computed with."""
        name = self.subroutine
        if name == "auto":
            name = "double_tree" if inst.metric.pseudometric else "christofides"
        return name, max(self.beta, SUBROUTINE_BETA[name])

    def two_k(self, beta: Optional[float] = None) -> int:
        """Largest even integer not exceeding (2 + 1/mu) * beta."""
        bound = math.floor((2 + 1 / self.mu) * (beta or self.beta) + TOLERANCE)
        return bound - bound % 2

    def max_cuts(self, beta: Optional[float] = None) -> int:
        return self.cap_k if self.cap_k is not None else self.two_k(beta)

    def guarantee_valid(self, beta: Optional[float] = None) -> bool:
        return self.cap_k is None or self.cap_k >= self.two_k(beta)


def tour_decomposition_colorings(t: Tour, max_cuts: int, inst: PairInstance) -> Iterator[Coloring]:
    """
    Remove 2j tour edges (2 <= 2j <= min(max_cuts, tour length)) and colour
    the resulting arcs alternately, red on the arc holding point 0. Yields
    each distinct feasible coloring once.
    """
    if max_cuts < 2 or max_cuts % 2:
        raise UsageError(f"max_cuts must be an even integer >= 2, got {max_cuts}")
    order = np.asarray(t.order)
    m = len(order)
    if sorted(order.tolist()) != inst.point_ids:
        raise UsageError("tour must visit every point exactly once")
    position = np.empty(m, dtype=np.int64)
    position[order] = np.arange(m)
    first = np.array([a for a, _ in inst.pairs])
    second = np.array([b for _, b in inst.pairs])
    start = position[0]

    seen = set()
    for size in range(2, min(max_cuts, m) + 1, 2):
        for cuts in combinations(range(m), size):
            # edge c joins positions c and c+1; parity counts cuts passed
            steps = np.zeros(m + 1, dtype=np.int64)
            np.add.at(steps, np.asarray(cuts) + 1, 1)
            parity = np.cumsum(steps[:m]) % 2
            if np.any(parity[position[first]] == parity[position[second]]):
                continue
            is_red = parity == parity[start]
            red = frozenset(order[is_red].tolist())
            if red in seen:
                continue
            seen.add(red)
            yield Coloring(red, frozenset(order[~is_red].tolist()))


def random_feasible_coloring(inst: PairInstance, seed: int) -> Coloring:
    rng = np.random.default_rng(seed)
    flips = rng.integers(0, 2, size=inst.n)
    red = [pair[int(f)] for pair, f in zip(inst.pairs, flips)]
    blue = [pair[1 - int(f)] for pair, f in zip(inst.pairs, flips)]
    return Coloring.of(red, blue)


@dataclass(frozen=True)
class _Candidate:
    coloring: Coloring
    red_tour: Tour
    blue_tour: Tour

    @property
    def key(self):
        return (self.red_tour.cost + self.blue_tour.cost, self.coloring.sort_key())


def _best_candidate(inst: PairInstance, params: TspParams):
    if inst.n < 2:
        raise UsageError(f"2-TSP needs at least two pairs, got n={inst.n}")
    name, beta = params.resolve(inst)
    build: Callable = _TOUR_BUILDERS[name]
    tour = build(inst.point_ids, inst)
    candidates = list(tour_decomposition_colorings(tour, params.max_cuts(beta), inst))
    decomposed = len(candidates)
    candidates.append(random_feasible_coloring(inst, params.seed))

    def evaluate(c: Coloring) -> _Candidate:
        return _Candidate(c, build(c.red, inst), build(c.blue, inst))

    if params.workers > 1:
        with ThreadPoolExecutor(max_workers=params.workers) as pool:
            evaluated = list(pool.map(evaluate, candidates))
    else:
        evaluated = [evaluate(c) for c in candidates]
    best = min(evaluated, key=lambda c: c.key)
    logger.debug(
        "2-TSP: %s tour, %d cuts max, %d decomposition colorings + 1 random",
        name, params.max_cuts(beta), decomposed,
    )
    return best, len(candidates), name, beta


def _tour_lower_bound(inst: PairInstance) -> float:
    tree = minimum_spanning_tree(inst.point_ids, inst)
    return tree.cost - tree.heaviest_edge().w


def minsum_2tsp(inst: PairInstance, params: Optional[TspParams] = None) -> TspReport:
    params = params or TspParams()
    best, count, name, beta = _best_candidate(inst, params)
    return TspReport(
        algorithm="minsum_2tsp",
        objective="sum",
        coloring=best.coloring,
        red_tour=best.red_tour,
        blue_tour=best.blue_tour,
        guarantee_factor=3 * beta if params.guarantee_valid(beta) else None,
        lower_bound=_tour_lower_bound(inst),
        enumerated_count=count,
        subroutine=name,
    )


def minmax_2tsp(inst: PairInstance, params: Optional[TspParams] = None) -> TspReport:
    """Same coloring as minsum_2tsp, judged by the costlier tour."""
    params = params or TspParams()
    best, count, name, beta = _best_candidate(inst, params)
    return TspReport(
        algorithm="minmax_2tsp",
        objective="max",
        coloring=best.coloring,
        red_tour=best.red_tour,
        blue_tour=best.blue_tour,
        guarantee_factor=6 * beta if params.guarantee_valid(beta) else None,
        lower_bound=_tour_lower_bound(inst) / 2,
        enumerated_count=count,
        subroutine=name,
    )


def bottleneck_2tsp(inst: PairInstance) -> TspReport:
    if inst.n < 2:
        raise UsageError(f"2-TSP needs at least two pairs, got n={inst.n}")
    paths = bottleneck_2mst_metric(inst)
    red_tour = fold_path_to_cycle(paths.red_path, inst)
    blue_tour = fold_path_to_cycle(paths.blue_path, inst)
    for path, tour in ((paths.red_path, red_tour), (paths.blue_path, blue_tour)):
        limit = 2 * path.bottleneck
        if tour.bottleneck > limit + TOLERANCE * max(limit, 1.0):
            raise InvariantError(f"folded tour bottleneck {tour.bottleneck} exceeds {limit}")
    return TspReport(
        algorithm="bottleneck_2tsp",
        objective="bottleneck",
        coloring=paths.coloring,
        red_tour=red_tour,
        blue_tour=blue_tour,
        guarantee_factor=18.0,
        lower_bound=paths.lower_bound,
    )
