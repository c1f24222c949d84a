"""
Exact oracle
============

Brute-force optima for the nine (structure, objective) problems on small
instances. Enumerates every feasible coloring up to colour swap and solves
each side exactly.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_LIMITS, Limits
from .errors import CapacityError, InfeasibleError, UsageError
from .graph_primitives import (
    as_weights,
    bottleneck_perfect_matching,
    exact_min_weight_perfect_matching,
    exact_tsp,
    minimum_spanning_tree,
)
from .instance_model import Coloring, PairInstance, PointId, canonical_pairs
from .reports import OBJECTIVES, coloring_to_dict

logger = logging.getLogger(__name__)

STRUCTURES = ("mst", "matching", "tsp")


@dataclass(frozen=True)
class ProblemSpec:
    structure: str
    objective: str

    def __post_init__(self):
        if self.structure not in STRUCTURES:
            raise UsageError(f"structure must be one of {STRUCTURES}, got {self.structure!r}")
        if self.objective not in OBJECTIVES:
            raise UsageError(f"objective must be one of {OBJECTIVES}, got {self.objective!r}")

    @property
    def label(self) -> str:
        return f"{self.structure}/{self.objective}"


ALL_SPECS = tuple(ProblemSpec(s, o) for s in STRUCTURES for o in OBJECTIVES)


@dataclass(frozen=True)
class OracleResult:
    value: float
    argmin: Coloring
    explored_count: int

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "argmin": coloring_to_dict(self.argmin),
            "explored_count": self.explored_count,
        }


def feasible_colorings(
    n: int, pairs: Optional[Sequence[Tuple[PointId, PointId]]] = None
) -> Iterator[Coloring]:
    """
    All 2^(n-1) feasible colorings with the first point of pair 0 red.
    Bit i-1 of the counter puts the second point of pair i on the red side.
    """
    if n < 1:
        raise UsageError(f"need at least one pair, got n={n}")
    pairs = canonical_pairs(n) if pairs is None else pairs
    for bits in range(1 << (n - 1)):
        red, blue = [pairs[0][0]], [pairs[0][1]]
        for i in range(1, n):
            a, b = pairs[i]
            if (bits >> (i - 1)) & 1:
                a, b = b, a
            red.append(a)
            blue.append(b)
        yield Coloring.of(red, blue)


def _has_hamiltonian_cycle(adjacent: np.ndarray) -> bool:
    """Bitmask DP over paths starting at node 0."""
    m = len(adjacent)
    nbrs = [sum(1 << j for j in range(m) if adjacent[i, j]) for i in range(m)]
    reach = [0] * (1 << m)
    reach[1] = 1
    for mask in range(1, 1 << m, 2):
        ends = reach[mask]
        while ends:
            v = (ends & -ends).bit_length() - 1
            ends &= ends - 1
            fresh = nbrs[v] & ~mask
            while fresh:
                u = (fresh & -fresh).bit_length() - 1
                fresh &= fresh - 1
                reach[mask | (1 << u)] |= 1 << u
    closing = reach[(1 << m) - 1]
    return bool(closing & nbrs[0])


def bottleneck_tour_value(points: Iterable[PointId], source) -> float:
    """Smallest threshold whose threshold graph is Hamiltonian."""
    pts = sorted(set(int(p) for p in points))
    w = as_weights(source)
    if len(pts) <= 1:
        return 0.0
    d = w[np.ix_(pts, pts)]
    if len(pts) == 2:
        return float(d[0, 1])
    thresholds = np.unique(d[np.triu_indices(len(pts), 1)])
    lo, hi = 0, len(thresholds) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _has_hamiltonian_cycle(d <= thresholds[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(thresholds[lo])


def exact_side_value(
    points: Iterable[PointId], inst: PairInstance, spec: ProblemSpec, limits: Limits = DEFAULT_LIMITS
) -> float:
    pts = sorted(set(int(p) for p in points))
    limit = limits.side_limit(spec.structure)
    if len(pts) > limit:
        raise CapacityError(f"{spec.structure} side limited to {limit} points, got {len(pts)}")
    bottleneck = spec.objective == "bottleneck"

    if spec.structure == "mst":
        tree = minimum_spanning_tree(pts, inst)
        return tree.bottleneck if bottleneck else tree.cost
    if spec.structure == "matching":
        if len(pts) % 2:
            raise InfeasibleError(f"no perfect matching on {len(pts)} points")
        if bottleneck:
            return bottleneck_perfect_matching(pts, inst).bottleneck
        return exact_min_weight_perfect_matching(pts, inst).cost
    if bottleneck:
        return bottleneck_tour_value(pts, inst)
    return exact_tsp(pts, inst, limit=limits.exact_tsp_points).cost


def _aggregate(objective: str, red: float, blue: float) -> float:
    if objective == "sum":
        return red + blue
    return max(red, blue)


def exact_optimum(inst: PairInstance, spec: ProblemSpec, limits: Limits = DEFAULT_LIMITS) -> OracleResult:
    """
    Minimise the aggregated side values over all feasible colorings; ties go
    to the lexicographically smallest red set.
    """
    limit = limits.pair_limit(spec.structure)
    if inst.n > limit:
        raise CapacityError(f"{spec.label} oracle limited to {limit} pairs, got {inst.n}")
    if spec.structure == "matching" and inst.n % 2:
        raise InfeasibleError(f"matching sides need an even n, got n={inst.n}")

    best = None
    explored = 0
    for coloring in feasible_colorings(inst.n, inst.pairs):
        explored += 1
        value = _aggregate(
            spec.objective,
            exact_side_value(coloring.red, inst, spec, limits),
            exact_side_value(coloring.blue, inst, spec, limits),
        )
        key = (value, coloring.sort_key())
        if best is None or key < best[0]:
            best = (key, coloring)
    logger.debug("oracle %s: %d colorings, optimum %g", spec.label, explored, best[0][0])
    return OracleResult(best[0][0], best[1], explored)
