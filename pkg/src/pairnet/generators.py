"""
Instance generators
===================

Seeded random families and the two hardness constructions:

- partition_to_minmax_matching: a Partition instance becomes a min-max
  2-matching instance whose optimum sits near M/2 exactly when the
  multiset splits evenly.
- connected_partition_to_minmax_2mst: a graph becomes a pseudometric
  min-max 2-MST instance with optimum n/2 + 1 exactly when the graph splits
  into two connected halves.

Pair i is always (2i, 2i + 1). A random pairing is realised by permuting
the coordinates over the ids.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .errors import UsageError
from .instance_model import (
    PairInstance,
    canonical_pairs,
    euclidean_space,
    line_space,
    matrix_space,
    metric_closure,
)

FAMILIES = (
    "randomEuclidean",
    "randomMetric",
    "unitLine",
    "randomLine",
    "partitionMatching",
    "connectedPartitionMst",
)


def _require_n(n: int):
    if n < 1:
        raise UsageError(f"need at least one pair, got n={n}")


def random_euclidean(n: int, seed: int, box: float = 1.0) -> PairInstance:
    _require_n(n)
    if box <= 0:
        raise UsageError(f"box must be positive, got {box}")
    rng = np.random.default_rng(seed)
    coords = rng.uniform(0.0, box, size=(2 * n, 2))
    coords = coords[rng.permutation(2 * n)]
    return PairInstance(euclidean_space(coords), canonical_pairs(n))


def random_metric(n: int, seed: int) -> PairInstance:
    """Off-diagonal entries uniform in [1, 2], so every triangle closes."""
    _require_n(n)
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.uniform(1.0, 2.0, size=(2 * n, 2 * n)), 1)
    return PairInstance(matrix_space(upper + upper.T), canonical_pairs(n))


def unit_line(n: int, seed: int) -> PairInstance:
    """Coordinates 0..2n-1, randomly paired."""
    _require_n(n)
    rng = np.random.default_rng(seed)
    xs = rng.permutation(2 * n).astype(np.float64)
    return PairInstance(line_space(xs), canonical_pairs(n))


def random_line(n: int, seed: int, box: float = 1.0) -> PairInstance:
    _require_n(n)
    if box <= 0:
        raise UsageError(f"box must be positive, got {box}")
    rng = np.random.default_rng(seed)
    return PairInstance(line_space(rng.uniform(0.0, box, size=2 * n)), canonical_pairs(n))


def random_k_tuples(n: int, k: int, seed: int) -> list:
    """n tuples of k distinct integer line coordinates from 0..kn-1."""
    _require_n(n)
    if k < 2:
        raise UsageError(f"k must be at least 2, got {k}")
    rng = np.random.default_rng(seed)
    coords = rng.permutation(k * n).astype(np.float64).reshape(n, k)
    return [list(row) for row in coords]


def partition_to_minmax_matching(xs: Sequence[int], epsilon: float = 0.01) -> PairInstance:
    """
    For each x_i, with M = sum(xs) and i = 1..n:
    p_i = (iM, eps), q_i = (iM, 0), p_{n+i} = (iM + x_i, eps), q_{n+i} = (iM, eps/2).
    Pairs (p_i, q_i) come first, then (p_{n+i}, q_{n+i}).
    """
    values = list(xs)
    if not values:
        raise UsageError("partition multiset must be nonempty")
    if any(int(x) != x or x <= 0 for x in values):
        raise UsageError(f"partition values must be positive integers, got {values}")
    if epsilon <= 0:
        raise UsageError(f"epsilon must be positive, got {epsilon}")
    n = len(values)
    total = float(sum(values))
    coords = []
    for i, x in enumerate(values, start=1):
        coords += [(i * total, epsilon), (i * total, 0.0)]
    for i, x in enumerate(values, start=1):
        coords += [(i * total + x, epsilon), (i * total, epsilon / 2)]
    return PairInstance(euclidean_space(coords), canonical_pairs(2 * n))


def connected_partition_to_minmax_2mst(
    edges: Sequence[Tuple[int, int]], n_vertices: Optional[int] = None
) -> PairInstance:
    """
    Vertex i becomes the pair (p_i, q_i) = (2i, 2i + 1). p_i-p_j is 1 on
    graph edges, q_i-q_j is 0, p_i-q_j is 2; the rest is the metric closure.
    """
    edges = [(int(a), int(b)) for a, b in edges]
    if n_vertices is None:
        n_vertices = 1 + max((max(e) for e in edges), default=-1)
    if n_vertices < 2 or n_vertices % 2:
        raise UsageError(f"graph needs an even vertex count >= 2, got {n_vertices}")
    graph = nx.Graph()
    graph.add_nodes_from(range(n_vertices))
    for a, b in edges:
        if not (0 <= a < n_vertices and 0 <= b < n_vertices) or a == b:
            raise UsageError(f"bad graph edge ({a}, {b})")
        graph.add_edge(a, b)
    if not nx.is_connected(graph):
        raise UsageError("graph must be connected")

    m = 2 * n_vertices
    d = np.full((m, m), np.inf)
    p = np.arange(0, m, 2)
    q = p + 1
    d[np.ix_(p, q)] = 2.0
    d[np.ix_(q, p)] = 2.0
    d[np.ix_(q, q)] = 0.0
    for a, b in graph.edges:
        d[2 * a, 2 * b] = d[2 * b, 2 * a] = 1.0
    closed = metric_closure(d)
    return PairInstance(matrix_space(closed, pseudometric=True), canonical_pairs(n_vertices))


@dataclass(frozen=True)
class GenSpec:
    """
    Args:
        family: One of FAMILIES
        n: Pair count for the random families
        seed: Seed for the random families
        box: Side length for randomEuclidean and randomLine
        epsilon: Gadget spacing for partitionMatching
        xs: Integer multiset for partitionMatching
        edges: Graph edge list for connectedPartitionMst
        vertices: Vertex count for connectedPartitionMst
    """

    family: str
    n: int = 1
    seed: int = 0
    box: float = 1.0
    epsilon: float = 0.01
    xs: Tuple[int, ...] = ()
    edges: Tuple[Tuple[int, int], ...] = ()
    vertices: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UsageError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.family == "partitionMatching" and not self.xs:
            raise UsageError("partitionMatching needs xs")
        if self.family == "connectedPartitionMst" and not self.edges:
            raise UsageError("connectedPartitionMst needs a graph edge list")


def generate(spec: GenSpec) -> PairInstance:
    if spec.family == "randomEuclidean":
        return random_euclidean(spec.n, spec.seed, spec.box)
    if spec.family == "randomMetric":
        return random_metric(spec.n, spec.seed)
    if spec.family == "unitLine":
        return unit_line(spec.n, spec.seed)
    if spec.family == "randomLine":
        return random_line(spec.n, spec.seed, spec.box)
    if spec.family == "partitionMatching":
        return partition_to_minmax_matching(spec.xs, spec.epsilon)
    return connected_partition_to_minmax_2mst(spec.edges, spec.vertices)
