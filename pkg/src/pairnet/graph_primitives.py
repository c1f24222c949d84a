"""
Graph Primitives
================

Exact combinatorial kernels shared by every solver: Kruskal MST, preorder
walks, perfect matchings (minimum weight and bottleneck), bipartite
matching with Hall witnesses, Held-Karp, Christofides, the tree-cube
Hamiltonian cycle and path folding.

Weights come from a PairInstance or from any square numpy matrix indexed
by node id. All ties break on ascending (w, u, v) so every output is
deterministic.
"""

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from .config import DEFAULT_LIMITS
from .errors import CapacityError, InfeasibleError, InvariantError, UsageError
from .instance_model import PairInstance, PointId


def as_weights(source) -> np.ndarray:
    if isinstance(source, PairInstance):
        return source.distances
    return np.asarray(source, dtype=np.float64)


@dataclass(frozen=True)
class Edge:
    u: PointId
    v: PointId
    w: float

    @classmethod
    def between(cls, a: PointId, b: PointId, weights: np.ndarray) -> "Edge":
        if a == b:
            raise UsageError(f"self-loop at {a}")
        u, v = (a, b) if a < b else (b, a)
        return cls(int(u), int(v), float(weights[u, v]))

    def key(self) -> Tuple[float, int, int]:
        return (self.w, self.u, self.v)

    def to_list(self) -> list:
        return [self.u, self.v, self.w]


@dataclass(frozen=True)
class Tree:
    nodes: FrozenSet[PointId]
    edges: Tuple[Edge, ...]

    kind = "tree"

    @property
    def cost(self) -> float:
        return float(sum(e.w for e in self.edges))

    @property
    def bottleneck(self) -> float:
        return max((e.w for e in self.edges), default=0.0)

    def adjacency(self) -> Dict[PointId, List[PointId]]:
        adj = {p: [] for p in self.nodes}
        for e in self.edges:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
        for nbrs in adj.values():
            nbrs.sort()
        return adj

    def heaviest_edge(self) -> Optional[Edge]:
        return max(self.edges, key=Edge.key, default=None)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "nodes": sorted(self.nodes), "edges": [e.to_list() for e in self.edges]}


@dataclass(frozen=True)
class Tour:
    """
    Cyclic visiting order. Two-point tours cost 2d and have bottleneck d;
    tours on at most one point cost 0.
    """

    order: Tuple[PointId, ...]
    cost: float
    bottleneck: float

    kind = "tour"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "order": list(self.order), "cost": self.cost, "bottleneck": self.bottleneck}


@dataclass(frozen=True)
class HamPath:
    order: Tuple[PointId, ...]
    cost: float
    bottleneck: float

    kind = "path"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "order": list(self.order), "cost": self.cost, "bottleneck": self.bottleneck}


@dataclass(frozen=True)
class Matching:
    edges: Tuple[Edge, ...]

    kind = "matching"

    @property
    def cost(self) -> float:
        return float(sum(e.w for e in self.edges))

    @property
    def bottleneck(self) -> float:
        return max((e.w for e in self.edges), default=0.0)

    @property
    def covered(self) -> Set[PointId]:
        return {p for e in self.edges for p in (e.u, e.v)}

    def mate(self) -> Dict[PointId, PointId]:
        out = {}
        for e in self.edges:
            out[e.u], out[e.v] = e.v, e.u
        return out

    def to_dict(self) -> dict:
        return {"kind": self.kind, "edges": [e.to_list() for e in self.edges]}


def make_tour(order: Sequence[PointId], source) -> Tour:
    w = as_weights(source)
    order = tuple(int(p) for p in order)
    if len(order) <= 1:
        return Tour(order, 0.0, 0.0)
    if len(order) == 2:
        d = float(w[order[0], order[1]])
        return Tour(order, 2.0 * d, d)
    legs = [float(w[a, b]) for a, b in zip(order, order[1:] + order[:1])]
    return Tour(order, float(sum(legs)), max(legs))


def make_path(order: Sequence[PointId], source) -> HamPath:
    w = as_weights(source)
    order = tuple(int(p) for p in order)
    legs = [float(w[a, b]) for a, b in zip(order, order[1:])]
    return HamPath(order, float(sum(legs)), max(legs, default=0.0))


def make_matching(pairs: Iterable[Tuple[PointId, PointId]], source) -> Matching:
    w = as_weights(source)
    edges = sorted((Edge.between(a, b, w) for a, b in pairs), key=lambda e: (e.u, e.v))
    return Matching(tuple(edges))


# ---------------------------------------------------------------- trees


class DisjointSet:
    """Union-find with path halving and union by size."""

    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}
        self.size = {x: 1 for x in self.parent}

    def find(self, a):
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a, b) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        if self.size[a] < self.size[b]:
            a, b = b, a
        self.parent[b] = a
        self.size[a] += self.size[b]
        return True


def minimum_spanning_tree(points: Iterable[PointId], source) -> Tree:
    """
    Kruskal over the complete graph on `points`, edges taken in (w, u, v)
    order. Any MST also minimises the sorted-descending weight vector, so
    its heaviest edge is the bottleneck spanning tree value.
    """
    nodes = sorted(set(int(p) for p in points))
    if not nodes:
        raise UsageError("minimum spanning tree of an empty point set")
    w = as_weights(source)
    components = DisjointSet(nodes)

    candidates = sorted(
        (float(w[u, v]), u, v) for i, u in enumerate(nodes) for v in nodes[i + 1:]
    )
    edges = []
    for weight, u, v in candidates:
        if components.union(u, v):
            edges.append(Edge(u, v, weight))
            if len(edges) == len(nodes) - 1:
                break
    return Tree(frozenset(nodes), tuple(edges))


def split_tree(tree: Tree, removed: Edge) -> Tuple[FrozenSet[PointId], FrozenSet[PointId]]:
    """Components left after deleting one tree edge, the one holding the smaller id first."""
    adj = tree.adjacency()
    side = _component(adj, tree.nodes, removed.u, blocked=(removed.u, removed.v))
    other = tree.nodes - side
    if min(other) < min(side):
        side, other = other, side
    return frozenset(side), frozenset(other)


def subtree(tree: Tree, nodes: Iterable[PointId]) -> Tree:
    keep = frozenset(nodes)
    return Tree(keep, tuple(e for e in tree.edges if e.u in keep and e.v in keep))


def preorder_traversal(t: Tree, root: PointId) -> List[PointId]:
    if root not in t.nodes:
        raise UsageError(f"root {root} is not a tree node")
    adj = t.adjacency()
    order, seen = [], {root}
    stack = [root]
    while stack:
        node = stack.pop()
        order.append(node)
        for child in reversed(adj[node]):
            if child not in seen:
                seen.add(child)
                stack.append(child)
    return order


def _component(adj, nodes, start, blocked=None) -> Set[PointId]:
    seen = {start}
    queue = deque([start])
    while queue:
        a = queue.popleft()
        for b in adj[a]:
            if b in seen or b not in nodes:
                continue
            if blocked and {a, b} == set(blocked):
                continue
            seen.add(b)
            queue.append(b)
    return seen


# ------------------------------------------------------------ matchings


def _allowed(nodes: Sequence[PointId], forbidden) -> Dict[PointId, List[PointId]]:
    banned = {frozenset(map(int, f)) for f in forbidden}
    return {
        a: [b for b in nodes if b != a and frozenset((a, b)) not in banned]
        for a in nodes
    }


def exact_min_weight_perfect_matching(
    nodes: Iterable[PointId],
    weights,
    forbidden: Iterable[Tuple[PointId, PointId]] = (),
    limit: int = DEFAULT_LIMITS.dp_matching_nodes,
) -> Matching:
    """
    Minimum total weight perfect matching avoiding `forbidden` pairs.

    Subset DP (always match the lowest unmatched node) up to `limit` nodes;
    ties go to the lexicographically smallest sorted edge list. Larger
    inputs use the networkx blossom solver.
    """
    nodes = sorted(set(int(p) for p in nodes))
    w = as_weights(weights)
    if len(nodes) % 2:
        raise UsageError(f"perfect matching needs an even node count, got {len(nodes)}")
    if not nodes:
        return Matching(())
    allowed = _allowed(nodes, forbidden)
    if len(nodes) > limit:
        return _blossom_matching(nodes, w, allowed)

    index = {p: i for i, p in enumerate(nodes)}

    @lru_cache(maxsize=None)
    def solve(mask: int):
        if mask == 0:
            return 0.0, ()
        low = (mask & -mask).bit_length() - 1
        a = nodes[low]
        best = (np.inf, ())
        for b in allowed[a]:
            j = index[b]
            if not (mask >> j) & 1:
                continue
            rest_cost, rest = solve(mask & ~(1 << low) & ~(1 << j))
            if rest_cost == np.inf:
                continue
            candidate = (float(w[a, b]) + rest_cost, ((a, b),) + rest)
            if candidate < best:
                best = candidate
        return best

    cost, pairs = solve((1 << len(nodes)) - 1)
    if cost == np.inf:
        raise InfeasibleError("no perfect matching avoids the forbidden edges")
    return make_matching(pairs, w)


def _blossom_matching(nodes, w, allowed) -> Matching:
    g = nx.Graph()
    g.add_nodes_from(nodes)
    for a in nodes:
        for b in allowed[a]:
            if a < b:
                g.add_edge(a, b, weight=float(w[a, b]))
    matched = nx.min_weight_matching(g)
    if 2 * len(matched) != len(nodes):
        raise InfeasibleError("no perfect matching avoids the forbidden edges")
    return make_matching(matched, w)


def _max_cardinality(nodes, edges) -> set:
    g = nx.Graph()
    g.add_nodes_from(nodes)
    g.add_edges_from(edges)
    return nx.max_weight_matching(g, maxcardinality=True)


def bottleneck_perfect_matching(
    nodes: Iterable[PointId],
    weights,
    forbidden: Iterable[Tuple[PointId, PointId]] = (),
) -> Matching:
    """
    Perfect matching minimising the heaviest edge: binary search over the
    sorted distinct edge weights, testing perfect matchability of each
    threshold graph with Edmonds' algorithm.
    """
    nodes = sorted(set(int(p) for p in nodes))
    w = as_weights(weights)
    if len(nodes) % 2:
        raise UsageError(f"perfect matching needs an even node count, got {len(nodes)}")
    if not nodes:
        return Matching(())
    allowed = _allowed(nodes, forbidden)
    edges = sorted((float(w[a, b]), a, b) for a in nodes for b in allowed[a] if a < b)
    thresholds = sorted({e[0] for e in edges})

    def witness(limit: float):
        matched = _max_cardinality(nodes, [(a, b) for wt, a, b in edges if wt <= limit])
        return matched if 2 * len(matched) == len(nodes) else None

    if not thresholds or witness(thresholds[-1]) is None:
        raise InfeasibleError("no perfect matching avoids the forbidden edges")
    lo, hi = 0, len(thresholds) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if witness(thresholds[mid]) is not None:
            hi = mid
        else:
            lo = mid + 1
    return make_matching(witness(thresholds[lo]), w)


@dataclass(frozen=True)
class BipartiteResult:
    """Either a perfect matching (left -> right) or a Hall-deficient left set."""

    matching: Optional[Dict[int, int]]
    deficient: Optional[FrozenSet[int]]

    @property
    def perfect(self) -> bool:
        return self.matching is not None


class _HopcroftKarp:
    """Layered augmenting paths; adjacency lists are scanned in ascending order."""

    UNREACHED = -1

    def __init__(self, adjacency: Dict[int, List[int]], left: List[int]):
        self.adjacency = adjacency
        self.left = left
        self.pair_left: Dict[int, int] = {}
        self.pair_right: Dict[int, int] = {}
        self.dist: Dict[int, int] = {}
        self.reference = self.UNREACHED

    def run(self) -> Dict[int, int]:
        while self._bfs():
            for u in self.left:
                if u not in self.pair_left:
                    self._dfs(u)
        return self.pair_left

    def _bfs(self) -> bool:
        queue = deque()
        for u in self.left:
            if u in self.pair_left:
                self.dist[u] = self.UNREACHED
            else:
                self.dist[u] = 0
                queue.append(u)
        self.reference = self.UNREACHED
        while queue:
            u = queue.popleft()
            if self.reference != self.UNREACHED and self.dist[u] >= self.reference:
                continue
            for r in self.adjacency[u]:
                if r not in self.pair_right:
                    if self.reference == self.UNREACHED:
                        self.reference = self.dist[u] + 1
                else:
                    other = self.pair_right[r]
                    if self.dist[other] == self.UNREACHED:
                        self.dist[other] = self.dist[u] + 1
                        queue.append(other)
        return self.reference != self.UNREACHED

    def _dfs(self, u: int) -> bool:
        for r in self.adjacency[u]:
            if r not in self.pair_right:
                if self.reference == self.dist[u] + 1:
                    self.pair_left[u], self.pair_right[r] = r, u
                    return True
            else:
                other = self.pair_right[r]
                if self.dist[other] == self.dist[u] + 1 and self._dfs(other):
                    self.pair_left[u], self.pair_right[r] = r, u
                    return True
        self.dist[u] = self.UNREACHED
        return False


def bipartite_perfect_matching(
    left_count: int, right_count: int, adjacency: Dict[int, Iterable[int]]
) -> BipartiteResult:
    if left_count != right_count:
        raise UsageError(f"bipartite sides differ: {left_count} vs {right_count}")
    adj = {u: sorted(set(adjacency.get(u, ()))) for u in range(left_count)}
    for u, nbrs in adj.items():
        if any(not 0 <= r < right_count for r in nbrs):
            raise UsageError(f"left vertex {u} lists an out-of-range right vertex")
    matching = _HopcroftKarp(adj, list(range(left_count))).run()
    if len(matching) == left_count:
        return BipartiteResult(dict(sorted(matching.items())), None)

    # Left vertices reachable by alternating paths from a free one violate Hall
    free = min(u for u in range(left_count) if u not in matching)
    mate_of_right = {r: u for u, r in matching.items()}
    reached, queue = {free}, deque([free])
    while queue:
        u = queue.popleft()
        for r in adj[u]:
            other = mate_of_right.get(r)
            if other is not None and other not in reached:
                reached.add(other)
                queue.append(other)
    return BipartiteResult(None, frozenset(reached))


# ---------------------------------------------------------------- tours


def exact_tsp(points: Iterable[PointId], source, limit: int = DEFAULT_LIMITS.exact_tsp_points) -> Tour:
    """
    Held-Karp on a backward cost-to-go table. The tour starts at the
    smallest id and the successor chosen at each step is the smallest id
    that still completes an optimal tour, which yields the lexicographically
    smallest optimal order.
    """
    pts = sorted(set(int(p) for p in points))
    if len(pts) > limit:
        raise CapacityError(f"exact TSP limited to {limit} points, got {len(pts)}")
    if len(pts) <= 2:
        return make_tour(pts, source)
    w = as_weights(source)
    d = w[np.ix_(pts, pts)]
    k = len(pts) - 1
    full = (1 << k) - 1
    bits = [1 << j for j in range(k)]

    # g[mask, j]: cheapest way to visit the rest from j and return to pts[0]
    g = np.full((1 << k, k), np.inf)
    g[full, :] = d[1:, 0]

    def step_costs(mask: int, frm: Sequence[int]):
        todo = [q for q in range(k) if not mask & bits[q]]
        nxt = g[[mask | bits[q] for q in todo], todo]
        return todo, d[np.ix_([j + 1 for j in frm], [q + 1 for q in todo])] + nxt[None, :]

    for mask in range(full - 1, 0, -1):
        inside = [j for j in range(k) if mask & bits[j]]
        _, costs = step_costs(mask, inside)
        g[mask, inside] = costs.min(axis=1)

    first = d[0, 1:] + g[bits, list(range(k))]
    best = first.min()
    cur = int(np.flatnonzero(first == best)[0])
    mask, order = bits[cur], [0, cur + 1]
    while mask != full:
        todo, costs = step_costs(mask, [cur])
        hit = np.flatnonzero(costs[0] == g[mask, cur])
        if len(hit) == 0:
            raise InvariantError("Held-Karp reconstruction lost the optimum")
        cur = todo[int(hit[0])]
        mask |= bits[cur]
        order.append(cur + 1)
    return make_tour([pts[i] for i in order], w)


def double_tree_tour(points: Iterable[PointId], source) -> Tour:
    """MST preorder shortcut from the smallest id: at most twice optimal."""
    tree = minimum_spanning_tree(points, source)
    return make_tour(preorder_traversal(tree, min(tree.nodes)), source)


def christofides_tour(points: Iterable[PointId], source, limit: int = DEFAULT_LIMITS.dp_matching_nodes) -> Tour:
    pts = sorted(set(int(p) for p in points))
    if not pts:
        raise UsageError("tour of an empty point set")
    if len(pts) <= 2:
        return make_tour(pts, source)
    w = as_weights(source)
    tree = minimum_spanning_tree(pts, w)
    degree = {p: 0 for p in pts}
    for e in tree.edges:
        degree[e.u] += 1
        degree[e.v] += 1
    odd = [p for p in pts if degree[p] % 2]
    matching = exact_min_weight_perfect_matching(odd, w, limit=limit)

    multi = nx.MultiGraph()
    multi.add_nodes_from(pts)
    multi.add_edges_from((e.u, e.v) for e in tree.edges)
    multi.add_edges_from((e.u, e.v) for e in matching.edges)
    order, seen = [], set()
    for a, _ in nx.eulerian_circuit(multi, source=pts[0]):
        if a not in seen:
            seen.add(a)
            order.append(a)
    return make_tour(order, w)


def _split_frame(adj, side: Set[PointId], end: PointId, flipped: bool):
    nxt = min((x for x in adj[end] if x in side), default=None) if len(side) > 1 else None
    return side, end, nxt, flipped


def _hamiltonian_path(adj, nodes: Set[PointId], a: PointId, b: PointId) -> List[PointId]:
    """
    Path from a to b (a tree edge) through every node of `nodes`, each step
    at most 3 tree hops: split both sides of edge ab, leaving a's side at a
    neighbour of a and entering b's side at a neighbour of b.

    Frames (side, start, next, flipped) sit on an explicit stack; a flipped
    frame emits its path from the far end back to `start`.
    """
    order: List[PointId] = []
    stack = [(set(nodes), a, b, False)]
    while stack:
        side, start, nxt, flipped = stack.pop()
        if nxt is None:
            order.append(start)
            continue
        side_a = _component(adj, side, start, blocked=(start, nxt))
        side_b = side - side_a
        if flipped:
            first = _split_frame(adj, side_b, nxt, False)
            second = _split_frame(adj, side_a, start, True)
        else:
            first = _split_frame(adj, side_a, start, False)
            second = _split_frame(adj, side_b, nxt, True)
        stack.append(second)
        stack.append(first)
    return order


def tree_cube_hamiltonian_cycle(t: Tree, source) -> Tour:
    if len(t.nodes) < 3:
        return make_tour(sorted(t.nodes), source)
    adj = t.adjacency()
    root = min(t.nodes)
    order = _hamiltonian_path(adj, set(t.nodes), root, adj[root][0])
    return make_tour(order, source)


def tour_hop_distances(t: Tree, tour: Tour) -> List[int]:
    """Tree-hop distance of every tour step, wrap-around included."""
    adj = t.adjacency()
    hops = []
    order = list(tour.order)
    for a, b in zip(order, order[1:] + order[:1]):
        dist = {a: 0}
        queue = deque([a])
        while queue and b not in dist:
            x = queue.popleft()
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        hops.append(dist[b])
    return hops if len(order) > 1 else []


def fold_path_to_cycle(p: HamPath, source) -> Tour:
    """Odd positions forward, even positions backward: each leg spans at most two path edges."""
    order = list(p.order)
    return make_tour(order[0::2] + order[1::2][::-1], source)
