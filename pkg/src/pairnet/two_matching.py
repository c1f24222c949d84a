"""
Two perfect matchings
=====================

Red/blue colorings whose two perfect matchings approximately minimise the
sum (2), the maximum (3) or the heaviest edge (3).

The sum and max variants colour red the points picked by a one-of-pair
matching. The bottleneck variant builds a 2-factor from a bottleneck
matching plus the pair edges, merges cycles holding an odd number of pairs,
and 2-colours every cycle.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .config import TOLERANCE
from .errors import InfeasibleError, InvariantError, UsageError
from .graph_primitives import (
    DisjointSet,
    Matching,
    bottleneck_perfect_matching,
    exact_min_weight_perfect_matching,
    make_matching,
)
from .instance_model import Coloring, PairInstance, PointId
from .reports import MatchReport

logger = logging.getLogger(__name__)


def _require_even(inst: PairInstance):
    if inst.n % 2:
        raise InfeasibleError(f"one-of-pair matching requires even n, got n={inst.n}")


@dataclass(frozen=True)
class CollapsedPairGraph:
    """
    One node per pair. weights[i, j] is the shortest of the four distances
    between pair i and pair j; realizer[(i, j)] the point pair attaining it.
    """

    weights: np.ndarray
    realizer: Dict[Tuple[int, int], Tuple[PointId, PointId]]

    @classmethod
    def build(cls, inst: PairInstance) -> "CollapsedPairGraph":
        d = inst.distances
        n = inst.n
        weights = np.zeros((n, n))
        realizer = {}
        for i in range(n):
            for j in range(i + 1, n):
                best = min(
                    (float(d[a, b]), min(a, b), max(a, b))
                    for a in inst.pairs[i]
                    for b in inst.pairs[j]
                )
                weights[i, j] = weights[j, i] = best[0]
                realizer[(i, j)] = realizer[(j, i)] = (best[1], best[2])
        return cls(weights, realizer)


def one_of_pair_matching(inst: PairInstance, objective: str = "sum") -> Matching:
    """
    Pick one point per pair and perfectly match the picks, minimising the
    total (objective="sum") or the heaviest edge (objective="bottleneck").
    """
    _require_even(inst)
    graph = CollapsedPairGraph.build(inst)
    nodes = range(inst.n)
    if objective == "sum":
        collapsed = exact_min_weight_perfect_matching(nodes, graph.weights)
    elif objective == "bottleneck":
        collapsed = bottleneck_perfect_matching(nodes, graph.weights)
    else:
        raise UsageError(f"one-of-pair objective must be sum or bottleneck, got {objective!r}")
    return make_matching((graph.realizer[(e.u, e.v)] for e in collapsed.edges), inst)


def _matching_report(inst, objective, factor, lower) -> MatchReport:
    picked = one_of_pair_matching(inst, "sum")
    red = picked.covered
    blue = set(inst.point_ids) - red
    return MatchReport(
        algorithm=f"min{objective}_2matching",
        objective=objective,
        coloring=Coloring.of(red, blue),
        red_matching=picked,
        blue_matching=exact_min_weight_perfect_matching(blue, inst),
        guarantee_factor=factor,
        lower_bound=lower(picked),
    )


def _pair_free_matching(inst: PairInstance) -> Matching:
    return exact_min_weight_perfect_matching(inst.point_ids, inst, forbidden=inst.pairs)


def minsum_2matching(inst: PairInstance) -> MatchReport:
    # Both sides are pair-free perfect matchings and each side alone is a
    # one-of-pair matching
    _require_even(inst)
    full = _pair_free_matching(inst).cost
    return _matching_report(inst, "sum", 2.0, lambda picked: max(full, 2 * picked.cost))


def minmax_2matching(inst: PairInstance) -> MatchReport:
    _require_even(inst)
    full = _pair_free_matching(inst).cost
    return _matching_report(inst, "max", 3.0, lambda picked: max(full / 2, picked.cost))


# ------------------------------------------------------------ 2-factors


@dataclass(frozen=True)
class Cycle:
    """
    Alternating cycle. nodes[0] is its smallest id; edges nodes[2i]-nodes[2i+1]
    are pair edges and the remaining consecutive edges (wrap included) are
    matching edges.
    """

    nodes: Tuple[PointId, ...]

    @property
    def pair_count(self) -> int:
        return len(self.nodes) // 2

    def matching_edges(self) -> List[Tuple[PointId, PointId]]:
        ring = self.nodes[1:] + self.nodes[:1]
        return [tuple(sorted(ring[i:i + 2])) for i in range(0, len(ring), 2)]


@dataclass(frozen=True)
class CreatedEdge:
    """A stitching edge and the chain of original edges it shortcuts."""

    u: PointId
    v: PointId
    w: float
    via: Tuple[PointId, ...]


@dataclass(frozen=True)
class TwoFactor:
    """
    Disjoint alternating cycles covering every point. `created` lists the
    edges added by odd-cycle merging; `lower_bound` is the bound they were
    certified against.
    """

    cycles: Tuple[Cycle, ...]
    created: Tuple[CreatedEdge, ...] = ()
    lower_bound: float = 0.0

    @property
    def odd_cycles(self) -> List[Cycle]:
        return [c for c in self.cycles if c.pair_count % 2]

    def mate(self) -> Dict[PointId, PointId]:
        out = {}
        for c in self.cycles:
            for a, b in c.matching_edges():
                out[a], out[b] = b, a
        return out

    def to_dict(self) -> dict:
        return {
            "cycles": [list(c.nodes) for c in self.cycles],
            "created": [[e.u, e.v, e.w, list(e.via)] for e in self.created],
            "lower_bound": self.lower_bound,
        }


def _cycles_from_mate(inst: PairInstance, mate: Dict[PointId, PointId]) -> Tuple[Cycle, ...]:
    seen = set()
    cycles = []
    for start in inst.point_ids:
        if start in seen:
            continue
        nodes = []
        p = start
        while True:
            nodes.append(p)
            q = int(inst.partner[p])
            nodes.append(q)
            seen.update((p, q))
            p = mate[q]
            if p == start:
                break
            if p in seen:
                raise InvariantError(f"walk from {start} re-entered point {p}")
        cycles.append(Cycle(tuple(nodes)))
    return tuple(cycles)


def pair_2factor(inst: PairInstance) -> TwoFactor:
    """Bottleneck matching on S with pair edges forbidden, plus the pair edges."""
    _require_even(inst)
    base = bottleneck_perfect_matching(inst.point_ids, inst, forbidden=inst.pairs)
    return TwoFactor(_cycles_from_mate(inst, base.mate()), lower_bound=base.bottleneck)


def _stitch(path: Sequence[PointId]) -> List[Tuple[PointId, PointId, Tuple[PointId, ...]]]:
    """
    Reconnect the cycles along one alternating path u1 v1 u2 v2 ... uk vk
    (ui-vi matching edges inside cycle i, vi-u(i+1) bridging edges) into
    a single cycle once every ui-vi is deleted: odd cycles forward, a turn,
    even cycles backward, then close at u1. Every new edge shortcuts at most
    three path edges.
    """
    k = len(path) // 2
    u = {i + 1: path[2 * i] for i in range(k)}
    v = {i + 1: path[2 * i + 1] for i in range(k)}
    edges = []
    last_odd = k if k % 2 else k - 1
    for i in range(1, last_odd - 1, 2):
        edges.append((v[i], u[i + 2], (v[i], u[i + 1], v[i + 1], u[i + 2])))
    if k % 2 == 0:
        edges.append((v[k - 1], v[k], (v[k - 1], u[k], v[k])))
        top_even = k
    else:
        edges.append((v[k], v[k - 1], (v[k], u[k], v[k - 1])))
        top_even = k - 1
    for i in range(top_even, 3, -2):
        edges.append((u[i], v[i - 2], (u[i], v[i - 1], u[i - 1], v[i - 2])))
    edges.append((u[2], u[1], (u[2], v[1], u[1])))
    return edges


def merge_odd_cycles(f: TwoFactor, inst: PairInstance) -> TwoFactor:
    """
    Merge cycles with an odd pair count into super-cycles with even counts.

    The cross-cycle edges of a bottleneck one-of-pair matching, taken in
    (w, u, v) order, grow a Kruskal forest over the cycles. Each forest
    component holds an even number of odd cycles. Within components that
    hold any odd cycle, the base matching edges plus the forest edges form
    alternating paths through distinct cycles; each path is stitched into
    one cycle, paths taken by their lightest forest edge.
    """
    if not f.odd_cycles:
        return f
    base_mate = f.mate()
    cycle_of = {p: idx for idx, c in enumerate(f.cycles) for p in c.nodes}
    bridge = one_of_pair_matching(inst, "bottleneck")
    lower = max(f.lower_bound, bridge.bottleneck)

    components = DisjointSet(range(len(f.cycles)))

    forest: Dict[PointId, PointId] = {}
    forest_weight = {}
    for e in sorted(bridge.edges, key=lambda e: e.key()):
        if not components.union(cycle_of[e.u], cycle_of[e.v]):
            continue
        forest[e.u], forest[e.v] = e.v, e.u
        forest_weight[frozenset((e.u, e.v))] = e.w

    odd_roots = {components.find(idx) for idx, c in enumerate(f.cycles) if c.pair_count % 2}

    # Alternating paths start and end at points without a forest edge
    paths = []
    visited = set()
    for end in inst.point_ids:
        if end in forest or end in visited:
            continue
        path = [end, base_mate[end]]
        while path[-1] in forest:
            nxt = forest[path[-1]]
            path.extend((nxt, base_mate[nxt]))
        visited.update(path)
        if len(path) < 4 or components.find(cycle_of[end]) not in odd_roots:
            continue
        lightest = min(
            forest_weight[frozenset((path[i], path[i + 1]))] for i in range(1, len(path) - 1, 2)
        )
        paths.append((lightest, tuple(path)))

    mate = dict(base_mate)
    created = []
    for _, path in sorted(paths):
        for a, b, via in _stitch(path):
            mate[a], mate[b] = b, a
            created.append(CreatedEdge(min(a, b), max(a, b), float(inst.distances[a, b]), via))

    merged = TwoFactor(_cycles_from_mate(inst, mate), tuple(created), lower)
    _certify(merged, f, bridge, inst)
    logger.debug(
        "merged %d odd cycles along %d paths; %d cycles remain",
        len(f.odd_cycles), len(paths), len(merged.cycles),
    )
    return merged


def _certify(merged: TwoFactor, base: TwoFactor, bridge: Matching, inst: PairInstance):
    allowed = {frozenset(e) for c in base.cycles for e in c.matching_edges()}
    allowed |= {frozenset((e.u, e.v)) for e in bridge.edges}
    limit = 3 * merged.lower_bound
    for e in merged.created:
        hops = list(zip(e.via, e.via[1:]))
        if len(hops) > 3 or any(frozenset(h) not in allowed for h in hops):
            raise InvariantError(f"created edge {e.u}-{e.v} has no valid decomposition")
        if e.w > limit + TOLERANCE * max(e.w, limit, 1.0):
            raise InvariantError(f"created edge {e.u}-{e.v} weighs {e.w} > 3 x {merged.lower_bound}")
    if merged.odd_cycles:
        raise InvariantError(f"{len(merged.odd_cycles)} odd cycles survived merging")


def color_cycles(f: TwoFactor) -> Coloring:
    """
    Walk each cycle from its smallest id, starting red; the colour flips
    across pair edges and is kept across matching edges.
    """
    red, blue = set(), set()
    for c in f.cycles:
        if c.pair_count % 2:
            raise UsageError(f"cycle through {c.nodes[0]} holds an odd number of pairs")
        for i, p in enumerate(c.nodes):
            # nodes alternate pair edge, matching edge: flips happen on odd steps
            (red if (i + 1) // 2 % 2 == 0 else blue).add(p)
    return Coloring.of(red, blue)


def bottleneck_2matching(inst: PairInstance) -> MatchReport:
    """
    Exact when every cycle of the 2-factor already holds an even number of
    pairs, otherwise within three times the optimum.
    """
    base = pair_2factor(inst)
    merged = bool(base.odd_cycles)
    factor = merge_odd_cycles(base, inst) if merged else base
    coloring = color_cycles(factor)

    red_edges, blue_edges = [], []
    for c in factor.cycles:
        for a, b in c.matching_edges():
            (red_edges if a in coloring.red else blue_edges).append((a, b))
    bridge = one_of_pair_matching(inst, "bottleneck")
    return MatchReport(
        algorithm="bottleneck_2matching",
        objective="bottleneck",
        coloring=coloring,
        red_matching=make_matching(red_edges, inst),
        blue_matching=make_matching(blue_edges, inst),
        guarantee_factor=3.0 if merged else 1.0,
        lower_bound=max(base.lower_bound, bridge.bottleneck),
        merged=merged,
    )
