"""
Two spanning trees
==================

Red/blue colorings whose two spanning trees approximately minimise the sum,
the maximum, or the heaviest single edge.

- minsum_2mst / minmax_2mst: split MST(S) at its heaviest edge and colour
  each side greedily in preorder (3 alpha and 4 alpha).
- bottleneck_2mst_line: the prefix split or the bucket chain colouring on
  sorted coordinates (3).
- bottleneck_2mst_metric: the same chain colouring run on a tree-cube tour
  of MST(S), returning two Hamiltonian paths as well (9).
- k_tuple_line_coloring: rainbow colouring of k-tuples on a line with at
  most 2k - 2 input points between consecutive same-coloured points.
"""

import logging
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .config import STEINER_RATIO
from .errors import InvariantError, UsageError
from .graph_primitives import (
    bipartite_perfect_matching,
    make_path,
    minimum_spanning_tree,
    preorder_traversal,
    split_tree,
    subtree,
    tree_cube_hamiltonian_cycle,
)
from .instance_model import Coloring, PairInstance, PointId
from .reports import MstReport

logger = logging.getLogger(__name__)


def steiner_alpha(inst: PairInstance) -> float:
    return STEINER_RATIO[inst.metric.kind]


def _require_line(inst: PairInstance):
    if inst.metric.kind != "line1d":
        raise UsageError(f"line algorithm needs a line1d instance, got {inst.metric.kind}")


def _sorted_line_order(inst: PairInstance) -> List[PointId]:
    xs = inst.metric.points
    return sorted(inst.point_ids, key=lambda p: (float(xs[p]), p))


def split_by_heaviest_edge_coloring(inst: PairInstance) -> Coloring:
    """
    Remove the heaviest MST edge and colour each side in preorder from its
    smallest id: red unless the pair partner is already red.
    """
    tree = minimum_spanning_tree(inst.point_ids, inst)
    first, second = split_tree(tree, tree.heaviest_edge())
    red, blue = set(), set()
    for side in (first, second):
        for p in preorder_traversal(subtree(tree, side), min(side)):
            if int(inst.partner[p]) in red:
                blue.add(p)
            else:
                red.add(p)
    return Coloring.of(red, blue)


def _side_trees(inst: PairInstance, coloring: Coloring):
    return (
        minimum_spanning_tree(coloring.red, inst),
        minimum_spanning_tree(coloring.blue, inst),
    )


def _split_lower_bound(inst: PairInstance) -> float:
    # Any coloring plus its cheapest red-blue edge spans S, and that edge is
    # no heavier than the heaviest MST edge
    tree = minimum_spanning_tree(inst.point_ids, inst)
    return tree.cost - tree.heaviest_edge().w


def minsum_2mst(inst: PairInstance) -> MstReport:
    coloring = split_by_heaviest_edge_coloring(inst)
    red_tree, blue_tree = _side_trees(inst, coloring)
    return MstReport(
        algorithm="minsum_2mst",
        objective="sum",
        coloring=coloring,
        red_tree=red_tree,
        blue_tree=blue_tree,
        guarantee_factor=3 * steiner_alpha(inst),
        lower_bound=_split_lower_bound(inst),
    )


def minmax_2mst(inst: PairInstance) -> MstReport:
    coloring = split_by_heaviest_edge_coloring(inst)
    red_tree, blue_tree = _side_trees(inst, coloring)
    return MstReport(
        algorithm="minmax_2mst",
        objective="max",
        coloring=coloring,
        red_tree=red_tree,
        blue_tree=blue_tree,
        guarantee_factor=4 * steiner_alpha(inst),
        lower_bound=_split_lower_bound(inst) / 2,
    )


def chain_coloring(order: Sequence[PointId], inst: PairInstance) -> Coloring:
    """
    Bucket chain colouring over an arbitrary linear order of all points.

    Buckets are consecutive duos of `order`. Starting from the leftmost
    uncoloured point (red), the chain alternates: a red point's pair partner
    turns blue, a blue point's bucket mate turns red, until the start's
    bucket mate is coloured. Every bucket ends with one red and one blue point.
    """
    order = list(order)
    if len(order) % 2:
        raise UsageError("chain colouring needs an even number of points")
    position = {p: i for i, p in enumerate(order)}

    def bucket_mate(p):
        return order[position[p] ^ 1]

    color: Dict[PointId, str] = {}

    def paint(p, c):
        if p in color:
            raise InvariantError(f"chain colouring revisited point {p}")
        color[p] = c

    for start in order:
        if start in color:
            continue
        paint(start, "red")
        p, closing = start, bucket_mate(start)
        while closing not in color:
            if color[p] == "red":
                q = int(inst.partner[p])
                paint(q, "blue")
            else:
                q = bucket_mate(p)
                paint(q, "red")
            p = q

    red = [p for p in order if color[p] == "red"]
    blue = [p for p in order if color[p] == "blue"]
    for i in range(0, len(order), 2):
        if color[order[i]] == color[order[i + 1]]:
            raise InvariantError(f"bucket {i // 2} is monochromatic")
    return Coloring.of(red, blue)


def line_chain_coloring(inst: PairInstance) -> Coloring:
    _require_line(inst)
    return chain_coloring(_sorted_line_order(inst), inst)


def same_color_gap(inst: PairInstance, coloring: Coloring) -> float:
    """Largest distance between consecutive same-coloured points of a line instance."""
    _require_line(inst)
    xs = inst.metric.points
    gap = 0.0
    for side in (coloring.red, coloring.blue):
        coords = np.sort(xs[sorted(side)])
        if len(coords) > 1:
            gap = max(gap, float(np.max(np.diff(coords))))
    return gap


def bottleneck_2mst_line(inst: PairInstance) -> MstReport:
    """
    If the leftmost n points hold no full pair the prefix split is optimal;
    otherwise every coloring pays the largest gap and the chain colouring
    stays within three times it.
    """
    _require_line(inst)
    order = _sorted_line_order(inst)
    left = set(order[: inst.n])
    prefix_free = all(int(inst.partner[p]) not in left for p in left)
    if prefix_free:
        coloring = Coloring.of(left, order[inst.n:])
    else:
        coloring = chain_coloring(order, inst)
    red_tree, blue_tree = _side_trees(inst, coloring)

    if prefix_free:
        lower = max(red_tree.bottleneck, blue_tree.bottleneck)
    else:
        lower = minimum_spanning_tree(inst.point_ids, inst).bottleneck
    return MstReport(
        algorithm="bottleneck_2mst_line",
        objective="bottleneck",
        coloring=coloring,
        red_tree=red_tree,
        blue_tree=blue_tree,
        guarantee_factor=3.0,
        lower_bound=lower,
    )


def bottleneck_2mst_metric(inst: PairInstance) -> MstReport:
    """
    Split MST(S) at its heaviest edge h. When every pair straddles the two
    sides the split is optimal. Otherwise every coloring pays |h|; chain
    colour the tree-cube tour of MST(S) so same-coloured tour neighbours
    are at most three tour steps apart, each step at most 3|h|.
    """
    tree = minimum_spanning_tree(inst.point_ids, inst)
    h = tree.heaviest_edge()
    first, second = split_tree(tree, h)
    straddling = all((a in first) != (b in first) for a, b in inst.pairs)

    if straddling:
        coloring = Coloring.of(first, second)
        red_order = tree_cube_hamiltonian_cycle(subtree(tree, first), inst).order
        blue_order = tree_cube_hamiltonian_cycle(subtree(tree, second), inst).order
        lower = max((e.w for e in tree.edges if e != h), default=0.0)
    else:
        tour = tree_cube_hamiltonian_cycle(tree, inst)
        coloring = chain_coloring(tour.order, inst)
        red_order = [p for p in tour.order if p in coloring.red]
        blue_order = [p for p in tour.order if p in coloring.blue]
        lower = h.w
    logger.debug("bottleneck 2-MST: |h|=%g, split %s", h.w, "kept" if straddling else "chained")

    red_tree, blue_tree = _side_trees(inst, coloring)
    return MstReport(
        algorithm="bottleneck_2mst_metric",
        objective="bottleneck",
        coloring=coloring,
        red_tree=red_tree,
        blue_tree=blue_tree,
        red_path=make_path(red_order, inst),
        blue_path=make_path(blue_order, inst),
        guarantee_factor=9.0,
        lower_bound=lower,
    )


# ------------------------------------------------------------ k-tuples


def k_tuple_line_coloring(tuples: Sequence[Sequence[float]], k: int) -> List[List[int]]:
    """
    Colour n tuples of k line coordinates with colours 1..k, one of each per
    tuple.

    Round j splits the still uncoloured points, in sorted order, into n
    buckets of k - j + 1 points and matches buckets to tuples (bucket i and
    tuple t adjacent when t has a point in bucket i). Each matched bucket
    colours its leftmost point of the matched tuple with colour j.

    Returns:
        colors[t][i] is the colour of tuples[t][i]
    """
    if k < 2:
        raise UsageError(f"k must be at least 2, got {k}")
    n = len(tuples)
    if n < 1:
        raise UsageError("need at least one tuple")
    points: List[Tuple[float, int, int]] = []
    for t, tup in enumerate(tuples):
        if len(tup) != k:
            raise UsageError(f"tuple {t} has {len(tup)} points, expected {k}")
        points.extend((float(x), t, i) for i, x in enumerate(tup))
    coords = [x for x, _, _ in points]
    if not np.all(np.isfinite(coords)):
        raise UsageError("coordinates must be finite")
    if len(set(coords)) != len(coords):
        raise UsageError("k-tuple coordinates must be distinct")

    colors = [[0] * k for _ in range(n)]
    remaining = sorted(points)
    for color in range(1, k + 1):
        size = k - color + 1
        buckets = [remaining[b * size:(b + 1) * size] for b in range(n)]
        adjacency = {b: {t for _, t, _ in bucket} for b, bucket in enumerate(buckets)}
        result = bipartite_perfect_matching(n, n, adjacency)
        if not result.perfect:
            raise InvariantError(f"round {color}: buckets {sorted(result.deficient)} violate Hall")
        chosen = set()
        for b, t in result.matching.items():
            x, _, i = next(pt for pt in buckets[b] if pt[1] == t)
            colors[t][i] = color
            chosen.add((x, t, i))
        remaining = [pt for pt in remaining if pt not in chosen]
    return colors


def max_interior_gap(tuples: Sequence[Sequence[float]], colors: Sequence[Sequence[int]]) -> int:
    """Most input points strictly between two consecutive points of one colour."""
    ranked = sorted(
        (float(x), colors[t][i]) for t, tup in enumerate(tuples) for i, x in enumerate(tup)
    )
    last: Dict[int, int] = {}
    worst = 0
    for pos, (_, c) in enumerate(ranked):
        if c in last:
            worst = max(worst, pos - last[c] - 1)
        last[c] = pos
    return worst
