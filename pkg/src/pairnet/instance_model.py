"""
Instance Model
==============

Point-pair instances over a metric space, feasible red/blue colorings and
the validation that keeps the solvers honest.

A point is an integer id in [0, 2n). An instance is a metric over those ids
plus n disjoint pairs covering all of them. Distances are precomputed once
into a read-only numpy matrix; everything here is immutable after
construction.
"""

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .config import METRIC_KINDS, TOLERANCE
from .errors import UsageError

PointId = int


@dataclass(frozen=True, eq=False)
class MetricSpace:
    """
    Distances between 2n points.

    Exactly one of `points` (euclidean2d: shape (m, 2), line1d: shape (m,))
    or `matrix` (shape (m, m)) is set, depending on `kind`.
    """

    kind: str
    points: Optional[np.ndarray] = None
    matrix: Optional[np.ndarray] = None
    pseudometric: bool = False

    @property
    def size(self) -> int:
        source = self.points if self.kind != "matrix" else self.matrix
        return 0 if source is None else int(source.shape[0])


def euclidean_space(coords: Iterable[Sequence[float]]) -> MetricSpace:
    arr = np.asarray(list(coords), dtype=np.float64).reshape(-1, 2)
    return MetricSpace(kind="euclidean2d", points=arr)


def line_space(xs: Iterable[float]) -> MetricSpace:
    return MetricSpace(kind="line1d", points=np.asarray(list(xs), dtype=np.float64))


def matrix_space(matrix, pseudometric: bool = False) -> MetricSpace:
    return MetricSpace(
        kind="matrix",
        matrix=np.asarray(matrix, dtype=np.float64),
        pseudometric=pseudometric,
    )


def _distance_matrix(metric: MetricSpace) -> np.ndarray:
    if metric.kind == "euclidean2d":
        if len(metric.points) < 2:
            return np.zeros((len(metric.points),) * 2)
        return squareform(pdist(metric.points, metric="euclidean"))
    if metric.kind == "line1d":
        xs = metric.points
        return np.abs(xs[:, None] - xs[None, :])
    if metric.kind == "matrix":
        return np.array(metric.matrix, dtype=np.float64)
    raise UsageError(f"unknown metric kind {metric.kind!r}")


@dataclass(frozen=True, eq=False)
class PairInstance:
    """
    A metric space plus n disjoint point pairs.

    `partner[a]` is the other point of a's pair and `pair_index[a]` the
    index of that pair; both are -1 for ids no pair mentions.
    """

    metric: MetricSpace
    pairs: Tuple[Tuple[PointId, PointId], ...]
    distances: np.ndarray = field(init=False, repr=False)
    partner: np.ndarray = field(init=False, repr=False)
    pair_index: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(a), int(b)) for a, b in self.pairs))
        dist = _distance_matrix(self.metric)
        dist.flags.writeable = False
        object.__setattr__(self, "distances", dist)

        m = self.metric.size
        partner = np.full(m, -1, dtype=np.int64)
        index = np.full(m, -1, dtype=np.int64)
        for i, (a, b) in enumerate(self.pairs):
            if 0 <= a < m and 0 <= b < m:
                partner[a], partner[b] = b, a
                index[a] = index[b] = i
        partner.flags.writeable = False
        index.flags.writeable = False
        object.__setattr__(self, "partner", partner)
        object.__setattr__(self, "pair_index", index)

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def num_points(self) -> int:
        return self.metric.size

    @property
    def point_ids(self) -> List[PointId]:
        return list(range(self.num_points))


def canonical_pairs(n: int) -> Tuple[Tuple[PointId, PointId], ...]:
    return tuple((2 * i, 2 * i + 1) for i in range(n))


@dataclass(frozen=True)
class Coloring:
    """Red/blue partition of the points."""

    red: frozenset
    blue: frozenset

    @classmethod
    def of(cls, red: Iterable[PointId], blue: Iterable[PointId]) -> "Coloring":
        return cls(frozenset(int(p) for p in red), frozenset(int(p) for p in blue))

    def sort_key(self) -> Tuple[PointId, ...]:
        """Lexicographic tie-break key: the red set as a sorted id list."""
        return tuple(sorted(self.red))

    def swapped(self) -> "Coloring":
        return Coloring(self.blue, self.red)

    def color_of(self, p: PointId) -> str:
        if p in self.red:
            return "red"
        if p in self.blue:
            return "blue"
        raise UsageError(f"point {p} is not colored")


@dataclass(frozen=True)
class Violation:
    """One problem found by `validate_instance`."""

    kind: str
    detail: str
    ids: Tuple[int, ...] = ()


def distance(inst: PairInstance, a: PointId, b: PointId) -> float:
    m = inst.num_points
    if not (0 <= a < m and 0 <= b < m):
        raise UsageError(f"point id out of range: ({a}, {b}) with {m} points")
    return float(inst.distances[a, b])


def _pair_violations(inst: PairInstance) -> List[Violation]:
    found = []
    m = inst.num_points
    if inst.n < 1:
        found.append(Violation("pairs", "instance needs at least one pair"))
    if m != 2 * inst.n:
        found.append(Violation("pairs", f"{inst.n} pairs over {m} points"))
    seen = {}
    for i, pair in enumerate(inst.pairs):
        a, b = pair
        if not (0 <= a < m and 0 <= b < m):
            found.append(Violation("pairs", f"pair {i} has an out-of-range id", (a, b)))
            continue
        if a == b:
            found.append(Violation("pairs", f"pair {i} repeats point {a}", (a,)))
        for p in {a, b}:
            if p in seen:
                found.append(
                    Violation("pairs", f"point {p} appears in pairs {seen[p]} and {i}", (p,))
                )
            else:
                seen[p] = i
    missing = sorted(set(range(m)) - set(seen))
    if missing and m == 2 * inst.n:
        found.append(Violation("pairs", f"points not covered by any pair: {missing}", tuple(missing)))
    return found


def _matrix_violations(metric: MetricSpace) -> List[Violation]:
    d = metric.matrix
    found = []
    if d is None or d.ndim != 2 or d.shape[0] != d.shape[1]:
        return [Violation("matrix", "distance matrix must be square")]
    if not np.all(np.isfinite(d)):
        return [Violation("matrix", "distance matrix has non-finite entries")]

    for a, b in zip(*np.nonzero(d < 0)):
        if a < b:
            found.append(Violation("negative", f"d({a},{b}) = {d[a, b]}", (int(a), int(b))))
    for a in np.nonzero(np.diag(d) != 0)[0]:
        found.append(Violation("diagonal", f"d({a},{a}) = {d[a, a]}", (int(a),)))
    for a, b in zip(*np.nonzero(d != d.T)):
        if a < b:
            found.append(Violation("asymmetric", f"d({a},{b}) != d({b},{a})", (int(a), int(b))))
    if not metric.pseudometric:
        off_diagonal = (d == 0) & ~np.eye(len(d), dtype=bool)
        for a, b in zip(*np.nonzero(off_diagonal)):
            if a < b:
                found.append(
                    Violation("zero", f"d({a},{b}) = 0 without the pseudometric flag", (int(a), int(b)))
                )

    # d(a,c) <= d(a,b) + d(b,c) for every middle point b
    for b in range(len(d)):
        via = d[:, b][:, None] + d[b, :][None, :]
        scale = np.maximum(d, via)
        bad = d > via + TOLERANCE * scale
        for a, c in zip(*np.nonzero(bad)):
            if a < c and b not in (a, c):
                found.append(
                    Violation(
                        "triangle",
                        f"d({a},{c}) = {d[a, c]} > d({a},{b}) + d({b},{c}) = {via[a, c]}",
                        (int(a), int(b), int(c)),
                    )
                )
    return found


def validate_instance(inst: PairInstance) -> List[Violation]:
    """
    Report everything wrong with an instance. Never raises.

    Checks pair structure for every kind; for matrix metrics also
    symmetry, sign, zero diagonal, zero off-diagonal entries (unless the
    pseudometric flag is set) and the triangle inequality up to TOLERANCE.
    """
    found = []
    if inst.metric.kind not in METRIC_KINDS:
        return [Violation("metric", f"unknown metric kind {inst.metric.kind!r}")]
    if inst.metric.kind == "matrix":
        found.extend(_matrix_violations(inst.metric))
    elif not np.all(np.isfinite(inst.metric.points)):
        found.append(Violation("points", "coordinates must be finite"))
    found.extend(_pair_violations(inst))
    return found


def ensure_valid(inst: PairInstance) -> PairInstance:
    violations = validate_instance(inst)
    if violations:
        shown = "; ".join(v.detail for v in violations[:5])
        more = f" (+{len(violations) - 5} more)" if len(violations) > 5 else ""
        raise UsageError(f"invalid instance: {shown}{more}")
    return inst


def metric_closure(m) -> np.ndarray:
    """
    All-pairs shortest paths over a partial distance matrix.

    Missing entries are +inf. Floyd-Warshall, one numpy relaxation per
    intermediate node; explicit zeros are ordinary edges.
    """
    d = np.array(m, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise UsageError("metric closure needs a square matrix")
    if not np.array_equal(d, d.T):
        raise UsageError("metric closure needs a symmetric matrix")
    if np.any(d < 0):
        raise UsageError("metric closure needs nonnegative entries")
    np.fill_diagonal(d, 0.0)
    for k in range(len(d)):
        d = np.minimum(d, d[:, k][:, None] + d[k, :][None, :])
    return d


def is_feasible(inst: PairInstance, c: Coloring) -> bool:
    everything = set(range(inst.num_points))
    if c.red & c.blue or (c.red | c.blue) != everything:
        return False
    return all((a in c.red) != (b in c.red) for a, b in inst.pairs)
