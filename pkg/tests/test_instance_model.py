import numpy as np
import pytest

from pairnet.errors import UsageError
from pairnet.instance_model import (
    Coloring,
    PairInstance,
    distance,
    ensure_valid,
    euclidean_space,
    is_feasible,
    line_space,
    matrix_space,
    metric_closure,
    validate_instance,
)


def test_euclidean_distance_is_l2():
    inst = PairInstance(euclidean_space([(0, 0), (3, 4)]), ((0, 1),))
    assert distance(inst, 0, 1) == pytest.approx(5.0)
    assert distance(inst, 1, 0) == distance(inst, 0, 1)


def test_distance_to_self_is_zero(unit_square):
    for a in unit_square.point_ids:
        assert distance(unit_square, a, a) == 0.0


def test_matrix_distance_is_table_lookup():
    m = np.array([[0, 3, 4, 5], [3, 0, 7, 4], [4, 7, 0, 3], [5, 4, 3, 0]], dtype=float)
    inst = PairInstance(matrix_space(m), ((0, 1), (2, 3)))
    assert distance(inst, 1, 2) == 7.0


def test_distance_rejects_out_of_range(unit_square):
    with pytest.raises(UsageError):
        distance(unit_square, 0, 4)


def test_valid_euclidean_instance_has_no_violations(unit_square):
    assert validate_instance(unit_square) == []


def test_triangle_violation_reported():
    m = np.array(
        [[0, 5, 10, 5], [5, 0, 1, 5], [10, 1, 0, 5], [5, 5, 5, 0]],
        dtype=float,
    )
    violations = validate_instance(PairInstance(matrix_space(m), ((0, 1), (2, 3))))
    triangles = [v.ids for v in violations if v.kind == "triangle"]
    assert (0, 1, 2) in triangles


def test_overlapping_pairs_reported():
    inst = PairInstance(line_space([0, 1, 2, 3]), ((0, 1), (1, 2)))
    kinds = [v.kind for v in validate_instance(inst)]
    assert "pairs" in kinds


def test_zero_entries_need_pseudometric_flag():
    m = np.array([[0, 0, 1, 1], [0, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]], dtype=float)
    pairs = ((0, 2), (1, 3))
    flagged = [v.kind for v in validate_instance(PairInstance(matrix_space(m), pairs))]
    assert "zero" in flagged
    assert validate_instance(PairInstance(matrix_space(m, pseudometric=True), pairs)) == []


def test_asymmetric_and_negative_matrices_reported():
    m = np.array([[0, 1, 1, 1], [2, 0, 1, 1], [1, 1, 0, -1], [1, 1, -1, 0]], dtype=float)
    kinds = {v.kind for v in validate_instance(PairInstance(matrix_space(m), ((0, 1), (2, 3))))}
    assert {"asymmetric", "negative"} <= kinds


def test_ensure_valid_raises_on_violations():
    inst = PairInstance(line_space([0, 1, 2]), ((0, 1),))
    with pytest.raises(UsageError):
        ensure_valid(inst)


def test_metric_closure_fills_two_hop_path():
    inf = np.inf
    closed = metric_closure([[0, 1, inf], [1, 0, 1], [inf, 1, 0]])
    assert closed[0, 2] == 2.0
    assert closed[2, 0] == 2.0


def test_metric_closure_is_idempotent():
    rng = np.random.default_rng(3)
    raw = rng.uniform(1, 10, size=(6, 6))
    raw = raw + raw.T
    np.fill_diagonal(raw, 0)
    once = metric_closure(raw)
    assert np.array_equal(metric_closure(once), once)


def test_metric_closure_leaves_metric_unchanged(unit_square):
    d = unit_square.distances
    assert np.allclose(metric_closure(d), d)


def test_metric_closure_rejects_asymmetric():
    with pytest.raises(UsageError):
        metric_closure([[0, 1], [2, 0]])


def test_is_feasible_examples():
    one = PairInstance(line_space([0, 1]), ((0, 1),))
    assert is_feasible(one, Coloring.of([0], [1]))
    assert not is_feasible(one, Coloring.of([0, 1], []))
    two = PairInstance(line_space([0, 1, 2, 3]), ((0, 1), (2, 3)))
    assert is_feasible(two, Coloring.of([0, 2], [1, 3]))


def test_feasible_colorings_are_balanced():
    inst = PairInstance(line_space(range(6)), ((0, 3), (1, 4), (2, 5)))
    c = Coloring.of([0, 4, 2], [3, 1, 5])
    assert is_feasible(inst, c)
    assert len(c.red) == len(c.blue) == inst.n


def test_coloring_helpers():
    c = Coloring.of([3, 1], [0, 2])
    assert c.sort_key() == (1, 3)
    assert c.swapped().red == frozenset({0, 2})
    assert c.color_of(3) == "red"
    with pytest.raises(UsageError):
        c.color_of(9)


def test_distances_are_read_only(unit_square):
    with pytest.raises(ValueError):
        unit_square.distances[0, 1] = 3.0
