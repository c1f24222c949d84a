import numpy as np
import pytest

from pairnet.errors import UsageError
from pairnet.exact_oracle import ProblemSpec, exact_optimum
from pairnet.generators import (
    FAMILIES,
    GenSpec,
    connected_partition_to_minmax_2mst,
    generate,
    partition_to_minmax_matching,
    random_euclidean,
    random_k_tuples,
    random_line,
    random_metric,
    unit_line,
)
from pairnet.instance_model import distance, validate_instance

RANDOM_FAMILIES = [random_euclidean, random_metric, unit_line, random_line]


@pytest.mark.parametrize("make", RANDOM_FAMILIES)
def test_random_families_are_seeded_and_valid(make):
    for n in (1, 2, 5):
        a, b = make(n, 42), make(n, 42)
        assert np.array_equal(a.distances, b.distances)
        assert a.pairs == b.pairs
        assert a.n == n
        assert validate_instance(a) == []


def test_different_seeds_differ():
    assert not np.array_equal(random_euclidean(3, 1).distances, random_euclidean(3, 2).distances)


def test_random_metric_entries_in_range():
    d = random_metric(4, seed=7).distances
    off = d[~np.eye(len(d), dtype=bool)]
    assert np.all((off >= 1.0) & (off <= 2.0))
    assert np.array_equal(d, d.T)


def test_unit_line_uses_consecutive_integers():
    inst = unit_line(4, seed=1)
    assert sorted(inst.metric.points.tolist()) == list(range(8))


def test_zero_pairs_rejected():
    with pytest.raises(UsageError):
        random_euclidean(0, seed=0)


def test_random_k_tuples_shape():
    tuples = random_k_tuples(4, 3, seed=2)
    assert len(tuples) == 4
    assert all(len(t) == 3 for t in tuples)
    flat = sorted(x for t in tuples for x in t)
    assert flat == list(range(12))


def test_partition_gadget_layout():
    inst = partition_to_minmax_matching([1, 2, 3])
    assert inst.n == 6
    assert inst.num_points == 12
    # p_1 and p_{n+1} sit x_1 apart
    assert distance(inst, 0, 6) == pytest.approx(1.0)
    assert distance(inst, 0, 1) == pytest.approx(0.01)


def test_partition_gadget_yes_and_no():
    spec = ProblemSpec("matching", "max")
    yes = exact_optimum(partition_to_minmax_matching([1, 2, 3], 0.01), spec).value
    assert yes <= 3.0 + 0.1
    no = exact_optimum(partition_to_minmax_matching([1, 1, 3], 0.01), spec).value
    assert no >= 2.5 + 0.4


def test_partition_gadget_under_minmax_2mst():
    # threshold (n - 1) * M + M / 2
    spec = ProblemSpec("mst", "max")
    yes = exact_optimum(partition_to_minmax_matching([1, 2, 3]), spec).value
    assert yes == pytest.approx(15.0)
    assert yes <= 2 * 6 + 3 + 1e-9
    no = exact_optimum(partition_to_minmax_matching([1, 1, 3]), spec).value
    assert no == pytest.approx(13.0)
    assert no > 2 * 5 + 2.5


@pytest.mark.parametrize("xs, eps", [([], 0.01), ([1, 0], 0.01), ([1.5], 0.01), ([1, 2], 0.0)])
def test_partition_gadget_rejects_bad_input(xs, eps):
    with pytest.raises(UsageError):
        partition_to_minmax_matching(xs, eps)


def test_connected_partition_gadget_distances():
    inst = connected_partition_to_minmax_2mst([(0, 1), (1, 2), (2, 3), (3, 0)])
    assert inst.metric.pseudometric
    assert validate_instance(inst) == []
    assert distance(inst, 0, 2) == 1.0
    assert distance(inst, 0, 4) == 2.0
    assert distance(inst, 1, 3) == 0.0
    assert distance(inst, 0, 3) == 2.0


def test_four_cycle_value_is_half_plus_one():
    inst = connected_partition_to_minmax_2mst([(0, 1), (1, 2), (2, 3), (3, 0)])
    assert exact_optimum(inst, ProblemSpec("mst", "max")).value == pytest.approx(3.0)


def test_path_splits_and_star_does_not():
    spec = ProblemSpec("mst", "max")
    path = connected_partition_to_minmax_2mst([(i, i + 1) for i in range(5)])
    assert exact_optimum(path, spec).value == pytest.approx(4.0)
    star = connected_partition_to_minmax_2mst([(0, i) for i in range(1, 6)])
    assert exact_optimum(star, spec).value > 4.0


@pytest.mark.parametrize(
    "edges, vertices",
    [([(0, 1), (1, 2)], None), ([(0, 1), (2, 3)], None), ([(0, 0), (0, 1)], None), ([(0, 5)], 4)],
)
def test_connected_partition_rejects_bad_graphs(edges, vertices):
    with pytest.raises(UsageError):
        connected_partition_to_minmax_2mst(edges, vertices)


def test_generate_dispatch():
    assert generate(GenSpec("unitLine", n=3, seed=4)).n == 3
    assert generate(GenSpec("partitionMatching", xs=(1, 2, 3))).n == 6
    assert generate(GenSpec("connectedPartitionMst", edges=((0, 1),))).n == 2
    assert set(FAMILIES) >= {"randomEuclidean", "randomMetric", "unitLine"}


def test_gen_spec_validation():
    with pytest.raises(UsageError):
        GenSpec("gaussianBlobs")
    with pytest.raises(UsageError):
        GenSpec("partitionMatching")
    with pytest.raises(UsageError):
        GenSpec("connectedPartitionMst")
