import pytest

from conftest import hexagon, perfect_matchings
from pairnet.errors import InfeasibleError, UsageError
from pairnet.exact_oracle import ProblemSpec, exact_optimum
from pairnet.generators import random_euclidean, random_metric
from pairnet.instance_model import PairInstance, canonical_pairs, euclidean_space, is_feasible
from pairnet.two_matching import (
    CollapsedPairGraph,
    Cycle,
    TwoFactor,
    bottleneck_2matching,
    color_cycles,
    merge_odd_cycles,
    minmax_2matching,
    minsum_2matching,
    one_of_pair_matching,
    pair_2factor,
)

MATCH_SUM = ProblemSpec("matching", "sum")
MATCH_MAX = ProblemSpec("matching", "max")
MATCH_BOTTLENECK = ProblemSpec("matching", "bottleneck")


@pytest.fixture
def two_hexagons():
    """Two far-apart hexagons, each with its pairs on alternate sides."""
    points = hexagon(0.0) + hexagon(10.0)
    return PairInstance(euclidean_space(points), canonical_pairs(6))


@pytest.fixture
def hexagon_square_hexagon():
    """Odd cycle, even cycle, odd cycle along the x axis, 4 apart."""
    square = [(5, 0), (5, 1), (6, 0), (6, 1)]
    points = hexagon(0.0) + square + hexagon(11.0)
    return PairInstance(euclidean_space(points), canonical_pairs(8))


def brute_one_of_pair(inst):
    best = None
    for bits in range(1 << inst.n):
        picks = [inst.pairs[i][(bits >> i) & 1] for i in range(inst.n)]
        for pm in perfect_matchings(picks):
            cost = sum(inst.distances[a, b] for a, b in pm)
            best = cost if best is None else min(best, cost)
    return best


def test_collapsed_graph_on_square(unit_square):
    graph = CollapsedPairGraph.build(unit_square)
    assert graph.weights[0, 1] == pytest.approx(1.0)
    assert graph.realizer[(0, 1)] == (0, 2)
    assert graph.realizer[(1, 0)] == (0, 2)


def test_one_of_pair_matching_on_square(unit_square):
    m = one_of_pair_matching(unit_square, "sum")
    assert [(e.u, e.v) for e in m.edges] == [(0, 2)]
    assert m.cost == pytest.approx(1.0)
    assert one_of_pair_matching(unit_square, "bottleneck").bottleneck == pytest.approx(1.0)


def test_one_of_pair_matching_needs_even_n():
    with pytest.raises(InfeasibleError):
        one_of_pair_matching(random_euclidean(3, seed=0))


def test_one_of_pair_matching_rejects_unknown_objective(unit_square):
    with pytest.raises(UsageError):
        one_of_pair_matching(unit_square, "max")


def test_one_of_pair_matching_against_enumeration():
    for seed in range(40):
        inst = random_euclidean(2 + 2 * (seed % 2), seed)
        m = one_of_pair_matching(inst, "sum")
        assert len({int(inst.pair_index[p]) for p in m.covered}) == inst.n
        assert m.cost == pytest.approx(brute_one_of_pair(inst))


def test_minsum_on_square(unit_square):
    report = minsum_2matching(unit_square)
    assert report.coloring.red == frozenset({0, 2})
    assert report.sum == pytest.approx(2.0)
    assert report.lower_bound == pytest.approx(2.0)
    assert report.guarantee_factor == 2.0
    assert exact_optimum(unit_square, MATCH_SUM).value == pytest.approx(2.0)


def test_minmax_on_square(unit_square):
    report = minmax_2matching(unit_square)
    assert report.max == pytest.approx(1.0)
    assert report.guarantee_factor == 3.0


def test_coincident_points_cost_nothing():
    inst = PairInstance(euclidean_space([(0, 0)] * 4), canonical_pairs(2))
    assert minsum_2matching(inst).sum == 0.0
    assert bottleneck_2matching(inst).bottleneck == 0.0


def test_odd_pair_count_is_infeasible():
    inst = random_euclidean(3, seed=1)
    for solve in (minsum_2matching, minmax_2matching, bottleneck_2matching):
        with pytest.raises(InfeasibleError):
            solve(inst)


@pytest.mark.parametrize("make, count", [(random_euclidean, 200), (random_metric, 100)])
def test_matching_ratios_on_random_instances(make, count):
    solvers = (
        (minsum_2matching, MATCH_SUM, 2.0),
        (minmax_2matching, MATCH_MAX, 3.0),
        (bottleneck_2matching, MATCH_BOTTLENECK, 3.0),
    )
    for seed in range(count):
        inst = make(2 * (1 + seed % 3), seed)
        for solve, spec, factor in solvers:
            report = solve(inst)
            oracle = exact_optimum(inst, spec).value
            assert is_feasible(inst, report.coloring)
            assert report.lower_bound <= oracle + 1e-9
            assert oracle <= report.value + 1e-9
            assert report.value <= factor * oracle + 1e-9


def test_pair_2factor_structure():
    for seed in range(50):
        inst = random_euclidean(2 * (1 + seed % 4), seed)
        f = pair_2factor(inst)
        covered = [p for c in f.cycles for p in c.nodes]
        assert sorted(covered) == inst.point_ids
        for c in f.cycles:
            assert c.nodes[0] == min(c.nodes)
            for i in range(0, len(c.nodes), 2):
                assert inst.partner[c.nodes[i]] == c.nodes[i + 1]
            assert all(inst.partner[a] != b for a, b in c.matching_edges())
        assert sum(c.pair_count for c in f.cycles) == inst.n


def test_pair_2factor_with_two_pairs_is_one_square(unit_square):
    f = pair_2factor(unit_square)
    assert len(f.cycles) == 1
    assert f.cycles[0].pair_count == 2
    assert not f.odd_cycles


def test_merge_without_odd_cycles_is_identity(unit_square):
    f = pair_2factor(unit_square)
    assert merge_odd_cycles(f, unit_square) is f


def test_merge_two_odd_cycles(two_hexagons):
    f = pair_2factor(two_hexagons)
    assert [c.pair_count for c in f.cycles] == [3, 3]

    merged = merge_odd_cycles(f, two_hexagons)
    assert len(merged.cycles) == 1
    assert merged.cycles[0].pair_count == 6
    assert merged.lower_bound == pytest.approx(8.0)
    assert len(merged.created) == 2
    assert all(e.w <= 3 * merged.lower_bound for e in merged.created)
    assert all(len(e.via) <= 4 for e in merged.created)


def test_merge_chain_through_even_cycle(hexagon_square_hexagon):
    f = pair_2factor(hexagon_square_hexagon)
    assert [c.pair_count for c in f.cycles] == [3, 2, 3]

    merged = merge_odd_cycles(f, hexagon_square_hexagon)
    assert len(merged.cycles) == 1
    assert merged.cycles[0].pair_count == 8
    assert merged.lower_bound == pytest.approx(4.0)
    assert all(e.w <= 3 * merged.lower_bound for e in merged.created)
    assert is_feasible(hexagon_square_hexagon, color_cycles(merged))


def test_bottleneck_after_merge_is_within_three(two_hexagons):
    report = bottleneck_2matching(two_hexagons)
    assert report.merged
    assert report.guarantee_factor == 3.0
    oracle = exact_optimum(two_hexagons, MATCH_BOTTLENECK).value
    assert report.lower_bound <= oracle + 1e-9
    assert report.bottleneck <= 3 * oracle + 1e-9


def test_bottleneck_is_exact_without_merge(unit_square):
    report = bottleneck_2matching(unit_square)
    assert not report.merged
    assert report.guarantee_factor == 1.0
    assert report.bottleneck == pytest.approx(exact_optimum(unit_square, MATCH_BOTTLENECK).value)


def test_color_cycles_walks_from_smallest_id():
    f = TwoFactor((Cycle((0, 1, 3, 2)),))
    c = color_cycles(f)
    assert c.red == frozenset({0, 2})
    assert c.blue == frozenset({1, 3})


def test_color_cycles_rejects_odd_cycle():
    with pytest.raises(UsageError):
        color_cycles(TwoFactor((Cycle((0, 1, 2, 3, 4, 5)),)))
