import itertools

import numpy as np
import pytest

from pairnet.instance_model import PairInstance, euclidean_space, line_space


@pytest.fixture
def line_0_1_3_10():
    """p1=0, p2=1, q1=3, q2=10 on a line; point ids follow coordinate order."""
    return PairInstance(line_space([0, 1, 3, 10]), ((0, 2), (1, 3)))


@pytest.fixture
def unit_square():
    """Two vertical pairs: (0,0)-(0,1) and (1,0)-(1,1)."""
    return PairInstance(euclidean_space([(0, 0), (0, 1), (1, 0), (1, 1)]), ((0, 1), (2, 3)))


def hexagon(cx, cy=0.0):
    return [(cx + np.cos(t), cy + np.sin(t)) for t in np.arange(6) * np.pi / 3]


def perfect_matchings(nodes):
    """Every perfect matching of `nodes` as a list of pairs."""
    nodes = list(nodes)
    if not nodes:
        yield []
        return
    a = nodes[0]
    for i in range(1, len(nodes)):
        rest = nodes[1:i] + nodes[i + 1:]
        for tail in perfect_matchings(rest):
            yield [(a, nodes[i])] + tail


def all_tours(points):
    first, *rest = sorted(points)
    for perm in itertools.permutations(rest):
        yield (first,) + perm
