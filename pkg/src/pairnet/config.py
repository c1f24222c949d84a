"""
Configuration
=============

Constants and size limits shared by the solvers, the oracle and the CLI.
"""

from dataclasses import dataclass

# Relative tolerance for triangle checks and ratio comparisons
TOLERANCE = 1e-9

FORMAT_TAG = "pairnet-instance-v1"

METRIC_KINDS = ("euclidean2d", "line1d", "matrix")

# Steiner ratio per metric kind. The planar value is the cited upper bound.
STEINER_RATIO = {
    "matrix": 2.0,
    "euclidean2d": 1.3546,
    "line1d": 1.3546,
}


@dataclass(frozen=True)
class Limits:
    """
    Size limits for the exact kernels and the brute-force oracle.

    Args:
        exact_tsp_points: Largest point set handed to Held-Karp
        dp_matching_nodes: Largest node set solved by subset DP; beyond this
            the blossom solver takes over
        oracle_side_mst: Points per side for exact MST side values
        oracle_side_matching: Points per side for exact matching side values
        oracle_side_tsp: Points per side for exact tour side values
        oracle_pairs_mst: Pairs the oracle will enumerate for 2-MST problems
        oracle_pairs_matching: Pairs the oracle will enumerate for 2-matching
        oracle_pairs_tsp: Pairs the oracle will enumerate for 2-TSP
    """

    exact_tsp_points: int = 13
    dp_matching_nodes: int = 20
    oracle_side_mst: int = 20
    oracle_side_matching: int = 12
    oracle_side_tsp: int = 13
    oracle_pairs_mst: int = 10
    oracle_pairs_matching: int = 6
    oracle_pairs_tsp: int = 6

    def side_limit(self, structure: str) -> int:
        return {
            "mst": self.oracle_side_mst,
            "matching": self.oracle_side_matching,
            "tsp": self.oracle_side_tsp,
        }[structure]

    def pair_limit(self, structure: str) -> int:
        return {
            "mst": self.oracle_pairs_mst,
            "matching": self.oracle_pairs_matching,
            "tsp": self.oracle_pairs_tsp,
        }[structure]


DEFAULT_LIMITS = Limits()
