"""
Solve reports
=============

What every approximation returns: the coloring, the two induced networks,
their objective values, the claimed guarantee factor and a provable lower
bound on the optimum.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Tuple

from .config import TOLERANCE
from .graph_primitives import HamPath, Matching, Tour, Tree
from .instance_model import Coloring

OBJECTIVES = ("sum", "max", "bottleneck")


def coloring_to_dict(c: Coloring) -> dict:
    return {"red": sorted(c.red), "blue": sorted(c.blue)}


@dataclass(frozen=True, kw_only=True)
class SolveReport(ABC):
    """
    Args:
        algorithm: Name of the producing operation
        objective: One of OBJECTIVES; selects `value`
        coloring: The feasible red/blue coloring
        guarantee_factor: Claimed approximation factor, None when void
        lower_bound: Provable lower bound on the optimum of `objective`
    """

    algorithm: str
    objective: str
    coloring: Coloring
    guarantee_factor: Optional[float]
    lower_bound: float

    @abstractmethod
    def networks(self) -> Tuple[object, object]:
        """The red and the blue network, in that order."""

    @property
    def sum(self) -> float:
        red, blue = self.networks()
        return red.cost + blue.cost

    @property
    def max(self) -> float:
        red, blue = self.networks()
        return max(red.cost, blue.cost)

    @property
    def bottleneck(self) -> float:
        red, blue = self.networks()
        return max(red.bottleneck, blue.bottleneck)

    @property
    def value(self) -> float:
        return getattr(self, self.objective)

    @property
    def guarantee_valid(self) -> bool:
        return self.guarantee_factor is not None

    @property
    def certified_ratio(self) -> float:
        """value / lower_bound; exact zero optima count as ratio 1."""
        if self.lower_bound <= TOLERANCE:
            return 1.0 if self.value <= TOLERANCE else float("inf")
        return self.value / self.lower_bound

    def to_dict(self) -> dict:
        red, blue = self.networks()
        return {
            "algorithm": self.algorithm,
            "objective": self.objective,
            "coloring": coloring_to_dict(self.coloring),
            "red": red.to_dict(),
            "blue": blue.to_dict(),
            "sum": self.sum,
            "max": self.max,
            "bottleneck": self.bottleneck,
            "value": self.value,
            "guarantee_factor": self.guarantee_factor,
            "lower_bound": self.lower_bound,
        }


@dataclass(frozen=True, kw_only=True)
class MstReport(SolveReport):
    red_tree: Tree
    blue_tree: Tree
    # Set by the metric bottleneck algorithm only
    red_path: Optional[HamPath] = None
    blue_path: Optional[HamPath] = None

    def networks(self):
        return self.red_tree, self.blue_tree

    def to_dict(self) -> dict:
        out = super().to_dict()
        if self.red_path is not None:
            out["paths"] = {"red": self.red_path.to_dict(), "blue": self.blue_path.to_dict()}
        return out


@dataclass(frozen=True, kw_only=True)
class MatchReport(SolveReport):
    red_matching: Matching
    blue_matching: Matching
    merged: bool = False

    def networks(self):
        return self.red_matching, self.blue_matching

    def to_dict(self) -> dict:
        out = super().to_dict()
        out["merged"] = self.merged
        return out


@dataclass(frozen=True, kw_only=True)
class TspReport(SolveReport):
    red_tour: Tour
    blue_tour: Tour
    enumerated_count: int = 0
    subroutine: Optional[str] = None

    def networks(self):
        return self.red_tour, self.blue_tour

    def to_dict(self) -> dict:
        out = super().to_dict()
        out["enumerated_count"] = self.enumerated_count
        out["subroutine"] = self.subroutine
        return out
