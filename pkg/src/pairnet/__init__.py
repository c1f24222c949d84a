"""
pairnet
=======

Red/blue colorings of point pairs and the spanning trees, perfect
matchings and tours they induce, with exact oracles to check every
approximation at desk scale.
"""

from .errors import CapacityError, InfeasibleError, InvariantError, PairnetError, UsageError
from .exact_oracle import ProblemSpec, exact_optimum, feasible_colorings
from .instance_model import Coloring, PairInstance, is_feasible, validate_instance
from .runner import run_ratio_sweep, solve_problem
from .two_tsp import TspParams

__version__ = "1.0.0"
