"""
Runs and sweeps
===============

Dispatch from a (structure, objective) selector to the approximation that
solves it, the RunReport written by the CLI, and the seeded ratio sweep
shared by `pairnet ratio` and calculate_ratios.py.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import pandas as pd

from .config import DEFAULT_LIMITS, TOLERANCE, Limits
from .errors import UsageError
from .exact_oracle import ProblemSpec, exact_optimum
from .generators import random_euclidean, random_line, random_metric, unit_line
from .instance_model import PairInstance
from .io import instance_digest
from .reports import SolveReport, coloring_to_dict
from .two_matching import bottleneck_2matching, minmax_2matching, minsum_2matching
from .two_mst import bottleneck_2mst_line, bottleneck_2mst_metric, minmax_2mst, minsum_2mst
from .two_tsp import TspParams, bottleneck_2tsp, minmax_2tsp, minsum_2tsp

logger = logging.getLogger(__name__)

RATIO_COLUMNS = ["instance_id", "n", "algorithm", "value", "oracle", "ratio", "bound", "pass"]

SWEEP_FAMILIES = {
    "randomEuclidean": lambda n, seed: random_euclidean(n, seed),
    "randomMetric": random_metric,
    "unitLine": unit_line,
    "randomLine": lambda n, seed: random_line(n, seed),
}


def solve_problem(inst: PairInstance, spec: ProblemSpec, params: Optional[TspParams] = None) -> SolveReport:
    """Run the approximation for `spec`; line instances get the line bottleneck 2-MST."""
    params = params or TspParams()
    if spec.structure == "mst":
        if spec.objective == "sum":
            return minsum_2mst(inst)
        if spec.objective == "max":
            return minmax_2mst(inst)
        if inst.metric.kind == "line1d":
            return bottleneck_2mst_line(inst)
        return bottleneck_2mst_metric(inst)
    if spec.structure == "matching":
        return {
            "sum": minsum_2matching,
            "max": minmax_2matching,
            "bottleneck": bottleneck_2matching,
        }[spec.objective](inst)
    if spec.objective == "sum":
        return minsum_2tsp(inst, params)
    if spec.objective == "max":
        return minmax_2tsp(inst, params)
    return bottleneck_2tsp(inst)


def ratio_of(value: float, oracle: float) -> float:
    if oracle <= TOLERANCE:
        return 1.0 if value <= TOLERANCE else float("inf")
    return value / oracle


def within(value: float, bound: float) -> bool:
    return value <= bound + TOLERANCE * max(abs(bound), 1.0)


@dataclass
class RunReport:
    """
    One solve or oracle run as written by the CLI. `oracle_value` and
    `ratio` are present only when the oracle ran; `wall_time` only when
    timing was requested.
    """

    instance_digest: str
    problem: str
    objective: str
    algorithm: str
    payload: dict
    value: float
    guarantee_factor: Optional[float] = None
    lower_bound: Optional[float] = None
    oracle_value: Optional[float] = None
    ratio: Optional[float] = None
    wall_time: Optional[float] = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "instance_digest": self.instance_digest,
            "problem": self.problem,
            "objective": self.objective,
            "algorithm": self.algorithm,
            "value": self.value,
            "guarantee_factor": self.guarantee_factor,
            "guarantee_valid": self.guarantee_factor is not None,
            "lower_bound": self.lower_bound,
            **self.payload,
        }
        if self.lower_bound is not None:
            out["certified_ratio"] = ratio_of(self.value, self.lower_bound)
        if self.oracle_value is not None:
            out["oracle_value"] = self.oracle_value
            out["ratio"] = self.ratio
        if self.wall_time is not None:
            out["wall_time"] = self.wall_time
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def run_solve(
    inst: PairInstance,
    spec: ProblemSpec,
    params: Optional[TspParams] = None,
    with_oracle: bool = False,
    timing: bool = False,
) -> RunReport:
    started = time.perf_counter()
    report = solve_problem(inst, spec, params)
    elapsed = time.perf_counter() - started
    payload = report.to_dict()
    for key in ("algorithm", "objective", "value", "guarantee_factor", "lower_bound"):
        payload.pop(key)
    run = RunReport(
        instance_digest=instance_digest(inst),
        problem=spec.structure,
        objective=spec.objective,
        algorithm=report.algorithm,
        payload=payload,
        value=report.value,
        guarantee_factor=report.guarantee_factor,
        lower_bound=report.lower_bound,
        wall_time=elapsed if timing else None,
    )
    if not report.guarantee_valid:
        run.notes.append("guarantee void: arc cap below 2k")
    if with_oracle:
        run.oracle_value = exact_optimum(inst, spec).value
        run.ratio = ratio_of(run.value, run.oracle_value)
    return run


def run_exact(inst: PairInstance, spec: ProblemSpec, limits: Limits = DEFAULT_LIMITS, timing: bool = False) -> RunReport:
    started = time.perf_counter()
    result = exact_optimum(inst, spec, limits)
    elapsed = time.perf_counter() - started
    return RunReport(
        instance_digest=instance_digest(inst),
        problem=spec.structure,
        objective=spec.objective,
        algorithm="exact_optimum",
        payload={"coloring": coloring_to_dict(result.argmin), "explored_count": result.explored_count},
        value=result.value,
        wall_time=elapsed if timing else None,
    )


def _sweep_row(family: str, n: int, seed: int, spec: ProblemSpec, params: TspParams) -> dict:
    inst = SWEEP_FAMILIES[family](n, seed)
    report = solve_problem(inst, spec, params)
    oracle = exact_optimum(inst, spec).value
    ratio = ratio_of(report.value, oracle)
    bound = report.guarantee_factor
    passed = within(oracle, report.value) and (bound is None or within(ratio, bound))
    return {
        "instance_id": f"{family}-{seed:06d}",
        "n": n,
        "algorithm": report.algorithm,
        "value": report.value,
        "oracle": oracle,
        "ratio": ratio,
        "bound": bound,
        "pass": bool(passed),
    }


def run_ratio_sweep(
    family: str,
    spec: ProblemSpec,
    count: int,
    seed: int = 0,
    n_values: Sequence[int] = (2, 3, 4, 5, 6),
    params: Optional[TspParams] = None,
    workers: int = 1,
) -> pd.DataFrame:
    """
    Generate `count` instances (seeds seed, seed+1, ...; n cycling through
    n_values), solve each approximately and exactly, and tabulate ratios.
    Matching sweeps keep only even n.
    """
    if family not in SWEEP_FAMILIES:
        raise UsageError(f"ratio sweeps support {sorted(SWEEP_FAMILIES)}, got {family!r}")
    if count < 1:
        raise UsageError(f"count must be positive, got {count}")
    sizes = [n for n in n_values if spec.structure != "matching" or n % 2 == 0]
    if not sizes:
        raise UsageError(f"no usable pair counts in {list(n_values)} for {spec.label}")
    params = params or TspParams()
    jobs = [(family, sizes[i % len(sizes)], seed + i, spec, params) for i in range(count)]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda job: _sweep_row(*job), jobs))
    else:
        rows = [_sweep_row(*job) for job in jobs]
    table = pd.DataFrame(rows, columns=RATIO_COLUMNS)
    table = table.sort_values("instance_id", kind="stable").reset_index(drop=True)
    logger.debug("%s sweep on %s: %d rows, %d failures", spec.label, family, len(table), (~table["pass"]).sum())
    return table
