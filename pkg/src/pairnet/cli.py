"""
pairnet command line
====================

    pairnet solve --problem mst --objective sum --input inst.json
    pairnet exact --problem tsp --objective bottleneck --input inst.json
    pairnet ratio --family randomEuclidean --count 200 --problem matching --objective sum
    pairnet gen --family unitLine --n 4 --seed 1 --output inst.json

Exit codes: 0 success, 1 ratio bound violated, 2 usage error,
3 infeasible, 4 capacity exceeded. A failed internal invariant also exits 1.
"""

import argparse
import logging
import sys
from typing import List, Optional

from .errors import PairnetError
from .exact_oracle import STRUCTURES, ProblemSpec
from .generators import FAMILIES, GenSpec, generate
from .io import dump_instance, instance_to_dict, load_instance, write_json
from .reports import OBJECTIVES
from .runner import SWEEP_FAMILIES, run_exact, run_ratio_sweep, run_solve
from .two_tsp import SUBROUTINES, TspParams


def _banner(title: str):
    print("=" * 70, file=sys.stderr)
    print(title, file=sys.stderr)
    print("=" * 70, file=sys.stderr)


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _edge_list(text: str):
    edges = []
    for item in text.split(","):
        if not item.strip():
            continue
        try:
            a, b = item.split("-")
            edges.append((int(a), int(b)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"edges look like 0-1,1-2; got {item!r}")
    return tuple(edges)


def _add_selectors(p: argparse.ArgumentParser):
    p.add_argument("--problem", choices=STRUCTURES, required=True)
    p.add_argument("--objective", choices=OBJECTIVES, required=True)


def _add_tsp_options(p: argparse.ArgumentParser):
    p.add_argument("--mu", type=float, default=1 / 12)
    p.add_argument("--beta", type=float, default=1.5)
    p.add_argument("--cap-k", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--subroutine", choices=SUBROUTINES, default="auto")
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pairnet", description="Red/blue pair network solvers")
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run an approximation on one instance")
    _add_selectors(solve)
    solve.add_argument("--input", required=True)
    solve.add_argument("--output")
    solve.add_argument("--oracle", action="store_true", help="also run the exact oracle")
    solve.add_argument("--timing", action="store_true", help="include wall time in the report")
    _add_tsp_options(solve)

    exact = sub.add_parser("exact", help="brute-force optimum of one instance")
    _add_selectors(exact)
    exact.add_argument("--input", required=True)
    exact.add_argument("--output")
    exact.add_argument("--timing", action="store_true")

    ratio = sub.add_parser("ratio", help="seeded ratio sweep against the oracle")
    _add_selectors(ratio)
    ratio.add_argument("--family", choices=sorted(SWEEP_FAMILIES), required=True)
    ratio.add_argument("--count", type=int, default=200)
    ratio.add_argument("--n-values", type=_int_list, default=[2, 3, 4, 5, 6])
    ratio.add_argument("--output", help="CSV path; standard output when omitted")
    _add_tsp_options(ratio)

    gen = sub.add_parser("gen", help="write a generated instance")
    gen.add_argument("--family", choices=FAMILIES, required=True)
    gen.add_argument("--n", type=int, default=1)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--box", type=float, default=1.0)
    gen.add_argument("--epsilon", type=float, default=0.01)
    gen.add_argument("--xs", type=_int_list, default=[])
    gen.add_argument("--edges", type=_edge_list, default=())
    gen.add_argument("--vertices", type=int, default=None)
    gen.add_argument("--output")
    return parser


def _params(args) -> TspParams:
    return TspParams(
        mu=args.mu,
        beta=args.beta,
        cap_k=args.cap_k,
        seed=args.seed,
        subroutine=args.subroutine,
        workers=args.workers,
    )


def cmd_solve(args) -> int:
    spec = ProblemSpec(args.problem, args.objective)
    inst = load_instance(args.input)
    run = run_solve(inst, spec, _params(args), with_oracle=args.oracle, timing=args.timing)
    write_json(run.to_dict(), args.output)
    _banner(f"[SOLVE] {spec.label} via {run.algorithm}")
    print(f"  value: {run.value:.6g}   lower bound: {run.lower_bound:.6g}", file=sys.stderr)
    for note in run.notes:
        print(f"  note: {note}", file=sys.stderr)
    return 0


def cmd_exact(args) -> int:
    spec = ProblemSpec(args.problem, args.objective)
    inst = load_instance(args.input)
    run = run_exact(inst, spec, timing=args.timing)
    write_json(run.to_dict(), args.output)
    _banner(f"[EXACT] {spec.label}: {run.value:.6g}")
    return 0


def cmd_ratio(args) -> int:
    spec = ProblemSpec(args.problem, args.objective)
    table = run_ratio_sweep(
        args.family,
        spec,
        args.count,
        seed=args.seed,
        n_values=args.n_values,
        params=_params(args),
        workers=args.workers,
    )
    if args.output:
        table.to_csv(args.output, index=False)
    else:
        table.to_csv(sys.stdout, index=False)
    failures = int((~table["pass"]).sum())
    _banner(f"[RATIO] {spec.label} on {args.family}")
    print(f"  instances: {len(table)}", file=sys.stderr)
    print(f"  max ratio: {table['ratio'].max():.4f}", file=sys.stderr)
    print(f"  failures:  {failures}", file=sys.stderr)
    return 1 if failures else 0


def cmd_gen(args) -> int:
    spec = GenSpec(
        family=args.family,
        n=args.n,
        seed=args.seed,
        box=args.box,
        epsilon=args.epsilon,
        xs=tuple(args.xs),
        edges=tuple(args.edges),
        vertices=args.vertices,
    )
    inst = generate(spec)
    if args.output:
        dump_instance(inst, args.output)
    else:
        write_json(instance_to_dict(inst))
    _banner(f"[GEN] {args.family}: {inst.n} pairs")
    return 0


COMMANDS = {"solve": cmd_solve, "exact": cmd_exact, "ratio": cmd_ratio, "gen": cmd_gen}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except PairnetError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return e.exit_code
