"""Command-line front end.

Subcommands: solve, kernelize, transform, gen, check, bench.  Exit
codes: 0 solved or decided, 1 usage error, 2 validation or parse error,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import run_bench
from .dispatch import ALGORITHMS, solve_to_record, with_target
from .instfile import parse_instance, write_instance
from .kernel import Decided, kernelize
from .model import CapExceeded, HappyError, make_solution
from .transforms import (
    generate,
    subdivide_mhe,
    to_bipartite_mhv,
    to_split_mhv,
    to_weighted_complete,
)

_TRANSFORMS = {
    "split-mhv": to_split_mhv,
    "bipartite-mhv": to_bipartite_mhv,
    "subdivide": subdivide_mhe,
    "weighted-complete": to_weighted_complete,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> _Parser:
    parser = _Parser(prog="happy", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("--input", required=True)
    p.add_argument("--algo", default="auto", choices=["auto", *sorted(ALGORITHMS)])
    p.add_argument("--target", type=int, default=None)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("kernelize", help="shrink a decision instance")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--target", type=int, default=None)

    p = sub.add_parser("transform", help="rebuild an instance in another form")
    p.add_argument("--kind", required=True, choices=sorted(_TRANSFORMS))
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--model", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--variant")
    p.add_argument("--precolor-fraction", type=float)
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--wmax", type=int)
    p.add_argument("--p-in", type=float)
    p.add_argument("--p-out", type=float)
    p.add_argument("--output")

    p = sub.add_parser("check", help="evaluate a full coloring")
    p.add_argument("--input", required=True)
    p.add_argument("--coloring", required=True)

    p = sub.add_parser("bench", help="time solvers over a directory")
    p.add_argument("--dir", required=True)
    p.add_argument("--algos", default="auto")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--out-dir", default=None)

    return parser


def _read_instance(path: str):
    return parse_instance(Path(path).read_text())


def _cmd_solve(args) -> int:
    inst = _read_instance(args.input)
    if args.target is not None:
        inst = with_target(inst, args.target)
    record = solve_to_record(inst, args.algo)
    if args.json:
        print(record.to_json())
        return 0
    print(f"variant: {record.variant}")
    print(f"algorithm: {record.algorithm}")
    print(f"optimum: {record.optimum}")
    if record.answer is not None:
        print(f"answer: {record.answer}")
    print("coloring:", " ".join(map(str, record.coloring)))
    return 0


def _cmd_kernelize(args) -> int:
    inst = _read_instance(args.input)
    if args.target is not None:
        inst = with_target(inst, args.target)
    outcome = kernelize(inst)
    if isinstance(outcome, Decided):
        print(f"decided: {'yes' if outcome.answer else 'no'}")
        return 0
    Path(args.output).write_text(write_instance(outcome.kernel))
    print(
        f"kernel: {outcome.kernel.graph.n} vertices, "
        f"remaining target {outcome.remaining_target}, "
        f"banked {outcome.trace.banked}"
    )
    return 0


def _cmd_transform(args) -> int:
    inst = _read_instance(args.input)
    out = _TRANSFORMS[args.kind](inst)
    Path(args.output).write_text(write_instance(out))
    print(f"wrote {args.output}: {out.variant} n={out.graph.n} m={out.graph.m}")
    return 0


def _cmd_gen(args) -> int:
    params = {}
    for name in ("n", "k", "p", "variant", "wmax", "p_in", "p_out"):
        value = getattr(args, name)
        if value is not None:
            params[name] = value
    if args.precolor_fraction is not None:
        params["precolor_fraction"] = args.precolor_fraction
    if args.weighted:
        params["weighted"] = True
    inst = generate(args.model, args.seed, **params)
    text = write_instance(inst)
    if args.output:
        Path(args.output).write_text(text)
        print(f"wrote {args.output}: n={inst.graph.n} m={inst.graph.m}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_check(args) -> int:
    inst = _read_instance(args.input)
    colors = tuple(int(x) for x in args.coloring.replace(",", " ").split())
    sol = make_solution(inst, colors, "check")
    print(f"value: {sol.happy_weight}")
    if inst.target is not None:
        print(f"answer: {'yes' if sol.happy_weight >= inst.target else 'no'}")
    return 0


def _cmd_bench(args) -> int:
    algos = tuple(a for a in args.algos.split(",") if a)
    rows, failures = run_bench(args.dir, algos, args.reps, args.out_dir)
    if not rows:
        print("warning: no instances found", file=sys.stderr)
        return 0
    header = f"{'instance':<28} {'algorithm':<12} {'status':<10} {'optimum':>8} {'median_ms':>10}"
    print(header)
    for row in rows:
        print(
            f"{row['instance']:<28} {row['algorithm']:<12} {row['status']:<10} "
            f"{str(row['optimum']):>8} {str(row['median_ms']):>10}"
        )
    for failure in failures:
        print(f"FAIL {failure}", file=sys.stderr)
    return 2 if failures else 0


_COMMANDS = {
    "solve": _cmd_solve,
    "kernelize": _cmd_kernelize,
    "transform": _cmd_transform,
    "gen": _cmd_gen,
    "check": _cmd_check,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return _COMMANDS[args.command](args)


def entrypoint(argv=None) -> int:
    try:
        return main(argv)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (HappyError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(entrypoint())
