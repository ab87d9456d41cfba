"""``replan`` command line.

Exit codes: 0 success, 1 infeasible or strategy inapplicable (or violations
found by ``validate``), 2 bad input or usage. Results go to stdout or the
``--out`` file, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import run_bench
from .changes import apply_changes, classify_change, format_changes, parse_changes
from .encoder import WeightConfig, decode, encode_original
from .errors import ReplanError, StatusNotSolved
from .generator import GeneratorConfig, generate_instance, generate_scenario
from .ilp import Status, export_lp, solve
from .instance_io import read_instance, read_solution, write_instance, write_solution
from .model import check_references, validate_solution
from .reopt import ReoptStatus, Strategy, diff, reoptimise


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Fail(2, f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise _Fail(2, f"cannot write {out}: {exc.strerror}") from None


def _instance(path):
    return read_instance(_read(path))


def _solution(path):
    return read_solution(_read(path))


def _weights(args) -> WeightConfig:
    try:
        return WeightConfig(args.green, args.amber, args.keep_bonus)
    except ValueError as exc:
        raise _Fail(2, str(exc)) from None


# ------------------------------------------------------------------ commands

def cmd_generate(args):
    base = GeneratorConfig()
    try:
        config = GeneratorConfig(seed=args.seed,
                                 num_modules=args.modules or base.num_modules,
                                 num_tas=args.tas or base.num_tas,
                                 weeks=args.weeks or base.weeks)
    except ValueError as exc:
        raise _Fail(2, str(exc)) from None
    _emit(write_instance(generate_instance(config)), args.out)


def cmd_solve(args):
    instance = _instance(args.instance)
    problem, varmap = encode_original(instance, _weights(args))
    if args.export_lp:
        _emit(export_lp(problem), args.export_lp)
    result = solve(problem, args.time_limit)
    if result.status is Status.INFEASIBLE:
        raise _Fail(1, "infeasible: no allocation satisfies every constraint")
    if result.values is None:
        raise _Fail(1, "time limit reached without a solution")
    if result.status is Status.TIMED_OUT:
        print("warning: time limit reached; solution may not be optimal", file=sys.stderr)
    _emit(write_solution(decode(varmap, result)), args.out)


def cmd_validate(args):
    instance = _instance(args.instance)
    solution = _solution(args.solution)
    check_references(instance, solution)
    violations = validate_solution(instance, solution)
    _emit("".join(f"{v}\n" for v in violations) or "valid\n", args.out)
    return 1 if violations else 0


def cmd_scenario(args):
    instance = _instance(args.instance)
    solution = _solution(args.solution)
    _emit(format_changes(generate_scenario(instance, solution, args.kind, args.seed)), args.out)


def cmd_apply(args):
    instance = _instance(args.instance)
    solution = _solution(args.solution)
    changes = parse_changes(_read(args.changes))
    _emit(write_instance(apply_changes(instance, changes, solution)), args.out)


def cmd_classify(args):
    instance = _instance(args.instance)
    solution = _solution(args.solution)
    check_references(instance, solution)
    impact = classify_change(instance, solution)
    _emit(f"{impact.classification}\n" + "".join(f"  {v}\n" for v in impact.violations), args.out)


def cmd_reopt(args):
    instance = _instance(args.instance)
    solution = _solution(args.solution)
    result = reoptimise(instance, solution, Strategy(args.strategy), _weights(args),
                        args.time_limit)
    if args.export_lp and result.problem is not None:
        _emit(export_lp(result.problem), args.export_lp)
    if result.new_solution is None:
        raise _Fail(1, result.message)
    if result.status is ReoptStatus.TIMED_OUT:
        print(f"warning: {result.message}", file=sys.stderr)
    _emit(write_solution(result.new_solution), args.out)
    if args.script:
        _emit(str(result.edit_script), args.script)
    print(f"{result.impact.classification}: kept {result.kept_count}/{result.total_count}",
          file=sys.stderr)


def cmd_diff(args):
    _emit(str(diff(_solution(args.old), _solution(args.new))), args.out)


def cmd_bench(args):
    report = run_bench(args.seed, time_limit=args.time_limit)
    _emit(report.render(times=args.times), args.out)


# ------------------------------------------------------------------ parser

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="replan", description="Reoptimise TA allocations.")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help, description=help)
        sp.set_defaults(fn=fn)
        return sp

    def weights(sp):
        d = WeightConfig()
        sp.add_argument("--green", type=int, default=d.green_weight)
        sp.add_argument("--amber", type=int, default=d.amber_weight)
        sp.add_argument("--keep-bonus", type=int, default=d.keep_bonus)

    sp = add("generate", cmd_generate, "write a seeded synthetic instance")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--modules", type=int)
    sp.add_argument("--tas", type=int)
    sp.add_argument("--weeks", type=int)
    sp.add_argument("--out")

    sp = add("solve", cmd_solve, "compute an optimal allocation")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--out")
    sp.add_argument("--time-limit", type=float, default=60.0)
    sp.add_argument("--export-lp", metavar="FILE")
    weights(sp)

    sp = add("validate", cmd_validate, "list the constraint violations of a solution")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--solution", required=True)
    sp.add_argument("--out")

    sp = add("scenario", cmd_scenario, "write the change commands of scenario 1 to 4")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--solution", required=True)
    sp.add_argument("--kind", type=int, choices=(1, 2, 3, 4), required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")

    sp = add("apply-changes", cmd_apply, "apply change commands to an instance")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--solution", required=True)
    sp.add_argument("--changes", required=True)
    sp.add_argument("--out")

    sp = add("classify", cmd_classify, "classify how a changed instance affects a solution")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--solution", required=True)
    sp.add_argument("--out")

    sp = add("reopt", cmd_reopt, "repair a solution with one strategy")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--solution", required=True)
    sp.add_argument("--strategy", choices=[s.value for s in Strategy], required=True)
    sp.add_argument("--out")
    sp.add_argument("--script", metavar="FILE")
    sp.add_argument("--time-limit", type=float, default=60.0)
    sp.add_argument("--export-lp", metavar="FILE")
    weights(sp)

    sp = add("diff", cmd_diff, "edit script turning one solution into another")
    sp.add_argument("--old", required=True)
    sp.add_argument("--new", required=True)
    sp.add_argument("--out")

    sp = add("bench", cmd_bench, "run every strategy on scenarios 1 to 3")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out")
    sp.add_argument("--time-limit", type=float, default=60.0)
    sp.add_argument("--times", action="store_true", help="add a wall-time column")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args) or 0
    except _Fail as exc:
        print(f"replan: {exc}", file=sys.stderr)
        return exc.code
    except StatusNotSolved as exc:
        print(f"replan: {exc}", file=sys.stderr)
        return 1
    except ReplanError as exc:
        print(f"replan: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
