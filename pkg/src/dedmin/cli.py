"""Command-line surface: generate, encode, solve, verify, trace, minimize,
reduce.

Inputs are ``.rules`` files (or ``-`` for stdin); the cipher names
``snow2`` and ``enocoro`` are accepted wherever a file is, in which case
the model is generated on the fly from ``--T``/``--range``.  ``--json``
switches every command to machine-readable output.

Exit codes: 0 success, 1 usage error, 2 infeasible / coverage not reached,
3 time limit hit with the incumbent still printed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import ciphers, dsl, encoder, lpio, milp, oracle, preprocess
from .core import DeductionSystem

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_SOLUTION = 2
EXIT_TIME_LIMIT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _read_input(spec: str) -> str:
    if spec == "-":
        return sys.stdin.read()
    path = Path(spec)
    if not path.exists():
        raise CliError(f"no such file: {spec}")
    return path.read_text(encoding="utf-8")


def _load_system(args) -> DeductionSystem:
    spec = args.input
    if spec == "snow2":
        return ciphers.build_snow2(args.T if args.T else 13)
    if spec == "enocoro":
        return ciphers.build_enocoro(args.T if args.T else 16, args.range)
    try:
        return dsl.parse_system(_read_input(spec))
    except (dsl.ParseError, dsl.ValidationError) as exc:
        raise CliError(f"{spec}: {exc}") from exc


def _write_output(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _resolve_guess(system: DeductionSystem, spec: str) -> list[int]:
    out = []
    for raw in re.split(r"[,\s]+", spec.strip()):
        if not raw:
            continue
        name = raw
        if not system.has_name(name):
            # accept "a3" for "a_3" and similar
            m = re.fullmatch(r"([A-Za-z]+)(\d+)", raw)
            if m and system.has_name(f"{m.group(1)}_{m.group(2)}"):
                name = f"{m.group(1)}_{m.group(2)}"
            else:
                raise CliError(f"unknown proposition {raw!r}")
        out.append(system.index_of(name))
    return sorted(set(out))


def _limits(args) -> milp.SolveLimits:
    return milp.SolveLimits(time_budget=args.time_limit,
                            node_budget=args.node_limit, seed=args.seed)


def _encode_config(system: DeductionSystem, args) -> encoder.EncodeConfig:
    nu = args.nu if args.nu else encoder.default_nu(system)
    k = args.k if args.k is not None else system.n
    return encoder.EncodeConfig(nu=nu, budget_k=k, mode=args.mode,
                                sense=args.sense)


def _guess_names(system: DeductionSystem, solution: milp.Solution) -> list[str]:
    if solution.assignment is None:
        return []
    return [p.name for p in system.propositions
            if solution.assignment.get(encoder.state_var_name(p.index, 0)) == 1]


def _cmd_generate(args) -> int:
    if args.cipher == "snow2":
        system = ciphers.build_snow2(args.T if args.T else 13)
    else:
        system = ciphers.build_enocoro(args.T if args.T else 16, args.range)
    if args.paths:
        expanded = preprocess.expand_rules(system)
        table = encoder.enumerate_paths(expanded)
        _write_output(args, encoder.render_path_table(expanded, table))
    else:
        _write_output(args, dsl.render_system(system))
    return EXIT_OK


def _cmd_encode(args) -> int:
    system = preprocess.expand_rules(_load_system(args))
    instance = encoder.encode(system, _encode_config(system, args))
    _write_output(args, lpio.write_lp(instance))
    return EXIT_OK


def _solution_exit(solution: milp.Solution) -> int:
    if solution.status == milp.INFEASIBLE:
        return EXIT_NO_SOLUTION
    if solution.status == milp.TIME_LIMIT:
        return EXIT_TIME_LIMIT
    return EXIT_OK


def _cmd_solve(args) -> int:
    if args.input not in ("snow2", "enocoro") and args.input.endswith(".lp"):
        instance = lpio.read_lp(_read_input(args.input))
        solution = milp.solve(instance, _limits(args))
        if args.json:
            _write_output(args, solution.to_json_text())
        else:
            _write_output(args, _solve_report(None, solution, None))
        return _solution_exit(solution)

    system = preprocess.expand_rules(_load_system(args))
    cfg = _encode_config(system, args)
    instance = encoder.encode(system, cfg)
    solution = milp.solve(instance, _limits(args))
    trace = None
    if solution.assignment is not None:
        trace = oracle.extract_trace(system, solution, cfg)
    if args.json:
        payload = solution.to_json()
        payload["guess"] = _guess_names(system, solution)
        if trace is not None:
            payload["known"] = len(trace.known)
            payload["trace"] = [
                {"premises": [system.name_of(p) for p in step.premises],
                 "rule": step.rule, "deduced": system.name_of(step.deduced)}
                for step in trace.trace]
        _write_output(args, json.dumps(payload, indent=2) + "\n")
    else:
        _write_output(args, _solve_report(system, solution, trace))
    return _solution_exit(solution)


def _solve_report(system, solution, trace) -> str:
    lines = [f"status: {solution.status}", f"objective: {solution.objective}"]
    lines.append(f"nodes: {solution.stats.nodes}  "
                 f"propagations: {solution.stats.propagations}  "
                 f"wall: {solution.stats.wall_time:.3f}s")
    if system is not None and solution.assignment is not None:
        guess = _guess_names(system, solution)
        lines.append(f"guesses ({len(guess)}): {', '.join(guess)}")
    if trace is not None:
        lines.append("")
        lines.append(oracle.render_trace(system, trace).rstrip("\n"))
    return "\n".join(lines) + "\n"


def _cmd_verify(args) -> int:
    system = preprocess.expand_rules(_load_system(args))
    guess = _resolve_guess(system, args.guess)
    result = oracle.closure(system, guess)
    full = len(result.known) == system.n
    missing = [p.name for p in system.propositions if p.index not in result.known]
    if args.json:
        payload = {
            "propositions": system.n,
            "guessed": [system.name_of(g) for g in guess],
            "known": len(result.known),
            "full_coverage": full,
            "rounds": result.rounds,
            "missing": missing,
            "trace": [
                {"premises": [system.name_of(p) for p in step.premises],
                 "rule": step.rule, "deduced": system.name_of(step.deduced)}
                for step in result.trace],
        }
        _write_output(args, json.dumps(payload, indent=2) + "\n")
    else:
        lines = [
            f"guessed {len(guess)} of {system.n}: "
            + ", ".join(system.name_of(g) for g in guess),
            f"known after closure: {len(result.known)} of {system.n} "
            f"in {result.rounds} rounds",
        ]
        if missing:
            lines.append(f"missing: {', '.join(missing)}")
        lines.append("")
        lines.append(oracle.render_trace(system, result).rstrip("\n"))
        _write_output(args, "\n".join(lines) + "\n")
    return EXIT_OK if full else EXIT_NO_SOLUTION


def _cmd_trace(args) -> int:
    system = preprocess.expand_rules(_load_system(args))
    payload = json.loads(_read_input(args.solution))
    assignment = payload.get("assignment", payload)
    if not isinstance(assignment, dict):
        raise CliError("solution JSON must contain an assignment object")
    copies = [int(m.group(1)) for name in assignment
              for m in [re.fullmatch(r"x\d+_c(\d+)", name)] if m]
    if not copies:
        raise CliError("no state variables found in the solution")
    nu = max(copies)
    solution = milp.Solution(milp.FEASIBLE, {k: int(v) for k, v in assignment.items()},
                             None)
    cfg = encoder.EncodeConfig(nu=max(nu, 1), budget_k=system.n)
    result = oracle.extract_trace(system, solution, cfg)
    _write_output(args, oracle.render_trace(system, result))
    return EXIT_OK


def _cmd_minimize(args) -> int:
    system = preprocess.expand_rules(_load_system(args))
    if args.brute:
        found = oracle.brute_force_min(
            system, args.max_k if args.max_k is not None else None)
        if not found.found:
            if args.json:
                _write_output(args, json.dumps(
                    {"k_min": None, "max_k": found.max_k}) + "\n")
            else:
                _write_output(args, f"no guess set of size <= {found.max_k}\n")
            return EXIT_NO_SOLUTION
        witness = [system.name_of(v) for v in found.witness]
        if args.json:
            _write_output(args, json.dumps(
                {"k_min": found.k_min, "witness": witness}) + "\n")
        else:
            _write_output(args, f"k_min: {found.k_min}\n"
                                f"witness: {', '.join(witness) or '(empty)'}\n")
        return EXIT_OK

    nu = args.nu if args.nu else encoder.default_nu(system)
    cfg = encoder.EncodeConfig(nu=nu, budget_k=0, mode=args.mode,
                               sense=encoder.MIN_GUESSES)
    instance = encoder.encode(system, cfg)
    solution = milp.solve(instance, _limits(args))
    witness = _guess_names(system, solution)
    if args.json:
        payload = {"status": solution.status, "k_min": solution.objective,
                   "witness": witness, "stats": solution.stats.to_json()}
        _write_output(args, json.dumps(payload, indent=2) + "\n")
    else:
        _write_output(args, f"status: {solution.status}\n"
                            f"k_min: {solution.objective}\n"
                            f"witness: {', '.join(witness) or '(none)'}\n")
    return _solution_exit(solution)


def _cmd_reduce(args) -> int:
    system = _load_system(args)
    result = preprocess.simplify(system)
    text = dsl.render_system(result.system)
    if args.json:
        payload = {"rules": text, "report": result.to_json(),
                   "propositions_before": system.n,
                   "propositions_after": result.system.n}
        _write_output(args, json.dumps(payload, indent=2) + "\n")
    else:
        _write_output(args, text)
        if args.report:
            Path(args.report).write_text(
                json.dumps(result.to_json(), indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def _add_model_flags(p: _Parser) -> None:
    p.add_argument("--T", type=int, default=None,
                   help="keystream window for cipher inputs")
    p.add_argument("--range", choices=[ciphers.DECLARED, ciphers.EXTENDED],
                   default=ciphers.DECLARED,
                   help="index ranges for the enocoro model")


def _add_encode_flags(p: _Parser) -> None:
    p.add_argument("--nu", type=int, default=None,
                   help="unrolling depth (default: proposition count)")
    p.add_argument("--k", type=int, default=None,
                   help="axiom budget (default: proposition count)")
    p.add_argument("--mode", choices=[encoder.PLAIN, encoder.COMPACT],
                   default=encoder.COMPACT)
    p.add_argument("--sense", choices=[encoder.MAX_COVERAGE, encoder.MIN_GUESSES],
                   default=encoder.MAX_COVERAGE)


def _add_solver_flags(p: _Parser) -> None:
    p.add_argument("--time-limit", type=float, default=600.0)
    p.add_argument("--node-limit", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> _Parser:
    parser = _Parser(prog="dedmin", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="emit a cipher model as .rules")
    p.add_argument("cipher", choices=["snow2", "enocoro"])
    _add_model_flags(p)
    p.add_argument("--paths", action="store_true",
                   help="emit the per-proposition path table (.paths) instead")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("encode", help=".rules -> .lp")
    p.add_argument("input")
    _add_model_flags(p)
    _add_encode_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("solve", help="solve a .rules or .lp input")
    p.add_argument("input", nargs="?", default="-")
    _add_model_flags(p)
    _add_encode_flags(p)
    _add_solver_flags(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="closure report for a guess set")
    p.add_argument("input")
    _add_model_flags(p)
    p.add_argument("--guess", required=True,
                   help="comma separated proposition names")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("trace", help="deduction course behind a solution JSON")
    p.add_argument("input")
    _add_model_flags(p)
    p.add_argument("--solution", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("minimize", help="smallest guess set")
    p.add_argument("input")
    _add_model_flags(p)
    p.add_argument("--brute", action="store_true",
                   help="exhaustive oracle instead of the solver")
    p.add_argument("--max-k", type=int, default=None)
    p.add_argument("--nu", type=int, default=None)
    p.add_argument("--mode", choices=[encoder.PLAIN, encoder.COMPACT],
                   default=encoder.COMPACT)
    _add_solver_flags(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_minimize)

    p = sub.add_parser("reduce", help="apply model simplifications")
    p.add_argument("input")
    _add_model_flags(p)
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_reduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) != 1:
        sys.stderr.write("note: multi-threaded search is not implemented; "
                         "running single-threaded\n")
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"dedmin: {exc}\n")
        return exc.code
    except (encoder.ConfigError, lpio.LpParseError) as exc:
        sys.stderr.write(f"dedmin: {exc}\n")
        return EXIT_USAGE
    except BrokenPipeError:  # downstream closed the pipe; not our error
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
