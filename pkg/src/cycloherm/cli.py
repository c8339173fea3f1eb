"""Command-line front end.

Subcommands:

* ``bounds``     print the residue-class bound for (q, e, parity, family).
* ``classes``    run a residue-class collection (exhaustive or sampled).
* ``verify``     run a verification suite (congruences | walks | orbits | a4k1).
* ``normalize``  Euler-normalize a matrix file by diagonal switching.

Machine-parsable output goes to stdout, logs to stderr. Exit codes: 0 success,
1 a statement the library treats as proved failed on data, 2 bad arguments or
config, 3 budget or memory exhaustion. Sampling commands require an explicit
--seed; (argv, seed) determines every output field except the wall-clock
elapsed/seconds columns.

A JSON config file can predefine any long flag (same names, dashes as
underscores); explicit flags win over the file.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import product
from pathlib import Path

from . import __version__
from .charpoly import congruence_report, thm_a4k1_check
from .errors import BudgetError, CyclohermError, DomainError, TheoremViolationError
from .experiments import run_experiment, sharpness_probe, theorem_bound
from .matrices import (
    Graph,
    find_euler_switching,
    parse_matrix_text,
    residue_graph,
    sample_stream,
    switch,
    write_matrix_text,
)
from .walks import harary_schwenk_check, orbit_partition_check, trace_congruence_suite

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_BADARGS = 2
EXIT_BUDGET = 3


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_int_list(text: str) -> list[int]:
    return [int(t) for t in text.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cycloherm", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"cycloherm {__version__}")
    p.add_argument("--config", help="JSON file with default values for the flags")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="print the residue-class count bound")
    b.add_argument("--q", type=int, required=True)
    b.add_argument("--e", type=int, required=True)
    b.add_argument("--parity", choices=["even", "odd"])
    b.add_argument("--family", choices=["hermitian", "seidel"], default="hermitian")

    c = sub.add_parser("classes", help="collect residue classes of characteristic polynomials")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--e", type=int, required=True)
    c.add_argument("--family", choices=["hermitian", "seidel"], default="hermitian")
    c.add_argument("--mode", choices=["exhaustive", "sample", "sharpness"], default="exhaustive")
    c.add_argument("--budget", type=int, help="draw count for sampled modes")
    c.add_argument("--seed", type=int, help="mandatory for sampled modes")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--out", help="write the report here instead of stdout")
    c.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    c.add_argument("--corrupt-reducer", action="store_true", help=argparse.SUPPRESS)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=["congruences", "walks", "orbits", "a4k1"], required=True)
    v.add_argument("--q", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--e", type=int)
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int)
    v.add_argument("--N", dest="lengths", help="comma-separated walk lengths")
    v.add_argument("--k", type=int, default=2, help="index for the a4k1 suite")
    v.add_argument("--max-vertices", type=int, default=4)
    v.add_argument("--max-N", dest="max_length", type=int, default=6)
    v.add_argument("--matrix-file", help="verify this matrix instead of sampling")
    v.add_argument("--family", choices=["hermitian", "seidel"], default="hermitian")
    v.add_argument("--out")
    v.add_argument("--workers", type=int, default=1)

    nz = sub.add_parser("normalize", help="Euler-normalize a matrix by switching")
    nz.add_argument("matrix_file")
    nz.add_argument("--out", help="write the normalized matrix here")
    return p


def _merge_config(args: argparse.Namespace, parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    if not args.config:
        return args
    try:
        loaded = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config {args.config}: {exc}")
    explicit = {a.lstrip("-").split("=")[0].replace("-", "_") for a in argv if a.startswith("--")}
    for key, value in loaded.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and attr not in explicit:
            setattr(args, attr, value)
    return args


def cmd_bounds(args) -> int:
    try:
        value = theorem_bound(args.q, args.e, args.parity, args.family)
    except DomainError as exc:
        _log(f"error: {exc}")
        return EXIT_BADARGS
    print(value)
    return EXIT_OK


def cmd_classes(args) -> int:
    sampled = args.mode in ("sample", "sharpness")
    if sampled and args.seed is None:
        _log("error: sampled modes require --seed (no wall-clock default)")
        return EXIT_BADARGS
    if sampled and args.budget is None:
        _log("error: sampled modes require --budget")
        return EXIT_BADARGS
    try:
        if args.mode == "sharpness":
            report = sharpness_probe(
                args.n, args.q, args.e, args.budget, args.seed,
                family=args.family, workers=args.workers,
            )
        else:
            report = run_experiment(
                n=args.n, q=args.q, e=args.e, family=args.family, mode=args.mode,
                budget=args.budget, seed=args.seed, workers=args.workers,
            )
    except BudgetError as exc:
        _log(f"budget exceeded: {exc}")
        return EXIT_BUDGET
    except DomainError as exc:
        _log(f"error: {exc}")
        return EXIT_BADARGS
    if args.corrupt_reducer:
        # Test hook: simulate a broken reducer blowing past the bound.
        report.distinct = (report.bound or 0) + 1
        report.bound_violated = True
        report.saturated = False
    if args.format == "csv":
        text = report.CSV_HEADER + "\n" + report.to_csv_row() + "\n"
    else:
        text = report.to_json() + "\n"
    _emit(text, args.out)
    if report.bound_violated:
        _log(
            f"THEOREM VIOLATION: {report.distinct} residue classes exceed the bound "
            f"{report.bound} for (n={report.n}, q={report.q}, e={report.e}, {report.family})"
        )
        return EXIT_VIOLATION
    if report.mode == "sharpness" and not report.saturated:
        _log(
            f"warning: unsaturated sharpness probe ({report.distinct} < {report.bound}); "
            "the conjectured equality was not reached within budget"
        )
    return EXIT_OK


def _verify_stream(args):
    if args.matrix_file:
        yield parse_matrix_text(Path(args.matrix_file).read_text())
        return
    if args.seed is None:
        raise DomainError("sampling verification requires --seed")
    if args.q is None or args.n is None:
        raise DomainError("--q and --n are required without --matrix-file")
    yield from sample_stream(args.n, args.q, args.seed, args.family, args.samples)


def cmd_verify(args) -> int:
    records: list[dict] = []
    violations = 0
    try:
        if args.suite == "congruences":
            for m in _verify_stream(args):
                rep = congruence_report(m, e=args.e)
                records.append(rep.as_dict())
                violations += len(rep.failures())
        elif args.suite == "walks":
            lengths = _parse_int_list(args.lengths) if args.lengths else [3, 4, 5, 6]
            for m in _verify_stream(args):
                for length in lengths:
                    res = harary_schwenk_check(m, length)
                    records.append(res.as_dict())
                    if res.applicable and not res.passed:
                        violations += 1
                for res in trace_congruence_suite(m):
                    records.append(res.as_dict())
                    if res.applicable and not res.passed:
                        violations += 1
        elif args.suite == "orbits":
            n_max = args.max_vertices
            for n in range(1, n_max + 1):
                pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
                for edge_bits in product((0, 1), repeat=len(pairs)):
                    for loop_bits in product((0, 1), repeat=n):
                        g = Graph.from_edges(
                            n,
                            [p for p, b in zip(pairs, edge_bits) if b],
                            [v for v in range(n) if loop_bits[v]],
                        )
                        for length in range(1, args.max_length + 1):
                            ok, witness = orbit_partition_check(g, length)
                            if not ok:
                                violations += 1
                                records.append(
                                    {"graph": g.rows, "loops": g.loops, "N": length, "pass": False, "witness": witness}
                                )
            records.append({"suite": "orbits", "max_vertices": n_max, "max_N": args.max_length, "violations": violations})
        elif args.suite == "a4k1":
            for m in _verify_stream(args):
                he = switch(m, find_euler_switching(m))
                res = thm_a4k1_check(he, args.k)
                records.append({"k": args.k, "pass": res.passed, "failures": res.failures()})
                if not res.passed:
                    violations += 1
    except BudgetError as exc:
        _log(f"budget exceeded: {exc}")
        return EXIT_BUDGET
    except (DomainError, OSError) as exc:
        _log(f"error: {exc}")
        return EXIT_BADARGS
    except TheoremViolationError as exc:
        _log(f"THEOREM VIOLATION: {exc}")
        return EXIT_VIOLATION
    text = "".join(json.dumps(r, sort_keys=True, default=str) + "\n" for r in records)
    _emit(text, args.out)
    if violations:
        _log(f"THEOREM VIOLATION: {violations} failed checks in suite {args.suite}")
        return EXIT_VIOLATION
    _log(f"suite {args.suite}: all checks passed ({len(records)} records)")
    return EXIT_OK


def cmd_normalize(args) -> int:
    try:
        m = parse_matrix_text(Path(args.matrix_file).read_text())
    except (OSError, DomainError) as exc:
        _log(f"error: {exc}")
        return EXIT_BADARGS
    if m.family != "hermitian":
        _log("error: Euler normalization applies to the hermitian family")
        return EXIT_BADARGS
    try:
        d = find_euler_switching(m)
    except DomainError as exc:
        _log(f"error: {exc}")
        return EXIT_BADARGS
    except TheoremViolationError as exc:
        _log(f"THEOREM VIOLATION: {exc}")
        return EXIT_VIOLATION
    switched = switch(m, d)
    text = write_matrix_text(switched) + "switching " + " ".join(map(str, d)) + "\n"
    _emit(text, args.out)
    if not residue_graph(switched).is_euler():
        _log("internal error: switched residue graph is not Euler")
        return EXIT_VIOLATION
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args = _merge_config(args, parser, argv)
    try:
        if args.command == "bounds":
            return cmd_bounds(args)
        if args.command == "classes":
            return cmd_classes(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "normalize":
            return cmd_normalize(args)
    except CyclohermError as exc:  # uncategorized library error: treat as bad input
        _log(f"error: {exc}")
        return EXIT_BADARGS
    parser.error("no command")
    return EXIT_BADARGS


if __name__ == "__main__":
    sys.exit(main())
