"""Command-line front end.

Exit status: 0 for YES / success, 1 for NO (or a failed check), 2 for usage
and input errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .digraph import Digraph
from .exact import Stage2Refused, adml
from .formats import InstanceFormatError, format_instance, format_witness, parse_instance, parse_witness
from .generate import KINDS, InstanceSpec, generate
from .kernel import REDUCED, check_single_source, kernelize, lift_witness
from .oracle import BudgetExceeded, OracleBudget, oracle_max_leaves
from .outtree import is_out_branching
from .search import algo_a, algo_b

log = logging.getLogger("outbranch")

EXIT_YES, EXIT_NO, EXIT_USAGE = 0, 1, 2
ALGORITHMS = ("A", "B", "ADML", "kernel+B", "oracle")
BENCH_FIELDS = ["instance", "n", "m", "k", "algorithm", "result", "nodes_visited", "wall_ms"]


class UsageError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str) -> Digraph:
    return parse_instance(_read_text(path))


def _emit(pairs: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(pairs))
    else:
        for key, value in pairs.items():
            print(f"{key}: {value}")


def _write_witness(t, dest: str | None) -> None:
    text = format_witness(t)
    if dest:
        Path(dest).write_text(text)
    else:
        sys.stdout.write(text)


def _kernel_solve(g: Digraph, k: int):
    """Kernelize, then solve the reduced instance with B; returns (decision, witness, info)."""
    kr = kernelize(g, k)
    info = {"n_star": kr.n_star, "kernel_verdict": kr.verdict}
    if kr.verdict != REDUCED:
        return True, kr.witness, info, None
    res = algo_b(kr.reduced, k)
    witness = lift_witness(kr.trace, res.witness) if res.decision else None
    return res.decision, witness, info, res


def cmd_solve_k(args) -> int:
    g = _load(args.instance)
    if args.k < 1:
        raise UsageError("--k must be at least 1")
    start = time.perf_counter()
    if args.kernelize:
        try:
            ok = check_single_source(g) is not None
        except ValueError:
            ok = False
        if not ok:
            log.warning("kernelization needs an acyclic digraph with one source; solving directly")
        else:
            decision, witness, info, res = _kernel_solve(g, args.k)
            report = {"decision": "YES" if decision else "NO", "k": args.k, "algorithm": "kernel+B"}
            report.update(info)
            if res is not None:
                report.update(res.telemetry.as_record())
            report["wall_ms"] = round((time.perf_counter() - start) * 1000, 3)
            _emit(report, args.json)
            if witness is not None and not args.no_witness:
                _write_witness(witness, args.witness_out)
            return EXIT_YES if decision else EXIT_NO
    solver = algo_a if args.algo == "A" else algo_b
    res = solver(g, args.k)
    report = {"decision": "YES" if res.decision else "NO", "k": args.k, "algorithm": args.algo,
              "n": g.n, "m": g.m}
    report.update(res.telemetry.as_record())
    report["wall_ms"] = round(res.wall_time * 1000, 3)
    _emit(report, args.json)
    if res.decision and not args.no_witness:
        _write_witness(res.witness, args.witness_out)
    return EXIT_YES if res.decision else EXIT_NO


def cmd_solve_max(args) -> int:
    g = _load(args.instance)
    if g.n == 0:
        raise UsageError("empty digraph")
    cap = None if args.max_stage2_n < 0 else args.max_stage2_n
    try:
        res = adml(g, max_stage2_n=cap)
    except Stage2Refused as exc:
        print(f"error: {exc}; raise --max-stage2-n to allow it", file=sys.stderr)
        return EXIT_USAGE
    report = {"max_leaves": res.max_leaves, "stage_reached": res.stage_reached,
              "n": g.n, "m": g.m, "solver_calls": res.solver_calls}
    for stage, secs in res.timings.items():
        report[f"{stage}_ms"] = round(secs * 1000, 3)
    _emit(report, args.json)
    if res.witness is not None and not args.no_witness:
        _write_witness(res.witness, args.witness_out)
    return EXIT_YES if res.max_leaves > 0 else EXIT_NO


def cmd_kernelize(args) -> int:
    g = _load(args.instance)
    try:
        s = check_single_source(g)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if s is None:
        print("verdict: NO (no unique source, hence no out-branching)")
        return EXIT_NO
    kr = kernelize(g, args.k)
    counts = kr.trace.counts()
    report = {"n": g.n, "m": g.m, "n_star": kr.n_star, "m_star": kr.reduced.m,
              "rule_A": counts["A"], "rule_B": counts["B"], "verdict": kr.verdict, "k": args.k}
    _emit(report, args.json)
    if kr.verdict == REDUCED:
        text = format_instance(kr.reduced)
        if args.reduced_out:
            Path(args.reduced_out).write_text(text)
        else:
            sys.stdout.write(text)
    elif not args.no_witness:
        _write_witness(kr.witness, args.witness_out)
    return EXIT_YES


def cmd_gen(args) -> int:
    try:
        g = generate(InstanceSpec(args.kind, args.n, args.p, args.seed))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = format_instance(g)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_YES


def cmd_verify(args) -> int:
    g = _load(args.instance)
    if args.witness:
        t = parse_witness(_read_text(args.witness))
        valid = is_out_branching(g, t)
        report = {"spanning_rooted": valid, "root": t.root, "leaves": t.leaf_count}
        if args.k is not None:
            report["k"] = args.k
            valid = valid and t.leaf_count >= args.k
        report["valid"] = valid
        _emit(report, args.json)
        return EXIT_YES if valid else EXIT_NO
    try:
        best, _ = oracle_max_leaves(g, OracleBudget(max_vertices=args.max_n))
    except BudgetExceeded as exc:
        raise UsageError(str(exc)) from None
    disagreements = []
    for k in range(1, g.n + 1):
        res = algo_b(g, k)
        if res.decision != (best >= k):
            disagreements.append(k)
        if res.decision and not (is_out_branching(g, res.witness) and res.witness.leaf_count >= k):
            disagreements.append(k)
    report = {"n": g.n, "m": g.m, "oracle_max_leaves": best,
              "k_checked": g.n, "agree": not disagreements}
    if disagreements:
        report["disagreeing_k"] = sorted(set(disagreements))
    _emit(report, args.json)
    return EXIT_YES if not disagreements else EXIT_NO


def _parse_int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def bench_instance(spec: InstanceSpec, ks: list[int], algorithms: list[str]) -> list[dict]:
    """Run every requested algorithm on one instance; one record per (algorithm, k)."""
    g = generate(spec)
    base = {"instance": spec.instance_id, "n": g.n, "m": g.m}
    rows = []

    def add(algorithm, k, result, nodes, secs):
        row = dict(base, k=k, algorithm=algorithm, result=result, nodes_visited=nodes,
                   wall_ms=round(secs * 1000, 3))
        rows.append(row)

    oracle_best = None
    for algorithm in algorithms:
        if algorithm == "ADML":
            t0 = time.perf_counter()
            res = adml(g)
            add(algorithm, "", res.max_leaves, "", time.perf_counter() - t0)
            continue
        if algorithm == "oracle":
            t0 = time.perf_counter()
            try:
                oracle_best, _ = oracle_max_leaves(g)
                result = oracle_best
            except BudgetExceeded:
                result = "over_budget"
            add(algorithm, "", result, "", time.perf_counter() - t0)
            continue
        for k in ks:
            if algorithm in ("A", "B"):
                res = (algo_a if algorithm == "A" else algo_b)(g, k)
                add(algorithm, k, "YES" if res.decision else "NO",
                    res.telemetry.nodes_visited, res.wall_time)
            else:
                t0 = time.perf_counter()
                try:
                    ok = check_single_source(g) is not None
                except ValueError:
                    ok = False
                if not ok:
                    add(algorithm, k, "not_applicable", "", 0.0)
                    continue
                decision, _, _, res = _kernel_solve(g, k)
                nodes = res.telemetry.nodes_visited if res is not None else 0
                add(algorithm, k, "YES" if decision else "NO", nodes, time.perf_counter() - t0)
    return rows


def cmd_bench(args) -> int:
    algorithms = [a.strip() for a in args.algos.split(",") if a.strip()]
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown:
        raise UsageError(f"unknown algorithm(s): {', '.join(unknown)}")
    ks = _parse_int_list(args.k)
    if any(k < 1 for k in ks):
        raise UsageError("every k must be at least 1")
    specs = [InstanceSpec(args.kind, n, args.p, seed)
             for n in _parse_int_list(args.n) for seed in _parse_int_list(args.seeds)]
    if any(spec.n < 1 for spec in specs) or not 0.0 <= args.p <= 1.0:
        raise UsageError("n must be positive and p in [0, 1]")

    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = None if args.json else csv.DictWriter(out, fieldnames=BENCH_FIELDS)
        if writer is not None:
            writer.writeheader()
        if args.workers > 1:
            with ProcessPoolExecutor(args.workers) as pool:
                batches = pool.map(bench_instance, specs, [ks] * len(specs), [algorithms] * len(specs))
                for rows in batches:
                    _write_rows(rows, writer, out)
        else:
            for spec in specs:
                _write_rows(bench_instance(spec, ks, algorithms), writer, out)
    finally:
        if args.output:
            out.close()
    return EXIT_YES


def _write_rows(rows, writer, out) -> None:
    for row in rows:
        if writer is None:
            out.write(json.dumps(row) + "\n")
        else:
            writer.writerow(row)
    out.flush()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="outbranch", description="Maximum-leaf out-branchings of digraphs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_arg(p):
        p.add_argument("instance", help="edge-list file, or - for stdin")

    def output_args(p, witness=True):
        p.add_argument("--json", action="store_true", help="emit a JSON object instead of key: value lines")
        if witness:
            p.add_argument("--witness-out", help="write the witness here instead of stdout")
            p.add_argument("--no-witness", action="store_true")

    p = sub.add_parser("solve-k", help="decide whether an out-branching with >= k leaves exists")
    instance_arg(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--algo", choices=["A", "B"], default="B")
    p.add_argument("--kernelize", action="store_true", help="reduce single-source DAGs first")
    output_args(p)
    p.set_defaults(func=cmd_solve_k)

    p = sub.add_parser("solve-max", help="maximum number of leaves (exact)")
    instance_arg(p)
    p.add_argument("--max-stage2-n", type=int, default=24,
                   help="largest n for the subset-enumeration stage (-1: no cap)")
    output_args(p)
    p.set_defaults(func=cmd_solve_max)

    p = sub.add_parser("kernelize", help="linear kernel for single-source DAGs")
    instance_arg(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--reduced-out", help="write the reduced instance here instead of stdout")
    output_args(p)
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("kind", choices=[k for k in KINDS if k != "file"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="benchmark solvers on generated instances")
    p.add_argument("--kind", choices=[k for k in KINDS if k != "file"], default="gnp_digraph")
    p.add_argument("--n", default="10", help="sizes, e.g. 10,20 or 10-14")
    p.add_argument("--p", type=float, default=0.2)
    p.add_argument("--seeds", default="0-4")
    p.add_argument("--k", default="2-6")
    p.add_argument("--algos", default="A,B")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true", help="one JSON object per line instead of CSV")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="oracle cross-check, or validate a witness")
    instance_arg(p)
    p.add_argument("--witness", help="parent-array file to validate")
    p.add_argument("--k", type=int, help="required leaf count for --witness")
    p.add_argument("--max-n", type=int, default=10, help="oracle vertex cap")
    output_args(p, witness=False)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (InstanceFormatError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
