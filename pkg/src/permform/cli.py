"""Command-line interface: solve, verify, oracle, encode and bench.

Exit codes: 0 feasible/valid, 1 usage or parse error, 2 infeasible best effort,
3 invalid certificate or oracle disagreement, 4 digest mismatch, 5 oracle size
limit exceeded.
"""

from __future__ import annotations

import argparse
import enum
import json
import math
import sys
import time
import warnings
from pathlib import Path

import jsonschema
import numpy as np

from . import generators
from .formulations import (
    GRAPH_PROBLEMS,
    MAXIMIZE,
    CandidateSolution,
    GiInstance,
    Problem,
    SatAssignment,
    SatInstance,
    evaluate,
    extract_solution,
    instance_size,
    sat_encode,
    sat_permutation,
    vertex_literal,
)
from .io import (
    Certificate,
    CertificateError,
    DigestMismatch,
    ParseError,
    parse_dimacs_cnf,
    parse_dimacs_graph,
    parse_qaplib,
    parse_tsplib,
    read_certificate,
    write_certificate,
)
from .oracles import OracleLimitError, brute_oracle, formulation_search
from .schemas import validate
from .solvers import AnnealParams, RelaxParams, UnsupportedProblem, anneal, relax_solve, with_overrides

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_INVALID = 3
EXIT_DIGEST = 4
EXIT_LIMIT = 5

METHODS = ("anneal", "relax", "exact")
_SUFFIXES = {
    Problem.SAT: (".cnf",),
    Problem.TSP: (".tsp",),
    Problem.QAP: (".dat", ".qap"),
}
_NOT_GRAPH = (".cnf", ".tsp", ".dat", ".qap", ".json")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which collides with "infeasible"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- helpers -----------------------------------------------------------------


def jsonable(x):
    """Native JSON value for numpy scalars, sets, tuples, enums and solution objects."""
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, SatAssignment):
        return {f"x{i}": v for i, v in enumerate(x.values, 1)}
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return sorted(jsonable(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def _show(x) -> str:
    if isinstance(x, (set, frozenset)):
        return "{" + ", ".join(str(v) for v in sorted(x)) + "}"
    if isinstance(x, tuple):
        return " | ".join(_show(v) for v in x)
    if isinstance(x, list):
        if x and isinstance(x[0], frozenset):
            return " ".join(_show(v) for v in x)
        return " -> ".join(str(v) for v in x)
    if isinstance(x, dict):
        return ", ".join(f"{k}->{v}" for k, v in x.items())
    return str(x)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise CliError(f"{path} is not UTF-8 text") from None


def _check_suffix(problem: Problem, path: str) -> None:
    suffix = Path(path).suffix.lower()
    wanted = _SUFFIXES.get(problem)
    if wanted and suffix not in wanted:
        raise CliError(f"{problem.value} expects a {'/'.join(wanted)} file, got {path}")
    if wanted is None and suffix in _NOT_GRAPH:
        raise CliError(f"{problem.value} expects a DIMACS graph file, got {path}")


def load_instance(problem: Problem, path: str, second: str | None = None, lenient: bool = False):
    """Parse the input file(s) for ``problem``; parse failures become exit code 1.

    Lenient-mode warnings are reported on stderr as ``warning: <path>: ...``.
    """
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        instance = _load(problem, path, second, lenient)
    for w in caught:
        print(f"warning: {path}: {w.message}", file=sys.stderr)
    return instance


def _load(problem: Problem, path: str, second: str | None, lenient: bool):
    _check_suffix(problem, path)
    if problem != Problem.GI and second is not None:
        raise CliError("--second is only used with --problem gi")
    try:
        if problem == Problem.SAT:
            return parse_dimacs_cnf(_read(path), strict=not lenient)
        if problem == Problem.TSP:
            return parse_tsplib(_read(path))
        if problem == Problem.QAP:
            return parse_qaplib(_read(path))
        if problem == Problem.GI:
            if second is None:
                raise CliError("--problem gi needs --second for the second graph")
            _check_suffix(problem, second)
            first = parse_dimacs_graph(_read(path), strict=not lenient)
            try:
                other = parse_dimacs_graph(_read(second), strict=not lenient)
            except ParseError as exc:
                raise CliError(f"{second}: {exc}") from None
            return GiInstance(first, other)
        return parse_dimacs_graph(_read(path), strict=not lenient)
    except ParseError as exc:
        raise CliError(f"{path}: {exc}") from None
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from None


def parse_overrides(items) -> dict[str, str]:
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise CliError(f"--param expects name=value, got {item!r}")
        out[name.strip()] = value.strip()
    return out


def solve(problem: Problem, instance, method: str, seed: int, overrides: dict | None = None):
    """Run one solver; returns ``(candidate, trajectory)``."""
    overrides = dict(overrides or {})
    overrides.pop("seed", None)
    try:
        if method == "exact":
            if overrides:
                raise CliError("the exact method takes no --param overrides")
            res = formulation_search(problem, instance)
            cand = res.candidate
            if cand is None:
                # unsatisfiable formula: report the all-false assignment as best effort
                enc = sat_encode(instance)
                cand = CandidateSolution(problem, sat_permutation(enc, (False,) * enc.n_vars))
            return cand, {"search": "exhaustive", "optimum": res.optimum}
        if method == "anneal":
            res = anneal(problem, instance, with_overrides(AnnealParams(seed=seed), overrides))
        elif method == "relax":
            res = relax_solve(problem, instance, with_overrides(RelaxParams(seed=seed), overrides))
        else:
            raise CliError(f"unknown method {method!r}")
    except OracleLimitError as exc:
        raise CliError(str(exc), EXIT_LIMIT) from None
    except UnsupportedProblem as exc:
        raise CliError(f"{exc}; use --method anneal or exact") from None
    except (ValueError, TypeError) as exc:
        raise CliError(str(exc)) from None
    return res.candidate, res.summary


def run_report(problem: Problem, instance, cand: CandidateSolution, method: str, seed: int,
               wall_ms: float, trajectory: dict, path: str, second: str | None = None) -> dict:
    ev = evaluate(instance, cand)
    cert = Certificate.for_candidate(instance, cand)
    report = {
        "problem": problem.value,
        "instance": path,
    }
    if second is not None:
        report["second"] = second
    report.update(
        method=method,
        seed=seed,
        wall_time_ms=round(wall_ms, 3),
        objective=jsonable(ev.objective),
        violation=jsonable(ev.violation),
        feasible=bool(ev.feasible),
        solution=jsonable(extract_solution(instance, cand)) if ev.feasible else None,
        certificate=cert.to_dict(),
        trajectory=jsonable(trajectory),
    )
    return report


def _report_text(report: dict) -> str:
    cert = report["certificate"]
    lines = [
        f"problem   : {report['problem']}",
        f"instance  : {report['instance']}" + (f" / {report['second']}" if "second" in report else ""),
        f"method    : {report['method']} (seed {report['seed']})",
        f"objective : {report['objective']}",
        f"feasible  : {'yes' if report['feasible'] else 'no'} (violation {report['violation']})",
    ]
    pi = " ".join(map(str, cert["pi"]))
    if cert["k"] is not None:
        pi += f"  k={cert['k']}"
    if cert["blocks"] is not None:
        pi += f"  blocks={tuple(cert['blocks'])}"
    lines.append(f"pi        : {pi}")
    sol = report["solution"]
    if sol is not None:
        if isinstance(sol, dict) and report["problem"] == "sat":
            text = " ".join(f"{k}={'T' if v else 'F'}" for k, v in sol.items())
        else:
            text = json.dumps(sol)
        lines.append(f"solution  : {text}")
    lines.append(f"time      : {report['wall_time_ms']:.1f} ms")
    return "\n".join(lines) + "\n"


# -- commands ----------------------------------------------------------------


def cmd_solve(args) -> int:
    problem = Problem(args.problem)
    instance = load_instance(problem, args.input, args.second, args.lenient)
    if args.method == "relax" and problem in (Problem.SAT, Problem.MDS):
        raise CliError(f"--method relax does not support {problem.value}")
    start = time.perf_counter()
    cand, trajectory = solve(problem, instance, args.method, args.seed, parse_overrides(args.param))
    wall = (time.perf_counter() - start) * 1000
    report = run_report(problem, instance, cand, args.method, args.seed, wall, trajectory, args.input, args.second)
    validate(report, "run_report")
    if args.out:
        Path(args.out).write_text(write_certificate(Certificate.from_dict(report["certificate"])), encoding="utf-8")
    sys.stdout.write(_dump(report) if args.json else _report_text(report))
    return EXIT_OK if report["feasible"] else EXIT_INFEASIBLE


def _same(claimed, actual) -> bool:
    if isinstance(claimed, int) and isinstance(actual, int):
        return claimed == actual
    return math.isclose(float(claimed), float(actual), rel_tol=1e-12, abs_tol=1e-12)


def check_certificate(problem: Problem, instance, text: str) -> tuple[int, dict]:
    """Exit code and verdict document for a certificate checked against ``instance``."""
    verdict = {"valid": False, "reason": "", "objective": None, "violation": None, "feasible": None}
    try:
        cert = read_certificate(text)
    except CertificateError as exc:
        return EXIT_INVALID, dict(verdict, reason=f"invalid certificate: {exc}")
    if cert.problem != problem:
        return EXIT_INVALID, dict(verdict, reason=f"certificate is for {cert.problem.value}, not {problem.value}")
    try:
        cert.verify_digest(instance)
    except DigestMismatch as exc:
        return EXIT_DIGEST, dict(verdict, reason=str(exc))
    size = instance_size(problem, instance)
    if len(cert.pi) != size:
        return EXIT_INVALID, dict(verdict, reason=f"pi has length {len(cert.pi)}, instance needs {size}")
    try:
        ev = evaluate(instance, cert.candidate())
    except ValueError as exc:
        return EXIT_INVALID, dict(verdict, reason=str(exc))
    verdict.update(objective=jsonable(ev.objective), violation=jsonable(ev.violation), feasible=bool(ev.feasible))
    if not ev.feasible:
        return EXIT_INVALID, dict(verdict, reason=f"candidate violates the constraints (violation {ev.violation})")
    if not cert.feasible:
        return EXIT_INVALID, dict(verdict, reason="certificate claims infeasible but the candidate is feasible")
    if not _same(cert.objective, jsonable(ev.objective)):
        return EXIT_INVALID, dict(verdict, reason=f"claimed objective {cert.objective} but evaluation gives {ev.objective}")
    return EXIT_OK, dict(verdict, valid=True, reason="certificate verified")


def cmd_verify(args) -> int:
    problem = Problem(args.problem)
    instance = load_instance(problem, args.input, args.second, args.lenient)
    code, verdict = check_certificate(problem, instance, _read(args.certificate))
    doc = {"problem": problem.value, "instance": args.input, **verdict}
    validate(doc, "verify")
    if args.json:
        sys.stdout.write(_dump(doc))
    else:
        word = "VALID" if doc["valid"] else "INVALID"
        extra = f" objective={doc['objective']}" if doc["objective"] is not None else ""
        sys.stdout.write(f"{word}: {doc['reason']}{extra}\n")
    return code


def cmd_oracle(args) -> int:
    problem = Problem(args.problem)
    instance = load_instance(problem, args.input, args.second, args.lenient)
    try:
        res = brute_oracle(problem, instance, args.limit)
        fs = formulation_search(problem, instance) if args.formulation_search else None
    except OracleLimitError as exc:
        raise CliError(f"size limit exceeded: {exc}", EXIT_LIMIT) from None
    witness = res.witness
    if problem == Problem.QAP:
        witness = {i: v for i, v in enumerate(witness, 1)}
    doc = {"problem": problem.value, "instance": args.input, "optimum": jsonable(res.optimum), "witness": jsonable(witness)}
    agree = True
    if fs is not None:
        agree = _same(jsonable(res.optimum), jsonable(fs.optimum))
        cert = Certificate.for_candidate(instance, fs.candidate).to_dict() if fs.candidate is not None else None
        doc["formulation"] = {"optimum": jsonable(fs.optimum), "agree": agree, "certificate": cert}
    validate(doc, "oracle")
    if args.json:
        sys.stdout.write(_dump(doc))
    else:
        lines = [f"optimum: {doc['optimum']}"]
        if witness is not None:
            lines.append(f"witness: {_show(witness)}")
        if fs is not None:
            lines.append(f"{doc['optimum']} = {doc['formulation']['optimum']}, {'AGREE' if agree else 'DISAGREE'}"
                         if agree else f"{doc['optimum']} != {doc['formulation']['optimum']}, DISAGREE")
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if agree else EXIT_INVALID


def encode_document(instance: SatInstance) -> dict:
    enc = sat_encode(instance)
    return {
        "num_vars": enc.n_vars,
        "num_clauses": enc.m_clauses,
        "N": enc.N,
        "literal_order": [vertex_literal(v) for v in range(2 * enc.n_vars)],
        "V": enc.conflict.tolist(),
        "B": enc.incidence.tolist(),
        "A": enc.A.tolist(),
        "T": enc.T.tolist(),
        "C": enc.C.tolist(),
    }


def cmd_encode(args) -> int:
    problem = Problem(args.problem)
    if problem != Problem.SAT:
        raise CliError("encode supports --problem sat only")
    doc = encode_document(load_instance(problem, args.input, None, args.lenient))
    validate(doc, "encode")
    text = _dump(doc)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- bench -------------------------------------------------------------------


def _generate(problem: Problem, spec: dict):
    n, seed = spec["n"], spec["seed"]
    density = spec.get("density", 0.5)
    if problem in GRAPH_PROBLEMS:
        return generators.random_graph(n, density, seed), f"G(n={n},p={density},seed={seed})"
    if problem == Problem.TSP:
        integer = spec.get("integer", True)
        return generators.random_tsp(n, seed, integer=integer), f"tsp(n={n},seed={seed})"
    if problem == Problem.QAP:
        return generators.random_qap(n, seed), f"qap(n={n},seed={seed})"
    if problem == Problem.GI:
        iso = spec.get("isomorphic", True)
        return generators.random_gi(n, density, seed, iso), f"gi(n={n},p={density},seed={seed},iso={iso})"
    m, width = spec.get("clauses", 2 * n), spec.get("width", min(3, n))
    return generators.random_cnf(n, m, width, seed), f"cnf(n={n},m={m},w={width},seed={seed})"


def _compare(problem: Problem, objective, feasible: bool, optimum):
    """``(gap, agree)`` of a solver result against the exact optimum."""
    if problem == Problem.SAT:
        gap = int(optimum) - int(feasible)
        return gap, gap == 0
    if problem != Problem.GI and not feasible:
        return None, False
    gap = optimum - objective if problem in MAXIMIZE else objective - optimum
    gap = jsonable(gap)
    agree = gap == 0 if isinstance(gap, int) else abs(gap) <= 1e-9 * max(1.0, abs(float(optimum)))
    return gap, bool(agree)


def bench_row(index: int, row: dict, base: Path) -> dict:
    problem = Problem(row["problem"])
    method, seed = row["method"], row.get("seed", 0)
    out = {"index": index, "problem": problem.value, "instance": "", "method": method, "seed": seed,
           "objective": None, "feasible": None, "wall_time_ms": 0.0, "oracle": None, "gap": None,
           "agree": None, "error": None}
    try:
        if "input" in row:
            second = str(base / row["second"]) if "second" in row else None
            instance = load_instance(problem, str(base / row["input"]), second)
            out["instance"] = row["input"] + (f" / {row['second']}" if second else "")
        else:
            instance, out["instance"] = _generate(problem, row["generate"])
        if method == "relax" and problem in (Problem.SAT, Problem.MDS):
            raise CliError(f"--method relax does not support {problem.value}")
        start = time.perf_counter()
        cand, _ = solve(problem, instance, method, seed, row.get("params", {}))
        out["wall_time_ms"] = round((time.perf_counter() - start) * 1000, 3)
    except (CliError, ValueError) as exc:
        out["error"] = str(exc)
        return out
    ev = evaluate(instance, cand)
    out["objective"], out["feasible"] = jsonable(ev.objective), bool(ev.feasible)
    try:
        optimum = jsonable(brute_oracle(problem, instance).optimum)
    except OracleLimitError:
        out["oracle"] = "out of range"
        return out
    out["oracle"] = optimum
    out["gap"], out["agree"] = _compare(problem, out["objective"], out["feasible"], optimum)
    return out


def run_bench(manifest: dict, base: Path, name: str = "") -> dict:
    rows = [bench_row(i, row, base) for i, row in enumerate(manifest["rows"])]
    compared = [r for r in rows if r["agree"] is not None]
    gaps = [r["gap"] for r in compared if r["gap"] is not None]
    aggregate = {
        "rows": len(rows),
        "feasible": sum(1 for r in rows if r["feasible"]),
        "errors": sum(1 for r in rows if r["error"] is not None),
        "oracle_compared": len(compared),
        "oracle_agree": sum(1 for r in compared if r["agree"]),
        "agreement_rate": (sum(1 for r in compared if r["agree"]) / len(compared)) if compared else None,
        "mean_gap": (sum(gaps) / len(gaps)) if gaps else None,
        "wall_time_ms": round(sum(r["wall_time_ms"] for r in rows), 3),
    }
    return {"suite": manifest.get("name", name), "rows": rows, "aggregate": aggregate}


def _bench_text(doc: dict) -> str:
    header = f"{'#':>3}  {'problem':<8} {'method':<6} {'seed':>4} {'objective':>10} {'feas':>5} {'oracle':>12} {'gap':>6} {'ms':>9}  instance"
    lines = [header]
    for r in doc["rows"]:
        if r["error"] is not None:
            lines.append(f"{r['index']:>3}  {r['problem']:<8} {r['method']:<6} {r['seed']:>4}  error: {r['error']}")
            continue
        oracle = "-" if r["oracle"] is None else str(r["oracle"])
        gap = "-" if r["gap"] is None else str(r["gap"])
        lines.append(
            f"{r['index']:>3}  {r['problem']:<8} {r['method']:<6} {r['seed']:>4} {str(r['objective']):>10} "
            f"{'yes' if r['feasible'] else 'no':>5} {oracle:>12} {gap:>6} {r['wall_time_ms']:>9.1f}  {r['instance']}"
        )
    a = doc["aggregate"]
    rate = "n/a" if a["agreement_rate"] is None else f"{100 * a['agreement_rate']:.1f}%"
    lines.append(
        f"rows={a['rows']} feasible={a['feasible']} errors={a['errors']} "
        f"oracle agreement={a['oracle_agree']}/{a['oracle_compared']} ({rate})"
    )
    return "\n".join(lines) + "\n"


def cmd_bench(args) -> int:
    try:
        manifest = json.loads(_read(args.suite))
    except json.JSONDecodeError as exc:
        raise CliError(f"{args.suite}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    try:
        validate(manifest, "bench_manifest")
    except jsonschema.ValidationError as exc:
        raise CliError(f"{args.suite}: manifest schema error: {exc.message}") from None
    doc = run_bench(manifest, Path(args.suite).resolve().parent, Path(args.suite).stem)
    validate(doc, "bench")
    sys.stdout.write(_dump(doc) if args.json else _bench_text(doc))
    return EXIT_OK


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="permform", description="Permutation-matrix formulations of combinatorial problems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    problems = [p.value for p in Problem]

    def instance_args(p, with_second=True):
        p.add_argument("--problem", required=True, choices=problems)
        p.add_argument("--input", required=True, help="instance file (DIMACS graph, .cnf, .tsp, QAPLIB .dat)")
        if with_second:
            p.add_argument("--second", help="second DIMACS graph for --problem gi")
        p.add_argument("--lenient", action="store_true", help="warn instead of failing on DIMACS count mismatches")

    p = sub.add_parser("solve", help="solve an instance and print a run report")
    instance_args(p)
    p.add_argument("--method", choices=METHODS, default="anneal")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", metavar="NAME=VALUE", help="solver parameter override (repeatable)")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--text", action="store_true")
    p.add_argument("--out", help="write the certificate to this file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a certificate against an instance")
    instance_args(p)
    p.add_argument("--certificate", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exact optimum by brute force")
    instance_args(p)
    p.add_argument("--formulation-search", action="store_true", help="also exhaust the permutation formulation and compare")
    p.add_argument("--limit", type=int, help="size limit for 2^n enumeration / n! search")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("encode", help="write the SAT matrix encoding as JSON")
    instance_args(p, with_second=False)
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("bench", help="run a benchmark manifest")
    p.add_argument("--suite", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
