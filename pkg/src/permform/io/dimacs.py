"""DIMACS edge-list graphs and DIMACS CNF formulas."""

from __future__ import annotations

import warnings

from ..core import Graph
from ..formulations import SatInstance
from .errors import ParseError


def _ints(tokens, lineno: int, what: str) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers in {what}, got {' '.join(tokens)!r}", lineno) from None


def _mismatch(msg: str, lineno: int | None, strict: bool) -> None:
    if strict:
        raise ParseError(msg, lineno)
    warnings.warn(msg if lineno is None else f"line {lineno}: {msg}", stacklevel=3)


def parse_dimacs_graph(text: str, strict: bool = True) -> Graph:
    """Parse ``p edge n m`` / ``e u v`` text (``p col`` is accepted too).

    Duplicate edges collapse.  In strict mode the number of ``e`` lines must
    equal ``m``; lenient mode only warns.
    """
    n = m = None
    header_line = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise ParseError(f"duplicate problem line (first on line {header_line})", lineno)
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise ParseError("problem line must read 'p edge <n> <m>'", lineno)
            n, m = _ints(parts[2:], lineno, "problem line")
            if n < 1 or m < 0:
                raise ParseError(f"invalid sizes n={n}, m={m}", lineno)
            header_line = lineno
        elif tag == "e":
            if n is None:
                raise ParseError("edge line before the problem line", lineno)
            if len(parts) != 3:
                raise ParseError("edge line must read 'e <u> <v>'", lineno)
            u, v = _ints(parts[1:], lineno, "edge line")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"vertex out of range 1..{n} in edge ({u}, {v})", lineno)
            if u == v:
                raise ParseError(f"self-loop on vertex {u}", lineno)
            edges.append((u, v))
        else:
            raise ParseError(f"unrecognized line type {tag!r}", lineno)
    if n is None:
        raise ParseError("missing problem line 'p edge <n> <m>'")
    if len(edges) != m:
        _mismatch(f"header declares {m} edges but {len(edges)} edge lines were read", header_line, strict)
    return Graph.from_edges(n, edges)


def write_dimacs_graph(G: Graph, comment: str | None = None) -> str:
    lines = [f"c {line}" for line in comment.splitlines()] if comment else []
    lines.append(f"p edge {G.n} {G.m}")
    lines.extend(f"e {u} {v}" for u, v in G.edges())
    return "\n".join(lines) + "\n"


def parse_dimacs_cnf(text: str, strict: bool = True) -> SatInstance:
    """Parse ``p cnf n m`` followed by zero-terminated clauses (which may span lines).

    Tautological clauses, empty clauses and out-of-range literals are errors.
    A ``%`` line ends the formula.
    """
    n = m = None
    header_line = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    current_start = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "%":
            break
        if parts[0] == "p":
            if n is not None:
                raise ParseError(f"duplicate problem line (first on line {header_line})", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("problem line must read 'p cnf <vars> <clauses>'", lineno)
            n, m = _ints(parts[2:], lineno, "problem line")
            if n < 1 or m < 0:
                raise ParseError(f"invalid sizes vars={n}, clauses={m}", lineno)
            header_line = lineno
            continue
        if n is None:
            raise ParseError("clause data before the problem line", lineno)
        for lit in _ints(parts, lineno, "clause"):
            if lit == 0:
                if not current:
                    raise ParseError("empty clause", lineno)
                clauses.append(tuple(current))
                current = []
                continue
            if abs(lit) > n:
                raise ParseError(f"literal {lit} out of range for {n} variables", lineno)
            if -lit in current:
                raise ParseError(f"tautological clause contains both {abs(lit)} and {-abs(lit)}", lineno)
            if not current:
                current_start = lineno
            current.append(lit)
    if n is None:
        raise ParseError("missing problem line 'p cnf <vars> <clauses>'")
    if current:
        _mismatch("last clause is not terminated by 0", current_start, strict)
        clauses.append(tuple(current))
    if len(clauses) != m:
        _mismatch(f"header declares {m} clauses but {len(clauses)} were read", header_line, strict)
    return SatInstance(n, tuple(clauses))


def write_dimacs_cnf(inst: SatInstance, comment: str | None = None) -> str:
    lines = [f"c {line}" for line in comment.splitlines()] if comment else []
    lines.append(f"p cnf {inst.num_vars} {inst.num_clauses}")
    lines.extend(" ".join(str(l) for l in clause) + " 0" for clause in inst.clauses)
    return "\n".join(lines) + "\n"
