"""TSPLIB (EUC_2D and EXPLICIT FULL_MATRIX only) and QAPLIB readers/writers."""

from __future__ import annotations

import math

import numpy as np

from ..formulations import QapInstance, TspInstance
from .errors import ParseError

_SECTIONS = ("NODE_COORD_SECTION", "EDGE_WEIGHT_SECTION")


def _number(token: str, lineno: int):
    try:
        return int(token)
    except ValueError:
        pass
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"expected a number, got {token!r}", lineno) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite number {token!r}", lineno)
    return value


def nint(x: float) -> int:
    """TSPLIB rounding to the nearest integer."""
    return int(x + 0.5)


def parse_tsplib(text: str) -> TspInstance:
    header: dict[str, str] = {}
    where: dict[str, int] = {}
    section = None
    data: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line == "EOF":
            break
        if section is not None:
            if line[0].isalpha():
                raise ParseError(f"unexpected keyword line {line!r} inside {section}", lineno)
            data.append((lineno, line.split()))
            continue
        if line in _SECTIONS:
            section = line
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'KEY : value', got {line!r}", lineno)
        key = key.strip()
        if key in header:
            raise ParseError(f"duplicate header field {key}", lineno)
        header[key], where[key] = value.strip(), lineno

    if "DIMENSION" not in header:
        raise ParseError("missing DIMENSION")
    try:
        n = int(header["DIMENSION"])
    except ValueError:
        raise ParseError(f"bad DIMENSION {header['DIMENSION']!r}", where["DIMENSION"]) from None
    if n < 2:
        raise ParseError(f"DIMENSION must be >= 2, got {n}", where["DIMENSION"])
    kind = header.get("TYPE", "TSP")
    if kind not in ("TSP", "ATSP"):
        raise ParseError(f"unsupported TYPE {kind}", where.get("TYPE"))
    weight_type = header.get("EDGE_WEIGHT_TYPE")
    if weight_type == "EUC_2D":
        if section != "NODE_COORD_SECTION":
            raise ParseError("EUC_2D requires a NODE_COORD_SECTION")
        cost = _euc_2d(n, data)
    elif weight_type == "EXPLICIT":
        fmt = header.get("EDGE_WEIGHT_FORMAT")
        if fmt != "FULL_MATRIX":
            raise ParseError(f"unsupported EDGE_WEIGHT_FORMAT {fmt}", where.get("EDGE_WEIGHT_FORMAT"))
        if section != "EDGE_WEIGHT_SECTION":
            raise ParseError("EXPLICIT weights require an EDGE_WEIGHT_SECTION")
        cost = _full_matrix(n, data)
    else:
        raise ParseError(f"unsupported EDGE_WEIGHT_TYPE {weight_type}", where.get("EDGE_WEIGHT_TYPE"))
    try:
        return TspInstance(cost)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _euc_2d(n: int, data) -> np.ndarray:
    coords: dict[int, tuple[float, float]] = {}
    for lineno, parts in data:
        if len(parts) != 3:
            raise ParseError("coordinate line must read '<id> <x> <y>'", lineno)
        node = _number(parts[0], lineno)
        if not isinstance(node, int) or not 1 <= node <= n:
            raise ParseError(f"node id {parts[0]} out of range 1..{n}", lineno)
        if node in coords:
            raise ParseError(f"duplicate coordinates for node {node}", lineno)
        coords[node] = (float(_number(parts[1], lineno)), float(_number(parts[2], lineno)))
    if len(coords) != n:
        missing = sorted(set(range(1, n + 1)) - set(coords))
        raise ParseError(f"missing coordinates for nodes {missing[:5]}")
    cost = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n + 1):
        xi, yi = coords[i]
        for j in range(i + 1, n + 1):
            xj, yj = coords[j]
            cost[i - 1, j - 1] = cost[j - 1, i - 1] = nint(math.hypot(xi - xj, yi - yj))
    return cost


def _full_matrix(n: int, data) -> np.ndarray:
    values = []
    last = None
    for lineno, parts in data:
        values.extend(_number(t, lineno) for t in parts)
        last = lineno
    if len(values) != n * n:
        raise ParseError(f"FULL_MATRIX needs {n * n} weights, found {len(values)}", last)
    dtype = np.int64 if all(isinstance(v, int) for v in values) else np.float64
    return np.array(values, dtype=dtype).reshape(n, n)


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(int(v))


def write_tsplib(inst: TspInstance, name: str = "instance") -> str:
    """Serialize as an EXPLICIT FULL_MATRIX instance; floats are written with ``repr`` so they round-trip."""
    kind = "TSP" if inst.symmetric else "ATSP"
    lines = [
        f"NAME : {name}",
        f"TYPE : {kind}",
        f"DIMENSION : {inst.n}",
        "EDGE_WEIGHT_TYPE : EXPLICIT",
        "EDGE_WEIGHT_FORMAT : FULL_MATRIX",
        "EDGE_WEIGHT_SECTION",
    ]
    lines.extend(" ".join(_fmt(v) for v in row) for row in inst.cost.tolist())
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def parse_qaplib(text: str) -> QapInstance:
    """QAPLIB layout: ``n``, then the ``n x n`` flow matrix, then the distance matrix."""
    tokens: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens.extend((lineno, t) for t in raw.split())
    if not tokens:
        raise ParseError("empty QAP file")
    lineno, first = tokens[0]
    n = _number(first, lineno)
    if not isinstance(n, int) or n < 1:
        raise ParseError(f"bad size {first!r}", lineno)
    body = tokens[1:]
    if len(body) != 2 * n * n:
        raise ParseError(f"expected {2 * n * n} matrix entries, found {len(body)}", body[-1][0] if body else lineno)
    values = [_number(t, ln) for ln, t in body]
    dtype = np.int64 if all(isinstance(v, int) for v in values) else np.float64
    arr = np.array(values, dtype=dtype)
    return QapInstance(arr[: n * n].reshape(n, n), arr[n * n :].reshape(n, n))


def write_qaplib(inst: QapInstance) -> str:
    lines = [str(inst.n), ""]
    lines.extend(" ".join(_fmt(v) for v in row) for row in inst.flow.tolist())
    lines.append("")
    lines.extend(" ".join(_fmt(v) for v in row) for row in inst.dist.tolist())
    return "\n".join(lines) + "\n"
