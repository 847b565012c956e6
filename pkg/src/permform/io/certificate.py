"""Portable solution certificates and content digests of instances."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import jsonschema

from ..core import Graph, Permutation
from ..formulations import (
    CandidateSolution,
    GiInstance,
    Problem,
    QapInstance,
    SatInstance,
    TspInstance,
    evaluate,
)
from ..schemas import validate
from .errors import CertificateError, DigestMismatch


def _num(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(int(v))


def _matrix_lines(M) -> list[str]:
    return [" ".join(_num(v) for v in row) for row in M.tolist()]


def canonical_text(instance) -> str:
    """Whitespace-independent serialization: sorted edge list, clauses as written, matrix rows."""
    if isinstance(instance, Graph):
        lines = ["graph", str(instance.n)] + [f"{u} {v}" for u, v in instance.edges()]
    elif isinstance(instance, SatInstance):
        lines = ["cnf", str(instance.num_vars)] + [" ".join(map(str, c)) + " 0" for c in instance.clauses]
    elif isinstance(instance, TspInstance):
        lines = ["tsp", str(instance.n)] + _matrix_lines(instance.cost)
    elif isinstance(instance, QapInstance):
        lines = ["qap", str(instance.n)] + _matrix_lines(instance.flow) + _matrix_lines(instance.dist)
    elif isinstance(instance, GiInstance):
        return "gi\n" + canonical_text(instance.first) + canonical_text(instance.second)
    else:
        raise TypeError(f"no canonical form for {type(instance).__name__}")
    return "\n".join(lines) + "\n"


def instance_digest(instance) -> str:
    return hashlib.sha256(canonical_text(instance).encode("utf-8")).hexdigest()


def _plain(v):
    """Native JSON scalar (numpy scalars would not serialize)."""
    if v is None or isinstance(v, bool):
        return v
    if hasattr(v, "item"):
        v = v.item()
    return v


@dataclass(frozen=True)
class Certificate:
    problem: Problem
    instance_digest: str
    pi: tuple[int, ...]
    k: int | None
    blocks: tuple[int, ...] | None
    objective: float
    feasible: bool

    @classmethod
    def for_candidate(cls, instance, cand: CandidateSolution) -> "Certificate":
        ev = evaluate(instance, cand)
        return cls(
            cand.problem,
            instance_digest(instance),
            cand.pi.map,
            cand.k,
            cand.blocks,
            _plain(ev.objective),
            bool(ev.feasible),
        )

    def candidate(self) -> CandidateSolution:
        return CandidateSolution(self.problem, Permutation.from_one_based(self.pi), k=self.k, blocks=self.blocks)

    def to_dict(self) -> dict:
        return {
            "problem": self.problem.value,
            "instance_digest": self.instance_digest,
            "pi": list(self.pi),
            "k": self.k,
            "blocks": None if self.blocks is None else list(self.blocks),
            "objective": _plain(self.objective),
            "feasible": self.feasible,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        try:
            validate(data, "certificate")
        except jsonschema.ValidationError as exc:
            raise CertificateError(f"certificate schema violation: {exc.message}") from None
        pi = tuple(data["pi"])
        if sorted(pi) != list(range(1, len(pi) + 1)):
            raise CertificateError(f"pi is not a permutation of 1..{len(pi)}")
        blocks = None if data["blocks"] is None else tuple(data["blocks"])
        try:
            cert = cls(Problem(data["problem"]), data["instance_digest"], pi, data["k"], blocks,
                       data["objective"], data["feasible"])
            cert.candidate()
        except ValueError as exc:
            raise CertificateError(str(exc)) from None
        return cert

    def verify_digest(self, instance) -> None:
        actual = instance_digest(instance)
        if actual != self.instance_digest:
            raise DigestMismatch(f"certificate digest {self.instance_digest[:12]}... does not match instance {actual[:12]}...")


def write_certificate(cert: Certificate) -> str:
    return json.dumps(cert.to_dict(), indent=2) + "\n"


def read_certificate(text: str) -> Certificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return Certificate.from_dict(data)
