from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Any

from ..formulations import CandidateSolution, Evaluation


@dataclass(frozen=True)
class AnnealParams:
    seed: int = 0
    iterations: int = 100_000  # per k-stage
    initial_temperature: float = 1.0  # in units of the mean |energy change| of a random move
    cooling_rate: float = 0.9995
    restarts: int = 1

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.initial_temperature <= 0:
            raise ValueError("initial_temperature must be positive")
        if not 0 < self.cooling_rate < 1:
            raise ValueError("cooling_rate must lie in (0, 1)")


@dataclass(frozen=True)
class RelaxParams:
    seed: int = 0
    steps: int = 500
    learning_rate: float = 0.5
    sinkhorn_iters: int = 50
    temperature: float = 1.0
    temperature_decay: float = 0.995
    penalty: float = 1.0
    penalty_growth: float = 2.0
    tolerance: float = 1e-6
    round_every: int = 10
    polish_iterations: int = 2_000

    def __post_init__(self):
        if self.sinkhorn_iters < 1:
            raise ValueError("sinkhorn_iters must be >= 1")
        if self.steps < 1 or self.round_every < 1:
            raise ValueError("steps and round_every must be >= 1")
        if self.learning_rate <= 0 or self.temperature <= 0 or self.tolerance <= 0:
            raise ValueError("learning_rate, temperature and tolerance must be positive")
        if not 0 < self.temperature_decay <= 1:
            raise ValueError("temperature_decay must lie in (0, 1]")
        if self.penalty < 0 or self.penalty_growth < 1:
            raise ValueError("penalty must be >= 0 and penalty_growth >= 1")


def with_overrides(params, overrides: dict[str, Any]):
    """Copy of a params dataclass with string or typed overrides coerced to the field types."""
    kinds = {f.name: type(getattr(params, f.name)) for f in fields(params)}
    unknown = set(overrides) - set(kinds)
    if unknown:
        raise ValueError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
    coerced = {}
    for name, value in overrides.items():
        kind = kinds[name]
        coerced[name] = kind(float(value)) if kind is int and isinstance(value, str) and "e" in value else kind(value)
    return replace(params, **coerced)


@dataclass
class SolveResult:
    candidate: CandidateSolution
    evaluation: Evaluation
    method: str
    summary: dict[str, Any] = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.evaluation.feasible

    @property
    def objective(self):
        return self.evaluation.objective
