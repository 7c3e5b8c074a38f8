"""Run configuration and numerical tolerances for the verification suites."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Dict, Iterable

from src.lie.functions import FUNCTION_REGISTRY

COMMANDS = ("surface", "verify", "flow", "bracket", "groupoid", "dirac")
DEFAULT_SEED = 0xC0FFEE


@dataclass
class Tolerances:
    algebraic: float = 1e-12
    linalg: float = 1e-9  # relative SVD threshold
    angle: float = 1e-7
    fd: float = 1e-5
    derivative: float = 1e-7
    flow: float = 1e-6
    residual: float = 1e-9
    relation: float = 1e-8
    constraint: float = 1e-10

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)

    def updated(self, overrides: Iterable[str]) -> "Tolerances":
        """Copy with KEY=VAL overrides applied; unknown keys are rejected."""
        known = {f.name for f in fields(self)}
        values = self.as_dict()
        for item in overrides:
            key, sep, raw = item.partition("=")
            key = key.strip()
            if not sep or key not in known:
                raise ValueError(f"Unknown tolerance override {item!r}; keys: {', '.join(sorted(known))}")
            try:
                value = float(raw)
            except ValueError as exc:
                raise ValueError(f"Tolerance {key} needs a number, got {raw!r}") from exc
            if value <= 0:
                raise ValueError(f"Tolerance {key} must be positive")
            values[key] = value
        return Tolerances(**values)


@dataclass
class RunConfig:
    command: str = "verify"
    pattern_path: str = "torus1"
    group_name: str = "SU2"
    seed: int = DEFAULT_SEED
    n_samples: int = 20
    fd_step: float = 1e-4
    tolerances: Tolerances = field(default_factory=Tolerances)
    output_path: Path = Path("results") / "report.json"
    function_name: str = "re_trace"
    flow_time: float = 1.0
    flow_steps: int = 200
    intersections_path: str | None = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command {self.command!r}; expected one of {', '.join(COMMANDS)}")
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        if not 0 < self.fd_step <= 1e-2:
            raise ValueError(f"fd_step must lie in (0, 1e-2], got {self.fd_step}")
        if self.function_name not in FUNCTION_REGISTRY:
            raise ValueError(f"Unknown class function {self.function_name!r}; known: {', '.join(FUNCTION_REGISTRY)}")
        if self.flow_steps < 1:
            raise ValueError("flow_steps must be at least 1")
        if self.seed < 0 or self.seed >= 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.output_path = Path(self.output_path)
