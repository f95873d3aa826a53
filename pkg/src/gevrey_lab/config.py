"""Experiment configuration (JSON), validated before any computation."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import GevreyLabError

Alpha = Annotated[float, Field(gt=0.0, lt=1.0)]
Positive = Annotated[float, Field(gt=0.0)]
NonNeg = Annotated[float, Field(ge=0.0)]
U64 = Annotated[int, Field(ge=0, lt=2 ** 64)]


class ConfigError(GevreyLabError, ValueError):
    """Unreadable or invalid configuration; the message names the field path."""


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class SpectrumSpec(_Strict):
    kind: Literal["power_law", "dirichlet_1d", "explicit"] = "power_law"
    delta: Positive = 1.0
    epsilon: Positive = 2.0
    length: Positive = math.pi
    values: Optional[list[Positive]] = None
    modes: Annotated[int, Field(ge=1, le=50_000_000)] = 2048
    #: grow ``modes`` until the tail rule holds for the requested powers
    auto_modes: bool = True

    @model_validator(mode="after")
    def _values(self):
        if self.kind == "explicit":
            if not self.values:
                raise ValueError("explicit spectrum needs 'values'")
            if any(b < a for a, b in zip(self.values, self.values[1:])):
                raise ValueError("explicit eigenvalues must be sorted ascending")
        return self


class SymbolTerm(_Strict):
    c: Positive
    alpha: Alpha


class DampingSpec(_Strict):
    alpha: Alpha = 0.5
    c: Positive = 1.0
    symbol: Optional[list[SymbolTerm]] = None


class RandomData(_Strict):
    kind: Literal["random"] = "random"
    stream: U64 = 0
    power: Annotated[float, Field(gt=0.5)] = 1.0
    smoothness: NonNeg = 0.0


class ExplicitData(_Strict):
    kind: Literal["explicit"]
    u0: list[float]
    u1: list[float]

    @model_validator(mode="after")
    def _lengths(self):
        if len(self.u0) != len(self.u1):
            raise ValueError("u0 and u1 must have equal length")
        return self


class CounterexampleData(_Strict):
    kind: Literal["counterexample"]
    variant: Literal["overdamped", "oscillatory", "half"] = "overdamped"
    K: Positive = 1.5
    n0: Optional[Annotated[int, Field(ge=1)]] = None
    stride: Annotated[int, Field(ge=1)] = 1


InitialData = Annotated[Union[RandomData, ExplicitData, CounterexampleData], Field(discriminator="kind")]


class FitSpec(_Strict):
    k_min: Annotated[float, Field(ge=2.0)] = 20.0
    k_max: Positive = 200.0
    k_step: Positive = 1.0
    model: Literal["prefactor", "plain"] = "prefactor"
    sigma: Optional[Positive] = None
    tolerance: Positive = 0.15
    trend_threshold: Positive = 1e-3

    @model_validator(mode="after")
    def _window(self):
        if self.k_max <= self.k_min:
            raise ValueError("k_max must exceed k_min")
        return self


class EnergySpec(_Strict):
    t_grid: list[Positive] = Field(default_factory=lambda: [0.1 * i for i in range(1, 11)])
    h: Positive = 1e-4
    tolerance: Positive = 1e-5
    integral_t: Positive = 1.0
    growth_t_grid: list[NonNeg] = Field(default_factory=lambda: [0.1 * i for i in range(51)])
    smoothing_m: list[Annotated[int, Field(ge=1)]] = Field(default_factory=lambda: list(range(1, 21)))


class LowerBoundSpec(_Strict):
    t: Positive = 1.0
    theta: Optional[Positive] = None
    integrated: Optional[bool] = None
    k_min: Annotated[float, Field(ge=2.0)] = 20.0
    k_max: Positive = 200.0
    tolerance: Positive = 0.05


class WaveSpec(_Strict):
    length: Positive = math.pi
    window: tuple[Annotated[float, Field(gt=0.0, lt=1.0)], Annotated[float, Field(gt=0.0, lt=1.0)]] = (0.2, 0.8)
    p_min: Annotated[int, Field(ge=2)] = 20
    p_max: Annotated[int, Field(ge=3)] = 200
    p_step: Annotated[int, Field(ge=1)] = 2
    grid_points: Annotated[int, Field(ge=2, le=100_000)] = 257
    embed: Optional[Annotated[int, Field(ge=2)]] = None
    snapshot_points: Annotated[int, Field(ge=1, le=100_000)] = 257
    tolerance: Positive = 0.15

    @model_validator(mode="after")
    def _checks(self):
        if not self.window[0] < self.window[1]:
            raise ValueError("window must be increasing fractions of the length")
        if self.p_max <= self.p_min:
            raise ValueError("p_max must exceed p_min")
        return self


class AppendixSpec(_Strict):
    max_parts: Annotated[int, Field(ge=1, le=6)] = 4
    max_total: Annotated[int, Field(ge=1, le=20)] = 16
    max_p: Annotated[int, Field(ge=1, le=500)] = 500
    beta_points: Annotated[int, Field(ge=2)] = 1000
    h_points: Annotated[int, Field(ge=2)] = 1000
    diagonal_trials: Annotated[int, Field(ge=0)] = 10_000


class ExperimentConfig(_Strict):
    spectrum: SpectrumSpec = SpectrumSpec()
    damping: DampingSpec = DampingSpec()
    data: InitialData = RandomData()
    times: list[NonNeg] = Field(default_factory=lambda: [1.0])
    fit: FitSpec = FitSpec()
    energy: EnergySpec = EnergySpec()
    lower_bound: LowerBoundSpec = LowerBoundSpec()
    wave: WaveSpec = WaveSpec()
    appendix: AppendixSpec = AppendixSpec()
    seed: U64 = 0

    @model_validator(mode="after")
    def _times(self):
        if not self.times:
            raise ValueError("times must not be empty")
        return self


def format_errors(exc: ValidationError) -> str:
    lines = []
    for err in exc.errors():
        path = ".".join(str(p) for p in err["loc"]) or "<root>"
        lines.append(f"{path}: {err['msg']}")
    return "; ".join(lines)


def parse_config(obj: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(obj)
    except ValidationError as exc:
        raise ConfigError(format_errors(exc)) from None


def load_config(path: Optional[Path]) -> tuple[ExperimentConfig, dict]:
    """Validated config plus its canonical dict (used for hashing)."""
    if path is None:
        cfg = ExperimentConfig()
    else:
        try:
            raw = json.loads(Path(path).read_text())
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("<root>: config must be a JSON object")
        cfg = parse_config(raw)
    return cfg, cfg.model_dump(mode="json")
