"""Experiment configuration: JSON loading and validation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from ..errors import SmoothMomentsError


class ConfigError(SmoothMomentsError, ValueError):
    pass


def load_schema() -> dict:
    text = resources.files(__package__).joinpath("config.schema.json").read_text()
    return json.loads(text)


def _rational(v) -> Fraction:
    # floats go through their shortest repr so 0.1 reads as 1/10
    if isinstance(v, float):
        v = repr(v)
    if isinstance(v, str):
        return Fraction(v.replace(" ", ""))
    return Fraction(v)


@dataclass(frozen=True)
class GridPolicy:
    mode: str = "auto"
    N: int | None = None
    rel_tol: float | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    x_values: list[int]
    rho_values: list[Fraction]
    y_values: list[int] | None = None
    K_values: list[Fraction] | None = None
    epsilon: float = 0.05
    grid_policy: GridPolicy = field(default_factory=GridPolicy)
    bounds: list[str] = field(default_factory=lambda: ["TRIVIAL"])
    arc_splits: list[str] = field(default_factory=list)
    skeleton_samples: int = 0
    harper_K: float = 1.0
    sunit_C: float = 1.0
    seed: int = 0
    output: str | None = None
    formats: list[str] = field(default_factory=lambda: ["CSV"])
    include_timing: bool = False

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        try:
            jsonschema.validate(d, load_schema())
        except jsonschema.ValidationError as e:
            raise ConfigError(f"invalid config: {e.message}") from None
        xs = list(d["x_values"])
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ConfigError("x_values must be strictly ascending")
        gp = GridPolicy(**d.get("grid_policy", {"mode": "auto"}))
        if gp.mode == "fixed" and gp.N is None:
            raise ConfigError("grid_policy 'fixed' needs N")
        if gp.mode == "refined" and gp.rel_tol is None:
            raise ConfigError("grid_policy 'refined' needs rel_tol")
        formats = list(d.get("formats", ["CSV"]))
        if "SVG" in formats and not ({"CSV", "JSONL"} & set(formats)):
            raise ConfigError("SVG output is drawn from persisted rows; add CSV or JSONL")
        rhos = [_rational(r) for r in d["rho_values"]]
        Ks = [_rational(k) for k in d["K_values"]] if "K_values" in d else None
        if any(v <= 0 for v in rhos + (Ks or [])):
            raise ConfigError("rho_values and K_values must be positive")
        return cls(
            x_values=xs,
            rho_values=rhos,
            y_values=list(d["y_values"]) if "y_values" in d else None,
            K_values=Ks,
            epsilon=float(d.get("epsilon", 0.05)),
            grid_policy=gp,
            bounds=list(d.get("bounds", ["TRIVIAL"])),
            arc_splits=list(d.get("arc_splits", [])),
            skeleton_samples=int(d.get("skeleton_samples", 0)),
            harper_K=float(d.get("harper_K", 1.0)),
            sunit_C=float(d.get("sunit_C", 1.0)),
            seed=int(d.get("seed", 0)),
            output=d.get("output"),
            formats=formats,
            include_timing=bool(d.get("include_timing", False)),
        )


def load_config(path) -> ExperimentConfig:
    try:
        d = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    return ExperimentConfig.from_dict(d)
