"""Run configuration: defaults, config-file loading, flag precedence.

Precedence is flags > config file > defaults. The resolved configuration is
echoed into every pipeline output bundle so that a run can be replayed
bit-identically from its own artifacts.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .errors import FormatError, ParameterError


@dataclass(frozen=True)
class RunConfig:
    graph: str | None = None
    weight: float = 1.0           # weight used when the file has no column
    ignore_weights: bool = False  # apply `weight` even over a weight column
    directed: bool = False
    max_path_length: int = 4
    matrix: str | None = None     # import an influence matrix instead
    divisions: str | None = None  # import divisions instead of detecting
    transpose: bool = False       # division file is node-per-row
    n_seeds: int = 12
    base_seed: int = 0
    max_iters: int = 10_000
    normalize: bool = False
    full_segment: bool = True     # one segment spanning every division
    segment_length: int = 1
    top_k: int = 1
    anchor_rank: int = 1          # which anchor's blocks feed the sweep
    segment_index: int | None = None
    thresholds: tuple[float, ...] = (0.0,)
    mode: str = "strict"
    accumulation: str = "after-scan"
    communities: str | None = None  # partition file overriding division sides
    labels: str | None = None
    outdir: str | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["thresholds"] = list(self.thresholds)
        return d


CONFIG_FIELDS = frozenset(f.name for f in fields(RunConfig))
_FIELDS = CONFIG_FIELDS


def config_from_file(path) -> RunConfig:
    """Load a JSON config file into a RunConfig (unknown keys are errors)."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})")
    if not isinstance(data, dict):
        raise FormatError(f"{path}: config must be a JSON object")
    unknown = set(data) - _FIELDS
    if unknown:
        raise ParameterError(
            f"{path}: unknown config keys {sorted(unknown)}")
    if "thresholds" in data:
        data["thresholds"] = tuple(float(t) for t in data["thresholds"])
    return replace(RunConfig(), **data)


def resolve_config(file_path=None, **flag_overrides) -> RunConfig:
    """Apply precedence: explicit flags on top of file values on top of defaults."""
    cfg = config_from_file(file_path) if file_path else RunConfig()
    overrides = {k: v for k, v in flag_overrides.items() if v is not None}
    unknown = set(overrides) - _FIELDS
    if unknown:
        raise ParameterError(f"unknown config fields {sorted(unknown)}")
    if "thresholds" in overrides:
        overrides["thresholds"] = tuple(float(t)
                                        for t in overrides["thresholds"])
    return replace(cfg, **overrides)


def parse_threshold_list(text: str) -> tuple[float, ...]:
    """Parse a comma-separated threshold list like ``0,0.5,2``."""
    try:
        values = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ParameterError(f"bad threshold list {text!r}")
    if not values:
        raise ParameterError("threshold list is empty")
    return values
