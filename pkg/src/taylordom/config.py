"""Experiment config schema (YAML) and conversion into library objects.

Complex numbers are written either as plain numbers or as ``[re, im]`` pairs.
Validation errors are reported with the dotted field path and the YAML line.
"""
from __future__ import annotations

from typing import List, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .dfinite import DifferentialOperator, PiecewiseDFiniteFunction, Segment
from .errors import ConfigError
from .recurrence import PoincareRecurrence, RationalFunctionK

Number = Union[float, List[float]]

RECURRENCE_TASKS = ("unroll", "roots", "dominate", "zeros", "spvalent", "report")
DFINITE_TASKS = ("moments", "roots", "dominate", "report")


def to_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError("complex numbers are written as [re, im]")
        return complex(float(v[0]), float(v[1]))
    return complex(float(v))


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class RationalSection(_Strict):
    num: List[Number] = Field(default_factory=lambda: [0.0])
    den: List[Number] = Field(default_factory=lambda: [1.0])

    @field_validator("den")
    @classmethod
    def _den_nonzero(cls, v):
        if not v or all(to_complex(x) == 0 for x in v):
            raise ValueError("denominator is identically zero")
        return v


class RecurrenceSection(_Strict):
    c: List[Number] = Field(min_length=1)
    psi: Optional[List[RationalSection]] = None
    initial: List[Number]

    @model_validator(mode="after")
    def _lengths(self):
        d = len(self.c)
        if self.psi is not None and len(self.psi) != d:
            raise ValueError(f"psi must have {d} entries (one per coefficient)")
        if len(self.initial) != d:
            raise ValueError(f"initial must have {d} values")
        return self


class SegmentSection(_Strict):
    initial: List[Number]
    at: Optional[float] = None


class DFiniteSection(_Strict):
    operator: List[List[Number]] = Field(min_length=2)
    interval: List[float] = Field(min_length=2, max_length=2)
    jumps: List[float] = Field(default_factory=list)
    segments: List[SegmentSection]

    @model_validator(mode="after")
    def _shape(self):
        n = len(self.operator) - 1
        if len(self.segments) != len(self.jumps) + 1:
            raise ValueError(f"need {len(self.jumps) + 1} segments for {len(self.jumps)} jumps")
        for i, s in enumerate(self.segments):
            if len(s.initial) != n:
                raise ValueError(f"segment {i} needs {n} initial values (operator order)")
        return self


class CertificateSection(_Strict):
    N: int = Field(ge=0)
    R: float = Field(gt=0)
    C: float = Field(gt=0)
    name: Optional[str] = None


class Params(_Strict):
    k_max: int = Field(default=1000, ge=2)
    tol: float = Field(default=1e-12, gt=0)
    k_probe: int = Field(default=1_000_000, ge=1)
    seed: int = 0
    radii: List[float] = Field(default_factory=list)
    truncation: Optional[int] = None
    samples: int = Field(default=256, ge=8)
    trials: int = Field(default=100, ge=1)
    s: int = Field(default=1, ge=0)
    K: int = Field(default=100, ge=4)
    quad_tol: float = Field(default=1e-12, gt=0)
    fit_tol: float = Field(default=1e-8, gt=0)
    certificates: List[CertificateSection] = Field(default_factory=list)


class ExperimentConfig(_Strict):
    kind: Literal["recurrence", "dfinite"]
    name: str = "experiment"
    recurrence: Optional[RecurrenceSection] = None
    dfinite: Optional[DFiniteSection] = None
    tasks: List[str] = Field(min_length=1)
    params: Params = Field(default_factory=Params)

    @model_validator(mode="after")
    def _consistent(self):
        allowed = RECURRENCE_TASKS if self.kind == "recurrence" else DFINITE_TASKS
        for t in self.tasks:
            if t not in allowed:
                raise ValueError(f"task {t!r} is not applicable to kind {self.kind!r} (allowed: {', '.join(allowed)})")
        if self.kind == "recurrence" and self.recurrence is None:
            raise ValueError("kind 'recurrence' needs a 'recurrence' section")
        if self.kind == "dfinite" and self.dfinite is None:
            raise ValueError("kind 'dfinite' needs a 'dfinite' section")
        return self

    def build_recurrence(self):
        sec = self.recurrence
        c = [to_complex(v) for v in sec.c]
        psi = ()
        if sec.psi is not None:
            psi = tuple(RationalFunctionK([to_complex(x) for x in p.num], [to_complex(x) for x in p.den],
                                          k_max=self.params.k_max) for p in sec.psi)
        return PoincareRecurrence(tuple(c), psi), [to_complex(v) for v in sec.initial]

    def build_dfinite(self) -> PiecewiseDFiniteFunction:
        sec = self.dfinite
        op = DifferentialOperator([[to_complex(x) for x in p] for p in sec.operator])
        segs = tuple(Segment(tuple(to_complex(v) for v in s.initial), s.at) for s in sec.segments)
        return PiecewiseDFiniteFunction(op, sec.interval[0], sec.interval[1], tuple(sec.jumps), segs)


def _line_of(node, loc) -> Optional[int]:
    """1-based line of the YAML node addressed by a pydantic error location."""
    line = node.start_mark.line + 1 if node is not None else None
    for key in loc:
        if isinstance(node, yaml.MappingNode):
            nxt = None
            for k, v in node.value:
                if k.value == key:
                    nxt = v
                    line = k.start_mark.line + 1
                    break
            if nxt is None:
                return line
            node = nxt
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            node = node.value[key]
            line = node.start_mark.line + 1
        else:
            return line
    return line


def set_path(data: dict, dotted: str, value) -> None:
    keys = dotted.split(".")
    cur = data
    for k in keys[:-1]:
        if isinstance(cur, list):
            cur = cur[int(k)]
        else:
            cur = cur.setdefault(k, {})
    last = keys[-1]
    if isinstance(cur, list):
        cur[int(last)] = value
    else:
        cur[last] = value


def parse_config(text: str, overrides: Optional[dict] = None) -> ExperimentConfig:
    """Parse and validate a YAML config; ``overrides`` maps dotted paths to values."""
    try:
        node = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"YAML syntax error: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping at the top level")
    for key, value in (overrides or {}).items():
        set_path(data, key, value)
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        lines = []
        for err in exc.errors():
            loc = tuple(x for x in err["loc"] if not (isinstance(x, str) and x.startswith("function-")))
            path = ".".join(str(x) for x in loc) or "<root>"
            where = _line_of(node, loc)
            prefix = f"line {where}: " if where else ""
            lines.append(f"{prefix}{path}: {err['msg']}")
        raise ConfigError("invalid config:\n  " + "\n  ".join(lines)) from None


def load_config(path, overrides: Optional[dict] = None) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), overrides)
