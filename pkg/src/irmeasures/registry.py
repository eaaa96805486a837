"""Catalogue of supported measures: parameter schemas, cutoff policy, backends."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any

from .errors import MeasureError

REQUIRED = "required"
OPTIONAL = "optional"
FORBIDDEN = "forbidden"

RANK = "rank"
CWL = "cwl"
COMPAT = "compat"
BACKENDS = (RANK, CWL, COMPAT)


@dataclass(frozen=True)
class ParamSpec:
    name: str
    kind: type  # int, float or str
    default: Any
    low: float | None = None
    high: float | None = None
    low_open: bool = False
    high_open: bool = False
    choices: tuple[str, ...] = ()

    def range_text(self) -> str:
        if self.choices:
            return "{" + ", ".join(self.choices) + "}"
        left = "[" if self.low is not None and not self.low_open else "("
        right = "]" if self.high is not None and not self.high_open else ")"
        lo = "-inf" if self.low is None else f"{self.low:g}"
        hi = "inf" if self.high is None else f"{self.high:g}"
        return f"{left}{lo},{hi}{right}"

    def check(self, value: Any) -> Any:
        """Coerce ``value`` to this parameter's type and validate its range."""
        if self.kind is int:
            if isinstance(value, bool) or not isinstance(value, int):
                raise MeasureError(f"parameter {self.name} must be an integer, got {value!r}")
        elif self.kind is float:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise MeasureError(f"parameter {self.name} must be a real number, got {value!r}")
            value = float(value)
            if not math.isfinite(value):
                raise MeasureError(f"parameter {self.name} must be finite, got {value!r}")
        else:
            if value not in self.choices:
                raise MeasureError(
                    f"parameter {self.name} must be one of {self.range_text()}, got {value!r}"
                )
            return value
        if self.low is not None and (value < self.low or (self.low_open and value == self.low)):
            raise MeasureError(f"{self.name} out of range {self.range_text()}: {value!r}")
        if self.high is not None and (value > self.high or (self.high_open and value == self.high)):
            raise MeasureError(f"{self.name} out of range {self.range_text()}: {value!r}")
        return value


@dataclass(frozen=True)
class MeasureSchema:
    name: str
    params: tuple[ParamSpec, ...] = ()
    cutoff: str = FORBIDDEN
    cutoff_kind: type = int
    backend: str = RANK
    alt_backends: tuple[str, ...] = ()
    aggregator: str = "mean"
    empty_value: float | None = 0.0  # None: depends on the judgments (e.g. NumRel)
    aliases: tuple[str, ...] = ()
    description: str = ""
    param_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "param_index", {p.name: p for p in self.params})
        for p in self.params:
            p.check(p.default)

    @property
    def backends(self) -> tuple[str, ...]:
        return (self.backend,) + self.alt_backends

    def check_cutoff(self, cutoff: Any) -> Any:
        if cutoff is None:
            if self.cutoff == REQUIRED:
                raise MeasureError(f"{self.name} requires a cutoff (e.g. {self.name}@10)")
            return None
        if self.cutoff == FORBIDDEN:
            raise MeasureError(f"{self.name} does not accept a cutoff")
        if self.cutoff_kind is float:
            if isinstance(cutoff, bool) or not isinstance(cutoff, (int, float)):
                raise MeasureError(f"{self.name} cutoff must be a real number, got {cutoff!r}")
            cutoff = float(cutoff) + 0.0  # folds -0.0 into 0.0
            if not 0.0 <= cutoff <= 1.0:
                raise MeasureError(f"{self.name} recall point must be in [0,1], got {cutoff!r}")
            return cutoff
        if isinstance(cutoff, bool) or not isinstance(cutoff, int):
            raise MeasureError(f"{self.name} cutoff must be an integer, got {cutoff!r}")
        if cutoff < 1:
            raise MeasureError(f"cutoff must be >= 1, got {cutoff}")
        return cutoff


def _rel() -> ParamSpec:
    return ParamSpec("rel", int, 1, low=1)


def _build() -> dict[str, MeasureSchema]:
    S = MeasureSchema
    schemas = [
        S("P", (_rel(),), REQUIRED, alt_backends=(CWL,), description="precision at k"),
        S("R", (_rel(),), REQUIRED, description="recall at k"),
        S("AP", (_rel(),), OPTIONAL, aliases=("MAP",), description="average precision"),
        S("RR", (_rel(),), OPTIONAL, alt_backends=(CWL,), aliases=("MRR",),
          description="reciprocal rank of the first relevant document"),
        S("nDCG", (ParamSpec("gain", str, "linear", choices=("linear", "exp")),), OPTIONAL,
          aliases=("NDCG",), description="normalised discounted cumulative gain"),
        S("ERR", (), REQUIRED, description="expected reciprocal rank"),
        S("RBP", (ParamSpec("p", float, 0.8, low=0.0, high=1.0, low_open=True, high_open=True),
                  ParamSpec("gain", str, "binary", choices=("binary", "graded"))),
          FORBIDDEN, backend=CWL, description="rank-biased precision"),
        S("SDCG", (), REQUIRED, backend=CWL, description="scaled discounted cumulative gain"),
        S("INST", (ParamSpec("T", float, 1.0, low=0.0, low_open=True),), FORBIDDEN,
          backend=CWL, description="adaptive C/W/L metric with target T"),
        S("INSQ", (ParamSpec("T", float, 1.0, low=0.0, low_open=True),), FORBIDDEN,
          backend=CWL, description="INST variant ignoring accumulated gain"),
        S("Bpref", (_rel(),), description="binary preference"),
        S("infAP", (_rel(),), description="inferred average precision"),
        S("IPrec", (_rel(),), REQUIRED, cutoff_kind=float,
          description="interpolated precision at a recall point"),
        S("Rprec", (_rel(),), aliases=("R-Prec",), description="precision at rank R"),
        S("Success", (_rel(),), REQUIRED, description="1 if a relevant doc is in the top k"),
        S("Judged", (), REQUIRED, description="fraction of the top k that is judged"),
        S("SetP", (_rel(),), description="set precision"),
        S("SetR", (_rel(),), description="set recall"),
        S("SetF", (_rel(), ParamSpec("beta", float, 1.0, low=0.0, low_open=True)),
          description="set F-measure"),
        S("SetAP", (_rel(),), description="set precision times set recall"),
        S("NumQ", (), aggregator="sum", empty_value=1.0, description="number of queries"),
        S("NumRel", (_rel(),), aggregator="sum", empty_value=None,
          description="number of relevant documents"),
        S("NumRet", (), aggregator="sum", description="number of retrieved documents"),
        S("NumRelRet", (_rel(),), aggregator="sum", description="relevant documents retrieved"),
        S("Compat", (ParamSpec("p", float, 0.95, low=0.0, high=1.0, low_open=True, high_open=True),),
          OPTIONAL, backend=COMPAT, description="rank-biased overlap with the closest ideal ranking"),
    ]
    return {s.name: s for s in schemas}


SCHEMAS = MappingProxyType(_build())
ALIASES = MappingProxyType({a: s.name for s in SCHEMAS.values() for a in s.aliases})

COMPAT_DEFAULT_DEPTH = 1000

_DIVERSITY = frozenset(
    {"alpha_nDCG", "ERR_IA", "AP_IA", "MAP_IA", "P_IA", "NRBP", "STREC", "nERR_IA", "alpha-nDCG"}
)
_UNSUPPORTED_CWL = frozenset({"BPM", "NERR"})


def registry_lookup(name: str) -> MeasureSchema:
    """Resolve a canonical name or alias (case-sensitive) to its schema."""
    schema = SCHEMAS.get(name)
    if schema is not None:
        return schema
    if name in ALIASES:
        return SCHEMAS[ALIASES[name]]
    if name in _DIVERSITY:
        raise MeasureError(f"unknown measure: {name} (diversity measures unsupported)")
    if name in _UNSUPPORTED_CWL:
        raise MeasureError(f"unknown measure: {name} (C/W/L measure not supported)")
    raise MeasureError(f"unknown measure: {name}")
