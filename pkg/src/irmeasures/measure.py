"""Measure expressions: ``name[(key=value,...)][@cutoff]``.

Expressions are parsed against the registry, with aliases resolved, parameter
defaults filled in and values typed per schema. Rendering is the inverse and
produces the canonical spelling (defaults elided, parameters in schema order)::

    >>> parse_measure("P(rel=2)@5")
    P(rel=2)@5
    >>> render_measure(parse_measure("MAP(rel=1)"))
    'AP'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Union

from .errors import MeasureError
from .registry import MeasureSchema, registry_lookup

_EXPR = re.compile(
    r"(?P<name>[A-Za-z_][A-Za-z0-9_\-]*)(?:\((?P<params>[^()]*)\))?(?:@(?P<cutoff>[^@()]+))?",
    re.ASCII,
)
_KEY = re.compile(r"[A-Za-z_][A-Za-z0-9_]*", re.ASCII)
_INT = re.compile(r"[+-]?[0-9]+", re.ASCII)
_FLOAT = re.compile(r"[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?", re.ASCII)
_WS = re.compile(r"\s")


@dataclass(frozen=True, repr=False)
class Measure:
    """A validated measure: canonical name, full parameter bindings, cutoff.

    ``params`` may be given as a mapping or as ``(key, value)`` pairs; missing
    parameters take their defaults and the stored form is a tuple in schema
    order, so equality and hashing ignore how the measure was spelled.
    """

    name: str
    params: Any = ()
    cutoff: Union[int, float, None] = None

    def __post_init__(self):
        schema = registry_lookup(self.name)
        given = dict(self.params.items() if isinstance(self.params, Mapping) else self.params)
        for key in given:
            if key not in schema.param_index:
                raise MeasureError(f"unknown parameter {key!r} for {schema.name}")
        params = tuple(
            (spec.name, spec.check(given.get(spec.name, spec.default))) for spec in schema.params
        )
        object.__setattr__(self, "name", schema.name)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "cutoff", schema.check_cutoff(self.cutoff))

    @property
    def schema(self) -> MeasureSchema:
        return registry_lookup(self.name)

    @property
    def kw(self) -> dict[str, Any]:
        return dict(self.params)

    def param(self, key: str) -> Any:
        return self.kw[key]

    def __str__(self):
        return render_measure(self)

    __repr__ = __str__


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_measure(m: Measure) -> str:
    schema = m.schema
    parts = [
        f"{spec.name}={_format_value(value)}"
        for spec, (_, value) in zip(schema.params, m.params)
        if value != spec.default
    ]
    text = schema.name
    if parts:
        text += "(" + ",".join(parts) + ")"
    if m.cutoff is not None:
        text += "@" + _format_value(m.cutoff)
    return text


def _typed(kind: type, raw: str, what: str) -> Any:
    if kind is int:
        if not _INT.fullmatch(raw):
            raise MeasureError(f"{what} must be an integer, got {raw!r}")
        return int(raw)
    if kind is float:
        if not _FLOAT.fullmatch(raw):
            raise MeasureError(f"{what} must be a real number, got {raw!r}")
        return float(raw)
    return raw


def parse_measure(expr: str) -> Measure:
    if not isinstance(expr, str):
        raise MeasureError(f"measure expression must be text, got {type(expr).__name__}")
    if _WS.search(expr):
        raise MeasureError(f"whitespace is not allowed inside a measure expression: {expr!r}")
    match = _EXPR.fullmatch(expr)
    if match is None:
        raise MeasureError(f"invalid measure expression: {expr!r}")
    schema = registry_lookup(match["name"])

    params: dict[str, Any] = {}
    if match["params"] is not None:
        if not match["params"]:
            raise MeasureError(f"empty parameter list in {expr!r}")
        for item in match["params"].split(","):
            key, sep, raw = item.partition("=")
            if not sep or not _KEY.fullmatch(key) or not raw:
                raise MeasureError(f"malformed parameter {item!r} in {expr!r}")
            if key in params:
                raise MeasureError(f"duplicate parameter {key!r} in {expr!r}")
            spec = schema.param_index.get(key)
            if spec is None:
                raise MeasureError(f"unknown parameter {key!r} for {schema.name}")
            params[key] = _typed(spec.kind, raw, f"parameter {key}")

    cutoff = None
    if match["cutoff"] is not None:
        cutoff = _typed(schema.cutoff_kind, match["cutoff"], f"{schema.name} cutoff")
    return Measure(schema.name, params, cutoff)


def parse_measure_list(exprs: Union[str, Iterable[str]]) -> list[Measure]:
    """Parse whitespace-separated expressions, dropping repeats (first one wins).

    ``exprs`` may be one string or several; each string may itself hold a
    whitespace-separated list.
    """
    if isinstance(exprs, str):
        exprs = [exprs]
    seen: dict[Measure, None] = {}
    for chunk in exprs:
        for token in chunk.split():
            try:
                m = parse_measure(token)
            except MeasureError as e:
                err = MeasureError(f"invalid measure {token!r}: {e}")
                err.token = token
                raise err from None
            seen.setdefault(m, None)
    return list(seen)


class MeasureFactory:
    """Natural-syntax builder: ``nDCG@10``, ``P(rel=2)@5``, ``AP(rel=2)``."""

    def __init__(self, name: str, params: Mapping[str, Any] | None = None):
        self._schema = registry_lookup(name)
        self._params = dict(params or {})
        for key, value in self._params.items():
            spec = self._schema.param_index.get(key)
            if spec is None:
                raise MeasureError(f"unknown parameter {key!r} for {self._schema.name}")
            spec.check(value)

    def __call__(self, **params) -> "MeasureFactory":
        return MeasureFactory(self._schema.name, {**self._params, **params})

    def __matmul__(self, cutoff) -> Measure:
        return Measure(self._schema.name, self._params, cutoff)

    def measure(self) -> Measure:
        return Measure(self._schema.name, self._params, None)

    def __repr__(self):
        parts = ",".join(f"{k}={_format_value(v)}" for k, v in self._params.items())
        return self._schema.name + (f"({parts})" if parts else "")


MeasureLike = Union[Measure, MeasureFactory, str]


def as_measure(m: MeasureLike) -> Measure:
    if isinstance(m, Measure):
        return m
    if isinstance(m, MeasureFactory):
        return m.measure()
    if isinstance(m, str):
        return parse_measure(m)
    raise MeasureError(f"not a measure: {m!r}")
