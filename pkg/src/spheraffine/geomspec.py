"""GeometrySpec: a named parametrization plus its parameter functions.

JSON form::

    {"kind": "C" | "TQ" | "S" | "flat" | "cosmo", "<field>": "<expression>", ...}

Missing function fields default to "0". Unknown fields are rejected.
Kind-specific constants: ``g1``, ``g2`` (flat) and ``k`` (cosmo).
"""

from __future__ import annotations

import json
import math
from collections.abc import Mapping, Sequence

import numpy as np

from . import expr as _expr
from .components import ComponentArray, Point
from .cosmo import (
    CosmoParams,
    cosmo_connection,
    cosmo_connection_params,
    cosmo_metric_and_derivatives,
)
from .errors import ExprSyntaxError, SpecError
from .geometry import (
    ConnParamsC,
    MetricParams,
    ParamSet,
    SpinParams,
    TQParams,
    assemble_connection,
    c_from_s,
    c_from_tq,
    inverse_metric,
    metric_and_derivatives,
    spin_connection_components,
    tetrad_components,
    tq_from_c,
)
from .special import (
    FlatMetricConstants,
    FlatParams,
    flat_connection_from_F,
    flat_metric_and_derivatives,
    tetrad_metric_and_derivatives,
    weitzenboeck_tetrad,
)

KINDS = ("C", "TQ", "S", "flat", "cosmo")

_FUNCTIONS = {
    "C": MetricParams.names + ConnParamsC.names,
    "TQ": MetricParams.names + TQParams.names,
    "S": MetricParams.names + SpinParams.names,
    "flat": FlatParams.names + MetricParams.names,
    "cosmo": CosmoParams.names,
}
_CONSTANTS = {"C": (), "TQ": (), "S": (), "flat": ("g1", "g2"), "cosmo": ("k",)}

# parameters that must vanish for invariance under theta -> pi - theta
REFLECTION_ODD = {
    "C": tuple(f"C{i}" for i in range(15, 21)),
    "TQ": ("T3", "T4", "T7", "T8", "Q11", "Q12"),
    "S": tuple(f"S{i}" for i in range(15, 21)),
    "flat": ("F6",),
    "cosmo": ("K5",),
}


def _subset(cls, exprs: Mapping) -> dict:
    return {n: exprs[n] for n in cls.names}


class GeometrySpec:
    def __init__(self, kind: str, fields: Mapping[str, object] | None = None, **constants):
        if kind not in KINDS:
            raise SpecError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
        fields = dict(fields or {})
        allowed = set(_FUNCTIONS[kind])
        for name in list(fields):
            if name in _CONSTANTS[kind]:
                constants[name] = fields.pop(name)
        unknown = sorted(set(fields) - allowed) + sorted(set(constants) - set(_CONSTANTS[kind]))
        if unknown:
            raise SpecError(f"unknown field(s) for kind {kind!r}: {', '.join(unknown)}")
        self.kind = kind
        self.given = tuple(n for n in _FUNCTIONS[kind] if n in fields)
        exprs = {}
        for name in _FUNCTIONS[kind]:
            value = fields.get(name, "0")
            if isinstance(value, bool) or not isinstance(value, (str, int, float)) and not _is_expr(value):
                raise SpecError(f"{name}: expected an expression string or a number, got {value!r}")
            try:
                exprs[name] = _expr.as_expr(value)
            except ExprSyntaxError as exc:
                exc.field = name
                raise
        self.exprs = exprs
        self.constants = {}
        self._build(constants)

    # construction --------------------------------------------------------

    def _build(self, constants: dict) -> None:
        e, kind = self.exprs, self.kind
        self.metric_params = None
        self.flat_constants = None
        self.cosmo_k = None
        if kind in ("C", "TQ", "S") or (kind == "flat" and any(n in self.given for n in MetricParams.names)):
            self.metric_params = MetricParams(_subset(MetricParams, e))
        if kind == "C":
            self.params = ConnParamsC(_subset(ConnParamsC, e))
            self.connection_params = self.params
        elif kind == "TQ":
            self.params = TQParams(_subset(TQParams, e))
            self.connection_params = c_from_tq(self.metric_params, self.params)
        elif kind == "S":
            self.params = SpinParams(_subset(SpinParams, e))
            self.connection_params = c_from_s(self.metric_params, self.params)
        elif kind == "flat":
            self.params = FlatParams(_subset(FlatParams, e))
            self.connection_params = flat_connection_from_F(self.params)
            if "g1" in constants or "g2" in constants:
                if self.metric_params is not None:
                    raise SpecError("flat spec: give either G1..G4 or g1/g2, not both")
                if e["F6"] != _expr.ZERO:
                    raise SpecError("flat spec: the g1/g2 metric family requires F6 = 0")
                k = FlatMetricConstants(_number(constants, "g1", 1.0), _number(constants, "g2", 1.0))
                self.flat_constants = k
                self.constants = {"g1": k.g1, "g2": k.g2}
        else:
            k = constants.get("k", 0)
            if isinstance(k, bool) or not isinstance(k, (int, float)) or k not in (-1, 0, 1):
                raise SpecError(f"k must be -1, 0 or 1, got {k!r}")
            self.params = CosmoParams(_subset(CosmoParams, e), k=int(k))
            self.connection_params = cosmo_connection_params(self.params)
            self.cosmo_k = int(k)
            self.constants = {"k": int(k)}

    @classmethod
    def from_cosmo(cls, cp: CosmoParams) -> GeometrySpec:
        return cls("cosmo", dict(cp.exprs), k=cp.k)

    @classmethod
    def from_json(cls, obj) -> GeometrySpec:
        if isinstance(obj, (str, bytes)):
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as exc:
                raise SpecError(f"invalid JSON: {exc}") from None
        if not isinstance(obj, dict):
            raise SpecError("a geometry spec must be a JSON object")
        obj = dict(obj)
        if "kind" not in obj:
            raise SpecError("missing field 'kind'")
        return cls(obj.pop("kind"), obj)

    @classmethod
    def load(cls, path) -> GeometrySpec:
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        for n in _FUNCTIONS[self.kind]:
            if self.exprs[n] != _expr.ZERO:
                out[n] = _expr.serialize(self.exprs[n])
        out.update(self.constants)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def __repr__(self) -> str:
        return f"GeometrySpec({self.to_json()!r})"

    # evaluation ----------------------------------------------------------

    def metric_and_derivatives(self, p: Point) -> tuple[np.ndarray, np.ndarray]:
        """g_{mn} and dg[a, m, n] = d_a g_{mn}, exact from jets."""
        if self.metric_params is not None:
            return metric_and_derivatives(self.metric_params, p)
        if self.kind == "cosmo":
            return cosmo_metric_and_derivatives(self.params, p)
        if self.flat_constants is not None:
            return flat_metric_and_derivatives(self.params, self.flat_constants, p)
        return tetrad_metric_and_derivatives(self.params, p)

    def metric(self, p: Point) -> np.ndarray:
        return self.metric_and_derivatives(p)[0]

    def connection(self, p: Point) -> np.ndarray:
        return assemble_connection(self.connection_params.jets(p.t, p.r), p.theta)

    def metric_components(self, p: Point) -> ComponentArray:
        return ComponentArray(self.metric(p), ("down", "down"))

    def connection_components(self, p: Point) -> ComponentArray:
        return ComponentArray(self.connection(p), ("up", "down", "down"))

    def inverse_metric(self, p: Point) -> ComponentArray:
        return inverse_metric(self.metric(p))

    def direct_connection(self, p: Point) -> ComponentArray | None:
        """Component-list assembly where one exists independently of the C route."""
        if self.kind == "cosmo":
            return cosmo_connection(self.params, p)
        return None

    def tetrad(self, p: Point) -> ComponentArray | None:
        if self.metric_params is not None:
            return tetrad_components(self.metric_params, p)
        if self.kind == "flat":
            return weitzenboeck_tetrad(self.params, p)
        return None

    def spin_connection(self, p: Point) -> ComponentArray | None:
        if self.kind == "S":
            return spin_connection_components(self.params, p)
        if self.kind == "flat" and self.flat_constants is None and self.metric_params is None:
            return ComponentArray(np.zeros((4, 4, 4)), ("lorentz_up", "lorentz_down", "down"))
        return None

    def tq_params(self) -> TQParams | None:
        """Torsion/nonmetricity parameters, when the metric is of the G1..G4 form."""
        if self.metric_params is None:
            return None
        if self.kind == "TQ":
            return self.params
        return tq_from_c(self.metric_params, self.connection_params)

    def expression_sets(self) -> list[ParamSet]:
        sets = [self.params]
        if self.metric_params is not None:
            sets.append(self.metric_params)
        return sets

    # reflection ----------------------------------------------------------

    @property
    def reflection_constraints(self) -> tuple[str, ...]:
        return REFLECTION_ODD[self.kind]

    def reflection_values(self, t: float, r: float) -> dict[str, float]:
        """Size of each reflection-odd parameter at (t, r)."""
        J = self.params.jets(t, r)
        out = {}
        for n in self.reflection_constraints:
            j = getattr(J, n)
            if n == "F6":
                # F6 and F6 + pi give the same reflection-even tetrad class
                out[n] = max(abs(math.sin(j.v)), abs(j.dt), abs(j.dr))
            else:
                out[n] = abs(j.v)
        return out

    def reflection_violations(self, sample: Sequence[Point], tol: float) -> list[str]:
        worst = dict.fromkeys(self.reflection_constraints, 0.0)
        for p in sample:
            for n, v in self.reflection_values(p.t, p.r).items():
                worst[n] = max(worst[n], v)
        return [n for n in self.reflection_constraints if worst[n] > tol]


def _is_expr(x) -> bool:
    return isinstance(x, (_expr.Num, _expr.Var, _expr.Const, _expr.Neg, _expr.BinOp, _expr.Call))


def _number(constants: dict, name: str, default: float) -> float:
    v = constants.get(name, default)
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise SpecError(f"{name} must be a finite number, got {v!r}")
    return float(v)
