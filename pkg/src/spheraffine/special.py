"""Special cases: torsion-free, metric-compatible, flat and Minkowski geometries.

The flat family is built from a Weitzenboeck tetrad in six functions
F1..F6 of (t, r). Its connection comes out as twenty C parameters, so every
generic routine (curvature, torsion, symmetry checks) applies unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .components import PH, TH, ComponentArray, Point, R, T
from .errors import DegenerateTetrad, GeometryError, SingularJacobian, SingularMetric
from .geometry import (
    ConnParamsC,
    Jets,
    MetricParams,
    ParamSet,
    TQParams,
    _numbered,
    metric_blocks,
)
from .jet import cos, cosh, sin, sinh, tanh

if TYPE_CHECKING:
    from .geomspec import GeometrySpec

_MIN_F = 1e-12


class FlatParams(ParamSet):
    names = _numbered("F", 6)


class CoordMapParams(ParamSet):
    names = ("t_tilde", "r_tilde")


@dataclass(frozen=True)
class FlatMetricConstants:
    g1: float = 1.0
    g2: float = 1.0


# ---------------------------------------------------------------------------
# torsion-free and metric-compatible subclasses

def _part(src, prefix: str) -> dict:
    names = [n for n in TQParams.names if n.startswith(prefix)]
    if isinstance(src, TQParams):
        if src.is_derived:
            raise TypeError("need a parameter set with expressions")
        return {n: src.exprs[n] for n in names}
    given = dict(src or {})
    stray = sorted(k for k in given if k not in names)
    if stray:
        raise GeometryError(f"fields {', '.join(stray)} do not belong to the {prefix} part")
    return given


def make_torsion_free(m: MetricParams, q) -> GeometrySpec:
    """TQ-form spec with T1..T8 = 0; ``q`` is a TQParams or a mapping of Q fields."""
    from .geomspec import GeometrySpec
    return GeometrySpec("TQ", {**m.exprs, **_part(q, "Q")})


def make_metric_compatible(m: MetricParams, t) -> GeometrySpec:
    """TQ-form spec with Q1..Q12 = 0; ``t`` is a TQParams or a mapping of T fields."""
    from .geomspec import GeometrySpec
    return GeometrySpec("TQ", {**m.exprs, **_part(t, "T")})


# ---------------------------------------------------------------------------
# flat (Weitzenboeck) geometries

def _checked(F: Jets) -> Jets:
    for n in ("F1", "F2", "F5"):
        if abs(getattr(F, n).v) <= _MIN_F:
            raise DegenerateTetrad(f"{n} vanishes, the tetrad is degenerate")
    return F


def weitzenboeck_tetrad(f: FlatParams, p: Point) -> ComponentArray:
    """Theta^a_mu of the flat spherically symmetric tetrad (rows a = 0..3)."""
    F = _checked(f.jets(p.t, p.r))
    F1, F2, F3, F4, F5, F6 = (getattr(F, n).v for n in FlatParams.names)
    st, ct = math.sin(p.theta), math.cos(p.theta)
    sp, cp = math.sin(p.phi), math.cos(p.phi)
    s6, c6 = math.sin(F6), math.cos(F6)
    at, ar = F1 * math.sinh(F3), F2 * math.cosh(F4)
    th = np.zeros((4, 4))
    th[0, T], th[0, R] = F1 * math.cosh(F3), F2 * math.sinh(F4)
    th[1, T], th[1, R] = st * cp * at, st * cp * ar
    th[1, TH] = F5 * (c6 * ct * cp - s6 * sp)
    th[1, PH] = -F5 * st * (c6 * sp + s6 * ct * cp)
    th[2, T], th[2, R] = st * sp * at, st * sp * ar
    th[2, TH] = F5 * (c6 * ct * sp + s6 * cp)
    th[2, PH] = F5 * st * (c6 * cp - s6 * ct * sp)
    th[3, T], th[3, R] = ct * at, ct * ar
    th[3, TH] = -F5 * c6 * st
    th[3, PH] = F5 * s6 * st * st
    return ComponentArray(th, ("lorentz_up", "down"))


def flat_c_jets(F: Jets) -> Jets:
    F = _checked(F)
    F1, F2, F3, F4, F5, F6 = (getattr(F, n) for n in FlatParams.names)
    d = F3 - F4
    th, ch = tanh(d), cosh(d)
    c6, s6 = cos(F6), sin(F6)
    F3t, F3r, F4t, F4r = F3.d_t, F3.d_r, F4.d_t, F4.d_r
    return Jets(
        C1=F1.d_t / F1 + F3t * th,
        C2=F1.d_r / F1 + F3r * th,
        C3=F2 * F4t / (F1 * ch),
        C4=F2 * F4r / (F1 * ch),
        C5=F1 * F3t / (F2 * ch),
        C6=F1 * F3r / (F2 * ch),
        C7=F2.d_t / F2 - F4t * th,
        C8=F2.d_r / F2 - F4r * th,
        C9=F5 * sinh(F4) * c6 / (F1 * ch),
        C10=-F5 * cosh(F3) * c6 / (F2 * ch),
        C11=F1 * sinh(F3) * c6 / F5,
        C12=F2 * cosh(F4) * c6 / F5,
        C13=F5.d_t / F5,
        C14=F5.d_r / F5,
        C15=-F1 * sinh(F3) * s6 / F5,
        C16=-F2 * cosh(F4) * s6 / F5,
        C17=F6.d_t,
        C18=F6.d_r,
        C19=-F5 * sinh(F4) * s6 / (F1 * ch),
        C20=F5 * cosh(F3) * s6 / (F2 * ch),
    )


def flat_connection_from_F(f: FlatParams) -> ConnParamsC:
    """C1..C20 of the Weitzenboeck connection; first derivatives stay exact."""
    return ConnParamsC(jet_fn=lambda t, r: flat_c_jets(f.jets(t, r)))


@dataclass(frozen=True)
class FlatTorsionResiduals:
    """Conditions for a torsion-free flat connection, evaluated at one (t, r).

    The first five assume F6 = 0; ``c20`` measures that assumption.
    """

    f5_t: float
    f5_r: float
    integrability: float
    pde_t: float
    pde_r: float
    c20: float

    def vector(self) -> np.ndarray:
        return np.array([self.f5_t, self.f5_r, self.integrability, self.pde_t, self.pde_r])

    def to_json(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in
                ("f5_t", "f5_r", "integrability", "pde_t", "pde_r", "c20")}


def flat_torsion_free_residuals(f: FlatParams, p: Point) -> FlatTorsionResiduals:
    F = _checked(f.jets(p.t, p.r))
    F1, F2, F3, F4, F5, F6 = (getattr(F, n) for n in FlatParams.names)
    d = F3 - F4
    a = F1 * sinh(F3)
    b = F2 * cosh(F4)
    return FlatTorsionResiduals(
        f5_t=(F5.d_t - a).v,
        f5_r=(F5.d_r - b).v,
        integrability=a.dr - b.dt,
        pde_t=(F1.d_r * cosh(d) + F1 * F3.d_r * sinh(d) - F2 * F4.d_t).v,
        pde_r=(F2.d_t * cosh(d) - F2 * F4.d_t * sinh(d) - F1 * F3.d_r).v,
        c20=(F5 * cosh(F3) * sin(F6) / (F2 * cosh(d))).v,
    )


def tetrad_metric_jets(F: Jets):
    """(g_tt, g_rr, g_tr, g_thth) of eta_ab Theta^a Theta^b for any F6."""
    F = _checked(F)
    return -F.F1 * F.F1, F.F2 * F.F2, F.F1 * F.F2 * sinh(F.F3 - F.F4), F.F5 * F.F5


def flat_metric_jets(F: Jets, k: FlatMetricConstants):
    F = _checked(F)
    if F.F6.v != 0.0 or F.F6.dt != 0.0 or F.F6.dr != 0.0:
        raise GeometryError("the two-constant metric family requires F6 = 0")
    g1, g2 = k.g1, k.g2
    F1, F2, F3, F4, F5 = F.F1, F.F2, F.F3, F.F4, F.F5
    gtt = -0.5 * F1 * F1 * (g1 + g2 - (g1 - g2) * cosh(2 * F3))
    grr = 0.5 * F2 * F2 * (g1 + g2 + (g1 - g2) * cosh(2 * F4))
    gtr = F1 * F2 * (g1 * sinh(F3) * cosh(F4) - g2 * cosh(F3) * sinh(F4))
    return gtt, grr, gtr, g1 * F5 * F5


def _nondegenerate(g: np.ndarray) -> np.ndarray:
    det = np.linalg.det(g)
    if abs(det) < 1e-14:
        raise SingularMetric(f"metric determinant {det:.3e} is numerically zero")
    return g


def flat_metric_and_derivatives(f: FlatParams, k: FlatMetricConstants, p: Point):
    g, dg = metric_blocks(*flat_metric_jets(f.jets(p.t, p.r), k), p.theta)
    return _nondegenerate(g), dg


def flat_metric_compatible_metric(f: FlatParams, k: FlatMetricConstants, p: Point) -> ComponentArray:
    """Two-constant metric family compatible with the flat connection (F6 = 0 required)."""
    g, _ = flat_metric_and_derivatives(f, k, p)
    return ComponentArray(g, ("down", "down"))


def tetrad_metric_and_derivatives(f: FlatParams, p: Point):
    g, dg = metric_blocks(*tetrad_metric_jets(f.jets(p.t, p.r)), p.theta)
    return _nondegenerate(g), dg


# ---------------------------------------------------------------------------
# Minkowski space in general (t, r) coordinates

def minkowski_metric_jets(C: Jets):
    tt, rt = C.t_tilde, C.r_tilde
    if rt.v <= 0.0:
        raise GeometryError(f"r_tilde must be positive, got {rt.v}")
    ttt, ttr, rtt, rtr = tt.d_t, tt.d_r, rt.d_t, rt.d_r
    jac = ttt.v * rtr.v - ttr.v * rtt.v
    if abs(jac) <= 1e-12:
        raise SingularJacobian(f"Jacobian determinant {jac:.3e} of (t_tilde, r_tilde)")
    gtt = rtt * rtt - ttt * ttt
    grr = rtr * rtr - ttr * ttr
    gtr = rtt * rtr - ttt * ttr
    return gtt, grr, gtr, rt * rt


def minkowski_metric_and_derivatives(c: CoordMapParams, p: Point):
    return metric_blocks(*minkowski_metric_jets(c.jets(p.t, p.r)), p.theta)


def minkowski_general_coords(c: CoordMapParams, p: Point) -> ComponentArray:
    g, _ = minkowski_metric_and_derivatives(c, p)
    return ComponentArray(g, ("down", "down"))

