"""Parameter sets and assembly of metric, connection, tetrad and spin connection.

Every parameter set holds named functions of (t, r). They are either parsed
expressions or derived from other sets by a conversion; in the latter case
the conversion runs numerically on jets at each evaluation point, never by
symbolic expansion.

Connection arrays are indexed ``G[mu, nu, rho]`` for Gamma^mu_{nu rho}; the
last index is the derivative index.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping
from types import SimpleNamespace
from typing import ClassVar

import numpy as np

from . import expr as _expr
from .components import PH, TH, ComponentArray, Point, R, T
from .errors import SingularMetric, SpecError
from .jet import Jet2, cos, exp, sin

Jets = SimpleNamespace


class ParamSet:
    """Named scalar functions of (t, r), evaluated as jets."""

    names: ClassVar[tuple[str, ...]] = ()

    def __init__(self, exprs: Mapping[str, object] | None = None, *,
                 jet_fn: Callable[[float, float], Jets] | None = None, **kwargs):
        if jet_fn is not None:
            if exprs or kwargs:
                raise TypeError("give either expressions or jet_fn, not both")
            self.exprs = None
            self._jet_fn = jet_fn
            return
        given = dict(exprs or {})
        given.update(kwargs)
        unknown = sorted(set(given) - set(self.names))
        if unknown:
            raise SpecError(f"{type(self).__name__}: unknown field(s) {', '.join(unknown)}")
        self.exprs = {n: _expr.as_expr(given.get(n, "0")) for n in self.names}
        self._jet_fn = None

    @property
    def is_derived(self) -> bool:
        return self.exprs is None

    def jets(self, t: float, r: float) -> Jets:
        if self._jet_fn is not None:
            return self._jet_fn(t, r)
        tj, rj = Jet2.var_t(t), Jet2.var_r(r)
        env = {"t": tj, "r": rj}
        return Jets(**{n: _expr.evaluate(e, env) for n, e in self.exprs.items()})

    def values(self, t: float, r: float) -> dict[str, float]:
        j = self.jets(t, r)
        return {n: getattr(j, n).v for n in self.names}

    def serialized(self) -> dict[str, str]:
        if self.exprs is None:
            raise TypeError("derived parameter sets have no expression form")
        return {n: _expr.serialize(e) for n, e in self.exprs.items()}

    def __repr__(self) -> str:
        if self.exprs is None:
            return f"{type(self).__name__}(<derived>)"
        nonzero = {n: _expr.serialize(e) for n, e in self.exprs.items() if e != _expr.ZERO}
        return f"{type(self).__name__}({nonzero})"


def _numbered(prefix: str, n: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(1, n + 1))


class MetricParams(ParamSet):
    names = _numbered("G", 4)


class ConnParamsC(ParamSet):
    names = _numbered("C", 20)


class TQParams(ParamSet):
    names = _numbered("T", 8) + _numbered("Q", 12)


class SpinParams(ParamSet):
    names = _numbered("S", 20)


# ---------------------------------------------------------------------------
# metric

def metric_blocks(gtt, grr, gtr, gthth, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Assemble g and dg[mu] = d_mu g from the four (t, r) blocks given as jets.

    g_phiphi = g_thth sin^2(theta) is the only angular dependence.
    """
    s, c = math.sin(theta), math.cos(theta)
    g = np.zeros((4, 4))
    dg = np.zeros((4, 4, 4))
    for (i, j), blk in {(T, T): gtt, (R, R): grr, (T, R): gtr, (R, T): gtr, (TH, TH): gthth}.items():
        g[i, j], dg[T, i, j], dg[R, i, j] = blk.v, blk.dt, blk.dr
    s2 = s * s
    g[PH, PH] = gthth.v * s2
    dg[T, PH, PH] = gthth.dt * s2
    dg[R, PH, PH] = gthth.dr * s2
    dg[TH, PH, PH] = gthth.v * 2.0 * s * c
    return g, dg


def _metric_jets(G: Jets):
    gtt = -exp(G.G1 + G.G2) * cos(G.G3)
    grr = exp(G.G1 - G.G2) * cos(G.G3)
    gtr = exp(G.G1) * sin(G.G3)
    gthth = exp(G.G4)
    return gtt, grr, gtr, gthth


def metric_and_derivatives(m: MetricParams, p: Point) -> tuple[np.ndarray, np.ndarray]:
    """Metric components and their exact coordinate derivatives (from jets)."""
    return metric_blocks(*_metric_jets(m.jets(p.t, p.r)), p.theta)


def metric_components(m: MetricParams, p: Point) -> ComponentArray:
    g, _ = metric_and_derivatives(m, p)
    return ComponentArray(g, ("down", "down"))


def inverse_metric(g: ComponentArray | np.ndarray) -> ComponentArray:
    data = g.data if isinstance(g, ComponentArray) else np.asarray(g, dtype=float)
    det = np.linalg.det(data)
    if abs(det) < 1e-14:
        raise SingularMetric(f"metric determinant {det:.3e} is numerically zero")
    return ComponentArray(np.linalg.inv(data), ("up", "up"))


# ---------------------------------------------------------------------------
# connection

def assemble_connection(C, theta: float) -> np.ndarray:
    """Gamma^mu_{nu rho} from the twenty parameter values (attribute access C.C1...)."""
    s, c = math.sin(theta), math.cos(theta)
    v = {n: float(getattr(C, n).v if isinstance(getattr(C, n), Jet2) else getattr(C, n))
         for n in ConnParamsC.names}
    G = np.zeros((4, 4, 4))
    G[T, T, T] = v["C1"]
    G[T, T, R] = v["C2"]
    G[T, R, T] = v["C3"]
    G[T, R, R] = v["C4"]
    G[T, TH, TH] = v["C9"]
    G[T, PH, PH] = v["C9"] * s * s
    G[R, T, T] = v["C5"]
    G[R, T, R] = v["C6"]
    G[R, R, T] = v["C7"]
    G[R, R, R] = v["C8"]
    G[R, TH, TH] = v["C10"]
    G[R, PH, PH] = v["C10"] * s * s
    G[PH, T, PH] = G[TH, T, TH] = v["C11"]
    G[PH, R, PH] = G[TH, R, TH] = v["C12"]
    G[PH, PH, T] = G[TH, TH, T] = v["C13"]
    G[PH, PH, R] = G[TH, TH, R] = v["C14"]
    G[PH, T, TH] = v["C15"] / s
    G[TH, T, PH] = -v["C15"] * s
    G[PH, R, TH] = v["C16"] / s
    G[TH, R, PH] = -v["C16"] * s
    G[PH, TH, T] = v["C17"] / s
    G[TH, PH, T] = -v["C17"] * s
    G[PH, TH, R] = v["C18"] / s
    G[TH, PH, R] = -v["C18"] * s
    G[T, PH, TH] = v["C19"] * s
    G[T, TH, PH] = -v["C19"] * s
    G[R, PH, TH] = v["C20"] * s
    G[R, TH, PH] = -v["C20"] * s
    G[PH, TH, PH] = G[PH, PH, TH] = c / s
    G[TH, PH, PH] = -s * c
    return G


def connection_components(c: ConnParamsC, p: Point) -> ComponentArray:
    return ComponentArray(assemble_connection(c.jets(p.t, p.r), p.theta), ("up", "down", "down"))


# ---------------------------------------------------------------------------
# (T, Q) <-> C

def _metric_derivs(G: Jets):
    return SimpleNamespace(
        g1t=G.G1.d_t, g1r=G.G1.d_r, g2t=G.G2.d_t, g2r=G.G2.d_r,
        g3t=G.G3.d_t, g3r=G.G3.d_r, g4t=G.G4.d_t, g4r=G.G4.d_r,
    )


def c_jets_from_tq(G: Jets, P: Jets) -> Jets:
    """Connection parameters in terms of torsion/nonmetricity parameters (jet level)."""
    d = _metric_derivs(G)
    T1, T2, T3, T4, T5, T6, T7, T8 = (getattr(P, f"T{i}") for i in range(1, 9))
    Q1, Q2, Q3, Q4, Q5, Q6, Q7, Q8, Q9, Q10, Q11, Q12 = (getattr(P, f"Q{i}") for i in range(1, 13))
    e1m = exp(-G.G1)
    e2, e2m = exp(G.G2), exp(-G.G2)
    e4, e4m = exp(G.G4), exp(-G.G4)
    s3, c3 = sin(G.G3), cos(G.G3)
    s23, c23 = sin(2 * G.G3), cos(2 * G.G3)
    s3sq, c3sq = s3 * s3, c3 * c3

    C1 = (0.5 * e1m * (Q1 * e2m * c3 + (Q5 - 2 * Q3) * s3)
          + 0.25 * ((2 * T1 + d.g1r + d.g2r) * e2 + d.g3t) * s23
          + 0.25 * d.g1t * (3 - c23) + 0.5 * d.g2t * c3sq
          - 0.5 * (2 * T2 + d.g3r * e2) * s3sq)
    C3 = (0.5 * e1m * (Q5 * e2m * c3 - Q2 * s3)
          - 0.25 * ((2 * T2 - d.g1t + d.g2t) * e2m + d.g3r) * s23
          - 0.5 * d.g3t * e2m * s3sq
          + 0.5 * (d.g1r + d.g2r + 2 * T1) * c3sq)
    C4 = (0.5 * e1m * ((2 * Q7 - Q2) * e2m * c3 - Q6 * s3)
          - 0.25 * (2 * T1 + d.g1r + d.g2r + d.g3t * e2m) * e2m * s23
          - 0.25 * d.g3r * e2m * (3 + c23)
          + 0.5 * (d.g1t - d.g2t - 2 * T2) * e2m * e2m * c3sq)
    C5 = (0.5 * e1m * ((Q5 - 2 * Q3) * e2 * c3 - Q1 * s3)
          - 0.25 * (2 * T2 - d.g1t + d.g2t + d.g3r * e2) * e2 * s23
          + 0.25 * d.g3t * e2 * (3 + c23)
          + 0.5 * (d.g1r + d.g2r + 2 * T1) * e2 * e2 * c3sq)
    C6 = (-0.5 * e1m * (Q2 * e2 * c3 + Q5 * s3)
          - 0.25 * ((2 * T1 + d.g1r + d.g2r) * e2 + d.g3t) * s23
          + 0.5 * d.g3r * e2 * s3sq
          + 0.5 * (d.g1t - d.g2t - 2 * T2) * c3sq)
    C8 = (0.5 * e1m * ((Q2 - 2 * Q7) * s3 - Q6 * e2 * c3)
          + 0.25 * ((2 * T2 - d.g1t + d.g2t) * e2m + d.g3r) * s23
          + 0.25 * d.g1r * (3 - c23) - 0.5 * d.g2r * c3sq
          + 0.5 * (2 * T1 + d.g3t * e2m) * s3sq)
    A = Q8 - 2 * Q10 + (2 * T6 - d.g4r) * e4
    B = Q4 - 2 * Q9 + (2 * T5 - d.g4t) * e4
    C9 = 0.5 * e1m * (A * s3 - B * e2m * c3)
    C10 = 0.5 * e1m * (B * s3 + A * e2 * c3)
    e1 = exp(G.G1)
    C15 = -0.5 * e4m * (2 * Q11 + e1 * (T4 * s3 - T3 * e2 * c3))
    C16 = -0.5 * e4m * (2 * Q12 + e1 * (T3 * s3 + T4 * e2m * c3))
    C13 = 0.5 * (d.g4t - e4m * Q4)
    C14 = 0.5 * (d.g4r - e4m * Q8)
    return Jets(
        C1=C1, C2=C3 - T1, C3=C3, C4=C4, C5=C5, C6=C6, C7=C6 + T2, C8=C8, C9=C9, C10=C10,
        C11=C13 - T5, C12=C14 - T6, C13=C13, C14=C14, C15=C15, C16=C16,
        C17=C15 - T7, C18=C16 - T8, C19=0.5 * T3, C20=0.5 * T4,
    )


def torsion_params(C: Jets) -> dict:
    """T1..T8 read off the torsion of a connection given by C1..C20."""
    return dict(
        T1=C.C3 - C.C2, T2=C.C7 - C.C6, T3=2 * C.C19, T4=2 * C.C20,
        T5=C.C13 - C.C11, T6=C.C14 - C.C12, T7=C.C15 - C.C17, T8=C.C16 - C.C18,
    )


def nonmetricity_params(G: Jets, C: Jets) -> dict:
    """Q1..Q12 read off the nonmetricity of (metric G, connection C)."""
    d = _metric_derivs(G)
    e1 = exp(G.G1)
    e2, e2m = exp(G.G2), exp(-G.G2)
    e4 = exp(G.G4)
    s3, c3 = sin(G.G3), cos(G.G3)
    return dict(
        Q1=-e1 * ((2 * C.C5 - e2 * d.g3t) * s3 - (2 * C.C1 - d.g1t - d.g2t) * e2 * c3),
        Q2=-e1 * ((2 * C.C3 + e2m * d.g3t) * s3 + (2 * C.C7 - d.g1t + d.g2t) * e2m * c3),
        Q3=-e1 * ((C.C1 + C.C7 - d.g1t) * s3 - (C.C3 * e2 - C.C5 * e2m + d.g3t) * c3),
        Q4=e4 * (d.g4t - 2 * C.C13),
        Q5=-e1 * ((2 * C.C6 - e2 * d.g3r) * s3 - (2 * C.C2 - d.g1r - d.g2r) * e2 * c3),
        Q6=-e1 * ((2 * C.C4 + e2m * d.g3r) * s3 + (2 * C.C8 - d.g1r + d.g2r) * e2m * c3),
        Q7=-e1 * ((C.C2 + C.C8 - d.g1r) * s3 - (C.C4 * e2 - C.C6 * e2m + d.g3r) * c3),
        Q8=e4 * (d.g4r - 2 * C.C14),
        Q9=-C.C11 * e4 - (C.C10 * s3 - C.C9 * e2 * c3) * e1,
        Q10=-C.C12 * e4 - (C.C9 * s3 + C.C10 * e2m * c3) * e1,
        Q11=-(C.C15 * e4 + (C.C20 * s3 - C.C19 * e2 * c3) * e1),
        Q12=-(C.C16 * e4 + (C.C19 * s3 + C.C20 * e2m * c3) * e1),
    )


def c_from_tq(m: MetricParams, tq: TQParams) -> ConnParamsC:
    return ConnParamsC(jet_fn=lambda t, r: c_jets_from_tq(m.jets(t, r), tq.jets(t, r)))


def tq_from_c(m: MetricParams, c: ConnParamsC) -> TQParams:
    def fn(t, r):
        C = c.jets(t, r)
        return Jets(**torsion_params(C), **nonmetricity_params(m.jets(t, r), C))
    return TQParams(jet_fn=fn)


# ---------------------------------------------------------------------------
# tetrad and spin connection

def _tetrad_jets(G: Jets):
    h1, h2, h3, h4 = 0.5 * G.G1, 0.5 * G.G2, 0.5 * G.G3, 0.5 * G.G4
    ep, em = exp(h1 + h2), exp(h1 - h2)
    return ep * cos(h3), -em * sin(h3), ep * sin(h3), em * cos(h3), exp(h4)


def tetrad_components(m: MetricParams, p: Point) -> ComponentArray:
    """theta^a_mu (rows a = 0..3) built from half the metric parameters."""
    a0t, a0r, a1t, a1r, e4 = (j.v for j in _tetrad_jets(m.jets(p.t, p.r)))
    th = np.zeros((4, 4))
    th[0, T], th[0, R] = a0t, a0r
    th[1, T], th[1, R] = a1t, a1r
    th[2, TH] = e4
    th[3, PH] = e4 * math.sin(p.theta)
    return ComponentArray(th, ("lorentz_up", "down"))


def assemble_spin_connection(S, theta: float) -> np.ndarray:
    s, c = math.sin(theta), math.cos(theta)
    v = {n: float(getattr(S, n).v if isinstance(getattr(S, n), Jet2) else getattr(S, n))
         for n in SpinParams.names}
    w = np.zeros((4, 4, 4))
    w[0, 0, T], w[0, 0, R], w[0, 1, T], w[0, 1, R] = v["S1"], v["S2"], v["S3"], v["S4"]
    w[1, 0, T], w[1, 0, R], w[1, 1, T], w[1, 1, R] = v["S5"], v["S6"], v["S7"], v["S8"]
    w[3, 2, PH] = c
    w[2, 3, PH] = -c
    w[0, 2, TH], w[0, 3, PH] = v["S9"], v["S9"] * s
    w[1, 2, TH], w[1, 3, PH] = v["S10"], v["S10"] * s
    w[2, 0, TH], w[3, 0, PH] = v["S11"], v["S11"] * s
    w[2, 1, TH], w[3, 1, PH] = v["S12"], v["S12"] * s
    w[2, 2, T] = w[3, 3, T] = v["S13"]
    w[2, 2, R] = w[3, 3, R] = v["S14"]
    w[3, 0, TH], w[2, 0, PH] = v["S15"], -v["S15"] * s
    w[3, 1, TH], w[2, 1, PH] = v["S16"], -v["S16"] * s
    w[3, 2, T], w[2, 3, T] = v["S17"], -v["S17"]
    w[3, 2, R], w[2, 3, R] = v["S18"], -v["S18"]
    w[0, 3, TH], w[0, 2, PH] = v["S19"], -v["S19"] * s
    w[1, 3, TH], w[1, 2, PH] = v["S20"], -v["S20"] * s
    return w


def spin_connection_components(s: SpinParams, p: Point) -> ComponentArray:
    return ComponentArray(assemble_spin_connection(s.jets(p.t, p.r), p.theta),
                          ("lorentz_up", "lorentz_down", "down"))


def c_jets_from_s(G: Jets, S: Jets) -> Jets:
    h1, h2, h3, h4 = 0.5 * G.G1, 0.5 * G.G2, 0.5 * G.G3, 0.5 * G.G4
    h1t, h1r, h2t, h2r = h1.d_t, h1.d_r, h2.d_t, h2.d_r
    h3t, h3r, h4t, h4r = h3.d_t, h3.d_r, h4.d_t, h4.d_r
    c, s = cos(h3), sin(h3)
    cc, ss, s2 = c * c, s * s, sin(2 * h3)
    e2p, e2m = exp(2 * h2), exp(-2 * h2)
    f9 = exp(h4 - h1 - h2)
    f10 = exp(h4 - h1 + h2)
    f11 = exp(h1 + h2 - h4)
    f12 = exp(h1 - h2 - h4)
    return Jets(
        C1=S.S1 * cc + 0.5 * (S.S3 + S.S5) * s2 + S.S7 * ss + h1t + h2t,
        C2=S.S2 * cc + 0.5 * (S.S4 + S.S6) * s2 + S.S8 * ss + h1r + h2r,
        C3=(S.S3 * cc + 0.5 * (S.S7 - S.S1) * s2 - S.S5 * ss - h3t) * e2m,
        C4=(S.S4 * cc + 0.5 * (S.S8 - S.S2) * s2 - S.S6 * ss - h3r) * e2m,
        C5=(S.S5 * cc + 0.5 * (S.S7 - S.S1) * s2 - S.S3 * ss + h3t) * e2p,
        C6=(S.S6 * cc + 0.5 * (S.S8 - S.S2) * s2 - S.S4 * ss + h3r) * e2p,
        C7=S.S7 * cc - 0.5 * (S.S3 + S.S5) * s2 + S.S1 * ss + h1t - h2t,
        C8=S.S8 * cc - 0.5 * (S.S4 + S.S6) * s2 + S.S2 * ss + h1r - h2r,
        C9=(S.S10 * s + S.S9 * c) * f9,
        C10=(S.S10 * c - S.S9 * s) * f10,
        C11=(S.S11 * c + S.S12 * s) * f11,
        C12=(S.S12 * c - S.S11 * s) * f12,
        C13=S.S13 + h4t,
        C14=S.S14 + h4r,
        C15=(S.S15 * c + S.S16 * s) * f11,
        C16=(S.S16 * c - S.S15 * s) * f12,
        C17=S.S17,
        C18=S.S18,
        C19=(S.S20 * s + S.S19 * c) * f9,
        C20=(S.S20 * c - S.S19 * s) * f10,
    )


def c_from_s(m: MetricParams, s: SpinParams) -> ConnParamsC:
    return ConnParamsC(jet_fn=lambda t, r: c_jets_from_s(m.jets(t, r), s.jets(t, r)))


def frame_metric(tetrad: np.ndarray) -> np.ndarray:
    """eta_ab theta^a_mu theta^b_nu."""
    eta = np.diag([-1.0, 1.0, 1.0, 1.0])
    return np.einsum("ab,am,bn->mn", eta, tetrad, tetrad)
