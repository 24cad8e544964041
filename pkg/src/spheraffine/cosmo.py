"""Cosmologically symmetric metric-affine geometry.

Lapse N(t), scale factor A(t), five connection functions K1..K5 of t and
the curvature sign k. The connection is assembled twice: directly from its
component list and through the twenty C parameters of the spherical family.
"""

from __future__ import annotations

import math

import numpy as np

from . import expr as _expr
from .components import PH, TH, ComponentArray, Point, R, T
from .errors import DomainError, SpecError
from .geometry import ConnParamsC, Jets, ParamSet, _numbered, metric_blocks
from .jet import Jet2, sqrt


class CosmoParams(ParamSet):
    names = ("N", "A") + _numbered("K", 5)

    def __init__(self, exprs=None, *, k: int = 0, **kwargs):
        super().__init__(exprs, **kwargs)
        if isinstance(k, bool) or not isinstance(k, (int, float)) or k not in (-1, 0, 1):
            raise SpecError(f"k must be -1, 0 or 1, got {k!r}")
        self.k = int(k)
        for n, e in self.exprs.items():
            extra = _expr.free_variables(e) - {"t"}
            if extra:
                raise SpecError(f"{n} may depend on t only, found {', '.join(sorted(extra))}")

    def chi2(self, r: float) -> float:
        """1 - k r^2, the square of the spatial curvature factor."""
        c2 = 1.0 - self.k * r * r
        if c2 <= 0.0:
            raise DomainError(f"1 - k r^2 = {c2:.6g} is not positive (k = {self.k}, r = {r})")
        return c2

    def __repr__(self) -> str:
        return f"{super().__repr__()[:-1]}, k={self.k})"


def _chi2_jet(cp: CosmoParams, r: float) -> Jet2:
    cp.chi2(r)
    rj = Jet2.var_r(r)
    return 1.0 - cp.k * rj * rj


def cosmo_metric_and_derivatives(cp: CosmoParams, p: Point):
    P = cp.jets(p.t, p.r)
    rj = Jet2.var_r(p.r)
    A2 = P.A * P.A
    return metric_blocks(-P.N * P.N, A2 / _chi2_jet(cp, p.r), Jet2(0.0), A2 * rj * rj, p.theta)


def cosmo_metric(cp: CosmoParams, p: Point) -> ComponentArray:
    g, _ = cosmo_metric_and_derivatives(cp, p)
    return ComponentArray(g, ("down", "down"))


def cosmo_c_jets(cp: CosmoParams, t: float, r: float) -> Jets:
    """The twenty C parameters of the cosmological connection (jet level)."""
    P = cp.jets(t, r)
    rj = Jet2.var_r(r)
    chi2 = _chi2_jet(cp, r)
    chi = sqrt(chi2)
    zero = Jet2(0.0)
    k = cp.k
    return Jets(
        C1=P.K1, C2=zero, C3=zero, C4=P.K2 / chi2, C5=zero,
        C6=P.K3, C7=P.K4, C8=k * rj / chi2, C9=P.K2 * rj * rj, C10=-rj * chi2,
        C11=P.K3, C12=1.0 / rj, C13=P.K4, C14=1.0 / rj, C15=zero,
        C16=-P.K5 / chi, C17=zero, C18=P.K5 / chi, C19=zero, C20=P.K5 * rj * rj * chi,
    )


def cosmo_connection_params(cp: CosmoParams) -> ConnParamsC:
    return ConnParamsC(jet_fn=lambda t, r: cosmo_c_jets(cp, t, r))


def cosmo_connection(cp: CosmoParams, p: Point) -> ComponentArray:
    """Gamma^mu_{nu rho} written out component by component."""
    v = cp.values(p.t, p.r)
    K1, K2, K3, K4, K5 = (v[f"K{i}"] for i in range(1, 6))
    r, k = p.r, cp.k
    chi2 = cp.chi2(r)
    chi = math.sqrt(chi2)
    s, c = math.sin(p.theta), math.cos(p.theta)
    G = np.zeros((4, 4, 4))
    G[T, T, T] = K1
    G[R, T, R] = G[TH, T, TH] = G[PH, T, PH] = K3
    G[R, R, T] = G[TH, TH, T] = G[PH, PH, T] = K4
    G[T, R, R] = K2 / chi2
    G[T, TH, TH] = K2 * r * r
    G[T, PH, PH] = K2 * r * r * s * s
    G[R, PH, TH] = K5 * r * r * chi * s
    G[R, TH, PH] = -G[R, PH, TH]
    G[TH, R, PH] = K5 * s / chi
    G[TH, PH, R] = -G[TH, R, PH]
    G[PH, R, TH] = -K5 / (chi * s)
    G[PH, TH, R] = -G[PH, R, TH]
    G[R, R, R] = k * r / chi2
    G[TH, R, TH] = G[TH, TH, R] = G[PH, R, PH] = G[PH, PH, R] = 1.0 / r
    G[PH, TH, PH] = G[PH, PH, TH] = c / s
    G[TH, PH, PH] = -s * c
    G[R, TH, TH] = r * (k * r * r - 1.0)
    G[R, PH, PH] = r * (k * r * r - 1.0) * s * s
    return ComponentArray(G, ("up", "down", "down"))


def default_box(k: int) -> dict[str, tuple[float, float]]:
    """Sampling box that keeps 1 - k r^2 well away from zero."""
    r = (0.2, 0.8) if k == 1 else (0.5, 2.5)
    return {"t": (-0.5, 0.5), "r": r, "theta": (0.2, math.pi - 0.2), "phi": (0.0, 2.0 * math.pi)}


def cosmo_symmetry_check(cp: CosmoParams, sample=None, tol: float = 1e-6, reflection: bool = False):
    """Six-generator verdict; with ``reflection`` the equatorial reflection is added."""
    from .geomspec import GeometrySpec
    from .symmetry import check_symmetry, default_sample

    spec = GeometrySpec.from_cosmo(cp)
    if sample is None:
        sample = default_sample(box=default_box(cp.k))
    return check_symmetry(spec, "COSMO+O3" if reflection else "COSMO", sample, tol)
