"""Torsion, nonmetricity, contortion, disformation, Levi-Civita and curvature.

Each quantity has a closed form in terms of the parameter functions and a
definitional counterpart computed from assembled component arrays. The
definitional routines take plain arrays so they can be fed by any source.

Conventions: ``G[mu, nu, rho]`` is Gamma^mu_{nu rho} with rho the derivative
index, ``T^r_{mn} = G^r_{nm} - G^r_{mn}``, ``Q_{mnr} = nabla_m g_{nr}``, and
``R^r_{smn} = d_m G^r_{sn} - d_n G^r_{sm} + G^r_{tm} G^t_{sn} - G^r_{tn} G^t_{sm}``.
"""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np

from .components import PH, TH, ComponentArray, Point, R, T
from .errors import SingularMetric
from .geometry import (
    ConnParamsC,
    MetricParams,
    TQParams,
    assemble_connection,
    c_jets_from_tq,
    metric_and_derivatives,
)
from .jet import exp

FD_STEP = 1e-5

ConnectionEvaluator = Callable[[Point], np.ndarray]


# ---------------------------------------------------------------------------
# definitional forms

def torsion_from_connection(G: np.ndarray) -> np.ndarray:
    return np.transpose(G, (0, 2, 1)) - G


def nonmetricity_from_connection(g: np.ndarray, dg: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Q_{m n r} = d_m g_{n r} - G^s_{n m} g_{s r} - G^s_{r m} g_{n s}."""
    A = np.einsum("snm,sr->mnr", G, g)
    return dg - A - np.transpose(A, (0, 2, 1))


def lower_first(g: np.ndarray, X: np.ndarray) -> np.ndarray:
    return np.einsum("ms,s...->m...", g, X)


def raise_first(ginv: np.ndarray, X: np.ndarray) -> np.ndarray:
    return np.einsum("ms,s...->m...", ginv, X)


def contortion_from_torsion(g: np.ndarray, Tup: np.ndarray) -> np.ndarray:
    """K_{m n r} = (T_{n m r} + T_{r m n} - T_{m n r}) / 2 with T lowered on its first slot."""
    Td = lower_first(g, Tup)
    return 0.5 * (np.transpose(Td, (1, 0, 2)) + np.transpose(Td, (1, 2, 0)) - Td)


def disformation_from_nonmetricity(Q: np.ndarray) -> np.ndarray:
    """L_{m n r} = (Q_{m n r} - Q_{n m r} - Q_{r m n}) / 2."""
    return 0.5 * (Q - np.transpose(Q, (1, 0, 2)) - np.transpose(Q, (1, 2, 0)))


def christoffel_lowered(dg: np.ndarray) -> np.ndarray:
    """Gamma_{m n r} = (d_n g_{m r} + d_r g_{m n} - d_m g_{n r}) / 2 from dg[a, b, c] = d_a g_{bc}."""
    return 0.5 * (np.transpose(dg, (1, 0, 2)) + np.transpose(dg, (1, 2, 0)) - dg)


def curvature_from_connection(G: np.ndarray, dG: np.ndarray) -> np.ndarray:
    """Riemann tensor from Gamma and dG[a, mu, nu, rho] = d_a Gamma^mu_{nu rho}."""
    dterm = np.einsum("mrsn->rsmn", dG)
    R_ = dterm - np.transpose(dterm, (0, 1, 3, 2))
    quad = np.einsum("rtm,tsn->rsmn", G, G)
    return R_ + quad - np.transpose(quad, (0, 1, 3, 2))


def fd_derivative(fn: Callable[[Point], np.ndarray], p: Point, h: float = FD_STEP) -> np.ndarray:
    """Central differences of an array-valued field in all four coordinates; axis 0 is the direction."""
    out = []
    for axis in range(4):
        out.append((fn(p.shifted(axis, h)) - fn(p.shifted(axis, -h))) / (2.0 * h))
    return np.stack(out)


def curvature_generic(gamma: ConnectionEvaluator, p: Point, h: float = FD_STEP) -> ComponentArray:
    """Curvature of any connection evaluator, derivatives by central differences."""
    G = gamma(p)
    dG = fd_derivative(gamma, p, h)
    return ComponentArray(curvature_from_connection(G, dG), ("up", "down", "down", "down"))


def christoffel_symbols(g: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """Gamma^m_{n r} of the Levi-Civita connection."""
    det = np.linalg.det(g)
    if abs(det) < 1e-14:
        raise SingularMetric(f"metric determinant {det:.3e} is numerically zero")
    return raise_first(np.linalg.inv(g), christoffel_lowered(dg))


# ---------------------------------------------------------------------------
# closed forms

def _antisym_last(A: np.ndarray, idx: tuple, val: float) -> None:
    A[idx] = val
    A[idx[:-2] + (idx[-1], idx[-2])] = -val


def torsion(c: ConnParamsC, p: Point) -> ComponentArray:
    C = c.jets(p.t, p.r)
    v = {n: getattr(C, n).v for n in ConnParamsC.names}
    s = math.sin(p.theta)
    Tt = np.zeros((4, 4, 4))
    _antisym_last(Tt, (T, T, R), v["C3"] - v["C2"])
    _antisym_last(Tt, (R, T, R), v["C7"] - v["C6"])
    _antisym_last(Tt, (T, TH, PH), 2 * v["C19"] * s)
    _antisym_last(Tt, (R, TH, PH), 2 * v["C20"] * s)
    for x in (TH, PH):
        _antisym_last(Tt, (x, T, x), v["C13"] - v["C11"])
        _antisym_last(Tt, (x, R, x), v["C14"] - v["C12"])
    _antisym_last(Tt, (PH, T, TH), (v["C17"] - v["C15"]) / s)
    _antisym_last(Tt, (TH, T, PH), -(v["C17"] - v["C15"]) * s)
    _antisym_last(Tt, (PH, R, TH), (v["C18"] - v["C16"]) / s)
    _antisym_last(Tt, (TH, R, PH), -(v["C18"] - v["C16"]) * s)
    return ComponentArray(Tt, ("up", "down", "down"))


def _metric_factors(Gj):
    e1 = exp(Gj.G1).v
    e2 = exp(Gj.G2).v
    return dict(
        e1=e1, e2=e2, e2m=1.0 / e2, e4=exp(Gj.G4).v,
        s3=math.sin(Gj.G3.v), c3=math.cos(Gj.G3.v),
        g1t=Gj.G1.dt, g1r=Gj.G1.dr, g2t=Gj.G2.dt, g2r=Gj.G2.dr,
        g3t=Gj.G3.dt, g3r=Gj.G3.dr, g4t=Gj.G4.dt, g4r=Gj.G4.dr,
    )


def _sym_last(A: np.ndarray, idx: tuple, val: float) -> None:
    A[idx] = val
    A[idx[:-2] + (idx[-1], idx[-2])] = val


def nonmetricity(m: MetricParams, c: ConnParamsC, p: Point) -> ComponentArray:
    f = _metric_factors(m.jets(p.t, p.r))
    C = c.jets(p.t, p.r)
    v = {n: getattr(C, n).v for n in ConnParamsC.names}
    e1, e2, e2m, e4, s3, c3 = f["e1"], f["e2"], f["e2m"], f["e4"], f["s3"], f["c3"]
    s = math.sin(p.theta)
    Q = np.zeros((4, 4, 4))
    Q[T, T, T] = -e1 * ((2 * v["C5"] - e2 * f["g3t"]) * s3
                        - (2 * v["C1"] - f["g1t"] - f["g2t"]) * e2 * c3)
    Q[R, T, T] = -e1 * ((2 * v["C6"] - e2 * f["g3r"]) * s3
                        - (2 * v["C2"] - f["g1r"] - f["g2r"]) * e2 * c3)
    Q[T, R, R] = -e1 * ((2 * v["C3"] + e2m * f["g3t"]) * s3
                        + (2 * v["C7"] - f["g1t"] + f["g2t"]) * e2m * c3)
    Q[R, R, R] = -e1 * ((2 * v["C4"] + e2m * f["g3r"]) * s3
                        + (2 * v["C8"] - f["g1r"] + f["g2r"]) * e2m * c3)
    _sym_last(Q, (T, T, R), -e1 * ((v["C1"] + v["C7"] - f["g1t"]) * s3
                                   - (v["C3"] * e2 - v["C5"] * e2m + f["g3t"]) * c3))
    _sym_last(Q, (R, T, R), -e1 * ((v["C2"] + v["C8"] - f["g1r"]) * s3
                                   - (v["C4"] * e2 - v["C6"] * e2m + f["g3r"]) * c3))
    q4 = e4 * (f["g4t"] - 2 * v["C13"])
    q8 = e4 * (f["g4r"] - 2 * v["C14"])
    Q[T, TH, TH], Q[T, PH, PH] = q4, q4 * s * s
    Q[R, TH, TH], Q[R, PH, PH] = q8, q8 * s * s
    q11 = (v["C15"] * e4 + (v["C20"] * s3 - v["C19"] * e2 * c3) * e1) * s
    q12 = (v["C16"] * e4 + (v["C19"] * s3 + v["C20"] * e2m * c3) * e1) * s
    _sym_last(Q, (PH, T, TH), q11)
    _sym_last(Q, (TH, T, PH), -q11)
    _sym_last(Q, (PH, R, TH), q12)
    _sym_last(Q, (TH, R, PH), -q12)
    q9 = -v["C11"] * e4 - (v["C10"] * s3 - v["C9"] * e2 * c3) * e1
    q10 = -v["C12"] * e4 - (v["C9"] * s3 + v["C10"] * e2m * c3) * e1
    _sym_last(Q, (TH, T, TH), q9)
    _sym_last(Q, (PH, T, PH), q9 * s * s)
    _sym_last(Q, (TH, R, TH), q10)
    _sym_last(Q, (PH, R, PH), q10 * s * s)
    return ComponentArray(Q, ("down", "down", "down"))


def _antisym_first(A: np.ndarray, idx: tuple, val: float) -> None:
    A[idx] = val
    A[(idx[1], idx[0]) + idx[2:]] = -val


def contortion(m: MetricParams, tq: TQParams, p: Point) -> ComponentArray:
    """All-lower contortion K_{mu nu rho}, antisymmetric in the first pair."""
    f = _metric_factors(m.jets(p.t, p.r))
    P = tq.jets(p.t, p.r)
    v = {n: getattr(P, n).v for n in TQParams.names}
    e1, e2, e2m, e4, s3, c3 = f["e1"], f["e2"], f["e2m"], f["e4"], f["s3"], f["c3"]
    s = math.sin(p.theta)
    a = v["T4"] * s3 - v["T3"] * e2 * c3
    b = v["T3"] * s3 + v["T4"] * e2m * c3
    K = np.zeros((4, 4, 4))
    _antisym_first(K, (T, PH, TH), 0.5 * e1 * a * s)
    _antisym_first(K, (T, TH, PH), -0.5 * e1 * a * s)
    _antisym_first(K, (R, PH, TH), 0.5 * e1 * b * s)
    _antisym_first(K, (R, TH, PH), -0.5 * e1 * b * s)
    _antisym_first(K, (T, R, T), e1 * (v["T2"] * s3 - v["T1"] * e2 * c3))
    _antisym_first(K, (T, R, R), e1 * (v["T1"] * s3 + v["T2"] * e2m * c3))
    _antisym_first(K, (TH, PH, T), 0.5 * (2 * v["T7"] * e4 + a * e1) * s)
    _antisym_first(K, (TH, PH, R), 0.5 * (2 * v["T8"] * e4 + b * e1) * s)
    _antisym_first(K, (T, TH, TH), e4 * v["T5"])
    _antisym_first(K, (T, PH, PH), e4 * v["T5"] * s * s)
    _antisym_first(K, (R, TH, TH), e4 * v["T6"])
    _antisym_first(K, (R, PH, PH), e4 * v["T6"] * s * s)
    return ComponentArray(K, ("down", "down", "down"))


def disformation(m: MetricParams, tq: TQParams, p: Point) -> ComponentArray:
    """All-lower disformation L_{mu nu rho}, symmetric in the last pair."""
    P = tq.jets(p.t, p.r)
    q = {n: getattr(P, n).v for n in TQParams.names if n.startswith("Q")}
    s = math.sin(p.theta)
    s2 = s * s
    L = np.zeros((4, 4, 4))
    L[T, T, T] = -0.5 * q["Q1"]
    L[T, R, R] = 0.5 * q["Q2"] - q["Q7"]
    L[T, TH, TH], L[T, PH, PH] = 0.5 * q["Q4"] - q["Q9"], (0.5 * q["Q4"] - q["Q9"]) * s2
    L[R, R, R] = -0.5 * q["Q6"]
    L[R, T, T] = 0.5 * q["Q5"] - q["Q3"]
    L[R, TH, TH], L[R, PH, PH] = 0.5 * q["Q8"] - q["Q10"], (0.5 * q["Q8"] - q["Q10"]) * s2
    _sym_last(L, (T, T, R), -0.5 * q["Q5"])
    _sym_last(L, (R, T, R), -0.5 * q["Q2"])
    _sym_last(L, (TH, T, PH), q["Q11"] * s)
    _sym_last(L, (PH, T, TH), -q["Q11"] * s)
    _sym_last(L, (TH, R, PH), q["Q12"] * s)
    _sym_last(L, (PH, R, TH), -q["Q12"] * s)
    _sym_last(L, (TH, T, TH), -0.5 * q["Q4"])
    _sym_last(L, (PH, T, PH), -0.5 * q["Q4"] * s2)
    _sym_last(L, (TH, R, TH), -0.5 * q["Q8"])
    _sym_last(L, (PH, R, PH), -0.5 * q["Q8"] * s2)
    return ComponentArray(L, ("down", "down", "down"))


def levi_civita(m: MetricParams, p: Point) -> ComponentArray:
    """All-lower Levi-Civita connection Gamma_{mu nu rho} = g_{mu sigma} Gamma^sigma_{nu rho}."""
    f = _metric_factors(m.jets(p.t, p.r))
    e1, e2, e2m, e4, s3, c3 = f["e1"], f["e2"], f["e2m"], f["e4"], f["s3"], f["c3"]
    s, c = math.sin(p.theta), math.cos(p.theta)
    L = np.zeros((4, 4, 4))
    L[T, T, T] = 0.5 * e1 * e2 * (f["g3t"] * s3 - (f["g1t"] + f["g2t"]) * c3)
    _sym_last(L, (T, T, R), 0.5 * e1 * e2 * (f["g3r"] * s3 - (f["g1r"] + f["g2r"]) * c3))
    L[T, R, R] = 0.5 * e1 * ((2 * f["g3r"] - (f["g1t"] - f["g2t"]) * e2m) * c3
                             + (2 * f["g1r"] + f["g3t"] * e2m) * s3)
    L[R, T, T] = 0.5 * e1 * ((2 * f["g3t"] + (f["g1r"] + f["g2r"]) * e2) * c3
                             + (2 * f["g1t"] - f["g3r"] * e2) * s3)
    _sym_last(L, (R, T, R), -0.5 * e1 * e2m * (f["g3t"] * s3 - (f["g1t"] - f["g2t"]) * c3))
    L[R, R, R] = -0.5 * e1 * e2m * (f["g3r"] * s3 - (f["g1r"] - f["g2r"]) * c3)
    for x, dx in ((T, f["g4t"]), (R, f["g4r"])):
        w = -0.5 * e4 * dx
        L[x, TH, TH] = w
        L[x, PH, PH] = w * s * s
        _sym_last(L, (TH, x, TH), -w)
        _sym_last(L, (PH, x, PH), -w * s * s)
    _sym_last(L, (PH, TH, PH), e4 * c * s)
    L[TH, PH, PH] = -e4 * c * s
    return ComponentArray(L, ("down", "down", "down"))


def decomposition_residual(m: MetricParams, tq: TQParams, p: Point) -> ComponentArray:
    """Gamma - (Gamma_LC + K + L) with every term raised to up-down-down."""
    g, _ = metric_and_derivatives(m, p)
    det = np.linalg.det(g)
    if abs(det) < 1e-14:
        raise SingularMetric(f"metric determinant {det:.3e} is numerically zero")
    ginv = np.linalg.inv(g)
    G = assemble_connection(c_jets_from_tq(m.jets(p.t, p.r), tq.jets(p.t, p.r)), p.theta)
    down = levi_civita(m, p).data + contortion(m, tq, p).data + disformation(m, tq, p).data
    return ComponentArray(G - raise_first(ginv, down), ("up", "down", "down"))


def curvature_explicit(c: ConnParamsC, p: Point) -> ComponentArray:
    """Riemann tensor from the closed-form component lists, derivatives from jets."""
    J = c.jets(p.t, p.r)
    jets = {i: getattr(J, f"C{i}") for i in range(1, 21)}
    C = {i: j.v for i, j in jets.items()}
    Ct = {i: j.dt for i, j in jets.items()}
    Cr = {i: j.dr for i, j in jets.items()}
    s = math.sin(p.theta)
    s2 = s * s
    Rm = np.zeros((4, 4, 4, 4))

    def put(idx, val):
        _antisym_last(Rm, idx, val)

    # purely algebraic block
    put((T, T, TH, PH), 2 * (C[11] * C[19] - C[9] * C[15]) * s)
    put((T, R, TH, PH), 2 * (C[12] * C[19] - C[9] * C[16]) * s)
    put((R, T, TH, PH), 2 * (C[11] * C[20] - C[10] * C[15]) * s)
    put((R, R, TH, PH), 2 * (C[12] * C[20] - C[10] * C[16]) * s)
    w = (C[9] * C[15] + C[10] * C[16] - C[11] * C[19] - C[12] * C[20]) * s
    put((TH, TH, TH, PH), w)
    put((PH, PH, TH, PH), w)
    x = 1 + C[9] * C[11] + C[10] * C[12] + C[15] * C[19] + C[16] * C[20]
    put((TH, PH, TH, PH), x * s2)
    put((PH, TH, TH, PH), -x)

    # angular block in the (t, r) plane
    y = Ct[14] - Cr[13]
    put((TH, TH, T, R), y)
    put((PH, PH, T, R), y)
    z = Ct[18] - Cr[17]
    put((TH, PH, T, R), -z * s)
    put((PH, TH, T, R), z / s)

    # (t, r) block
    put((T, T, T, R), Ct[2] - Cr[1] + C[3] * C[6] - C[4] * C[5])
    put((T, R, T, R), Ct[4] - Cr[3] + C[4] * (C[1] - C[7]) - C[3] * (C[2] - C[8]))
    put((R, T, T, R), Ct[6] - Cr[5] + C[6] * (C[7] - C[1]) - C[5] * (C[8] - C[2]))
    put((R, R, T, R), Ct[8] - Cr[7] + C[4] * C[5] - C[3] * C[6])

    # mixed blocks, one pass per (t, r) direction a:
    # A = G^t_{ta}, B = G^t_{ra}, D = G^r_{ta}, E = G^r_{ra}, F = G^th_{th a}, H = G^ph_{th a} sin(theta)
    for a, d, A, B, D, E, F, H in ((T, Ct, 1, 3, 5, 7, 13, 17), (R, Cr, 2, 4, 6, 8, 14, 18)):
        A, B, D, E, F, H = C[A], C[B], C[D], C[E], C[F], C[H]
        v = d[9] + B * C[10] - H * C[19] + C[9] * (A - F)
        put((T, TH, a, TH), v)
        put((T, PH, a, PH), v * s2)
        v = d[10] + D * C[9] - H * C[20] + C[10] * (E - F)
        put((R, TH, a, TH), v)
        put((R, PH, a, PH), v * s2)
        v = d[11] - D * C[12] - C[15] * H + C[11] * (F - A)
        put((TH, T, a, TH), v)
        put((PH, T, a, PH), v)
        v = d[12] - B * C[11] - C[16] * H + C[12] * (F - E)
        put((TH, R, a, TH), v)
        put((PH, R, a, PH), v)
        v = -(d[19] + C[9] * H + B * C[20] + C[19] * (A - F)) * s
        put((T, TH, a, PH), v)
        put((T, PH, a, TH), -v)
        v = -(d[20] + C[10] * H + D * C[19] + C[20] * (E - F)) * s
        put((R, TH, a, PH), v)
        put((R, PH, a, TH), -v)
        v = -(d[15] + C[11] * H - D * C[16] + C[15] * (F - A)) * s
        put((TH, T, a, PH), v)
        put((PH, T, a, TH), -v / s2)
        v = -(d[16] + C[12] * H - B * C[15] + C[16] * (F - E)) * s
        put((TH, R, a, PH), v)
        put((PH, R, a, TH), -v / s2)
    return ComponentArray(Rm, ("up", "down", "down", "down"))

