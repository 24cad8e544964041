"""Circular autoparallel orbits of stationary spherically symmetric geometries.

A circular orbit gamma(tau) = (N tau, R, Theta, Omega tau) solves the
autoparallel equation iff four algebraic conditions on the connection
parameters at r = R hold. N is normalized to 1.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from .components import Point
from .errors import AxisCrossing, GeometryError, NoConvergence, NotStationary

FIXED_POINT_TOL = 1e-12
FIXED_POINT_MAXITER = 200
ROOT_XTOL = 1e-12
RESIDUAL_TOL = 1e-9
STATIONARY_SAMPLES = 16
STATIONARY_TOL = 1e-12
AXIS_MIN_SIN = 1e-6


@dataclass(frozen=True)
class OrbitSolution:
    N: float
    R: float
    Theta: float
    Omega: float
    residuals: tuple[float, float, float, float] = (math.nan,) * 4
    family: str = "isolated"

    @property
    def max_residual(self) -> float:
        return max(abs(x) for x in self.residuals)

    def to_json(self) -> dict:
        return {
            "N": self.N, "R": self.R, "Theta": self.Theta, "Omega": self.Omega,
            "residuals": list(self.residuals), "family": self.family,
        }


@dataclass(frozen=True)
class TrajectoryState:
    tau: float
    position: np.ndarray
    velocity: np.ndarray

    @property
    def point(self) -> Point:
        return Point.from_coords(self.position)


@dataclass
class Rejection:
    R: float
    reason: str


# ---------------------------------------------------------------------------
# algebraic system

def check_stationary(spec, r_range: tuple[float, float] = (1.0, 3.0), n: int = STATIONARY_SAMPLES) -> None:
    """Every parameter expression must have a vanishing t-derivative."""
    lo, hi = r_range
    for i in range(n):
        t = -1.0 + 2.0 * i / (n - 1)
        r = lo + (hi - lo) * (i + 0.5) / n
        for ps in spec.expression_sets():
            J = ps.jets(t, r)
            for name in ps.names:
                dt = getattr(J, name).dt
                if abs(dt) >= STATIONARY_TOL:
                    raise NotStationary(f"{name} depends on t (d_t = {dt:.3e} at t={t:.3g}, r={r:.3g})")


def _c(spec, R: float) -> dict[str, float]:
    return spec.connection_params.values(0.0, R)


def residuals_from_c(C: dict, N: float, Theta: float, Omega: float) -> tuple[float, float, float, float]:
    w = Omega * Omega * math.sin(Theta) ** 2
    return (
        C["C1"] * N * N + C["C9"] * w,
        C["C5"] * N * N + C["C10"] * w,
        Omega * math.cos(Theta) + C["C15"] + C["C17"],
        C["C11"] + C["C13"],
    )


def orbit_residuals(spec, sol: OrbitSolution, check: bool = True) -> tuple[float, float, float, float]:
    if check:
        check_stationary(spec, (0.5 * sol.R, 1.5 * sol.R))
    if abs(math.sin(sol.Theta)) < AXIS_MIN_SIN:
        raise AxisCrossing("circular orbit on the polar axis")
    return residuals_from_c(_c(spec, sol.R), sol.N, sol.Theta, sol.Omega)


def existence_functions(C: dict) -> tuple[float, float]:
    """(C11 + C13, C1 C10 - C5 C9); both vanish at admissible radii."""
    return C["C11"] + C["C13"], C["C1"] * C["C10"] - C["C5"] * C["C9"]


def solve_angle_frequency(C: dict) -> tuple[float, float, int]:
    """Fixed point of Theta <-> Omega at N = 1; returns (Theta, Omega, iterations).

    With a = -C5/C10 and c = C15 + C17 the radial equation gives
    Omega^2 sin^2 Theta = a and the transversal one cos Theta = -c/Omega.
    On x = sin^2 Theta this is x -> f(x) = 1 - q x with q = c^2/a. The plain
    iteration stalls as q -> 1 and diverges beyond, so each step is relaxed
    by 1/(1 + q), the Newton step for f(x) = x.
    """
    if C["C10"] == 0.0:
        raise GeometryError("C10 vanishes, the radial equation fixes no frequency")
    a = -C["C5"] / C["C10"]
    c = C["C15"] + C["C17"]
    if a <= 0.0:
        raise GeometryError(f"Omega^2 sin^2 Theta = {a:.6g} admits no nontrivial orbit")
    q = c * c / a
    w = 1.0 / (1.0 + q)

    def step(x):
        return x + w * (1.0 - q * x - x)

    x = 1.0
    for it in range(1, FIXED_POINT_MAXITER + 1):
        x_new = step(x)
        if abs(x_new - x) <= FIXED_POINT_TOL:
            x = x_new
            break
        x = x_new
    else:
        raise NoConvergence(f"Theta/Omega iteration did not settle in {FIXED_POINT_MAXITER} steps")
    if not 0.0 < x <= 1.0:
        raise GeometryError(f"sin^2 Theta = {x:.6g} is outside (0, 1]")
    Omega = math.sqrt(a / x)
    cos_theta = -c / Omega
    if abs(cos_theta) > 1.0:
        raise GeometryError(f"|cos Theta| = {abs(cos_theta):.6g} > 1")
    return math.acos(cos_theta), Omega, it


def orbit_at_radius(spec, R: float, family: str = "isolated") -> OrbitSolution:
    C = _c(spec, R)
    Theta, Omega, _ = solve_angle_frequency(C)
    return OrbitSolution(1.0, R, Theta, Omega, residuals_from_c(C, 1.0, Theta, Omega), family)


# ---------------------------------------------------------------------------
# radius scan

def _roots(fn: Callable[[float], float], grid: np.ndarray, vals: np.ndarray) -> list[float]:
    out = []
    for i, (x, v) in enumerate(zip(grid, vals)):
        if v == 0.0:
            out.append(float(x))
        elif i + 1 < len(grid) and v * vals[i + 1] < 0.0:
            out.append(float(bisect(fn, x, grid[i + 1], xtol=ROOT_XTOL)))
    return out


def find_circular_orbits(spec, r_range: tuple[float, float], grid: int = 64,
                         tol: float = RESIDUAL_TOL,
                         rejections: list[Rejection] | None = None) -> list[OrbitSolution]:
    """Scan r_range for radii where both existence functions vanish.

    A function that vanishes on the whole grid (as for every Levi-Civita
    connection) imposes nothing; when both do, every grid radius is a
    candidate and solutions are flagged as a continuum family. Radii where
    no nontrivial orbit exists go to ``rejections`` when given.
    """
    lo, hi = map(float, r_range)
    if not 0.0 < lo < hi:
        raise GeometryError(f"bad radius range {r_range}")
    check_stationary(spec, (lo, hi))
    radii = np.linspace(lo, hi, grid)
    E = np.array([existence_functions(_c(spec, R)) for R in radii])
    scale = 1.0 + np.max(np.abs(E))
    flat = [bool(np.all(np.abs(E[:, j]) <= tol * scale)) for j in range(2)]
    if all(flat):
        candidates, family = [float(R) for R in radii], "continuum"
    else:
        j = 0 if not flat[0] else 1
        other = 1 - j

        def fn(R):
            return existence_functions(_c(spec, R))[j]

        candidates, family = _roots(fn, radii, E[:, j]), "isolated"
        if not flat[other]:
            candidates = [R for R in candidates
                          if abs(existence_functions(_c(spec, R))[other]) <= tol * scale]
    sols = []
    for R in candidates:
        try:
            sol = orbit_at_radius(spec, R, family)
        except (GeometryError, ArithmeticError) as exc:
            if rejections is not None:
                rejections.append(Rejection(R, str(exc)))
            continue
        if sol.max_residual < tol:
            sols.append(sol)
        elif rejections is not None:
            rejections.append(Rejection(R, f"residual {sol.max_residual:.3e} above {tol:g}"))
    return sols


# ---------------------------------------------------------------------------
# autoparallel integration

def _accel(gamma: Callable[[Point], np.ndarray], x: np.ndarray, u: np.ndarray) -> np.ndarray:
    if not 0.0 < x[2] < math.pi or math.sin(x[2]) < AXIS_MIN_SIN:
        raise AxisCrossing(f"trajectory reached the polar axis (theta = {x[2]:.6g})")
    G = gamma(Point.from_coords(x))
    return -np.einsum("rmn,m,n->r", G, u, u)


def integrate_autoparallel(spec, s0: TrajectoryState, dtau: float, steps: int) -> list[TrajectoryState]:
    """Classical RK4 for x'' = -Gamma^r_{mn} x'^m x'^n; ``spec`` may be a connection evaluator."""
    gamma = spec if callable(spec) else spec.connection
    x = np.asarray(s0.position, dtype=float).copy()
    u = np.asarray(s0.velocity, dtype=float).copy()
    tau = s0.tau
    out = [TrajectoryState(tau, x.copy(), u.copy())]
    h = float(dtau)
    for _ in range(int(steps)):
        k1x, k1u = u, _accel(gamma, x, u)
        k2x, k2u = u + 0.5 * h * k1u, _accel(gamma, x + 0.5 * h * k1x, u + 0.5 * h * k1u)
        k3x, k3u = u + 0.5 * h * k2u, _accel(gamma, x + 0.5 * h * k2x, u + 0.5 * h * k2u)
        k4x, k4u = u + h * k3u, _accel(gamma, x + h * k3x, u + h * k3u)
        x = x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        u = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        tau += h
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(u))):
            raise GeometryError(f"trajectory blew up at tau = {tau:.6g}")
        out.append(TrajectoryState(tau, x.copy(), u.copy()))
    return out


def orbit_initial_state(sol: OrbitSolution) -> TrajectoryState:
    return TrajectoryState(0.0, np.array([0.0, sol.R, sol.Theta, 0.0]),
                           np.array([sol.N, 0.0, 0.0, sol.Omega]))


@dataclass
class OrbitValidation:
    steps: int
    period: float
    r_drift: float
    theta_drift: float
    trajectory: list[TrajectoryState] = field(repr=False, default_factory=list)

    def to_json(self) -> dict:
        return {"steps": self.steps, "period": self.period,
                "r_drift": self.r_drift, "theta_drift": self.theta_drift}


def validate_orbit(spec, sol: OrbitSolution, steps: int = 10_000) -> OrbitValidation:
    """Integrate one period from the orbit's initial state; drifts are relative."""
    period = 2.0 * math.pi / abs(sol.Omega)
    traj = integrate_autoparallel(spec, orbit_initial_state(sol), period / steps, steps)
    pos = np.array([s.position for s in traj])
    r_drift = float(np.max(np.abs(pos[:, 1] - sol.R)) / sol.R)
    th_drift = float(np.max(np.abs(pos[:, 2] - sol.Theta)) / sol.Theta)
    return OrbitValidation(steps, period, r_drift, th_drift, traj)


def trajectory_csv(states: Sequence[TrajectoryState]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["tau", "t", "r", "theta", "phi"])
    for s in states:
        w.writerow([repr(float(s.tau))] + [repr(float(v)) for v in s.position])
    return buf.getvalue()
