"""Lie derivatives along symmetry generators, symmetry verdicts and reflections.

Generator fields are closed-form expressions in (t, r, theta, phi). They are
differentiated once with sympy and lambdified, so the X-derivatives entering
the Lie derivatives are exact; derivatives of the geometry itself are
central differences.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import cache

import numpy as np
import sympy as sp
from scipy.stats import qmc

from . import expr as _expr
from .components import TH, ComponentArray, Point, index_label
from .errors import GeometryError, SpecError
from .tensors import FD_STEP, fd_derivative

_SYMBOLS = sp.symbols("t r theta phi", real=True)
_t, _r, _th, _ph = _SYMBOLS

DEFAULT_TOL = 1e-6
DEFAULT_SAMPLE_SIZE = 24
DEFAULT_BOX = {"t": (-0.5, 0.5), "r": (0.5, 2.5), "theta": (0.2, math.pi - 0.2), "phi": (0.0, 2.0 * math.pi)}


class VectorField:
    """X^mu(t, r, theta, phi) with exact first and second derivatives."""

    def __init__(self, name: str, components: Sequence[sp.Expr]):
        if len(components) != 4:
            raise ValueError("a vector field needs four components")
        comps = [sp.sympify(c) for c in components]
        self.name = name
        self.components = tuple(comps)
        jac = [[sp.diff(c, x) for c in comps] for x in _SYMBOLS]
        hess = [[[sp.diff(c, x, y) for c in comps] for y in _SYMBOLS] for x in _SYMBOLS]
        self._f = sp.lambdify(_SYMBOLS, comps, "math")
        self._df = sp.lambdify(_SYMBOLS, jac, "math")
        self._ddf = sp.lambdify(_SYMBOLS, hess, "math")

    def __repr__(self) -> str:
        return f"VectorField({self.name!r}, {list(self.components)})"

    def value(self, p: Point) -> np.ndarray:
        return np.array(self._f(p.t, p.r, p.theta, p.phi), dtype=float)

    def jacobian(self, p: Point) -> np.ndarray:
        """dX[s, m] = d_s X^m."""
        return np.array(self._df(p.t, p.r, p.theta, p.phi), dtype=float)

    def hessian(self, p: Point) -> np.ndarray:
        """ddX[n, r, m] = d_n d_r X^m."""
        return np.array(self._ddf(p.t, p.r, p.theta, p.phi), dtype=float)


ROTATIONS = ("X_x", "X_y", "X_z")
TRANSLATIONS = ("X_1", "X_2", "X_3")


@cache
def generator(name: str, k: int = 0) -> VectorField:
    """Catalogue field by name; ``k`` only matters for X_1, X_2, X_3."""
    s, c = sp.sin(_th), sp.cos(_th)
    sf, cf = sp.sin(_ph), sp.cos(_ph)
    chi = sp.sqrt(1 - k * _r**2)
    table = {
        "X_x": (0, 0, sf, cf * c / s),
        "X_y": (0, 0, -cf, sf * c / s),
        "X_z": (0, 0, 0, -1),
        "X_1": (0, chi * s * cf, chi / _r * c * cf, -chi * sf / (_r * s)),
        "X_2": (0, chi * s * sf, chi / _r * c * sf, chi * cf / (_r * s)),
        "X_3": (0, chi * c, -chi / _r * s, 0),
    }
    if name not in table:
        raise SpecError(f"unknown generator {name!r}; known: {', '.join(table)}")
    label = name if name in ROTATIONS or k == 0 else f"{name}(k={k})"
    return VectorField(label, table[name])


def vector_field_from_exprs(name: str, sources: Sequence[str]) -> VectorField:
    """Custom field from four expressions in t, r, theta, phi."""
    if len(sources) != 4:
        raise SpecError("a vector field needs four component expressions")
    names = {str(x): x for x in _SYMBOLS}
    names.update({f: getattr(sp, f) for f in ("sin", "cos", "tan", "exp", "log", "sqrt",
                                              "sinh", "cosh", "tanh")})
    names["pi"] = sp.pi
    comps = []
    for src in sources:
        e = _expr.as_expr(src, _expr.ANGULAR_VARIABLES)
        comps.append(sp.sympify(_expr.serialize(e).replace("^", "**"), locals=names))
    return VectorField(name, comps)


def lie_bracket(X: VectorField, Y: VectorField, p: Point, h: float | None = None) -> np.ndarray:
    """[X, Y]^m = X^n d_n Y^m - Y^n d_n X^m; with ``h`` the derivatives are central differences."""
    if h is None:
        dX, dY = X.jacobian(p), Y.jacobian(p)
    else:
        dX, dY = fd_derivative(X.value, p, h), fd_derivative(Y.value, p, h)
    return X.value(p) @ dY - Y.value(p) @ dX


# ---------------------------------------------------------------------------
# Lie derivatives

def _data(a) -> np.ndarray:
    return a.data if isinstance(a, ComponentArray) else np.asarray(a, dtype=float)


def _array_fn(fn: Callable) -> Callable[[Point], np.ndarray]:
    return lambda q: _data(fn(q))


def lie_metric_arrays(g, dg, X, dX) -> np.ndarray:
    """(L_X g)_{mn} from g, dg[a, m, n], X^a and dX[a, m] = d_a X^m."""
    return (np.einsum("r,rmn->mn", X, dg)
            + np.einsum("mr,rn->mn", dX, g)
            + np.einsum("nr,mr->mn", dX, g))


def lie_connection_arrays(G, dG, X, dX, ddX) -> np.ndarray:
    """(L_X Gamma)^m_{nr} from Gamma, dG[s, m, n, r] and the exact derivatives of X."""
    return (np.einsum("s,smnr->mnr", X, dG)
            - np.einsum("sm,snr->mnr", dX, G)
            + np.einsum("ns,msr->mnr", dX, G)
            + np.einsum("rs,mns->mnr", dX, G)
            + np.einsum("nrm->mnr", ddX))


def lie_metric(g: Callable[[Point], object], X: VectorField, p: Point, h: float = FD_STEP) -> ComponentArray:
    fn = _array_fn(g)
    out = lie_metric_arrays(fn(p), fd_derivative(fn, p, h), X.value(p), X.jacobian(p))
    return ComponentArray(out, ("down", "down"))


def lie_connection(gamma: Callable[[Point], object], X: VectorField, p: Point,
                   h: float = FD_STEP) -> ComponentArray:
    fn = _array_fn(gamma)
    out = lie_connection_arrays(fn(p), fd_derivative(fn, p, h), X.value(p), X.jacobian(p), X.hessian(p))
    return ComponentArray(out, ("up", "down", "down"))


# ---------------------------------------------------------------------------
# equatorial reflection

def mirror(p: Point) -> Point:
    return Point(p.t, p.r, math.pi - p.theta, p.phi)


def reflection_signs(variance: Sequence[str]) -> np.ndarray:
    """+-1 per component: each coordinate theta slot flips the sign."""
    sign = np.ones((4,) * len(variance))
    for k, v in enumerate(variance):
        if v in ("up", "down"):
            shape = [1] * len(variance)
            shape[k] = 4
            flip = np.ones(4)
            flip[TH] = -1.0
            sign = sign * flip.reshape(shape)
    return sign


def reflect_components(a, p: Point) -> ComponentArray:
    """Pull back under theta -> pi - theta.

    ``a`` is either a field (Point -> ComponentArray), evaluated here at the
    mirror point, or a ComponentArray already taken at the mirror point.
    Frame (lorentz) slots are left untouched.
    """
    arr = a(mirror(p)) if callable(a) else a
    if not isinstance(arr, ComponentArray):
        raise TypeError("reflection needs variance metadata; pass a ComponentArray")
    return ComponentArray(reflection_signs(arr.variance) * arr.data, arr.variance)


# ---------------------------------------------------------------------------
# verdicts

@dataclass
class GeneratorResidual:
    generator: str
    metric_residual: float
    connection_residual: float
    metric_component: str
    connection_component: str

    def to_json(self) -> dict:
        return {
            "generator": self.generator,
            "metric_residual": self.metric_residual,
            "metric_component": self.metric_component,
            "connection_residual": self.connection_residual,
            "connection_component": self.connection_component,
        }


@dataclass
class SymmetryVerdict:
    group: str
    tol: float
    max_metric_residual: float
    max_connection_residual: float
    passed: bool
    generators: list[GeneratorResidual] = field(default_factory=list)
    violated: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "pass": self.passed,
            "tol": self.tol,
            "max_metric_residual": self.max_metric_residual,
            "max_connection_residual": self.max_connection_residual,
            "generators": [g.to_json() for g in self.generators],
            "violated": list(self.violated),
        }

    def generator(self, name: str) -> GeneratorResidual:
        for g in self.generators:
            if g.generator == name or g.generator.split("(")[0] == name:
                return g
        raise KeyError(name)


def default_sample(n: int = DEFAULT_SAMPLE_SIZE, box: dict | None = None) -> list[Point]:
    """Deterministic Halton points in a (t, r, theta, phi) box."""
    box = {**DEFAULT_BOX, **(box or {})}
    lo = [box[k][0] for k in ("t", "r", "theta", "phi")]
    hi = [box[k][1] for k in ("t", "r", "theta", "phi")]
    seq = qmc.Halton(d=4, scramble=False)
    seq.fast_forward(1)
    return [Point(*map(float, x)) for x in qmc.scale(seq.random(n), lo, hi)]


def _parse_group(group: str, spec) -> tuple[str, tuple[str, ...], int, bool]:
    g = group.upper().replace(" ", "")
    reflection = g.endswith("+O3")
    if reflection:
        g = g[:-3]
    k = getattr(spec, "cosmo_k", None)
    if g.startswith("COSMO"):
        if "(" in g:
            k = int(g[g.index("(") + 1:g.rindex(")")])
        if k not in (-1, 0, 1):
            raise SpecError("the COSMO group needs k in {-1, 0, 1}")
        return f"COSMO({k})" + ("+O3" if reflection else ""), ROTATIONS + TRANSLATIONS, k, reflection
    if g == "SO3" and not reflection:
        return "SO3", ROTATIONS, 0, False
    if g == "O3":
        return "O3", ROTATIONS, 0, True
    raise SpecError(f"unknown symmetry group {group!r}; use SO3, O3 or COSMO")


def _worst(res: np.ndarray, variance) -> tuple[float, str]:
    idx = np.unravel_index(int(np.argmax(np.abs(res))), res.shape)
    return float(abs(res[idx])), index_label(idx, variance)


def check_symmetry(spec, group: str = "SO3", sample: Sequence[Point] | None = None,
                   tol: float = DEFAULT_TOL, h: float = FD_STEP) -> SymmetryVerdict:
    """Sampled symmetry verdict for anything exposing ``metric(p)`` and ``connection(p)``.

    Residuals are divided by 1 + max|g| (metric) and 1 + max|Gamma|
    (connection) over the sample. For O3 the equatorial reflection counts
    as one more generator; ``violated`` then lists the reflection-odd
    parameters that are nonzero somewhere on the sample.
    """
    label, names, k, reflection = _parse_group(group, spec)
    sample = list(sample) if sample is not None else default_sample()
    if not sample:
        raise GeometryError("empty sample")
    fields = [generator(n, k) for n in names]
    gfn, Gfn = _array_fn(spec.metric), _array_fn(spec.connection)
    raw = {f.name: [np.zeros((4, 4)), np.zeros((4, 4, 4))] for f in fields}
    if reflection:
        raw["reflection"] = [np.zeros((4, 4)), np.zeros((4, 4, 4))]
    gmax = Gmax = 0.0
    for p in sample:
        g, G = gfn(p), Gfn(p)
        gmax, Gmax = max(gmax, np.max(np.abs(g))), max(Gmax, np.max(np.abs(G)))
        dg, dG = fd_derivative(gfn, p, h), fd_derivative(Gfn, p, h)
        for f in fields:
            X, dX = f.value(p), f.jacobian(p)
            lm = lie_metric_arrays(g, dg, X, dX)
            lc = lie_connection_arrays(G, dG, X, dX, f.hessian(p))
            acc = raw[f.name]
            acc[0] = np.maximum(acc[0], np.abs(lm))
            acc[1] = np.maximum(acc[1], np.abs(lc))
        if reflection:
            q = mirror(p)
            rg = reflection_signs(("down", "down")) * gfn(q) - g
            rG = reflection_signs(("up", "down", "down")) * Gfn(q) - G
            acc = raw["reflection"]
            acc[0] = np.maximum(acc[0], np.abs(rg))
            acc[1] = np.maximum(acc[1], np.abs(rG))
    gscale, Gscale = 1.0 + gmax, 1.0 + Gmax
    per = []
    for name, (mres, cres) in raw.items():
        mv, mc = _worst(mres / gscale, ("down", "down"))
        cv, cc = _worst(cres / Gscale, ("up", "down", "down"))
        per.append(GeneratorResidual(name, mv, cv, mc, cc))
    max_m = max(r.metric_residual for r in per)
    max_c = max(r.connection_residual for r in per)
    violated = []
    if reflection and hasattr(spec, "reflection_violations"):
        violated = spec.reflection_violations(sample, tol * Gscale)
    return SymmetryVerdict(label, tol, max_m, max_c, bool(max_m < tol and max_c < tol), per, violated)
