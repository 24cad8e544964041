"""Random smooth expressions for property tests.

Everything generated here is analytic and bounded on t in [-1, 1],
r in [1, 3], so jets and finite differences are both well-conditioned.
"""

from __future__ import annotations

import numpy as np

_UNARY = ("sin", "cos", "tanh")
_SAFE_WRAP = (
    "sin({})",
    "cos({})",
    "tanh({})",
    "exp(0.3*sin({}))",
    "log(2 + cos({}))",
    "sqrt(2 + sin({}))",
    "sinh(0.5*tanh({}))",
    "cosh(0.5*sin({}))",
)


def _leaf(rng: np.random.Generator, variables: tuple = ("t", "r")) -> str:
    k = rng.integers(4)
    if k == 0:
        return variables[0]
    if k == 1:
        return variables[-1]
    if k == 2:
        return f"{rng.uniform(-1, 1):.3f}"
    return f"(0.5*{variables[-1]})"


def random_expr(rng: np.random.Generator, depth: int = 3, variables: tuple = ("t", "r")) -> str:
    """Bounded, smooth random expression of nesting depth <= depth."""
    if depth <= 0 or rng.random() < 0.2:
        return _leaf(rng, variables)
    k = rng.integers(5)
    if k == 0:
        return rng.choice(_SAFE_WRAP).format(random_expr(rng, depth - 1, variables))
    if k == 1:
        return f"({random_expr(rng, depth - 1, variables)} + {random_expr(rng, depth - 1, variables)})"
    if k == 2:
        return f"({random_expr(rng, depth - 1, variables)} - {random_expr(rng, depth - 1, variables)})"
    if k == 3:
        return f"{rng.choice(_UNARY)}({random_expr(rng, depth - 1, variables)}) * {rng.choice(_UNARY)}({random_expr(rng, depth - 1, variables)})"
    return f"({random_expr(rng, depth - 1, variables)})^2"


def small_expr(rng: np.random.Generator, scale: float = 0.3, depth: int = 2, variables: tuple = ("t", "r")) -> str:
    """Random function bounded by about ``scale`` in magnitude."""
    return f"{scale:.3f}*sin({random_expr(rng, depth, variables)})"


def random_cosmo_fields(rng: np.random.Generator) -> dict:
    """N, A bounded away from zero and K1..K5, all functions of t."""
    time = ("t",)
    out = {n: f"1 + {small_expr(rng, variables=time)}" for n in ("N", "A")}
    out.update({f"K{i}": small_expr(rng, 0.8, variables=time) for i in range(1, 6)})
    return out


def random_point(rng: np.random.Generator, theta_margin: float = 0.3) -> tuple[float, float, float, float]:
    return (
        float(rng.uniform(-0.8, 0.8)),
        float(rng.uniform(1.2, 2.8)),
        float(rng.uniform(theta_margin, np.pi - theta_margin)),
        float(rng.uniform(0.0, 2 * np.pi)),
    )


def random_params(cls, rng: np.random.Generator, scale: float = 0.3, names=None):
    """Instance of a parameter-set class with every (or the named) field random."""
    names = cls.names if names is None else names
    return cls({n: small_expr(rng, scale) for n in names})


def random_flat(rng: np.random.Generator, f6: bool = True):
    """Flat-family parameters with F1, F2, F5 bounded away from zero."""
    from spheraffine.special import FlatParams

    return FlatParams(
        F1=f"1.2 + {small_expr(rng)}",
        F2=f"1.1 + {small_expr(rng)}",
        F3=small_expr(rng, 0.5),
        F4=small_expr(rng, 0.5),
        F5=f"r*(1 + {small_expr(rng)})",
        F6=small_expr(rng, 0.8) if f6 else "0",
    )


def random_coord_map(rng: np.random.Generator):
    """Near-identity (t, r) coordinate map with a nonsingular Jacobian."""
    from spheraffine.special import CoordMapParams

    return CoordMapParams(
        t_tilde=f"t + {small_expr(rng, 0.2)}",
        r_tilde=f"r + {small_expr(rng, 0.2)}",
    )
