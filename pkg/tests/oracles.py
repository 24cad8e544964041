"""Independent reference computations shared by several test modules."""

from __future__ import annotations

import numpy as np

from spheraffine.components import Point
from spheraffine.tensors import (
    christoffel_symbols,
    curvature_from_connection,
    curvature_generic,
    fd_derivative,
)

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])


def scaled_max_diff(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / (1.0 + max(np.max(np.abs(a)), np.max(np.abs(b)))))


def affine_from_tetrad(tetrad_fn, spin: np.ndarray, p: Point) -> np.ndarray:
    """Gamma^mu_{nu rho} = e_a^mu (d_rho theta^a_nu + omega^a_{b rho} theta^b_nu), finite differences."""
    th = tetrad_fn(p)
    e = np.linalg.inv(th)
    dth = fd_derivative(tetrad_fn, p)
    return np.einsum("ma,ran->mnr", e, dth) + np.einsum("ma,abr,bn->mnr", e, spin, th)


def tetrad_postulate(tetrad_fn, spin: np.ndarray, gamma: np.ndarray, p: Point) -> np.ndarray:
    """D_mu theta^a_nu = d_mu theta^a_nu + omega^a_{b mu} theta^b_nu - Gamma^rho_{nu mu} theta^a_rho."""
    th = tetrad_fn(p)
    dth = fd_derivative(tetrad_fn, p)
    return (np.einsum("man->man", dth) + np.einsum("abm,bn->man", spin, th)
            - np.einsum("rnm,ar->man", gamma, th))


def fd5_derivative(fn, p: Point, h: float = 1e-4) -> np.ndarray:
    """Five-point central differences (error O(h^4)); axis 0 is the direction."""
    out = []
    for axis in range(4):
        f = {k: fn(p.shifted(axis, k * h)) for k in (-2, -1, 1, 2)}
        out.append((f[-2] - 8.0 * f[-1] + 8.0 * f[1] - f[2]) / (12.0 * h))
    return np.stack(out)


def curvature_fd5(gamma_fn, p: Point, h: float = 1e-4) -> np.ndarray:
    """Curvature of any connection with five-point derivatives of Gamma."""
    return curvature_from_connection(gamma_fn(p), fd5_derivative(gamma_fn, p, h))


def nonmetricity_fd(metric_fn, gamma: np.ndarray, p: Point) -> np.ndarray:
    """nabla_mu g_{nu rho} with the metric derivative taken by five-point differences."""
    g = metric_fn(p)
    dg = fd5_derivative(metric_fn, p)
    A = np.einsum("snm,sr->mnr", gamma, g)
    return dg - A - np.transpose(A, (0, 2, 1))


def lc_curvature(metric_and_derivs, p: Point) -> np.ndarray:
    """Finite-difference curvature of the Christoffel symbols of an exact (g, dg) evaluator."""
    def gamma(q):
        return christoffel_symbols(*metric_and_derivs(q))
    return curvature_generic(gamma, p).data
