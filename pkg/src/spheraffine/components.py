"""Spacetime points and dense component arrays."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError

T, R, TH, PH = 0, 1, 2, 3
COORD_NAMES = ("t", "r", "theta", "phi")
LORENTZ_NAMES = ("0", "1", "2", "3")
SLOT_KINDS = ("up", "down", "lorentz_up", "lorentz_down")

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Point:
    """Coordinates (t, r, theta, phi); the polar axis is excluded."""

    t: float
    r: float
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not self.r > 0.0:
            raise GeometryError(f"r must be positive, got {self.r}")
        if not 0.0 < self.theta < math.pi or math.sin(self.theta) == 0.0:
            raise GeometryError(f"theta must lie in (0, pi), got {self.theta}")
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)

    @property
    def coords(self) -> np.ndarray:
        return np.array([self.t, self.r, self.theta, self.phi])

    @classmethod
    def from_coords(cls, x) -> Point:
        return cls(float(x[0]), float(x[1]), float(x[2]), float(x[3]))

    def shifted(self, axis: int, h: float) -> Point:
        x = self.coords
        x[axis] += h
        return Point.from_coords(x)


@dataclass(frozen=True, eq=False)
class ComponentArray:
    """Components of a tensor-like object at one point.

    ``data`` has shape ``(4,) * rank``; ``variance`` names each slot as one
    of ``up``, ``down`` (coordinate indices) or ``lorentz_up``,
    ``lorentz_down`` (frame indices).
    """

    data: np.ndarray
    variance: tuple[str, ...]

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "variance", tuple(self.variance))
        rank = len(self.variance)
        if not 1 <= rank <= 4:
            raise ValueError(f"rank must be 1..4, got {rank}")
        if data.shape != (4,) * rank:
            raise ValueError(f"shape {data.shape} does not match rank {rank}")
        bad = [v for v in self.variance if v not in SLOT_KINDS]
        if bad:
            raise ValueError(f"unknown slot kinds {bad}")

    @property
    def rank(self) -> int:
        return len(self.variance)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.data)))

    def __getitem__(self, idx):
        return self.data[idx]

    def to_json(self) -> dict[str, float]:
        """Map ``"t,r,theta"``-style index strings to values, zeros omitted."""
        names = [LORENTZ_NAMES if v.startswith("lorentz") else COORD_NAMES for v in self.variance]
        out = {}
        for idx in np.ndindex(self.data.shape):
            val = float(self.data[idx])
            if val != 0.0:
                out[",".join(names[k][i] for k, i in enumerate(idx))] = val
        return out


def index_label(idx, variance=None) -> str:
    variance = variance or ("up",) * len(idx)
    return ",".join(
        (LORENTZ_NAMES if v.startswith("lorentz") else COORD_NAMES)[i] for i, v in zip(idx, variance)
    )
