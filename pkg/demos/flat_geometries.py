"""Flat connections from a Weitzenboeck tetrad, and a metric they preserve.

Run from the repository root: python3 demos/flat_geometries.py
"""

import numpy as np

from spheraffine.components import Point
from spheraffine.geometry import connection_components
from spheraffine.geomspec import GeometrySpec
from spheraffine.special import (
    FlatMetricConstants,
    FlatParams,
    flat_connection_from_F,
    flat_metric_compatible_metric,
)
from spheraffine.tensors import curvature_explicit, nonmetricity_from_connection

F = {"F1": "1 + 0.1*t", "F2": "1 + r^2", "F3": "0.2*sin(r)", "F4": "0.1*t", "F5": "r + r^3/3"}
c = flat_connection_from_F(FlatParams(F))

for p in (Point(0.1, 0.7, 1.0), Point(-0.3, 1.9, 2.2)):
    R = curvature_explicit(c, p).max_abs()
    G = connection_components(c, p).data
    for g1, g2 in ((1.0, 1.0), (2.0, 0.5)):
        spec = GeometrySpec("flat", F, g1=g1, g2=g2)
        g, dg = spec.metric_and_derivatives(p)
        Q = np.max(np.abs(nonmetricity_from_connection(g, dg, G)))
        print(f"r={p.r}: |R|={R:.1e}, g1={g1} g2={g2} |Q|={Q:.1e}")

# the same family is available directly
m = flat_metric_compatible_metric(FlatParams(F), FlatMetricConstants(2.0, 0.5), Point(0, 1, 1))
print(np.round(m.data, 4))
