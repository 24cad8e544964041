"""Six-generator symmetry of a cosmological connection for each spatial curvature.

Run from the repository root: python3 demos/cosmology.py
"""

import numpy as np

from spheraffine.components import Point
from spheraffine.cosmo import (
    CosmoParams,
    cosmo_connection,
    cosmo_metric_and_derivatives,
    cosmo_symmetry_check,
)
from spheraffine.tensors import nonmetricity_from_connection, torsion_from_connection

# de Sitter-like expansion with its Levi-Civita connection
RW = {"N": "1", "A": "exp(0.5*t)", "K1": "0", "K2": "0.5*exp(t)", "K3": "0.5", "K4": "0.5"}
GENERIC = {**RW, "K1": "0.2*t", "K3": "0.3", "K5": "0.1*cos(t)"}

for k in (-1, 0, 1):
    p = Point(0.2, 0.5, 1.1, 0.3)
    cp = CosmoParams(RW, k=k)
    g, dg = cosmo_metric_and_derivatives(cp, p)
    G = cosmo_connection(cp, p).data
    T = np.max(np.abs(torsion_from_connection(G)))
    Q = np.max(np.abs(nonmetricity_from_connection(g, dg, G)))
    six = cosmo_symmetry_check(CosmoParams(GENERIC, k=k))
    o3 = cosmo_symmetry_check(CosmoParams(GENERIC, k=k), reflection=True)
    print(f"k={k:+d}: RW |T|={T:.1e} |Q|={Q:.1e}; generic {six.group} pass={six.passed}, "
          f"with reflection pass={o3.passed} violated={o3.violated}")
