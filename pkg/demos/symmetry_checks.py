"""Sampled symmetry verdicts: rotations, reflection, and a broken geometry.

Run from the repository root: python3 demos/symmetry_checks.py
"""

from pathlib import Path

from spheraffine.geomspec import GeometrySpec
from spheraffine.symmetry import check_symmetry

SPECS = Path(__file__).parent / "specs"

spec = GeometrySpec.load(SPECS / "c19.json")
for group in ("SO3", "O3"):
    v = check_symmetry(spec, group)
    print(f"{group}: pass={v.passed} violated={v.violated}")
    for g in v.generators:
        print(f"  {g.generator:<11} metric {g.metric_residual:.1e}  connection {g.connection_residual:.1e}")


class Tilted:
    """Minkowski plus a g_t,theta term that no rotation preserves."""

    def __init__(self, base):
        self.base = base

    def metric(self, p):
        g = self.base.metric(p).copy()
        g[0, 2] = g[2, 0] = 0.1 * p.r
        return g

    def connection(self, p):
        return self.base.connection(p)


v = check_symmetry(Tilted(GeometrySpec.load(SPECS / "minkowski.json")), "SO3")
print(f"tilted: pass={v.passed}, worst metric residual {v.max_metric_residual:.2e}")
