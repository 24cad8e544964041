"""Circular orbits of Schwarzschild, recovered from the connection alone.

Run from the repository root: python3 demos/schwarzschild_orbits.py
"""

from pathlib import Path

from spheraffine.geomspec import GeometrySpec
from spheraffine.orbits import find_circular_orbits, validate_orbit

SPECS = Path(__file__).parent / "specs"

tq = GeometrySpec.load(SPECS / "schwarzschild.json")
sols = find_circular_orbits(tq, r_range=(3.0, 20.0), grid=8)
print(f"{'R':>8} {'Omega':>12} {'Omega^2 R^3':>12} family")
for s in sols:
    print(f"{s.R:8.3f} {s.Omega:12.8f} {s.Omega ** 2 * s.R ** 3:12.9f} {s.family}")

# integrate one period with the cheaper hand-derived C-form of the same connection
c_form = GeometrySpec.load(SPECS / "schwarzschild_c.json")
for s in find_circular_orbits(c_form, r_range=(6.0, 10.0), grid=3):
    v = validate_orbit(c_form, s, steps=5000)
    print(f"R = {s.R:.1f}: period {v.period:.2f}, r drift {v.r_drift:.1e}, theta drift {v.theta_drift:.1e}")
