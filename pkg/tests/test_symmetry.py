import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from randexpr import random_cosmo_fields, random_expr, random_point, small_expr

from spheraffine.components import PH, TH, ComponentArray, Point, R, T
from spheraffine.cosmo import CosmoParams
from spheraffine.errors import SpecError
from spheraffine.geometry import ConnParamsC, MetricParams, SpinParams, TQParams
from spheraffine.geomspec import GeometrySpec
from spheraffine.symmetry import (
    check_symmetry,
    default_sample,
    generator,
    lie_bracket,
    lie_connection,
    lie_metric,
    mirror,
    reflect_components,
    vector_field_from_exprs,
)

ODD_C = tuple(f"C{i}" for i in range(15, 21))
ODD_TQ = ("T3", "T4", "T7", "T8", "Q11", "Q12")
ODD_S = tuple(f"S{i}" for i in range(15, 21))
BOX = {"r": (1.2, 2.8), "t": (-0.8, 0.8)}
# step for finite-difference brackets; 1e-5 leaves 1e-8 truncation near r sin(theta) ~ 0.3
FD_BRACKET = 2e-6


def random_c_spec(rng, zero=()):
    fields = {n: small_expr(rng) for n in MetricParams.names}
    fields.update({n: small_expr(rng, 0.8) for n in ConnParamsC.names if n not in zero})
    return GeometrySpec("C", fields)


def random_points(rng, n):
    return [Point(*random_point(rng)) for _ in range(n)]


class Modified:
    """Wraps a spec and adds constant offsets to metric / connection entries."""

    def __init__(self, spec, dg=None, dG=None):
        self.spec, self.dg, self.dG = spec, dg, dG

    def metric(self, p):
        g = self.spec.metric(p).copy()
        return g if self.dg is None else g + self.dg

    def connection(self, p):
        G = self.spec.connection(p).copy()
        return G if self.dG is None else G + self.dG


# generators ------------------------------------------------------------------

BRACKETS = [("X_x", "X_y", 1.0, "X_z"), ("X_y", "X_z", 1.0, "X_x"), ("X_z", "X_x", 1.0, "X_y")]
TRANSLATION_BRACKETS = [("X_1", "X_2", "X_z"), ("X_2", "X_3", "X_x"), ("X_3", "X_1", "X_y")]


@pytest.mark.parametrize("a,b,_,c", BRACKETS)
def test_rotation_brackets(rng, a, b, _, c):
    for p in random_points(rng, 5):
        got = lie_bracket(generator(a), generator(b), p, h=FD_BRACKET)
        assert np.max(np.abs(got - generator(c).value(p))) < 1e-8


@pytest.mark.parametrize("k", [-1, 0, 1])
@pytest.mark.parametrize("a,b,c", TRANSLATION_BRACKETS)
def test_translation_brackets(rng, k, a, b, c):
    for _ in range(5):
        t, _r, th, ph = random_point(rng)
        p = Point(t, rng.uniform(0.3, 0.8), th, ph)
        got = lie_bracket(generator(a, k), generator(b, k), p, h=FD_BRACKET)
        assert np.max(np.abs(got - k * generator(c).value(p))) < 1e-8


def test_analytic_and_fd_brackets_agree(rng):
    p = Point(*random_point(rng))
    X, Y = generator("X_1", -1), generator("X_3", -1)
    assert np.max(np.abs(lie_bracket(X, Y, p) - lie_bracket(X, Y, p, h=FD_BRACKET))) < 1e-8


def test_escape_hatch_matches_catalogue(rng):
    X = vector_field_from_exprs("mine", ["0", "0", "sin(phi)", "cos(phi)*cos(theta)/sin(theta)"])
    for p in random_points(rng, 3):
        assert np.allclose(X.value(p), generator("X_x").value(p), atol=1e-14)
        assert np.allclose(X.jacobian(p), generator("X_x").jacobian(p), atol=1e-12)
        assert np.allclose(X.hessian(p), generator("X_x").hessian(p), atol=1e-12)


def test_unknown_generator():
    with pytest.raises(SpecError):
        generator("X_w")


# lie derivatives ---------------------------------------------------------------

def test_metric_lie_x_z_vanishes(rng):
    spec = random_c_spec(rng)
    for p in random_points(rng, 3):
        assert np.max(np.abs(lie_metric(spec.metric, generator("X_z"), p).data)) < 1e-8


def test_metric_lie_x_x_at_fixed_point(rng):
    spec = random_c_spec(rng)
    p = Point(0, 2, math.pi / 3, math.pi / 5)
    assert np.max(np.abs(lie_metric(spec.metric, generator("X_x"), p).data)) < 1e-7


def test_broken_metric_detected(rng):
    spec = random_c_spec(rng)
    dg = np.zeros((4, 4))
    dg[T, TH] = dg[TH, T] = 1.0
    broken = Modified(spec, dg=dg)
    p = Point(0, 2, math.pi / 3, math.pi / 5)
    assert np.max(np.abs(lie_metric(broken.metric, generator("X_x"), p).data)) > 0.1
    verdict = check_symmetry(broken, "SO3", default_sample(box=BOX))
    assert not verdict.passed and verdict.max_metric_residual > 0.1


@pytest.mark.parametrize("name", ["X_x", "X_y", "X_z"])
def test_connection_lie_derivative_vanishes(rng, name):
    for _ in range(3):
        spec = random_c_spec(rng)
        for p in random_points(rng, 5):
            assert np.max(np.abs(lie_connection(spec.connection, generator(name), p).data)) < 1e-6


def test_x_z_on_phi_independent_connection(rng):
    spec = random_c_spec(rng)
    for p in random_points(rng, 3):
        assert np.max(np.abs(lie_connection(spec.connection, generator("X_z"), p).data)) < 1e-9


@pytest.mark.parametrize("k", [-1, 0, 1])
def test_cosmological_connection_under_x3(rng, k):
    cp = CosmoParams(random_cosmo_fields(rng), k=k)
    spec = GeometrySpec.from_cosmo(cp)
    for _ in range(3):
        t, _r, th, ph = random_point(rng)
        p = Point(t, rng.uniform(0.3, 0.8), th, ph)
        assert np.max(np.abs(lie_connection(spec.connection, generator("X_3", k), p).data)) < 1e-6


# verdicts ----------------------------------------------------------------------

def test_random_c_geometry_is_so3_symmetric(rng):
    for _ in range(3):
        verdict = check_symmetry(random_c_spec(rng), "SO3", default_sample(box=BOX))
        assert verdict.passed
        assert [g.generator for g in verdict.generators] == ["X_x", "X_y", "X_z"]


def test_c17_breaks_reflection_in_phi_theta_t():
    spec = GeometrySpec("C", {"G4": "2*log(r)", "C17": "1"})
    verdict = check_symmetry(spec, "O3", default_sample(box=BOX))
    assert not verdict.passed
    assert verdict.violated == ["C17"]
    ref = verdict.generator("reflection")
    assert ref.connection_component == "phi,theta,t"
    assert ref.connection_residual > 0.1
    assert max(g.connection_residual for g in verdict.generators if g.generator != "reflection") < 1e-6


def test_tq_with_even_parameters_only_is_o3(rng):
    fields = {n: small_expr(rng) for n in MetricParams.names}
    fields.update({n: small_expr(rng, 0.8) for n in TQParams.names if n not in ODD_TQ})
    verdict = check_symmetry(GeometrySpec("TQ", fields), "O3", default_sample(box=BOX))
    assert verdict.passed and verdict.violated == []


@pytest.mark.parametrize("name", ODD_TQ)
def test_each_odd_tq_parameter_breaks_o3(name):
    spec = GeometrySpec("TQ", {"G4": "2*log(r)", name: "0.5"})
    verdict = check_symmetry(spec, "O3", default_sample(box=BOX))
    assert not verdict.passed and verdict.violated == [name]


@settings(max_examples=12, deadline=None)
@given(seed=st.integers(0, 2**31), odd=st.sets(st.sampled_from(ODD_C)))
def test_o3_fails_exactly_when_odd_c_nonzero(seed, odd):
    rng = np.random.default_rng(seed)
    zero = [n for n in ODD_C if n not in odd]
    fields = {n: small_expr(rng) for n in MetricParams.names}
    fields.update({n: small_expr(rng, 0.8) for n in ConnParamsC.names if n not in zero})
    for n in odd:
        fields[n] = f"0.5 + 0.2*sin({random_expr(rng, 2)})"
    verdict = check_symmetry(GeometrySpec("C", fields), "O3", default_sample(box=BOX))
    assert verdict.passed == (not odd)
    assert verdict.violated == [n for n in ODD_C if n in odd]


@settings(max_examples=8, deadline=None)
@given(seed=st.integers(0, 2**31), odd=st.sets(st.sampled_from(ODD_S), max_size=2))
def test_o3_fails_exactly_when_odd_s_nonzero(seed, odd):
    rng = np.random.default_rng(seed)
    fields = {n: small_expr(rng) for n in MetricParams.names}
    fields.update({n: small_expr(rng, 0.8) for n in SpinParams.names if n not in ODD_S})
    for n in odd:
        fields[n] = f"0.5 + 0.2*sin({random_expr(rng, 2)})"
    verdict = check_symmetry(GeometrySpec("S", fields), "O3", default_sample(box=BOX))
    assert verdict.passed == (not odd)
    assert verdict.violated == [n for n in ODD_S if n in odd]


def test_s_form_is_so3_symmetric(rng):
    fields = {n: small_expr(rng) for n in MetricParams.names}
    fields.update({n: small_expr(rng, 0.8) for n in SpinParams.names})
    assert check_symmetry(GeometrySpec("S", fields), "SO3", default_sample(box=BOX)).passed


def test_verdict_pass_matches_residuals(rng):
    spec = random_c_spec(rng)
    sample = default_sample(8, box=BOX)
    v = check_symmetry(spec, "SO3", sample, tol=1e-6)
    tight = check_symmetry(spec, "SO3", sample, tol=1e-14)
    for verdict in (v, tight):
        expect = verdict.max_metric_residual < verdict.tol and verdict.max_connection_residual < verdict.tol
        assert verdict.passed == expect
    assert v.passed and not tight.passed
    js = v.to_json()
    assert js["pass"] is True and js["group"] == "SO3"
    assert {g["generator"] for g in js["generators"]} == {"X_x", "X_y", "X_z"}
    assert set(js["generators"][0]) >= {"metric_residual", "connection_residual",
                                        "metric_component", "connection_component"}


def test_unknown_group(rng):
    with pytest.raises(SpecError):
        check_symmetry(random_c_spec(rng), "SO4")


def test_default_sample_is_deterministic_and_off_axis():
    a, b = default_sample(), default_sample()
    assert a == b and len(a) == 24
    assert all(0.2 <= p.theta <= math.pi - 0.2 for p in a)


# reflection --------------------------------------------------------------------

def test_mirror():
    q = mirror(Point(0.1, 2.0, 0.4, 1.0))
    assert q.theta == pytest.approx(math.pi - 0.4) and (q.t, q.r, q.phi) == (0.1, 2.0, 1.0)


def test_metric_is_reflection_invariant(rng):
    spec = random_c_spec(rng)
    for p in random_points(rng, 3):
        back = reflect_components(spec.metric_components, p)
        assert np.max(np.abs(back.data - spec.metric(p))) < 1e-12


def test_trig_skeleton_is_reflection_invariant(rng):
    spec = GeometrySpec("C")
    p = Point(*random_point(rng))
    back = reflect_components(spec.connection_components, p).data
    assert back[TH, PH, PH] == pytest.approx(-math.sin(p.theta) * math.cos(p.theta), abs=1e-14)
    assert np.max(np.abs(back - spec.connection(p))) < 1e-12


def test_c15_entry_flips_sign(rng):
    spec = GeometrySpec("C", {"C15": "0.7"})
    p = Point(*random_point(rng))
    G = spec.connection(p)
    back = reflect_components(spec.connection_components(mirror(p)), p).data
    assert G[TH, T, PH] == pytest.approx(-0.7 * math.sin(p.theta))
    assert back[TH, T, PH] == pytest.approx(0.7 * math.sin(p.theta))


def test_reflection_requires_variance():
    with pytest.raises(TypeError):
        reflect_components(np.zeros((4, 4)), Point(0, 1, 1))


def test_reflection_leaves_frame_slots():
    a = ComponentArray(np.ones((4, 4)), ("lorentz_up", "down"))
    back = reflect_components(a, Point(0, 1, 1)).data
    assert np.all(back[:, TH] == -1.0) and np.all(back[:, R] == 1.0) and np.all(back[TH, R] == 1.0)
