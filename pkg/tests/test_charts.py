import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lckhopf.charts import (AmbientPoint, ChartPoint, Family, ManifoldSpec, calabi_eckmann, chart_coords,
                            chart_transition, embed, fiber_distance, from_complex, hopf, point_distance,
                            sample_points)
from lckhopf.errors import OutsideChart, OutsideOverlap

SPECS = [hopf(2, 0.3), hopf(3, 0.7), hopf(4, 0.0), calabi_eckmann(0.5)]
coord = st.floats(-3, 3, allow_nan=False)


@pytest.mark.parametrize("eps", [-0.1, 1.0001, 2.0])
def test_epsilon_out_of_range(eps):
    with pytest.raises(ValueError):
        hopf(2, eps)


def test_family_dimension_rules():
    with pytest.raises(ValueError):
        ManifoldSpec(Family.HOPF_SURFACE, 3, 0.0)
    with pytest.raises(ValueError):
        hopf(1, 0.0)
    assert calabi_eckmann(0.2).complex_dim == 3
    assert hopf(4, 0.2).real_dim == 8
    assert hopf(3).fiber_axes == (0, 3)
    assert hopf(3).base_axes == (1, 2, 4, 5)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.family.value}-{s.n}")
def test_embedding_lands_on_spheres(spec, rng):
    for p in sample_points(rng, spec, 25):
        assert embed(p, spec).sphere_residual() < 1e-13


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.family.value}-{s.n}")
def test_chart_round_trip(spec, rng):
    for p in sample_points(rng, spec, 25):
        q = chart_coords(embed(p, spec), (0, 0), spec)
        assert point_distance(p, q) < 1e-12


@given(st.lists(coord, min_size=2, max_size=2), st.floats(0, 0.999), st.floats(0, 0.999))
@settings(max_examples=60, deadline=None)
def test_round_trip_property(base, t0, t1):
    spec = hopf(2, 0.4)
    p = ChartPoint([t0, base[0], t1, base[1]])
    q = chart_coords(embed(p, spec), (0, 0), spec)
    assert point_distance(p, q) < 1e-11


def test_fiber_lattice_is_invisible():
    spec = hopf(2, 0.1)
    p = from_complex([0.2 + 0.3j, 0.4 - 0.1j])
    for shift in (1.0, 1j, -2.0 + 3j):
        q = from_complex([0.2 + 0.3j + shift, 0.4 - 0.1j])
        a, b = embed(p, spec), embed(q, spec)
        assert np.abs(a.z - b.z).max() < 1e-12
        assert np.abs(a.zprime - b.zprime).max() < 1e-12


def test_transition_through_ambient(rng):
    spec = hopf(2, 0.5)
    for p in sample_points(rng, spec, 10, radius=1.5):
        if abs(p.base[0]) < 1e-3:
            continue
        q = chart_transition(p, (1, 0), spec)
        back = chart_transition(q, (0, 0), spec)
        assert point_distance(p.reduced(), back) < 1e-11
        # in U_1 the base coordinate is 1 / w_1
        assert abs(q.base[0] - 1 / p.base[0]) < 1e-12


def test_outside_chart_and_overlap():
    spec = hopf(2, 0.0)
    q = AmbientPoint(np.array([1.0 + 0j, 0.0]), np.array([1.0 + 0j]))
    with pytest.raises(OutsideChart):
        chart_coords(q, (1, 0), spec)
    p = from_complex([0.1, 0.0])
    with pytest.raises(OutsideOverlap):
        chart_transition(p, (1, 0), spec)


@pytest.mark.parametrize("t1,t2,expected", [(0.1, 0.9, 0.2), (0.0, 0.5j, 0.5), (0.05 + 0.05j, 0.95 + 0.95j, np.sqrt(2) * 0.1)])
def test_fiber_distance(t1, t2, expected):
    assert fiber_distance(t1, t2) == pytest.approx(expected, abs=1e-12)


def test_sampler_is_deterministic():
    spec = hopf(3, 0.2)
    a = sample_points(np.random.Generator(np.random.Philox(5)), spec, 4)
    b = sample_points(np.random.Generator(np.random.Philox(5)), spec, 4)
    assert all(np.array_equal(p.coords, q.coords) for p, q in zip(a, b))
