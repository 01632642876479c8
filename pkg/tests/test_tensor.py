import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lckhopf.charts import ChartPoint, calabi_eckmann, hopf, sample_points
from lckhopf.tensor import (christoffel, complex_curvature, complex_curvature_closed_form,
                            complex_curvature_multilinear, connection, fiber_antisymmetric_first_partials,
                            fiber_identity_residuals, riemann, surface_identity_residuals, symmetry_residual)
from oracles import fd_christoffel, fd_riemann

EPS = [0.0, 0.25, 0.5, 0.75, 1.0]


@pytest.mark.parametrize("spec", [hopf(2, 0.0), hopf(2, 1.0), hopf(3, 0.5), calabi_eckmann(0.6)],
                         ids=["s0", "s1", "n3", "threefold"])
def test_christoffel_against_finite_differences(spec, rng):
    for p in sample_points(rng, spec, 3, radius=1.5):
        assert np.abs(christoffel(p, spec) - fd_christoffel(p.coords, spec)).max() < 1e-8


@pytest.mark.parametrize("eps", [0.0, 0.7])
def test_riemann_against_finite_differences(eps):
    spec = hopf(2, eps)
    for x in ([0.0, 0.5, 0.0, -0.8], [0.3, 1.2, 0.1, 0.4]):
        R = riemann(ChartPoint(x), spec)
        assert np.abs(R - fd_riemann(x, spec)).max() < 1e-5


@pytest.mark.parametrize("spec", [hopf(2, 0.3), hopf(3, 0.8), hopf(4, 0.1), calabi_eckmann(0.9)],
                         ids=["surface", "n3", "n4", "threefold"])
def test_riemann_symmetries(spec, rng):
    for p in sample_points(rng, spec, 10):
        assert symmetry_residual(riemann(p, spec)) < 1e-10


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 1))
@settings(max_examples=60, deadline=None)
def test_surface_identities_property(x1, x3, eps):
    res = surface_identity_residuals(ChartPoint([0.0, x1, 0.0, x3]), hopf(2, eps))
    assert max(res.values()) < 1e-9


@pytest.mark.parametrize("eps", EPS)
def test_surface_identities(eps, rng):
    spec = hopf(2, eps)
    for p in sample_points(rng, spec, 50):
        res = surface_identity_residuals(p, spec)
        zero = max(v for k, v in res.items() if k.endswith("_zero"))
        other = max(v for k, v in res.items() if not k.endswith("_zero"))
        assert zero < 1e-10
        assert other < 1e-9


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("eps", [0.0, 0.5, 1.0])
def test_fiber_identities(n, eps, rng):
    spec = hopf(n, eps)
    for p in sample_points(rng, spec, 20):
        assert max(fiber_identity_residuals(p, spec).values()) < 1e-9


@pytest.mark.parametrize("n", [2, 3, 4])
def test_fiber_partials_vanish_linearly_at_special_fiber(n):
    """|g_0p,q - g_0q,p| / |w'| stays bounded along |w'| = 2^-k."""
    spec = hopf(n, 0.5)
    direction = np.ones(n - 1) * (0.6 + 0.8j) / np.sqrt(n - 1)
    ratios = []
    for k in range(1, 11):
        w = 2.0 ** -k * direction
        p = ChartPoint(np.concatenate([[0.2], w.real, [0.1], w.imag]))
        ratios.append(fiber_antisymmetric_first_partials(p, spec) / 2.0 ** -k)
    assert max(ratios) < 1.0
    assert ratios[-1] <= ratios[0]


def test_geometry_is_fiber_independent():
    spec = hopf(2, 0.4)
    a = connection(ChartPoint([0.0, 0.3, 0.0, 0.5]), spec)
    b = connection(ChartPoint([0.37, 0.3, 0.81, 0.5]), spec)
    assert np.abs(a.gamma - b.gamma).max() < 1e-14
    assert np.abs(a.riemann - b.riemann).max() < 1e-13


@pytest.mark.parametrize("eps", EPS)
def test_complex_curvature_closed_form(eps, rng):
    spec = hopf(2, eps)
    for p in sample_points(rng, spec, 50):
        k = complex_curvature(p, spec)
        assert k >= -1e-12
        assert abs(k - complex_curvature_closed_form(p, spec)) < 1e-9


def test_complex_curvature_reference_value():
    # eps = 0, x1 = 0, x3 = 1: pi^2 r^4 / (4 A^2) with r = 1, A = 2
    p = ChartPoint([0.0, 0.0, 0.0, 1.0])
    assert complex_curvature(p, hopf(2, 0.0)) == pytest.approx(np.pi ** 2 / 16, abs=1e-12)


def test_complex_curvature_normalization(rng):
    spec = hopf(2, 0.5)
    for p in sample_points(rng, spec, 5):
        k = complex_curvature(p, spec)
        assert complex_curvature_multilinear(p, spec) == pytest.approx(k, abs=1e-12)
        assert 16 * complex_curvature_multilinear(p, spec, scale=0.5) == pytest.approx(k, abs=1e-12)


@pytest.mark.parametrize("eps", [0.0, 1.0])
def test_complex_curvature_zero_locus(eps):
    spec = hopf(2, eps)
    assert complex_curvature(ChartPoint([0.2, 0.0, 0.7, 0.0]), spec) < 1e-10
    for x1, x3 in [(1e-2, 0.0), (0.5, 0.5), (0.0, 2.0)]:
        p = ChartPoint([0.0, x1, 0.0, x3])
        assert (complex_curvature(p, spec) < 1e-10) == (complex_curvature_closed_form(p, spec) < 1e-10)


def test_surface_only():
    with pytest.raises(ValueError):
        complex_curvature(ChartPoint([0] * 6), hopf(3, 0.0))
