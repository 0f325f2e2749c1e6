import math

import numpy as np
import pytest
from scipy.special import sph_harm_y

from dsrigidity import jets
from dsrigidity.errors import ChartPole
from dsrigidity.surfaces import (
    AnalyticSurface,
    HarmonicMode,
    SampledGridSurface,
    grid_scalar_derivatives,
    real_sph_harm_jet,
    reflect_surface,
)


@pytest.mark.parametrize("l,m", [(0, 0), (1, 0), (2, 0), (2, 1), (3, 1), (5, 3), (8, 8)])
def test_real_harmonics_match_scipy(l, m):
    rng = np.random.default_rng(l * 10 + m)
    theta = rng.uniform(0.05, math.pi - 0.05, 60)
    phi = rng.uniform(0.0, 2.0 * math.pi, 60)
    jt = jets.Jet3.variable(theta, 0)
    jp = jets.Jet3.variable(phi, 1)
    ours = real_sph_harm_jet(l, m, jt, jp)
    ref = sph_harm_y(l, m, theta, phi).real
    assert np.abs(ours.f - ref).max() < 1e-12


def test_harmonic_jets_match_finite_differences():
    theta = np.linspace(0.4, 2.7, 25)
    phi = np.linspace(0.1, 6.1, 25)
    surf = AnalyticSurface(0.5, [(0.1, 3, 1), (0.05, 2, 0)])
    y, dy, d2y, d3y = surf.jets(theta, phi)
    h = 1e-5

    def val(t, p):
        return surf.jets(t, p)[0]

    dt = (val(theta + h, phi) - val(theta - h, phi)) / (2 * h)
    dp = (val(theta, phi + h) - val(theta, phi - h)) / (2 * h)
    assert np.abs(dy[:, 0] - dt).max() < 1e-9
    assert np.abs(dy[:, 1] - dp).max() < 1e-9
    dtt = (val(theta + h, phi) - 2 * val(theta, phi) + val(theta - h, phi)) / h**2
    assert np.abs(d2y[:, 0, 0] - dtt).max() < 1e-5

    def hess(t, p):
        return surf.jets(t, p)[2]

    d3_fd = (hess(theta + h, phi) - hess(theta - h, phi)) / (2 * h)
    assert np.abs(d3y[:, :, :, 0].transpose(1, 2, 0) - d3_fd.transpose(1, 2, 0)).max() < 1e-6


def test_height_values_agree_with_jets_and_allow_poles():
    surf = AnalyticSurface(0.4, [(0.07, 4, 2)])
    theta = np.linspace(0.2, 2.9, 17)
    phi = np.linspace(0.0, 6.2, 17)
    y, _, _, _ = surf.jets(theta, phi)
    np.testing.assert_allclose(surf.height(theta, phi), y, atol=1e-14)
    # value evaluation is defined at the poles themselves
    at_pole = surf.height(np.array([0.0, math.pi]), np.array([0.3, 1.1]))
    assert np.all(np.isfinite(at_pole))
    with pytest.raises(ChartPole):
        surf.jets(np.array([1e-9]), np.array([0.0]))


def test_mode_validation():
    with pytest.raises(ValueError):
        HarmonicMode(0.1, 2, 3)
    with pytest.raises(ValueError):
        HarmonicMode(0.1, 2, -1)


def test_reflection_negates_heights_and_round_trips():
    surf = AnalyticSurface(0.5, [(0.05, 2, 0)])
    mirrored = reflect_surface(surf)
    theta = np.linspace(0.3, 2.8, 11)
    phi = np.linspace(0.0, 6.0, 11)
    y, dy, _, _ = surf.jets(theta, phi)
    ym, dym, _, _ = mirrored.jets(theta, phi)
    np.testing.assert_allclose(ym, -y, atol=1e-15)
    np.testing.assert_allclose(dym, -dy, atol=1e-15)
    again = reflect_surface(mirrored)
    np.testing.assert_allclose(again.jets(theta, phi)[0], y, atol=1e-15)


def test_sampled_grid_jets_converge_at_second_order():
    surf = AnalyticSurface(0.6, [(0.05, 2, 0), (0.02, 3, 1)])
    errors = []
    for n in (32, 64, 128):
        grid = SampledGridSurface.from_height(surf, n, 2 * n)
        tt, pp = grid.nodes()
        y_t, dy_t, d2y_t, _ = surf.jets(tt, pp)
        y_s, dy_s, d2y_s, _ = grid.grid_jets()
        np.testing.assert_allclose(y_s, y_t, atol=1e-14)
        errors.append(np.abs(d2y_s - d2y_t).max())
    assert errors[0] / errors[1] > 3.0
    assert errors[1] / errors[2] > 3.0


def test_pole_reflection_extension_is_exact_for_smooth_fields():
    surf = AnalyticSurface(0.3, [(0.05, 3, 2)])
    grid = SampledGridSurface.from_height(surf, 24, 48)
    d = grid_scalar_derivatives(grid.values, order=2)
    # first theta row uses ghost rows; compare against the analytic derivative
    tt, pp = grid.nodes()
    _, dy_t, _, _ = surf.jets(tt, pp)
    dt = d["t"].ravel()
    assert np.abs(dt - dy_t[:, 0]).max() < 5e-3


def test_sampled_grid_validation():
    with pytest.raises(ValueError):
        SampledGridSurface(np.zeros((8, 7)))  # odd phi count
    with pytest.raises(ValueError):
        SampledGridSurface(np.zeros(8))
    with pytest.raises(ValueError):
        SampledGridSurface(np.zeros((8, 16)), 4, 16)
