"""Spacelike graph surfaces over the sphere: height descriptors and jets.

A surface is a height function y(theta, phi) over the unit sphere; the
numerical engine needs its chart jets up to third order at arbitrary nodes
(analytic backends) or at the nodes of a fixed sampling grid (sampled
backend).  Heights are built from constant slices plus real spherical
harmonic perturbations evaluated through the forward-mode jets, so all
derivatives are closed-form.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import jets
from .errors import ChartPole

POLE_MARGIN = 1e-6


@dataclass(frozen=True)
class HarmonicMode:
    """One perturbation term: amplitude times Re Y_l^m."""

    amplitude: float
    degree: int
    order: int

    def __post_init__(self):
        if self.degree < 0 or not 0 <= self.order <= self.degree:
            raise ValueError(
                f"invalid mode (l={self.degree}, m={self.order}); need 0 <= m <= l"
            )


def _double_factorial(n: int) -> float:
    out = 1.0
    while n > 1:
        out *= n
        n -= 2
    return out


def _assoc_legendre_values(l, m, x, s):
    """P_l^m on plain arrays, same recurrence as the jet version."""
    pmm = ((-1.0) ** m) * _double_factorial(2 * m - 1) * s**m
    if l == m:
        return pmm
    pm1 = x * (2 * m + 1) * pmm
    if l == m + 1:
        return pm1
    for ll in range(m + 2, l + 1):
        pmm, pm1 = pm1, (x * (2 * ll - 1) * pm1 - (ll + m - 1) * pmm) / (ll - m)
    return pm1


def assoc_legendre_jet(l, m, x, s):
    """P_l^m evaluated on jets, with sin(theta) passed separately.

    ``x`` is the jet of cos(theta) and ``s`` the jet of sin(theta); using
    sin(theta) directly avoids the sqrt(1 - x^2) branch at the poles.
    Includes the Condon-Shortley phase, matching scipy's convention.
    """
    pmm = jets.Jet3.constant(((-1.0) ** m) * _double_factorial(2 * m - 1)) * s**m
    if l == m:
        return pmm
    pm1 = x * float(2 * m + 1) * pmm
    if l == m + 1:
        return pm1
    for ll in range(m + 2, l + 1):
        p = (x * float(2 * ll - 1) * pm1 - float(ll + m - 1) * pmm) * (
            1.0 / float(ll - m)
        )
        pmm, pm1 = pm1, p
    return pm1


def real_sph_harm_jet(l, m, jtheta, jphi):
    """Jet of Re Y_l^m(theta, phi) in scipy's normalization."""
    norm = math.sqrt(
        (2 * l + 1) / (4.0 * math.pi) * math.factorial(l - m) / math.factorial(l + m)
    )
    plm = assoc_legendre_jet(l, m, jets.cos(jtheta), jets.sin(jtheta))
    if m == 0:
        return norm * plm
    return norm * plm * jets.cos(float(m) * jphi)


class AnalyticSurface:
    """Height y = rho0 + sum_k eps_k Re Y_{l_k}^{m_k}, with closed-form jets."""

    backend = "analytic"

    def __init__(self, rho0: float, modes=()):
        self.rho0 = float(rho0)
        self.modes = tuple(
            m if isinstance(m, HarmonicMode) else HarmonicMode(*m) for m in modes
        )

    def __repr__(self):
        terms = ", ".join(
            f"{m.amplitude:+g}*Y({m.degree},{m.order})" for m in self.modes
        )
        return f"AnalyticSurface(rho0={self.rho0:g}{', ' + terms if terms else ''})"

    def height_jet(self, theta, phi) -> jets.Jet3:
        theta = np.asarray(theta, dtype=float)
        phi = np.asarray(phi, dtype=float)
        if np.any(np.sin(theta) < POLE_MARGIN):
            raise ChartPole("node too close to a chart pole")
        jt = jets.Jet3.variable(theta, 0)
        jp = jets.Jet3.variable(phi, 1)
        y = jets.Jet3.constant(np.full(theta.shape, self.rho0))
        for mode in self.modes:
            y = y + mode.amplitude * real_sph_harm_jet(
                mode.degree, mode.order, jt, jp
            )
        return y

    def jets(self, theta, phi):
        """Return (y, dy, d2y, d3y) arrays with node axis first."""
        return _jet_to_node_arrays(self.height_jet(theta, phi))

    def height(self, theta, phi):
        """Height values only; safe at the chart poles."""
        theta = np.asarray(theta, dtype=float)
        phi = np.asarray(phi, dtype=float)
        y = np.full(theta.shape, self.rho0)
        x = np.cos(theta)
        s = np.sin(theta)
        for mode in self.modes:
            l, m = mode.degree, mode.order
            norm = math.sqrt(
                (2 * l + 1)
                / (4.0 * math.pi)
                * math.factorial(l - m)
                / math.factorial(l + m)
            )
            plm = _assoc_legendre_values(l, m, x, s)
            y = y + mode.amplitude * norm * plm * np.cos(m * phi)
        return y

    def reflected(self):
        return AnalyticSurface(
            -self.rho0,
            [HarmonicMode(-m.amplitude, m.degree, m.order) for m in self.modes],
        )


def _jet_to_node_arrays(jet):
    y = np.asarray(jet.f, dtype=float)
    dy = np.moveaxis(np.asarray(jet.d), 0, -1)
    d2y = np.moveaxis(np.asarray(jet.d2), (0, 1), (-2, -1))
    d3y = np.moveaxis(np.asarray(jet.d3), (0, 1, 2), (-3, -2, -1))
    return (
        np.ascontiguousarray(y),
        np.ascontiguousarray(dy),
        np.ascontiguousarray(d2y),
        np.ascontiguousarray(d3y),
    )


class SampledGridSurface:
    """Heights sampled on a pole-free (theta, phi) grid; jets by stencils.

    The grid is cell-centered in theta, theta_i = (i + 1/2) pi / n_theta,
    and uniform periodic in phi.  Derivatives use second-order central
    differences; theta rows next to the poles are closed with ghost rows
    obtained by reflecting across the pole (phi shifted by pi), which
    keeps every stencil central.  Requires n_phi even.
    """

    backend = "sampled"

    def __init__(self, values, n_theta=None, n_phi=None):
        values = np.asarray(values, dtype=float)
        if values.ndim != 2:
            raise ValueError("expected a 2-d grid of heights")
        if n_theta is not None and values.shape != (n_theta, n_phi):
            raise ValueError("grid shape does not match declared resolution")
        if values.shape[1] % 2 != 0:
            raise ValueError("n_phi must be even for pole reflection")
        self.values = values
        self.n_theta, self.n_phi = values.shape
        self.theta_grid = (np.arange(self.n_theta) + 0.5) * math.pi / self.n_theta
        self.phi_grid = np.arange(self.n_phi) * 2.0 * math.pi / self.n_phi

    @classmethod
    def from_height(cls, surface, n_theta, n_phi):
        """Sample another surface's heights on the standard grid."""
        grid = cls(np.zeros((n_theta, n_phi)))
        tt, pp = np.meshgrid(grid.theta_grid, grid.phi_grid, indexing="ij")
        y, _, _, _ = surface.jets(tt.ravel(), pp.ravel())
        return cls(y.reshape(n_theta, n_phi))

    def nodes(self):
        tt, pp = np.meshgrid(self.theta_grid, self.phi_grid, indexing="ij")
        return tt.ravel(), pp.ravel()

    def grid_jets(self):
        """Jets (y, dy, d2y, d3y) at every grid node, flattened theta-major."""
        return grid_scalar_jets(self.values)

    def reflected(self):
        return SampledGridSurface(-self.values)


def pole_extend(values, pad):
    """Ghost rows across both poles for a scalar field on the sphere.

    A smooth scalar satisfies F(-theta, phi) = F(theta, phi + pi), so the
    extension is a reversed block with a half-turn in phi; every theta
    stencil then stays central.
    """
    shift = values.shape[1] // 2
    top = np.roll(values[:pad][::-1], shift, axis=1)
    bot = np.roll(values[-pad:][::-1], shift, axis=1)
    return np.concatenate([top, values, bot], axis=0)


def grid_scalar_derivatives(values, order=2):
    """Central-difference derivatives of a scalar grid field.

    Returns a dict with keys 't', 'p', 'tt', 'tp', 'pp' (plus the third
    derivatives 'ttt', 'ttp', 'tpp', 'ppp' when order = 3), every array
    shaped like ``values``.  Second-order accurate everywhere.
    """
    n_theta, n_phi = values.shape
    pad = 3
    ext = pole_extend(values, pad)
    ht = math.pi / n_theta
    hp = 2.0 * math.pi / n_phi

    def d_theta(arr):
        return (arr[pad + 1 : pad + 1 + n_theta] - arr[pad - 1 : pad - 1 + n_theta]) / (2 * ht)

    def d2_theta(arr):
        core = arr[pad : pad + n_theta]
        return (
            arr[pad + 1 : pad + 1 + n_theta]
            - 2 * core
            + arr[pad - 1 : pad - 1 + n_theta]
        ) / ht**2

    def d3_theta(arr):
        return (
            arr[pad + 2 : pad + 2 + n_theta]
            - 2 * arr[pad + 1 : pad + 1 + n_theta]
            + 2 * arr[pad - 1 : pad - 1 + n_theta]
            - arr[pad - 2 : pad - 2 + n_theta]
        ) / (2 * ht**3)

    def d_phi(arr):
        return (np.roll(arr, -1, axis=1) - np.roll(arr, 1, axis=1)) / (2 * hp)

    def d2_phi(arr):
        return (np.roll(arr, -1, axis=1) - 2 * arr + np.roll(arr, 1, axis=1)) / hp**2

    def d3_phi(arr):
        return (
            np.roll(arr, -2, axis=1)
            - 2 * np.roll(arr, -1, axis=1)
            + 2 * np.roll(arr, 1, axis=1)
            - np.roll(arr, 2, axis=1)
        ) / (2 * hp**3)

    out = {
        "t": d_theta(ext),
        "p": d_phi(values),
        "tt": d2_theta(ext),
        "tp": d_phi(d_theta(ext)),
        "pp": d2_phi(values),
    }
    if order >= 3:
        out["ttt"] = d3_theta(ext)
        out["ttp"] = d_phi(d2_theta(ext))
        out["tpp"] = d2_phi(d_theta(ext))
        out["ppp"] = d3_phi(values)
    return out


def grid_scalar_jets(values):
    """Node-major jet arrays (y, dy, d2y, d3y) for a sampled scalar field."""
    d = grid_scalar_derivatives(values, order=3)
    n = values.size
    dy = np.stack([d["t"], d["p"]], axis=-1).reshape(n, 2)
    d2y = np.empty((n, 2, 2))
    d2y[:, 0, 0] = d["tt"].ravel()
    d2y[:, 0, 1] = d2y[:, 1, 0] = d["tp"].ravel()
    d2y[:, 1, 1] = d["pp"].ravel()
    d3y = np.empty((n, 2, 2, 2))
    d3y[:, 0, 0, 0] = d["ttt"].ravel()
    d3y[:, 0, 0, 1] = d3y[:, 0, 1, 0] = d3y[:, 1, 0, 0] = d["ttp"].ravel()
    d3y[:, 0, 1, 1] = d3y[:, 1, 0, 1] = d3y[:, 1, 1, 0] = d["tpp"].ravel()
    d3y[:, 1, 1, 1] = d["ppp"].ravel()
    return np.ascontiguousarray(values.ravel(), dtype=float), dy, d2y, d3y


class NegatedSurface:
    """View of another surface with height negated (reflection in rho=0)."""

    backend = "analytic"

    def __init__(self, base):
        self.base = base

    def jets(self, theta, phi):
        y, dy, d2y, d3y = self.base.jets(theta, phi)
        return -y, -dy, -d2y, -d3y

    def height_jet(self, theta, phi):
        j = self.base.height_jet(theta, phi)
        return jets.Jet3(-j.f, -j.d, -j.d2, -j.d3)

    def height(self, theta, phi):
        return -self.base.height(theta, phi)

    def reflected(self):
        return self.base


def reflect_surface(surface):
    """Mirror a surface across the equator: y -> -y.

    At corresponding nodes the shape operator changes sign under the
    future-directed normal convention.
    """
    if hasattr(surface, "reflected"):
        return surface.reflected()
    return NegatedSurface(surface)
