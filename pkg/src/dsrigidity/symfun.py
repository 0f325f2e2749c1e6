"""Elementary symmetric functions of self-adjoint operators and their cones.

Everything here treats an operator through its matrix in some frame.  The
second symmetric function is evaluated entrywise,

    sigma2(W) = sum_{i<j} w_ii w_jj - w_ij w_ji,

which is basis-independent and exact for rational input (no eigensolver).
The positivity cone of sigma2 relative to the identity direction is read
off the quadratic t -> sigma2(W + t I), whose roots are real for every
symmetric W.
"""

from dataclasses import dataclass
from enum import Enum
from math import comb

import numpy as np

from .errors import DimensionMismatch, NonHyperbolic, NotInCone

#: absolute tolerance on cone roots for the Boundary label
BOUNDARY_TOL = 1e-12
#: relative tolerance for detecting the equality case of the cone inequality
EQUALITY_TOL = 1e-10
#: discriminants below -HYPERBOLICITY_TOL * scale signal non-symmetric input
HYPERBOLICITY_TOL = 1e-9


class ConeLabel(Enum):
    PLUS = "PlusCone"
    MINUS = "MinusCone"
    OUTSIDE = "Outside"
    BOUNDARY = "Boundary"


@dataclass(frozen=True, eq=False)
class SymOperator:
    """A symmetric n x n matrix (2 <= n <= 8), symmetrized at construction."""

    entries: np.ndarray

    def __init__(self, entries):
        entries = np.asarray(entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got {entries.shape}")
        n = entries.shape[0]
        if not 2 <= n <= 8:
            raise DimensionMismatch(f"dimension {n} outside supported range 2..8")
        if not np.all(np.isfinite(entries)):
            raise ValueError("matrix entries must be finite")
        sym = 0.5 * (entries + entries.T)
        sym.setflags(write=False)
        object.__setattr__(self, "entries", sym)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class ConeReport:
    """Roots of t -> sigma2(W + t I) and the resulting cone label."""

    roots: tuple
    label: ConeLabel


@dataclass(frozen=True)
class GardingGap:
    """Polarized form versus geometric mean for a pair in the plus cone."""

    sigma11: float
    geo_mean: float
    gap: float
    equality: bool


def _mat(w) -> np.ndarray:
    if isinstance(w, SymOperator):
        return w.entries
    return np.asarray(w, dtype=float)


def sigma1(w) -> float:
    """Trace of the operator (first symmetric function)."""
    return float(np.trace(_mat(w)))


def sigma2(w) -> float:
    """Second symmetric function via the entrywise pair formula."""
    m = _mat(w)
    n = m.shape[0]
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            total += m[i, i] * m[j, j] - m[i, j] * m[j, i]
    return total


def sigma_all(w) -> list:
    """All symmetric functions (sigma_0 .. sigma_n) via Newton's identities.

    These are the signed coefficients of the characteristic polynomial;
    no eigendecomposition is performed.
    """
    m = _mat(w)
    n = m.shape[0]
    powers = [np.eye(n)]
    for _ in range(n):
        powers.append(powers[-1] @ m)
    p = [float(np.trace(powers[k])) for k in range(n + 1)]  # power sums, p[0]=n
    e = [1.0]
    for k in range(1, n + 1):
        acc = 0.0
        for j in range(1, k + 1):
            acc += (-1.0) ** (j - 1) * e[k - j] * p[j]
        e.append(acc / k)
    return e


def d_sigma2(w) -> np.ndarray:
    """Entrywise derivative of sigma2: sigma1(W) I - W^T."""
    m = _mat(w)
    return sigma1(m) * np.eye(m.shape[0]) - m.T


def sigma11(w, wt) -> float:
    """Polarized form of sigma2: 0.5 sum_ij d(sigma2)/dw_ij(W) wt_ij."""
    a, b = _mat(w), _mat(wt)
    if a.shape != b.shape:
        raise DimensionMismatch(f"operator shapes differ: {a.shape} vs {b.shape}")
    return 0.5 * float(np.sum(d_sigma2(a) * b))


def cone_line_coefficients(w):
    """Quadratic coefficients (a, b, c) of t -> sigma2(W + t I).

    a = n(n-1)/2, b = (n-1) sigma1(W), c = sigma2(W).
    """
    m = _mat(w)
    n = m.shape[0]
    return n * (n - 1) / 2.0, (n - 1) * sigma1(m), sigma2(m)


def cone_classify(w) -> ConeReport:
    """Classify an operator against the sigma2 positivity cones."""
    a, b, c = cone_line_coefficients(w)
    disc = b * b - 4.0 * a * c
    scale = max(b * b, abs(4.0 * a * c))
    if disc < -HYPERBOLICITY_TOL * max(scale, 1.0):
        raise NonHyperbolic(
            f"negative discriminant {disc:.3e} at scale {scale:.3e}"
        )
    root = np.sqrt(max(disc, 0.0))
    t1 = (-b - root) / (2.0 * a)
    t2 = (-b + root) / (2.0 * a)
    if abs(t1) <= BOUNDARY_TOL or abs(t2) <= BOUNDARY_TOL:
        label = ConeLabel.BOUNDARY
    elif t2 < 0.0:
        label = ConeLabel.PLUS
    elif t1 > 0.0:
        label = ConeLabel.MINUS
    else:
        label = ConeLabel.OUTSIDE
    return ConeReport(roots=(t1, t2), label=label)


def garding_gap(w, wt) -> GardingGap:
    """Gap of the degree-two cone inequality for a plus-cone pair.

    sigma11(W, Wt) >= sqrt(sigma2(W) sigma2(Wt)) whenever both operators
    lie in the plus cone, with equality exactly for proportional pairs.
    """
    a, b = _mat(w), _mat(wt)
    if a.shape != b.shape:
        raise DimensionMismatch(f"operator shapes differ: {a.shape} vs {b.shape}")
    for name, m in (("first", a), ("second", b)):
        label = cone_classify(m).label
        if label is not ConeLabel.PLUS:
            raise NotInCone(f"{name} operator is {label.value}, not PlusCone")
    s11 = sigma11(a, b)
    geo = float(np.sqrt(sigma2(a) * sigma2(b)))
    gap = s11 - geo
    equality = gap <= EQUALITY_TOL * max(1.0, abs(geo))
    return GardingGap(sigma11=s11, geo_mean=geo, gap=gap, equality=equality)


def proportionality_scalar(w, wt) -> float:
    """Scalar c with Wt ~ c W: trace ratio, else Frobenius least squares."""
    a, b = _mat(w), _mat(wt)
    t = sigma1(a)
    if t != 0.0:
        return sigma1(b) / t
    denom = float(np.sum(a * a))
    return float(np.sum(a * b)) / denom


def sigma_line_coefficients(w, k) -> np.ndarray:
    """Coefficients (descending in t) of t -> sigma_k(W + t I).

    sigma_k(W + t I) = sum_{j=0..k} C(n-j, k-j) sigma_j(W) t^(k-j).
    """
    m = _mat(w)
    n = m.shape[0]
    sig = sigma_all(m)
    return np.array([comb(n - j, k - j) * sig[j] for j in range(k + 1)])
