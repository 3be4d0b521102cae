"""Cusp-opening smoothing of the hyperbolic tube metric.

Near a singular geodesic the hyperbolic metric ``dδ² + sinh²δ dα² + cosh²δ dz²``
is replaced by ``φ(δ)² dδ² + sinh²δ dα² + ψ(δ)² dz²``.  The profile agrees with
the hyperbolic one for ``δ >= ε``, while ``δ φ(δ)`` and ``ψ(δ)/δ`` stay bounded
as ``δ -> 0`` so the core is pushed off to infinity (the metric is complete).

This module provides the default profile, the Levi-Civita connection table,
the three coordinate sectional curvatures in closed form, and an independent
finite-difference curvature oracle.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import HypconeError
from .quadrature import integrate

DEFAULT_EPSILON = 0.1
# default-profile blow-up constant, relative to coth(ε)
KAPPA_FACTOR = 1.2


class SmoothingProfile:
    """A pair (φ, ψ) with derivatives, equal to (1, cosh δ) for ``δ >= epsilon``.

    The callables passed to the constructor only describe the modified region
    ``0 < δ < epsilon``; evaluation methods switch to the exact hyperbolic
    values beyond it.  Each callable must accept numpy arrays.
    """

    __slots__ = ("epsilon", "_phi", "_dphi", "_psi", "_dpsi", "_ddpsi", "name")

    def __init__(self, epsilon, phi, dphi, psi, dpsi, ddpsi, name="custom"):
        if not epsilon > 0:
            raise HypconeError("epsilon must be positive", field="epsilon")
        self.epsilon = float(epsilon)
        self._phi, self._dphi = phi, dphi
        self._psi, self._dpsi, self._ddpsi = psi, dpsi, ddpsi
        self.name = name

    def __repr__(self):
        return f"SmoothingProfile({self.name!r}, epsilon={self.epsilon})"

    @classmethod
    def from_functions(cls, epsilon, phi, dphi, psi, dpsi, ddpsi, name="custom"):
        return cls(epsilon, phi, dphi, psi, dpsi, ddpsi, name)

    def _select(self, delta, inner, outer):
        # extended-precision input stays extended (the curvature oracle relies on it)
        d = np.asarray(delta)
        if d.dtype != np.longdouble:
            d = d.astype(float)
        if np.any(d <= 0):
            raise HypconeError("delta must be positive", field="delta")
        inside = d < self.epsilon
        out = np.array(outer(d), dtype=d.dtype)
        if np.any(inside):
            if out.ndim:
                out[inside] = inner(d[inside])
            else:
                out = np.array(inner(d), dtype=d.dtype)
        if out.ndim:
            return out
        return out[()] if d.dtype == np.longdouble else float(out)

    def phi(self, delta):
        return self._select(delta, self._phi, np.ones_like)

    def dphi(self, delta):
        return self._select(delta, self._dphi, np.zeros_like)

    def psi(self, delta):
        return self._select(delta, self._psi, np.cosh)

    def dpsi(self, delta):
        return self._select(delta, self._dpsi, np.sinh)

    def ddpsi(self, delta):
        return self._select(delta, self._ddpsi, np.cosh)

    def metric(self, delta):
        """Diagonal metric coefficients (g_δδ, g_αα, g_zz)."""
        return np.array([self.phi(delta) ** 2, np.sinh(delta) ** 2, self.psi(delta) ** 2])


def _smoothstep(s):
    return s ** 3 * (10.0 - 15.0 * s + 6.0 * s * s)


def _dsmoothstep(s):
    return 30.0 * s * s * (s - 1.0) ** 2


def default_profile(epsilon=DEFAULT_EPSILON, kappa=None):
    """The built-in negatively curved profile.

    ``φ = 1 + κ (1/δ - 1/ε)(1 - h(δ/ε))`` with the quintic smoothstep ``h``, so
    ``φ - 1`` vanishes to fourth order at ``ε`` and ``δ φ -> κ`` at the core.  ψ is
    defined through the arc length ``r(δ) = ε - ∫_δ^ε φ`` as ``ψ = G(r)`` where
    ``G`` is a positive combination of two exponentials matching ``cosh`` to
    second order at ``r = ε``.  Then ``K13 = -G''/G`` and ``K23`` are negative
    because ``G`` is increasing and convex, and ``K12 < 0`` because φ decreases.
    The slow exponent ``1/κ`` makes ``ψ`` vanish linearly in δ.
    """
    eps = float(epsilon)
    if not eps > 0:
        raise HypconeError("epsilon must be positive", field="epsilon")
    C, S = math.cosh(eps), math.sinh(eps)
    kappa = KAPPA_FACTOR * C / S if kappa is None else float(kappa)
    if not kappa > eps:
        raise HypconeError("kappa must exceed epsilon so that phi decreases", field="kappa")
    mu1 = 1.0 / kappa
    if not S - C * mu1 > 0:
        raise HypconeError("kappa too small: G would not be convex", field="kappa")
    mu2 = C * (1.0 - mu1 * mu1) / (S - C * mu1) - mu1
    p2 = (S - C * mu1) / (mu2 - mu1)
    p1 = C - p2

    # antiderivatives in s = δ/ε of h and of (1 - h)/s
    def F(s):
        return s ** 4 * (2.5 - 3.0 * s + s * s)

    def Q(s):
        return np.log(s) - s ** 3 * (10.0 / 3.0 - 3.75 * s + 1.2 * s * s)

    F1, Q1 = F(1.0), Q(1.0)

    def r(d):
        # r = ε - ∫_δ^ε φ, with ∫_s^1 (1/s - 1)(1 - h) ds = Q(1) - Q(s) - (1 - F(1)) + (s - F(s))
        s = d / eps
        return eps - (eps * (1.0 - s) + kappa * (Q1 - Q(s) - (1.0 - F1) + (s - F(s))))

    def G(x, k=0):
        x = x - eps
        return p1 * mu1 ** k * np.exp(mu1 * x) + p2 * mu2 ** k * np.exp(mu2 * x)

    def phi(d):
        return 1.0 + kappa * (1.0 / d - 1.0 / eps) * (1.0 - _smoothstep(d / eps))

    def dphi(d):
        s = d / eps
        return -kappa * ((1.0 - _smoothstep(s)) / (d * d) + (1.0 / d - 1.0 / eps) * _dsmoothstep(s) / eps)

    def psi(d):
        return G(r(d))

    def dpsi(d):
        return G(r(d), 1) * phi(d)

    def ddpsi(d):
        x = r(d)
        return G(x, 2) * phi(d) ** 2 + G(x, 1) * dphi(d)

    prof = SmoothingProfile(eps, phi, dphi, psi, dpsi, ddpsi, name="default")
    return prof


def _check_delta(delta):
    if not delta > 0:
        raise HypconeError("delta must be positive", field="delta")


def christoffel(P, delta):
    """Connection coefficients in the frame (∂_δ, ∂_α, ∂_z).

    Entry ``[i, j]`` is the single nonzero coefficient of ``∇_i ∂_j``: the
    ``∂_j`` component when ``i != j`` or ``i = j = 1``, and the ``∂_δ``
    component for ``i = j`` in {2, 3}.  Indices are zero-based.
    """
    _check_delta(delta)
    phi, dphi = P.phi(delta), P.dphi(delta)
    psi, dpsi = P.psi(delta), P.dpsi(delta)
    coth = 1.0 / math.tanh(delta)
    T = np.zeros((3, 3))
    T[0, 0] = dphi / phi
    T[0, 1] = T[1, 0] = coth
    T[0, 2] = T[2, 0] = dpsi / psi
    T[1, 1] = -math.sinh(delta) * math.cosh(delta) / phi ** 2
    T[2, 2] = -psi * dpsi / phi ** 2
    return T


def sectional_curvatures(P, delta):
    """Closed-form (K12, K13, K23) of the modified metric at radius δ."""
    _check_delta(delta)
    phi, dphi = P.phi(delta), P.dphi(delta)
    psi, dpsi, ddpsi = P.psi(delta), P.dpsi(delta), P.ddpsi(delta)
    coth = 1.0 / math.tanh(delta)
    k12 = (dphi * coth / phi - 1.0) / phi ** 2
    k13 = -(ddpsi / psi - dphi * dpsi / (phi * psi)) / phi ** 2
    k23 = -dpsi * coth / (phi ** 2 * psi)
    return k12, k13, k23


def _fd_curvature(metric, x, h):
    g = np.asarray(metric(x))
    one = g.dtype.type(1)

    def gamma(x0):
        # only ∂_1 of the metric is nonzero; G[k, i, j] = Γ^k_ij
        g0 = np.asarray(metric(x0))
        dg = (np.asarray(metric(x0 + h)) - np.asarray(metric(x0 - h))) / (2 * h)
        G = np.zeros((3, 3, 3), dtype=g0.dtype)
        for k in range(3):
            for i in range(3):
                for j in range(3):
                    t = 0 * one
                    if j == k and i == 0:
                        t += dg[k]
                    if i == k and j == 0:
                        t += dg[k]
                    if i == j and k == 0:
                        t -= dg[i]
                    G[k, i, j] = t / (2 * g0[k])
        return G

    G = gamma(x)
    dG = np.zeros((3, 3, 3, 3), dtype=g.dtype)  # dG[a, k, i, j] = ∂_a Γ^k_ij
    dG[0] = (gamma(x + h) - gamma(x - h)) / (2 * h)
    # R^l_{ijk} = ∂_j Γ^l_{ik} - ∂_k Γ^l_{ij} + Γ^l_{jm} Γ^m_{ik} - Γ^l_{km} Γ^m_{ij}
    R = (np.einsum("jlik->lijk", dG) - np.einsum("klij->lijk", dG)
         + np.einsum("ljm,mik->lijk", G, G) - np.einsum("lkm,mij->lijk", G, G))
    # R(∂_j, ∂_k)∂_i = R^l_{ijk} ∂_l, so <R(∂_a, ∂_b)∂_b, ∂_a> = R^a_{bab} g_aa
    K = np.zeros((3, 3), dtype=g.dtype)
    for a in range(3):
        for b in range(3):
            if a != b:
                K[a, b] = R[a, b, a, b] * g[a] / (g[a] * g[b])
    return K


def diagonal_curvature_fd(metric, x, h, richardson=True):
    """Coordinate sectional curvatures of a diagonal metric depending on x¹ only.

    ``metric(x)`` returns the three diagonal coefficients.  Christoffel
    symbols come from central differences of the metric and their derivative
    from central differences of those.  With ``richardson`` the results for
    steps ``h`` and ``h/2`` are combined to cancel the leading ``h²`` error.
    Arithmetic follows the dtype of ``x``.  Returns ``K[i, j]``, the
    curvature of the plane spanned by ``∂_i, ∂_j``.
    """
    K = _fd_curvature(metric, x, h)
    if not richardson:
        return K
    return (4 * _fd_curvature(metric, x, h / 2) - K) / 3


def curvature_oracle(P, delta, h=1e-4):
    """Finite-difference (K12, K13, K23), independent of the closed forms.

    Differences are taken in the coordinate ``u = log δ`` (metric coefficient
    ``φ² δ²``), which keeps the relative step uniform near the core, in
    extended precision and with Richardson extrapolation.  Sectional
    curvature does not depend on the coordinate choice.  The profiles here
    are only C² across ``δ = ε``; a stencil straddling it triggers a warning.
    """
    _check_delta(delta)
    if not (h > 0 and 2.0 * h < 1.0):
        raise HypconeError("step must satisfy 0 < 2h < 1 in the log coordinate", field="h")
    eps = P.epsilon
    if abs(math.log(delta / eps)) < 2.0 * h:
        warnings.warn("finite-difference stencil straddles the smoothing junction", RuntimeWarning)

    def metric(u):
        d = np.exp(u)
        return np.array([(P.phi(d) * d) ** 2, np.sinh(d) ** 2, P.psi(d) ** 2])

    K = diagonal_curvature_fd(metric, np.log(np.longdouble(delta)), np.longdouble(h))
    return float(K[0, 1]), float(K[0, 2]), float(K[1, 2])


# a C² join disagrees with the oracle by O(h) at the junction, a kink by O(1/h)
JUNCTION_TOLERANCE = 1e-2


@dataclass
class CurvatureReport:
    epsilon: float
    grid: np.ndarray
    K12: np.ndarray
    K13: np.ndarray
    K23: np.ndarray
    oracle_max_deviation: float
    junction_deviation: float
    volume_element_integral: float

    @property
    def min(self):
        return float(min(self.K12.min(), self.K13.min(), self.K23.min()))

    @property
    def max(self):
        return float(max(self.K12.max(), self.K13.max(), self.K23.max()))

    @property
    def negative(self):
        return self.max < 0

    @property
    def junction_smooth(self):
        return self.junction_deviation < JUNCTION_TOLERANCE

    def to_json(self):
        planes = {"K12": self.K12, "K13": self.K13, "K23": self.K23}
        return {
            "epsilon": self.epsilon,
            "grid_size": int(self.grid.size),
            "grid_range": [float(self.grid[0]), float(self.grid[-1])],
            "min": self.min,
            "max": self.max,
            "negative": self.negative,
            "min_by_plane": {k: float(v.min()) for k, v in planes.items()},
            "max_by_plane": {k: float(v.max()) for k, v in planes.items()},
            "oracle_max_deviation": self.oracle_max_deviation,
            "junction_deviation": self.junction_deviation,
            "junction_smooth": self.junction_smooth,
            "volume_element_integral": self.volume_element_integral,
        }

    def rows(self):
        return [(float(d), float(a), float(b), float(c)) for d, a, b, c in zip(self.grid, self.K12, self.K13, self.K23)]


def negativity_check(P, grid_size=1000, lo=None, hi=None, oracle_h=1e-4, oracle_samples=50):
    """Evaluate the closed-form curvatures on a log-spaced grid over ``[lo, hi]``.

    Defaults to ``[1e-6 ε, ε]``.  The report also carries the largest
    disagreement with :func:`curvature_oracle` on ``oracle_samples`` grid
    points whose stencil stays on one side of ``ε``, the disagreement just
    inside ``ε`` (large for a non-smooth junction), and the integral of the
    volume density ``φ sinh δ ψ`` over the grid range.  A failing profile is
    reported, never raised.
    """
    if grid_size < 2:
        raise HypconeError("grid_size must be at least 2", field="grid")
    eps = P.epsilon
    lo = eps * 1e-6 if lo is None else float(lo)
    hi = eps if hi is None else float(hi)
    if not 0 < lo < hi:
        raise HypconeError("grid bounds must satisfy 0 < lo < hi", field="grid")
    grid = np.geomspace(lo, hi, grid_size)
    K = np.array([sectional_curvatures(P, d) for d in grid])
    picks = np.unique(np.linspace(0, grid_size - 1, min(oracle_samples, grid_size)).round().astype(int))
    picks = [i for i in picks if abs(math.log(grid[i] / eps)) >= 2.0 * oracle_h]
    dev = 0.0
    for idx in picks:
        dev = max(dev, float(np.max(np.abs(np.array(curvature_oracle(P, grid[idx], oracle_h)) - K[idx]))))
    d_in = eps * math.exp(-oracle_h)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        jdev = float(np.max(np.abs(np.array(curvature_oracle(P, d_in, oracle_h)) - sectional_curvatures(P, d_in))))
    vol = integrate(lambda d: P.phi(d) * np.sinh(d) * P.psi(d), lo, hi, tol=1e-12)
    return CurvatureReport(eps, grid, K[:, 0], K[:, 1], K[:, 2], dev, jdev, vol)


def radial_distance(P, t):
    """Length ``∫_t^ε φ`` of the radial segment from δ = t out to the junction."""
    if not 0 < t:
        raise HypconeError("t must be positive", field="t")
    if t >= P.epsilon:
        return 0.0
    return integrate(P.phi, t, P.epsilon, tol=1e-12)


def kinked_profile(epsilon=DEFAULT_EPSILON):
    """φ ≡ 1 and ψ = δ inside ε: a cone metric glued to the hyperbolic one with a jump."""
    return SmoothingProfile(
        epsilon,
        np.ones_like,
        np.zeros_like,
        lambda d: d,
        np.ones_like,
        np.zeros_like,
        name="kinked",
    )
