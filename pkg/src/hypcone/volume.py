"""Volume along cone-angle deformations.

Core lengths come from an A-polynomial ``A(L, M)`` with the meridian
eigenvalue ``M = exp(iθ/2)``; the volume follows from the Schläfli
variation ``d vol = -1/2 Σ ℓ_j dθ_j`` integrated along a path of angles.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import numpy as np

from . import kernels
from .errors import (
    DegenerateSubstitution,
    HypconeError,
    NoDegenerationFound,
    NoRealizableRoot,
)
from .quadrature import integrate

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class APolynomial:
    """Integer polynomial ``Σ c L^i M^j`` stored as ``(i, j, c)`` monomials."""

    monomials: tuple

    def __post_init__(self):
        merged = {}
        for i, j, c in self.monomials:
            if int(i) != i or int(j) != j or int(c) != c:
                raise HypconeError("exponents and coefficients must be integers", field="apoly")
            if i < 0:
                raise HypconeError("L-exponents must be nonnegative", field="apoly")
            merged[(int(i), int(j))] = merged.get((int(i), int(j)), 0) + int(c)
        mons = tuple(sorted((i, j, c) for (i, j), c in merged.items() if c != 0))
        if not any(i > 0 for i, _, _ in mons) or not any(i == 0 for i, _, _ in mons):
            raise HypconeError("need monomials both with and without L", field="apoly")
        object.__setattr__(self, "monomials", mons)

    @classmethod
    def parse(cls, text, source="<string>"):
        """Read ``i j c`` lines; ``#`` starts a comment."""
        mons = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if len(parts) != 3:
                    raise ValueError
                mons.append(tuple(int(p) for p in parts))
            except ValueError:
                raise HypconeError(f"{source}:{lineno}: expected 'i j c' integers, got {raw!r}", field="apoly") from None
        if not mons:
            raise HypconeError(f"{source}: no monomials", field="apoly")
        return cls(tuple(mons))

    @classmethod
    def from_file(cls, path):
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise HypconeError(f"cannot read A-polynomial file: {exc}", field="apoly") from None
        return cls.parse(text, str(path))

    @classmethod
    def bundled(cls, name):
        """A polynomial shipped with the package (``figure8`` or ``unknot``)."""
        try:
            text = resources.files("hypcone").joinpath("data", f"{name}.apoly").read_text(encoding="utf-8")
        except FileNotFoundError:
            raise HypconeError(f"no bundled A-polynomial named {name!r}", field="apoly") from None
        return cls.parse(text, name)

    @property
    def l_degree(self):
        return max(i for i, _, _ in self.monomials)

    def depends_on_m(self):
        return len({j for _, j, _ in self.monomials}) > 1

    def l_coefficients(self, theta):
        """Coefficients of the polynomial in L after ``M = exp(iθ/2)``, lowest degree first."""
        coeffs = np.zeros(self.l_degree + 1, dtype=complex)
        for i, j, c in self.monomials:
            coeffs[i] += c * np.exp(0.5j * j * theta)
        return coeffs

    def to_text(self):
        return "".join(f"{i} {j} {c}\n" for i, j, c in self.monomials)


def l_roots(A, theta):
    """All nonzero L-roots at angle θ (companion-matrix eigenvalues, Newton-polished)."""
    if not A.depends_on_m():
        raise DegenerateSubstitution("polynomial does not involve M: no angle dependence", field="apoly")
    coeffs = A.l_coefficients(theta)
    scale = np.max(np.abs(coeffs))
    nz = np.nonzero(np.abs(coeffs) > 1e-13 * scale)[0]
    lo, hi = nz[0], nz[-1]
    if hi == lo:
        raise DegenerateSubstitution(f"L-polynomial collapses to a monomial at theta={theta}", field="theta")
    trimmed = coeffs[lo:hi + 1]
    roots = np.roots(trimmed[::-1])
    p = np.polynomial.Polynomial(trimmed)
    dp = p.deriv()
    for _ in range(3):
        d = dp(roots)
        ok = np.abs(d) > 1e-8 * scale
        step = np.zeros_like(roots)
        step[ok] = p(roots[ok]) / d[ok]
        roots = roots - step
    return roots


def core_length_from_apoly(A, theta, seed=None, require_loxodromic=False):
    """Core geodesic length ``|2 Re log L|`` and the chosen root ``L``.

    With a ``seed`` the root nearest to it is taken (path continuation);
    otherwise the root of largest modulus, which has ``|L| >= 1`` whenever
    roots come in ``L, 1/L`` pairs.
    """
    roots = l_roots(A, theta)
    if seed is not None:
        L = roots[np.argmin(np.abs(roots - seed))]
    else:
        L = roots[np.argmax(np.abs(roots))]
    length = abs(2.0 * math.log(abs(L)))
    if require_loxodromic and np.all(np.abs(np.abs(roots) - 1.0) < 1e-9):
        raise NoRealizableRoot(f"all L-roots lie on the unit circle at theta={theta}", field="theta")
    return length, complex(L)


def length_function(A):
    """Vectorized θ -> core length on the unseeded branch."""
    def ell(theta):
        th = np.asarray(theta, dtype=float)
        out = np.array([core_length_from_apoly(A, t)[0] for t in th.ravel()])
        return out.reshape(th.shape) if th.ndim else float(out[0])
    return ell


# Clausen function Cl2(θ) = θ - θ log|θ| + Σ |B_2n| θ^(2n+1) / (2n (2n+1)!) for |θ| < 2π
_CLAUSEN_TERMS = 40


def _bernoulli_even(n_terms):
    """|B_2|, |B_4|, ..., |B_2n| as Fractions (Akiyama-Tanigawa)."""
    m_max = 2 * n_terms
    a = [Fraction(0)] * (m_max + 1)
    out = []
    for m in range(m_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m >= 2 and m % 2 == 0:
            out.append(abs(a[0]))
    return out


@lru_cache(maxsize=None)
def _clausen_coeffs():
    bern = _bernoulli_even(_CLAUSEN_TERMS)
    return np.array([
        float(b / (2 * n * math.factorial(2 * n + 1))) for n, b in enumerate(bern, 1)
    ])


def clausen(theta):
    """Cl2(θ) for any real θ (2π-periodic, odd)."""
    th = np.asarray(theta, dtype=float)
    red = np.mod(th + math.pi, TWO_PI) - math.pi  # into [-π, π)
    out = kernels.clausen_series(red, _clausen_coeffs())
    return out if out.ndim else float(out)


def lobachevsky(x):
    """Λ(x) = -∫_0^x log|2 sin t| dt = Cl2(2x)/2; π-periodic and odd."""
    xa = np.asarray(x, dtype=float)
    red = np.mod(xa + 0.5 * math.pi, math.pi) - 0.5 * math.pi  # into [-π/2, π/2)
    out = 0.5 * np.asarray(clausen(2.0 * red))
    return out if out.ndim else float(out)


def figure8_complete_volume():
    """Volume of the complete figure-eight knot complement, 6 Λ(π/3)."""
    return 6.0 * lobachevsky(math.pi / 3.0)


class AnglePath:
    """A path ``t -> θ(t)`` in angle space, ``t`` in [0, 1]."""

    def __init__(self, fn, n=1, dfn=None, check_samples=257):
        self.fn = fn
        self.dfn = dfn
        self.n = int(n)
        ts = np.linspace(0.0, 1.0, check_samples)
        vals = np.array([self(t) for t in ts])
        if vals.shape != (check_samples, self.n):
            raise HypconeError("path returns the wrong number of components", field="path")
        # an end may sit at angle 0, the complete (cusped) structure
        if np.any(vals < 0) or np.any(vals > TWO_PI + 1e-12) or np.any(vals[1:-1] <= 0):
            raise HypconeError("angles must lie in (0, 2pi]", field="path")
        steps = np.abs(np.diff(vals, axis=0)).max(axis=0)
        spread = np.ptp(vals, axis=0)
        if np.any(steps > 0.25 * spread + 1e-12) and np.any(spread > 0):
            raise HypconeError("path looks discontinuous", field="path")
        d = np.diff(vals, axis=0)
        self.monotone = bool(np.all(d <= 1e-15) or np.all(d >= -1e-15))
        self.decreasing = bool(np.all(d <= 1e-15))

    def __call__(self, t):
        return np.atleast_1d(np.asarray(self.fn(t), dtype=float))

    def derivative(self, t, h=1e-6):
        if self.dfn is not None:
            return np.atleast_1d(np.asarray(self.dfn(t), dtype=float))
        lo, hi = max(t - h, 0.0), min(t + h, 1.0)
        return (self(hi) - self(lo)) / (hi - lo)

    @classmethod
    def linear(cls, start, end):
        s = np.atleast_1d(np.asarray(start, dtype=float))
        e = np.atleast_1d(np.asarray(end, dtype=float))
        return cls(lambda t: s + t * (e - s), n=s.size, dfn=lambda t: e - s)


@dataclass
class VolumeCurve:
    t: np.ndarray
    theta: np.ndarray
    volume: np.ndarray
    lengths: np.ndarray
    v0: float
    tol: float = 1e-10
    meta: dict = field(default_factory=dict)

    def rows(self):
        """(t, θ of first component, length of first component, volume)."""
        return [
            (float(t), float(th[0]), float(ln[0]), float(v))
            for t, th, ln, v in zip(self.t, self.theta, self.lengths, self.volume)
        ]

    def summary(self):
        i = int(np.argmin(self.volume))
        return {
            "samples": int(self.t.size),
            "v0": self.v0,
            "volume_start": float(self.volume[0]),
            "volume_end": float(self.volume[-1]),
            "volume_min": float(self.volume[i]),
            "theta_at_volume_min": [float(x) for x in self.theta[i]],
            "max_length": float(self.lengths.max()),
        }


def schlafli_integrate(lengths, path, v0, samples=101, tol=1e-10):
    """Volume along ``path`` from ``vol = v0`` at ``t = 0``.

    ``lengths`` is a sequence of callables ``ℓ_j(θ_j)``, one per component
    (a single callable is accepted for one component).  The integral
    ``-1/2 Σ ∫ ℓ_j(θ(s)) θ_j'(s) ds`` is accumulated sample to sample with
    adaptive quadrature at absolute tolerance ``tol``.
    """
    if callable(lengths):
        lengths = [lengths]
    if len(lengths) != path.n:
        raise HypconeError("one length function per path component is required", field="lengths")
    if samples < 2:
        raise HypconeError("need at least two samples", field="samples")
    ts = np.linspace(0.0, 1.0, samples)
    thetas = np.array([path(t) for t in ts])
    ell = np.array([[float(lengths[j](th[j])) for j in range(path.n)] for th in thetas])
    vols = np.empty(samples)
    vols[0] = v0
    piece_tol = tol / (samples - 1)

    def integrand(s_arr):
        s_arr = np.atleast_1d(s_arr)
        out = np.zeros(s_arr.shape)
        for k, s in enumerate(s_arr):
            th, dth = path(s), path.derivative(s)
            out[k] = sum(float(lengths[j](th[j])) * dth[j] for j in range(path.n) if dth[j] != 0.0)
        return out

    for k in range(1, samples):
        piece = integrate(integrand, ts[k - 1], ts[k], tol=piece_tol)
        vols[k] = vols[k - 1] - 0.5 * piece
    return VolumeCurve(ts, thetas, vols, ell, float(v0), tol)


def volume_at(A, theta, v0, tol=1e-11):
    """Volume at angle θ along the straight path from 0 with ``vol(0) = v0``."""
    return v0 - 0.5 * integrate(length_function(A), 0.0, theta, tol=tol)


@dataclass
class DeformationRange:
    theta_star: float
    criterion: str
    length_before: float
    volume_at_theta_star: float = None
    criteria_coincide: bool = None

    def to_json(self):
        return {
            "theta_star": self.theta_star,
            "criterion": self.criterion,
            "length_before": self.length_before,
            "volume_at_theta_star": self.volume_at_theta_star,
            "criteria_coincide": self.criteria_coincide,
        }


# lengths below this count as a collapsed core; root noise near a double root is ~1e-8
LENGTH_FLOOR = 1e-6
VOLUME_FLOOR = 1e-9


def _bisect(pred, lo, hi, xtol):
    """Largest-interval bisection: pred(lo) true, pred(hi) false."""
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def deformation_range(A, v0=None, grid=256, xtol=1e-12):
    """First angle where the increasing deformation from the cusp degenerates.

    The core length is tracked on a coarse grid over ``(0, 2π]`` and the first
    collapse after it has become positive is bisected.  When ``v0`` is
    given, the volume is checked as well and whichever criterion triggers
    first wins; the report says whether the two coincide.
    """
    ell = length_function(A)
    thetas = TWO_PI * np.arange(1, grid + 1) / grid
    lens = ell(thetas)
    pos = np.nonzero(lens > LENGTH_FLOOR)[0]
    if pos.size == 0:
        raise NoDegenerationFound("core length never becomes positive on (0, 2pi]", field="apoly")
    after = np.nonzero(lens[pos[0]:] <= LENGTH_FLOOR)[0]
    if after.size == 0:
        raise NoDegenerationFound("core length does not collapse before 2pi", field="apoly")
    k = pos[0] + after[0]
    lo, hi = _bisect(lambda t: ell(t) > LENGTH_FLOOR, thetas[k - 1], thetas[k], xtol)
    theta_len = 0.5 * (lo + hi)
    criterion = "core_length"
    theta_star = theta_len
    vol_star = coincide = None
    if v0 is not None:
        # volume on the grid before the length collapse
        vol_grid = np.array([volume_at(A, t, v0) for t in thetas[:k]])
        below = np.nonzero(vol_grid < -VOLUME_FLOOR)[0]
        if below.size:
            j = below[0]
            lo_v = thetas[j - 1] if j > 0 else 0.0
            a, b = _bisect(lambda t: volume_at(A, t, v0) >= -VOLUME_FLOOR, lo_v, thetas[j], xtol)
            theta_star = 0.5 * (a + b)
            criterion = "volume"
        vol_star = volume_at(A, theta_star, v0)
        coincide = abs(vol_star) < 1e-8
    return DeformationRange(float(theta_star), criterion, float(ell(0.5 * theta_star)), vol_star, coincide)


def figure8_length_closed_form(theta):
    """``2 arccosh(1 + cos θ - cos 2θ)`` where the argument is at least 1, else 0."""
    th = np.asarray(theta, dtype=float)
    arg = 1.0 + np.cos(th) - np.cos(2.0 * th)
    out = 2.0 * np.arccosh(np.maximum(arg, 1.0))
    return out if out.ndim else float(out)


def figure8_pipeline(samples=121):
    """End-to-end figure-eight deformation from the cusp to the degeneration."""
    A = APolynomial.bundled("figure8")
    v0 = figure8_complete_volume()
    rng = deformation_range(A, v0)
    path = AnglePath.linear(0.0, rng.theta_star)
    curve = schlafli_integrate(length_function(A), path, v0, samples=samples)
    # the same integral from the closed-form length, square-root substitution at the far end
    closed = 0.5 * integrate(figure8_length_closed_form, 0.0, 2.0 * math.pi / 3.0, tol=1e-12, sqrt_endpoints="b")
    return {
        "theta_star": rng.theta_star,
        "theta_star_error": abs(rng.theta_star - 2.0 * math.pi / 3.0),
        "criterion": rng.criterion,
        "criteria_coincide": rng.criteria_coincide,
        "v0": v0,
        "volume_at_theta_star": rng.volume_at_theta_star,
        "curve": curve.summary(),
        "volume_at_half_pi": volume_at(A, math.pi / 2.0, v0),
        "residual": abs(closed - v0),
        "residual_apoly": abs(curve.volume[-1]),
    }
