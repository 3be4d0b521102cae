"""Orientation-preserving isometries of hyperbolic 3-space.

Isometries are unit-determinant 2x2 complex matrices acting on the upper
half-space model, with boundary sphere ``C u {inf}``.  ``M`` and ``-M`` are the
same isometry.

Complex lengths follow the cone-angle convention: a rotation by ``alpha``
counter-clockwise about an oriented axis has complex length ``alpha * 1j``, a
loxodromic element translating by ``l`` and twisting by ``tau`` has
``l + tau * 1j``.  When no orientation is supplied the axis is oriented
intrinsically (see :func:`axis`), so hint-free results are conjugation
invariant.
"""
import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import HypconeError, NoAxis, NotElliptic, ParabolicOrIdentity

INFINITY = complex(math.inf, 0.0)
TRACE_TOL = 1e-10
TWO_PI = 2.0 * math.pi


def is_infinite(z):
    return cmath.isinf(z)


def same_boundary_point(z, w, tol=1e-8):
    if is_infinite(z) or is_infinite(w):
        return is_infinite(z) and is_infinite(w)
    return abs(z - w) <= tol * (1.0 + max(abs(z), abs(w)))


@dataclass(frozen=True)
class H3Point:
    x: float
    y: float
    t: float

    def __post_init__(self):
        for name in ("x", "y", "t"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.t > 0:
            raise HypconeError(f"height must be positive, got {self.t}", field="t")

    @property
    def z(self):
        return complex(self.x, self.y)

    def to_hyperboloid(self):
        r2 = self.x * self.x + self.y * self.y + self.t * self.t
        return np.array([self.x / self.t, self.y / self.t, (r2 - 1) / (2 * self.t), (r2 + 1) / (2 * self.t)])

    @classmethod
    def from_hyperboloid(cls, X):
        t = 1.0 / float(X[3] - X[2])
        return cls(float(X[0]) * t, float(X[1]) * t, t)


@dataclass(frozen=True)
class GeodesicLine:
    """Oriented geodesic from ``start`` to ``end`` (boundary points)."""

    start: complex
    end: complex

    def __post_init__(self):
        object.__setattr__(self, "start", complex(self.start))
        object.__setattr__(self, "end", complex(self.end))
        if same_boundary_point(self.start, self.end, 1e-14):
            raise HypconeError("geodesic endpoints must be distinct", field="endpoints")

    def reversed(self):
        return GeodesicLine(self.end, self.start)

    def same_set(self, other, tol=1e-8):
        return (same_boundary_point(self.start, other.start, tol) and same_boundary_point(self.end, other.end, tol)) or (
            same_boundary_point(self.start, other.end, tol) and same_boundary_point(self.end, other.start, tol)
        )

    def same_oriented(self, other, tol=1e-8):
        return same_boundary_point(self.start, other.start, tol) and same_boundary_point(self.end, other.end, tol)

    def standard_frame(self):
        """Isometry sending 0 to ``start`` and infinity to ``end``."""
        s, e = self.start, self.end
        if is_infinite(e):
            return Isometry(1, s, 0, 1)
        if is_infinite(s):
            return Isometry(e, 1, 1, 0)
        return Isometry(e, s, 1, 1)


class Isometry:
    """An element of PSL(2, C), stored as a normalized SL(2, C) matrix."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        det = a * d - b * c
        if abs(det) < 1e-300:
            raise HypconeError("matrix is singular", field="matrix")
        s = cmath.sqrt(det)
        object.__setattr__(self, "a", a / s)
        object.__setattr__(self, "b", b / s)
        object.__setattr__(self, "c", c / s)
        object.__setattr__(self, "d", d / s)

    def __setattr__(self, name, value):
        raise AttributeError("Isometry is immutable")

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def diagonal(cls, lam):
        return cls(lam, 0, 0, 1 / lam)

    @classmethod
    def from_complex_length(cls, length, line):
        """Isometry with the given complex length about the oriented ``line``."""
        h = line.standard_frame()
        return h @ cls.diagonal(cmath.exp(complex(length) / 2)) @ h.inverse()

    @classmethod
    def rotation(cls, line, angle):
        return cls.from_complex_length(1j * angle, line)

    @property
    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def trace(self):
        return self.a + self.d

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other):
        return Isometry(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    __mul__ = __matmul__

    def inverse(self):
        return Isometry(self.d, -self.b, -self.c, self.a)

    def conjugate_by(self, h):
        """Return ``h self h^-1``."""
        return h @ self @ h.inverse()

    def isclose(self, other, tol=1e-9):
        m, n = self.matrix, other.matrix
        return bool(min(np.abs(m - n).max(), np.abs(m + n).max()) <= tol)

    def __eq__(self, other):
        if not isinstance(other, Isometry):
            return NotImplemented
        return self.isclose(other, TRACE_TOL)

    __hash__ = None

    def __repr__(self):
        return f"Isometry({self.a:.6g}, {self.b:.6g}, {self.c:.6g}, {self.d:.6g})"

    def on_boundary(self, z):
        """Moebius action on the boundary sphere."""
        a, b, c, d = self.a, self.b, self.c, self.d
        if is_infinite(z):
            return a / c if c != 0 else INFINITY
        den = c * z + d
        if den == 0:
            return INFINITY
        return (a * z + b) / den

    def on_line(self, line):
        return GeodesicLine(self.on_boundary(line.start), self.on_boundary(line.end))

    def to_json(self):
        return [[v.real, v.imag] for v in (self.a, self.b, self.c, self.d)]

    @classmethod
    def from_json(cls, data):
        if len(data) != 4 or any(len(e) != 2 for e in data):
            raise HypconeError("isometry JSON must be four [re, im] pairs", field="isometry")
        return cls(*(complex(re, im) for re, im in data))


@dataclass(frozen=True)
class IsometryClass:
    kind: str  # "identity" | "elliptic" | "parabolic" | "loxodromic"
    angle: float | None = None
    length: complex | None = None


def _trace_kind(g, tol):
    tr = g.trace
    if min(abs(tr - 2), abs(tr + 2)) < tol:
        m = g.matrix
        if min(np.abs(m - np.eye(2)).max(), np.abs(m + np.eye(2)).max()) < tol:
            return "identity"
        return "parabolic"
    if abs(tr.imag) < tol and abs(tr.real) < 2:
        return "elliptic"
    return "loxodromic"


def _fixed_points(g):
    a, b, c, d = g.a, g.b, g.c, g.d
    scale = max(abs(a), abs(b), abs(c), abs(d))
    # below this |c| the finite root of the quadratic overflows past 1e14
    if abs(c) <= 1e-14 * scale:
        return INFINITY, b / (d - a)
    root = cmath.sqrt(g.trace ** 2 - 4)
    num = (a - d) + root if abs((a - d) + root) >= abs((a - d) - root) else (a - d) - root
    z1 = num / (2 * c)
    z2 = -b / (c * z1) if z1 != 0 else (a - d) / c
    return z1, z2


def _multiplier(g, start, end):
    """Eigenvalue ``lam`` with ``lam**2`` the derivative of g at ``start``."""
    if is_infinite(start):
        return g.c * end + g.d
    return 1.0 / (g.c * start + g.d)


def _oriented_length(g, start, end, kind):
    lam = _multiplier(g, start, end)
    lam2 = lam * lam
    if kind == "elliptic":
        return 1j * (cmath.phase(lam2) % TWO_PI)
    return complex(math.log(abs(lam2)), cmath.phase(lam2))


def axis(g, tol=TRACE_TOL):
    """Invariant geodesic of an elliptic or loxodromic element.

    Orientation is intrinsic: loxodromic axes run from the repelling to the
    attracting fixed point; elliptic axes are oriented so the rotation is
    counter-clockwise by an angle in (0, pi] (ties at pi broken by ordering
    the endpoints).
    """
    kind = _trace_kind(g, tol)
    if kind in ("identity", "parabolic"):
        raise NoAxis(f"{kind} element has no axis")
    p, q = _fixed_points(g)
    if kind == "loxodromic":
        if abs(_multiplier(g, p, q)) < 1:
            p, q = q, p
        return GeodesicLine(p, q)
    ang = _oriented_length(g, p, q, kind).imag
    if abs(ang - math.pi) < 1e-12:
        key = lambda z: (1, 0.0, 0.0) if is_infinite(z) else (0, z.real, z.imag)
        if key(q) < key(p):
            p, q = q, p
    elif ang > math.pi:
        p, q = q, p
    return GeodesicLine(p, q)


def complex_length(g, orientation_hint=None, tol=TRACE_TOL):
    """Complex length ``2 log(lambda)`` about the (oriented) axis of ``g``.

    Elliptic elements return ``alpha * 1j`` with alpha in (0, 2pi) measured
    counter-clockwise about the hint orientation.  Loxodromic elements return
    ``l + tau*1j`` with tau in (-pi, pi]; without a hint ``l > 0``, with a hint
    the sign of ``l`` records the direction of translation along it.
    """
    kind = _trace_kind(g, tol)
    if kind in ("identity", "parabolic"):
        raise ParabolicOrIdentity(f"{kind} element has no complex length")
    line = axis(g, tol)
    if orientation_hint is not None:
        if not orientation_hint.same_set(line):
            raise HypconeError("orientation hint is not the axis of the element", field="orientation_hint")
        line = orientation_hint
    return _oriented_length(g, line.start, line.end, kind)


def classify(g, tol=TRACE_TOL):
    kind = _trace_kind(g, tol)
    if kind == "elliptic":
        return IsometryClass(kind, angle=complex_length(g, tol=tol).imag)
    if kind == "loxodromic":
        return IsometryClass(kind, length=complex_length(g, tol=tol))
    return IsometryClass(kind)


def apply(g, p):
    """Action of ``g`` on a point of upper half-space."""
    z, t = p.z, p.t
    w = g.c * z + g.d
    den = abs(w) ** 2 + abs(g.c) ** 2 * t * t
    zz = ((g.a * z + g.b) * w.conjugate() + g.a * g.c.conjugate() * t * t) / den
    return H3Point(zz.real, zz.imag, t / den)


def hyperbolic_distance(p, q):
    chord2 = (p.x - q.x) ** 2 + (p.y - q.y) ** 2 + (p.t - q.t) ** 2
    return 2.0 * math.asinh(math.sqrt(chord2 / (4.0 * p.t * q.t)))


def distance_to_line(p, line):
    """Distance from ``p`` to a geodesic; exact near zero (no cosh round-off)."""
    q = apply(line.standard_frame().inverse(), p)
    return math.asinh(abs(q.z) / q.t)


def midpoint(p, q):
    X = p.to_hyperboloid() + q.to_hyperboloid()
    X /= math.sqrt(X[3] ** 2 - X[0] ** 2 - X[1] ** 2 - X[2] ** 2)
    return H3Point.from_hyperboloid(X)


def _foot_towards(line, other):
    """Foot on ``line`` of the common perpendicular with ``other``.

    Returns ``(point, config)``; ``point`` is None when the lines share an
    endpoint.  ``config`` is "ideal", "coplanar" or "skew".
    """
    if any(same_boundary_point(e, f, 1e-9) for e in (line.start, line.end) for f in (other.start, other.end)):
        return None, "ideal"
    h = line.standard_frame()
    hinv = h.inverse()
    p, q = hinv.on_boundary(other.start), hinv.on_boundary(other.end)
    tiny = 1e-12
    if is_infinite(p) or is_infinite(q) or abs(p) < tiny or abs(q) < tiny:
        return None, "ideal"
    config = "coplanar" if abs((p * q.conjugate()).imag) <= 1e-9 * abs(p) * abs(q) else "skew"
    foot = apply(h, H3Point(0.0, 0.0, math.sqrt(abs(p) * abs(q))))
    return foot, config


@dataclass(frozen=True)
class AxesMeet:
    """Outcome of :func:`axes_meet_point`.

    ``point`` is set exactly when the angle hypothesis holds (then the three
    axes provably share it).  ``configuration`` describes the first two axes
    regardless: "meet", "ideal" (shared boundary point), "ultraparallel"
    (disjoint, coplanar, with a common perpendicular) or "skew".
    """

    point: H3Point | None
    hypothesis: bool
    angles: tuple
    product_kind: str
    configuration: str
    residual: float | None = None


def axes_meet_point(g1, g2, tol=TRACE_TOL, meet_tol=1e-9):
    """Common point of the axes of two elliptic elements and their product.

    The hypothesis is that ``g1 g2`` is elliptic and the three (unoriented,
    in (0, pi]) rotation angles sum to more than 2 pi.
    """
    for name, g in (("g1", g1), ("g2", g2)):
        if _trace_kind(g, tol) != "elliptic":
            raise NotElliptic(f"{name} is not elliptic", field=name)
    g12 = g1 @ g2
    c1, c2, c12 = classify(g1, tol), classify(g2, tol), classify(g12, tol)
    angles = (c1.angle, c2.angle, c12.angle)
    l1, l2 = axis(g1, tol), axis(g2, tol)

    f1, config = _foot_towards(l1, l2)
    point = None
    if f1 is not None:
        f2, _ = _foot_towards(l2, l1)
        if f2 is None:
            # the shared-endpoint test is not symmetric under round-off
            config = "ideal"
        elif hyperbolic_distance(f1, f2) < meet_tol:
            config = "meet"
            point = midpoint(f1, f2)
        elif config == "coplanar":
            config = "ultraparallel"

    hypothesis = c12.kind == "elliptic" and sum(angles) > TWO_PI + 1e-12
    if not hypothesis or point is None:
        return AxesMeet(None, hypothesis, angles, c12.kind, config)
    l12 = axis(g12, tol)
    residual = max(distance_to_line(point, l) for l in (l1, l2, l12))
    return AxesMeet(point, True, angles, c12.kind, config, residual)
