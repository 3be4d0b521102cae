"""Tubes around a closed singular geodesic and their flat boundary tori.

A tube ``Tube(sigma, delta, theta, tau)`` is the radius-``delta`` neighbourhood
of a geodesic of length ``sigma`` with cone angle ``theta`` and twist ``tau``.
The boundary torus is spanned by the meridian ``a = theta sinh(delta)`` (real:
the meridional gluing has no shear) and the longitude
``b = tau sinh(delta) + i sigma cosh(delta)``.

Only curvature -1 and the euclidean case K = 0 have closed forms here; other
curvatures must be brought to one of those with :func:`rescale`.
"""
import math
from dataclasses import asdict, dataclass

from . import kernels
from .errors import HypconeError, UnsupportedCurvature


@dataclass(frozen=True)
class Tube:
    sigma: float
    delta: float
    theta: float
    tau: float = 0.0
    K: float = -1.0

    def __post_init__(self):
        for name in ("sigma", "delta", "theta"):
            if not getattr(self, name) > 0:
                raise HypconeError(f"{name} must be positive", field=name)
        if not self.K <= 0:
            raise HypconeError("curvature must be nonpositive", field="K")

    def to_json(self):
        return asdict(self)

    @classmethod
    def from_json(cls, data):
        unknown = set(data) - {"sigma", "delta", "theta", "tau", "K"}
        if unknown:
            raise HypconeError(f"unknown tube fields {sorted(unknown)}", field=sorted(unknown)[0])
        try:
            return cls(**{k: float(v) for k, v in data.items()})
        except TypeError as exc:
            raise HypconeError(str(exc), field="tube") from None


def _check_curvature(T):
    if T.K not in (-1.0, 0.0):
        raise UnsupportedCurvature(f"closed forms need K = -1 or K = 0, got {T.K}; rescale first", field="K")


def boundary_rectangle(T):
    """Side lengths (meridian, longitude) of the rectangular fundamental domain."""
    _check_curvature(T)
    if T.K == 0.0:
        return T.theta * T.delta, T.sigma
    return T.theta * math.sinh(T.delta), T.sigma * math.cosh(T.delta)


def area(T):
    _check_curvature(T)
    if T.K == 0.0:
        return T.theta * T.sigma * T.delta
    return T.theta * T.sigma * math.sinh(T.delta) * math.cosh(T.delta)


def volume(T):
    _check_curvature(T)
    if T.K == 0.0:
        return 0.5 * T.theta * T.sigma * T.delta ** 2
    return 0.5 * T.theta * T.sigma * math.sinh(T.delta) ** 2


def area_volume_ratio(T):
    return area(T) / volume(T)


@dataclass(frozen=True)
class FlatTorus:
    """Flat torus C / (Z a + Z b)."""

    a: complex
    b: complex

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if not self.area > 0:
            raise HypconeError("torus generators are linearly dependent", field="b")

    @property
    def area(self):
        return abs((self.a.conjugate() * self.b).imag)

    def reduced_basis(self):
        return kernels.gauss_reduce(self.a, self.b)

    def modulus(self):
        """Shape parameter in the standard fundamental domain of the modular group."""
        u, v = self.reduced_basis()
        m = v / u
        if m.imag < 0:
            m = -m
        if m.real == -0.5:
            m = complex(0.5, m.imag)
        return m


def boundary_torus(T):
    _check_curvature(T)
    if T.K == 0.0:
        return FlatTorus(T.theta * T.delta, complex(T.tau * T.delta, T.sigma))
    sh, ch = math.sinh(T.delta), math.cosh(T.delta)
    return FlatTorus(T.theta * sh, complex(T.tau * sh, T.sigma * ch))


def systole(F):
    """Length of the shortest nonzero lattice vector."""
    return abs(F.reduced_basis()[0])


def injectivity_radius(F):
    return 0.5 * systole(F)


def rescale(T, lam):
    """Multiply the metric's lengths by ``lam``: curvature scales by ``1/lam**2``."""
    if not lam > 0:
        raise HypconeError("scale factor must be positive", field="lambda")
    return Tube(T.sigma * lam, T.delta * lam, T.theta, T.tau, T.K / (lam * lam))


def _twist_longitude(meridian):
    """Longitude ``x + i/meridian`` making a covolume-one lattice of modulus ``s + i``.

    With ``w = sqrt(meridian**2 - 1)`` and ``n = round(w)`` the unimodular
    lattice spanned by ``1`` and ``s + i`` (``s = w - n``) contains the primitive
    vector ``n + s + i`` of length ``meridian``; rotating it onto the real axis
    carries ``-1`` to the longitude.
    """
    w = math.sqrt(meridian * meridian - 1.0)
    x = -w / meridian
    x -= meridian * math.floor(x / meridian + 0.5)
    return x


def cusp_opening_family(kind, i, theta=math.pi / 2):
    """The ``i``-th tube of a cusp-opening family, with radius schedule ``delta_i = i``.

    ``angle_pinch``: ``theta_i = 1/sinh(delta_i)``, ``sigma_i = 1/cosh(delta_i)``.
    ``twist``: fixed ``theta``, ``sigma_i sinh(delta_i) cosh(delta_i) = 1/theta``
    and a twist keeping the boundary shape at modulus ``s + i`` with
    ``|s| <= 1/2``.  Both families have boundary area 1.
    """
    if i < 1:
        raise HypconeError("family index starts at 1", field="i")
    delta = float(i)
    sh, ch = math.sinh(delta), math.cosh(delta)
    if kind == "angle_pinch":
        return Tube(1.0 / ch, delta, 1.0 / sh, 0.0)
    if kind == "twist":
        meridian = theta * sh
        if meridian < 1.0:
            raise HypconeError("twist family needs theta*sinh(delta_i) >= 1", field="theta")
        sigma = 1.0 / (theta * sh * ch)
        return Tube(sigma, delta, theta, _twist_longitude(meridian) / sh)
    raise HypconeError(f"unknown family {kind!r}", field="kind")


def disk_bounding_length(T):
    """Length of the meridian, the boundary curve that bounds a disk in the tube."""
    return boundary_rectangle(T)[0]


def report(T):
    """All derived quantities of a tube, as a plain dict."""
    F = boundary_torus(T)
    out = {
        "tube": T.to_json(),
        "rectangle": list(boundary_rectangle(T)),
        "area": area(T),
        "volume": volume(T),
        "area_volume_ratio": area_volume_ratio(T),
        "torus": {"a": [F.a.real, F.a.imag], "b": [F.b.real, F.b.imag], "area": F.area},
        "systole": systole(F),
        "injectivity_radius": injectivity_radius(F),
    }
    m = F.modulus()
    out["modulus"] = [m.real, m.imag]
    if T.K == -1.0:
        out["two_coth_delta"] = 2.0 / math.tanh(T.delta)
    return out
