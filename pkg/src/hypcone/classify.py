"""Euclidean cone surfaces and the ideal/truncated tetrahedron family.

Cone surfaces are classified with Gauss-Bonnet: a closed surface of Euler
characteristic χ with cone angles ν_i carries a flat cone metric exactly when
``2πχ - Σ(2π - ν_i) = 0``.

Tetrahedra are given by three opposite-edge pairs of dihedral angles
``(α-ε)/2, (β-ε)/2, (γ-ε)/2`` with ``α + β + γ = 2π``.  Faces are numbered
0..3 and edges named by the face pair they separate; the pairs {01, 23},
{02, 13}, {03, 12} are the opposite ones.  The Gram matrix has ones on the
diagonal and ``-cos`` of the dihedral angle off it, with the hyperbolic
convention that a realizable tetrahedron has signature (3, 1).  A vertex is
ideal when its 3x3 principal minor (the three faces through it) vanishes and
hyperideal, hence truncated by its polar plane, when that minor is negative.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import AngleAbovePi, HypconeError

TWO_PI = 2.0 * math.pi
FLAT_TOL = 1e-12
MINOR_TOL = 1e-12


@dataclass(frozen=True)
class ConeSurface:
    chi: int
    angles: tuple

    def __post_init__(self):
        if int(self.chi) != self.chi or self.chi > 2 or self.chi % 2:
            raise HypconeError("Euler characteristic of a closed orientable surface is even and at most 2", field="chi")
        angles = tuple(float(a) for a in self.angles)
        for a in angles:
            if not 0 < a <= TWO_PI:
                raise HypconeError(f"cone angle {a} outside (0, 2pi]", field="angles")
        object.__setattr__(self, "chi", int(self.chi))
        object.__setattr__(self, "angles", angles)


def gauss_bonnet_defect(S):
    """``2πχ - Σ(2π - ν_i)``; zero exactly for flat cone metrics."""
    return TWO_PI * S.chi - math.fsum(TWO_PI - a for a in S.angles)


@dataclass(frozen=True)
class FlatVerdict:
    kind: str
    angles: tuple = ()

    @property
    def flat(self):
        return self.kind != "NotFlatOrAngleTooBig"

    def to_json(self):
        return {"verdict": self.kind, "angles": list(self.angles), "flat": self.flat}


FOUR_PI_SPHERE = "FourPiSphere"
TRIPLE_SPHERE = "TripleSphere"
NOT_FLAT = "NotFlatOrAngleTooBig"


def classify_flat_le_pi(S, tol=FLAT_TOL):
    """Flat cone spheres with all angles at most π.

    For χ = 2 each point contributes ``2π - ν >= π`` to a total of 4π, so a
    flat sphere has either four angles π or three angles summing to 2π.
    """
    for a in S.angles:
        if a > math.pi:
            raise AngleAbovePi(f"cone angle {a} exceeds pi", field="angles")
    if S.chi == 2 and abs(gauss_bonnet_defect(S)) <= tol:
        if len(S.angles) == 4:
            return FlatVerdict(FOUR_PI_SPHERE, S.angles)
        if len(S.angles) == 3:
            return FlatVerdict(TRIPLE_SPHERE, S.angles)
    return FlatVerdict(NOT_FLAT, S.angles)


@dataclass(frozen=True)
class TetrahedronAngles:
    alpha: float
    beta: float
    gamma: float
    eps: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = float(getattr(self, name))
            if not 0 < v < math.pi:
                raise HypconeError(f"{name} must lie in (0, pi)", field=name)
            object.__setattr__(self, name, v)
        object.__setattr__(self, "eps", float(self.eps))
        if abs(self.alpha + self.beta + self.gamma - TWO_PI) > 1e-9:
            raise HypconeError("alpha + beta + gamma must equal 2pi", field="gamma")

    @property
    def dihedral(self):
        """(A, B, C): the angles on the edge pairs {01, 23}, {02, 13}, {03, 12}."""
        e = self.eps
        return (0.5 * (self.alpha - e), 0.5 * (self.beta - e), 0.5 * (self.gamma - e))


_EDGE_PAIR = {(0, 1): 0, (2, 3): 0, (0, 2): 1, (1, 3): 1, (0, 3): 2, (1, 2): 2}


def gram_matrix(T):
    G = np.eye(4)
    dih = T.dihedral
    for (u, v), k in _EDGE_PAIR.items():
        G[u, v] = G[v, u] = -math.cos(dih[k])
    return G


def vertex_minors(G):
    """Determinant of the principal minor of the three faces through each vertex.

    Vertex ``k`` is the one opposite face ``k``.
    """
    return np.array([np.linalg.det(np.delete(np.delete(G, k, 0), k, 1)) for k in range(4)])


def signature(G, tol=1e-12):
    w = np.linalg.eigvalsh(G)
    return int(np.sum(w > tol)), int(np.sum(w < -tol))


@dataclass(frozen=True)
class TetraReport:
    regime: str
    signature: tuple
    minors: tuple
    gram_det: float
    singular_link: tuple

    def to_json(self):
        return {
            "regime": self.regime,
            "signature": list(self.signature),
            "vertex_minors": list(self.minors),
            "gram_det": self.gram_det,
            "singular_link_cone_angles": list(self.singular_link),
        }


IDEAL, TRUNCATED, INVALID = "Ideal", "Truncated", "Invalid"


def tetrahedron_regime(T):
    """Ideal, Truncated or Invalid, from the Gram signature and vertex minors.

    Also reports the cone angles of the six singular circles of the doubled
    double, ``α-ε, β-ε, γ-ε`` each twice.
    """
    G = gram_matrix(T)
    sig = signature(G)
    minors = vertex_minors(G)
    link = tuple(x for a in (T.alpha, T.beta, T.gamma) for x in (a - T.eps, a - T.eps))
    if min(T.dihedral) <= 0 or T.eps < 0:
        regime = INVALID
    elif sig == (3, 1) and np.all(np.abs(minors) <= MINOR_TOL):
        regime = IDEAL
    elif sig == (3, 1) and np.all(minors < -MINOR_TOL):
        regime = TRUNCATED
    else:
        regime = INVALID
    return TetraReport(regime, sig, tuple(float(m) for m in minors), float(np.linalg.det(G)), link)
