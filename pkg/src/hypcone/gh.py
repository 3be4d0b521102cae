"""Pointed Gromov-Hausdorff approximations between finite metric spaces.

A relation ``R`` between pointed spaces ``(X, x0)`` and ``(Y, y0)`` is an
ε-approximation when

1. some ``y`` with ``x0 R y`` has ``d(y0, y) < ε``;
2. some ``x`` with ``x R y0`` has ``d(x0, x) < ε``;
3. ``R`` restricted to ``B_X × B_Y`` projects onto ``B_X``;
4. ... and onto ``B_Y``;
5. ``|d(x, x') - d(y, y')| < ε`` for related pairs inside ``B_X × B_Y``,

where ``B`` denotes the open ball of radius ``1/ε`` about the basepoint.  All
inequalities are strict and taken literally: ties count as violations.
"""
import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BudgetExceeded, HypconeError, InvalidMetricSpace
from .tube import boundary_torus

EXACT_PAIR_BUDGET = 20
EXACT_COVER_BUDGET = 25
TRIANGLE_TOL = 1e-9


class FinitePointedMetricSpace:
    """Distance matrix plus a basepoint index, validated on construction."""

    __slots__ = ("d", "basepoint", "labels")

    def __init__(self, matrix, basepoint=0, labels=None):
        try:
            d = np.array(matrix, dtype=float)
        except (TypeError, ValueError):
            raise InvalidMetricSpace("distance matrix must be numeric", field="matrix") from None
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
            raise InvalidMetricSpace(f"distance matrix must be square and nonempty, got shape {d.shape}", field="matrix")
        n = d.shape[0]
        if not np.all(np.isfinite(d)):
            raise InvalidMetricSpace("distances must be finite", field="matrix")
        if np.any(np.diag(d) != 0):
            raise InvalidMetricSpace("diagonal must be zero", field="matrix")
        scale = max(1.0, float(d.max()))
        if np.max(np.abs(d - d.T)) > 1e-12 * scale:
            raise InvalidMetricSpace("distance matrix must be symmetric", field="matrix")
        d = 0.5 * (d + d.T)
        off = ~np.eye(n, dtype=bool)
        if np.any(d[off] <= 0):
            raise InvalidMetricSpace("distinct points need positive distance", field="matrix")
        for j in range(n):
            if np.any(d > d[:, j, None] + d[None, j, :] + TRIANGLE_TOL):
                raise InvalidMetricSpace(f"triangle inequality fails through point {j}", field="matrix")
        if isinstance(basepoint, bool) or not isinstance(basepoint, (int, np.integer)) or not 0 <= basepoint < n:
            raise InvalidMetricSpace(f"basepoint must be an index in [0, {n})", field="basepoint")
        if labels is None:
            labels = [str(i) for i in range(n)]
        labels = list(labels)
        if len(labels) != n:
            raise InvalidMetricSpace(f"{len(labels)} labels for {n} points", field="labels")
        d.setflags(write=False)
        self.d = d
        self.basepoint = int(basepoint)
        self.labels = labels

    def __len__(self):
        return self.d.shape[0]

    def __repr__(self):
        return f"FinitePointedMetricSpace(n={len(self)}, basepoint={self.basepoint})"

    def scaled(self, lam):
        return FinitePointedMetricSpace(self.d * lam, self.basepoint, self.labels)

    def permuted(self, perm):
        """Relabel points: new point ``k`` is old point ``perm[k]``."""
        perm = np.asarray(perm)
        inv = np.argsort(perm)
        return FinitePointedMetricSpace(self.d[np.ix_(perm, perm)], int(inv[self.basepoint]),
                                        [self.labels[p] for p in perm])

    def to_json(self):
        return {"labels": list(self.labels), "matrix": self.d.tolist(), "basepoint": self.basepoint}

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict):
            raise InvalidMetricSpace("metric space JSON must be an object", field="space")
        unknown = set(data) - {"labels", "matrix", "basepoint"}
        if unknown:
            raise InvalidMetricSpace(f"unknown keys {sorted(unknown)}", field=sorted(unknown)[0])
        if "matrix" not in data:
            raise InvalidMetricSpace("missing distance matrix", field="matrix")
        rows = data["matrix"]
        if not isinstance(rows, list) or any(not isinstance(r, list) or len(r) != len(rows) for r in rows):
            raise InvalidMetricSpace("matrix must be a square list of lists", field="matrix")
        return cls(rows, data.get("basepoint", 0), data.get("labels"))

    @classmethod
    def load(cls, path):
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise InvalidMetricSpace(f"cannot read {path}: {exc}", field="path") from None
        except json.JSONDecodeError as exc:
            raise InvalidMetricSpace(f"{path}: invalid JSON ({exc})", field="path") from None
        return cls.from_json(data)


def relation(pairs, X, Y):
    """Validate index pairs and return them as a frozenset."""
    out = set()
    for p in pairs:
        try:
            i, j = p
        except (TypeError, ValueError):
            raise HypconeError(f"relation entries must be pairs, got {p!r}", field="relation") from None
        if not (0 <= i < len(X) and 0 <= j < len(Y)) or int(i) != i or int(j) != j:
            raise HypconeError(f"pair {p!r} out of range", field="relation")
        out.add((int(i), int(j)))
    return frozenset(out)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    condition: int = None
    witness: tuple = None

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"ok": self.ok, "condition": self.condition, "witness": list(self.witness) if self.witness else None}


def _balls(X, Y, eps):
    r = 1.0 / eps
    bx = np.nonzero(X.d[X.basepoint] < r)[0]
    by = np.nonzero(Y.d[Y.basepoint] < r)[0]
    return bx, by


def is_eps_approximation(R, X, Y, eps):
    """Check the five conditions in order; report the first failure with a witness."""
    if not eps > 0:
        raise HypconeError("eps must be positive", field="eps")
    R = relation(R, X, Y)
    x0, y0 = X.basepoint, Y.basepoint
    if not any(x == x0 and Y.d[y0, y] < eps for x, y in R):
        return Verdict(False, 1, (x0,))
    if not any(y == y0 and X.d[x0, x] < eps for x, y in R):
        return Verdict(False, 2, (y0,))
    bx, by = _balls(X, Y, eps)
    inx, iny = set(bx.tolist()), set(by.tolist())
    inner = sorted((x, y) for x, y in R if x in inx and y in iny)
    missing = inx - {x for x, _ in inner}
    if missing:
        return Verdict(False, 3, (min(missing),))
    missing = iny - {y for _, y in inner}
    if missing:
        return Verdict(False, 4, (min(missing),))
    for a, (x, y) in enumerate(inner):
        for x2, y2 in inner[a:]:
            gap = abs(X.d[x, x2] - Y.d[y, y2])
            if not gap < eps:
                return Verdict(False, 5, (x, y, x2, y2, float(gap)))
    return Verdict(True)


def find_approximation(X, Y, eps):
    """An ε-approximation between X and Y, or None if there is none.

    Pairs inside ``B_X × B_Y`` must be pairwise compatible, so a valid
    relation is a clique of the compatibility graph covering both balls;
    conditions 1 and 2 either hold for free through a pair outside the
    balls or force a basepoint pair into the clique.
    """
    if not eps > 0:
        raise HypconeError("eps must be positive", field="eps")
    x0, y0 = X.basepoint, Y.basepoint
    bx, by = _balls(X, Y, eps)
    pos_x = {int(x): k for k, x in enumerate(bx)}
    pos_y = {int(y): k for k, y in enumerate(by)}
    pairs = [(int(x), int(y)) for x in bx for y in by]
    n = len(pairs)
    extra = set()

    near_y = [int(y) for y in np.nonzero(Y.d[y0] < eps)[0]]
    free_y = [y for y in near_y if y not in pos_y]
    need1 = 0
    if free_y:
        extra.add((x0, free_y[0]))
    else:
        for p, (x, y) in enumerate(pairs):
            if x == x0 and y in near_y:
                need1 |= 1 << p
        if not need1:
            return None
    near_x = [int(x) for x in np.nonzero(X.d[x0] < eps)[0]]
    free_x = [x for x in near_x if x not in pos_x]
    need2 = 0
    if free_x:
        extra.add((free_x[0], y0))
    else:
        for p, (x, y) in enumerate(pairs):
            if y == y0 and x in near_x:
                need2 |= 1 << p
        if not need2:
            return None

    xs = np.array([x for x, _ in pairs], dtype=int)
    ys = np.array([y for _, y in pairs], dtype=int)
    ok = np.abs(X.d[np.ix_(xs, xs)] - Y.d[np.ix_(ys, ys)]) < eps
    np.fill_diagonal(ok, False)
    adj = [sum(1 << q for q in np.nonzero(ok[p])[0].tolist()) for p in range(n)]
    x_bits = [1 << pos_x[x] for x, _ in pairs]
    y_bits = [1 << pos_y[y] for _, y in pairs]
    mask = kernels.clique_cover_search(adj, x_bits, y_bits, (1 << len(bx)) - 1, (1 << len(by)) - 1, need1, need2)
    if mask < 0:
        return None
    chosen = {pairs[p] for p in range(n) if mask >> p & 1}
    return frozenset(chosen | extra)


def critical_values(X, Y, R=None):
    """Every ε where some condition can change truth value.

    These are basepoint distances (conditions 1, 2), their reciprocals (ball
    membership) and distance gaps (condition 5), over all pairs or over the
    pairs of a fixed relation ``R``.
    """
    bx, by = X.d[X.basepoint], Y.d[Y.basepoint]
    vals = [bx[bx > 0], by[by > 0], 1.0 / bx[bx > 0], 1.0 / by[by > 0]]
    if R is None:
        vals.append(np.abs(X.d[:, :, None, None] - Y.d[None, None, :, :]).ravel())
    else:
        xs = np.array([x for x, _ in R], dtype=int)
        ys = np.array([y for _, y in R], dtype=int)
        vals.append(np.abs(X.d[np.ix_(xs, xs)] - Y.d[np.ix_(ys, ys)]).ravel())
    c = np.unique(np.concatenate(vals))
    return c[c > 0]


def _test_points(crit):
    """Ascending probes ``(eps, lower_critical, is_critical)`` covering (0, inf)."""
    prev = 0.0
    for c in crit:
        yield 0.5 * (prev + c), prev, False
        yield c, c, True
        prev = c
    yield 2.0 * prev + 1.0, prev, False


@dataclass(frozen=True)
class MinEps:
    value: float
    attained: bool
    exact: bool
    witness_eps: float
    relation: frozenset

    def to_json(self):
        return {
            "value": self.value,
            "attained": self.attained,
            "exact": self.exact,
            "upper_bound_only": not self.exact,
            "witness_eps": self.witness_eps,
            "relation": sorted([list(p) for p in self.relation]),
        }


def _scan(crit, decide):
    for eps, lower, is_crit in _test_points(crit):
        R = decide(eps)
        if R is not None:
            return float(lower), bool(is_crit), float(eps), R
    raise RuntimeError("no feasible eps found beyond the last critical value")


def greedy_relation(X, Y):
    """Total relation built by nearest-distortion matching outward from the basepoints."""
    R = [(X.basepoint, Y.basepoint)]
    rx = np.array([X.basepoint])
    ry = np.array([Y.basepoint])

    def distortion(x, y):
        return np.max(np.abs(X.d[x, rx] - Y.d[y, ry]))

    for x in np.argsort(X.d[X.basepoint], kind="stable"):
        if x == X.basepoint:
            continue
        y = min(range(len(Y)), key=lambda j: (distortion(x, j), j))
        R.append((int(x), int(y)))
        rx, ry = np.append(rx, x), np.append(ry, y)
    hit = {y for _, y in R}
    for y in np.argsort(Y.d[Y.basepoint], kind="stable"):
        if int(y) in hit:
            continue
        x = min(range(len(X)), key=lambda i: (distortion(i, y), i))
        R.append((int(x), int(y)))
        rx, ry = np.append(rx, x), np.append(ry, y)
    return frozenset(R)


def min_eps(X, Y, mode="exact"):
    """Infimum of ε admitting an ε-approximation.

    ``exact`` decides every piece between consecutive critical values (the
    verdict is constant on each) and needs ``|X|·|Y| <= 20``.  ``heuristic``
    fixes a greedy relation and returns the infimum for that relation alone,
    an upper bound.  ``attained`` tells whether the infimum itself works.
    """
    if mode == "exact":
        if len(X) * len(Y) > EXACT_PAIR_BUDGET:
            raise BudgetExceeded(
                f"exact search allows |X|*|Y| <= {EXACT_PAIR_BUDGET}, got {len(X) * len(Y)}", field="mode")
        value, attained, weps, R = _scan(critical_values(X, Y), lambda e: find_approximation(X, Y, e))
        return MinEps(value, attained, True, weps, R)
    if mode == "heuristic":
        R0 = greedy_relation(X, Y)
        value, attained, weps, R = _scan(
            critical_values(X, Y, R0), lambda e: R0 if is_eps_approximation(R0, X, Y, e) else None)
        return MinEps(value, attained, False, weps, R)
    raise HypconeError(f"unknown mode {mode!r}", field="mode")


@dataclass(frozen=True)
class Cover:
    count: int
    centers: tuple
    exact: bool

    def to_json(self):
        return {"count": self.count, "centers": list(self.centers), "exact": self.exact,
                "upper_bound_only": not self.exact}


def covering_number(X, R, eps, mode="auto"):
    """Fewest open ``eps``-balls centred at points of X covering the open ball ``B_R(x0)``.

    ``exact`` uses branch and bound (at most 25 points in the ball),
    ``greedy`` gives an upper bound; ``auto`` picks exact when it fits.
    """
    if not R > 0:
        raise HypconeError("R must be positive", field="r")
    if not eps > 0:
        raise HypconeError("eps must be positive", field="eps")
    ball = np.nonzero(X.d[X.basepoint] < R)[0]
    if mode == "auto":
        mode = "exact" if ball.size <= EXACT_COVER_BUDGET else "greedy"
    if mode == "exact" and ball.size > EXACT_COVER_BUDGET:
        raise BudgetExceeded(f"exact cover allows {EXACT_COVER_BUDGET} points in the ball, got {ball.size}", field="mode")
    if mode not in ("exact", "greedy"):
        raise HypconeError(f"unknown mode {mode!r}", field="mode")
    inside = X.d[:, ball] < eps
    sets = [sum(1 << k for k in np.nonzero(row)[0].tolist()) for row in inside]
    universe = (1 << ball.size) - 1
    if mode == "exact":
        count, chosen = kernels.min_set_cover(sets, universe)
    else:
        chosen, left = [], universe
        while left:
            i = max(range(len(sets)), key=lambda k: (bin(sets[k] & left).count("1"), -k))
            chosen.append(i)
            left &= ~sets[i]
        count = len(chosen)
    return Cover(int(count), tuple(sorted(int(c) for c in chosen)), mode == "exact")


def sample_flat_torus(F, m, k):
    """``m × k`` grid on the flat torus ``F`` with flat distances; basepoint is the origin."""
    if m < 2 or k < 2:
        raise HypconeError("grid sizes must be at least 2", field="m" if m < 2 else "k")
    u, v = kernels.gauss_reduce(F.a, F.b)
    i, j = np.meshgrid(np.arange(m), np.arange(k), indexing="ij")
    z = (i / m * F.a + j / k * F.b).ravel()
    # move every sample into the fundamental parallelogram of the reduced basis
    basis = np.array([[u.real, v.real], [u.imag, v.imag]])
    coords = np.linalg.solve(basis, np.vstack([z.real, z.imag]))
    coords -= np.floor(coords)
    z = coords[0] * u + coords[1] * v
    d = kernels.torus_distance_matrix(z, u, v, 2)
    labels = [f"{a},{b}" for a, b in zip(i.ravel(), j.ravel())]
    return FinitePointedMetricSpace(d, 0, labels)


def sample_tube_boundary(T, m, k):
    return sample_flat_torus(boundary_torus(T), m, k)
