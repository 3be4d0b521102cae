"""Pure-Python implementations of the hot kernels.

Every function here has a twin with the same signature in ``_kernels.pyx``.
Bit masks are plain Python ints; the compiled version caps them at 63 bits.
"""
import numpy as np


def clique_cover_search(adj, x_bits, y_bits, full_x, full_y, need1, need2):
    """Find a clique of compatible pairs that covers both projections.

    ``adj[p]`` is the bit mask of pairs compatible with pair ``p`` (without
    ``p`` itself).  ``x_bits[p]``/``y_bits[p]`` are single-bit masks naming the
    X and Y point of the pair.  A clique is accepted when the union of its
    x-bits equals ``full_x``, the union of y-bits equals ``full_y`` and it meets
    ``need1`` and ``need2`` (a zero ``need`` mask means no requirement).

    Returns the accepted clique as a bit mask, or -1 if none exists.  The
    search is Bron-Kerbosch with pivoting, pruned whenever the current clique
    plus all remaining candidates cannot meet the requirements; since every
    requirement is monotone under adding pairs this visits each maximal clique
    at most once.
    """
    n = len(adj)
    if n == 0:
        return 0 if (full_x == 0 and full_y == 0 and need1 == 0 and need2 == 0) else -1

    def cover(mask):
        cx = cy = 0
        while mask:
            low = mask & -mask
            p = low.bit_length() - 1
            cx |= x_bits[p]
            cy |= y_bits[p]
            mask ^= low
        return cx, cy

    def feasible(mask):
        cx, cy = cover(mask)
        if cx != full_x or cy != full_y:
            return False
        if need1 and not (mask & need1):
            return False
        if need2 and not (mask & need2):
            return False
        return True

    def expand(r, p, x):
        if not feasible(r | p):
            return -1
        if p == 0:
            return r
        # Tomita pivot: the vertex of P|X with most neighbours in P.
        best_u, best_deg = -1, -1
        px = p | x
        while px:
            low = px & -px
            u = low.bit_length() - 1
            deg = bin(p & adj[u]).count("1")
            if deg > best_deg:
                best_u, best_deg = u, deg
            px ^= low
        cand = p & ~adj[best_u]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            found = expand(r | low, p & adj[v], x & adj[v])
            if found >= 0:
                return found
            p &= ~low
            x |= low
            cand ^= low
        return -1

    return expand(0, (1 << n) - 1, 0)


def min_set_cover(sets, universe):
    """Exact minimum set cover by branch and bound.

    ``sets`` is a sequence of bit masks, ``universe`` the mask to cover.
    Returns ``(count, chosen)`` where ``chosen`` lists indices into ``sets``;
    ``count`` is -1 when the union of all sets misses part of the universe.
    """
    if universe == 0:
        return 0, []
    masks = [s & universe for s in sets]
    total = 0
    for m in masks:
        total |= m
    if total != universe:
        return -1, []

    # greedy solution seeds the bound
    left, greedy = universe, []
    while left:
        i = max(range(len(masks)), key=lambda k: bin(masks[k] & left).count("1"))
        greedy.append(i)
        left &= ~masks[i]
    best = [len(greedy), list(greedy)]
    maxsize = max(bin(m).count("1") for m in masks)

    by_elem = {}
    for e in range(universe.bit_length()):
        if universe >> e & 1:
            cands = [i for i, m in enumerate(masks) if m >> e & 1]
            cands.sort(key=lambda i: -bin(masks[i]).count("1"))
            by_elem[e] = cands

    def search(left, chosen):
        if not left:
            if len(chosen) < best[0]:
                best[0], best[1] = len(chosen), list(chosen)
            return
        need = -(-bin(left).count("1") // maxsize)
        if len(chosen) + need >= best[0]:
            return
        e = (left & -left).bit_length() - 1
        for i in by_elem[e]:
            chosen.append(i)
            search(left & ~masks[i], chosen)
            chosen.pop()

    search(universe, [])
    return best[0], best[1]


def gauss_reduce(a, b):
    """Lagrange-Gauss reduction of the planar lattice spanned by complex a, b.

    Returns ``(u, v)`` with ``|u| <= |v|`` and ``|Re(v/u)| <= 1/2``; ``|u|`` is
    the shortest nonzero lattice vector.
    """
    u, v = complex(a), complex(b)
    if abs(u) > abs(v):
        u, v = v, u
    for _ in range(10000):
        k = round((v.real * u.real + v.imag * u.imag) / (abs(u) ** 2))
        v = v - k * u
        if abs(v) >= abs(u):
            return u, v
        u, v = v, u
    raise RuntimeError("lattice reduction did not terminate")


def gauss_reduce_many(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    u = np.empty_like(a)
    v = np.empty_like(b)
    for i in range(a.size):
        u.flat[i], v.flat[i] = gauss_reduce(a.flat[i], b.flat[i])
    return u, v


def torus_distance_matrix(points, u, v, reach=2):
    """Flat-torus distances between ``points`` for the lattice spanned by u, v.

    The minimum is taken over translates ``s u + t v`` with ``|s|, |t| <= reach``;
    ``u, v`` should be a reduced basis.
    """
    z = np.asarray(points, dtype=complex)
    diff = z[:, None] - z[None, :]
    ks = np.arange(-reach, reach + 1)
    shifts = (ks[:, None] * u + ks[None, :] * v).ravel()
    d = np.abs(diff[:, :, None] + shifts[None, None, :]).min(axis=2)
    np.fill_diagonal(d, 0.0)
    return d


def clausen_series(theta, coeffs):
    """Clausen function Cl2 on |theta| <= pi via its Bernoulli power series.

    ``coeffs[n-1]`` is the coefficient of ``theta**(2n+1)``.
    """
    th = np.asarray(theta, dtype=float)
    out = np.zeros_like(th)
    nz = th != 0.0
    t = th[nz]
    t2 = t * t
    acc = np.zeros_like(t)
    for c in coeffs[::-1]:
        acc = acc * t2 + c
    out[nz] = t * (1.0 - np.log(np.abs(t)) + t2 * acc)
    return out


__all__ = [
    "clique_cover_search",
    "min_set_cover",
    "gauss_reduce",
    "gauss_reduce_many",
    "torus_distance_matrix",
    "clausen_series",
]
