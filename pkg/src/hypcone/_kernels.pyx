# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_kernels_py`` for the reference semantics."""
import numpy as np

from libc.math cimport fabs, hypot, log, round as cround

ctypedef unsigned long long u64

cdef extern from *:
    int popcount "__builtin_popcountll"(u64 x) nogil
    int ctz "__builtin_ctzll"(u64 x) nogil

_MAXBITS = 63


cdef struct CliqueCtx:
    u64* adj
    u64* xb
    u64* yb
    u64 full_x
    u64 full_y
    u64 need1
    u64 need2


cdef inline bint _feasible(CliqueCtx* c, u64 mask) nogil:
    cdef u64 cx = 0, cy = 0, m = mask
    cdef int p
    while m:
        p = ctz(m)
        cx |= c.xb[p]
        cy |= c.yb[p]
        m &= m - 1
    if cx != c.full_x or cy != c.full_y:
        return False
    if c.need1 and not (mask & c.need1):
        return False
    if c.need2 and not (mask & c.need2):
        return False
    return True


cdef long long _expand(CliqueCtx* c, u64 r, u64 p, u64 x) nogil:
    cdef u64 px, cand, low
    cdef int u, v, deg, best_u = -1, best_deg = -1
    cdef long long found
    if not _feasible(c, r | p):
        return -1
    if p == 0:
        return <long long>r
    px = p | x
    while px:
        u = ctz(px)
        deg = popcount(p & c.adj[u])
        if deg > best_deg:
            best_u = u
            best_deg = deg
        px &= px - 1
    cand = p & ~c.adj[best_u]
    while cand:
        v = ctz(cand)
        low = (<u64>1) << v
        found = _expand(c, r | low, p & c.adj[v], x & c.adj[v])
        if found >= 0:
            return found
        p &= ~low
        x |= low
        cand &= cand - 1
    return -1


def clique_cover_search(adj, x_bits, y_bits, full_x, full_y, need1, need2):
    cdef Py_ssize_t n = len(adj), i
    if n == 0:
        return 0 if (full_x == 0 and full_y == 0 and need1 == 0 and need2 == 0) else -1
    if n > _MAXBITS or full_x >> _MAXBITS or full_y >> _MAXBITS:
        raise ValueError("compiled clique search supports at most 63 pairs/points")
    cdef u64[::1] a = np.asarray(adj, dtype=np.uint64)
    cdef u64[::1] xb = np.asarray(x_bits, dtype=np.uint64)
    cdef u64[::1] yb = np.asarray(y_bits, dtype=np.uint64)
    cdef CliqueCtx c
    c.adj = &a[0]
    c.xb = &xb[0]
    c.yb = &yb[0]
    c.full_x = full_x
    c.full_y = full_y
    c.need1 = need1
    c.need2 = need2
    cdef u64 allp = ((<u64>1) << n) - 1
    cdef long long res
    with nogil:
        res = _expand(&c, 0, allp, 0)
    return int(res)


cdef int _clz(u64 x):
    cdef int n = 0
    if x == 0:
        return 64
    while not (x & ((<u64>1) << 63)):
        x <<= 1
        n += 1
    return n


cdef struct CoverCtx:
    u64* masks
    int nsets
    int* order        # per element e: candidates order[e*nsets : e*nsets + ncand[e]]
    int* ncand
    int maxsize
    int best
    int* best_sel
    int* cur


cdef void _cover_search(CoverCtx* c, u64 left, int depth) nogil:
    cdef int need, e, k, i
    if left == 0:
        if depth < c.best:
            c.best = depth
            for k in range(depth):
                c.best_sel[k] = c.cur[k]
        return
    need = (popcount(left) + c.maxsize - 1) // c.maxsize
    if depth + need >= c.best:
        return
    e = ctz(left)
    for k in range(c.ncand[e]):
        i = c.order[e * c.nsets + k]
        c.cur[depth] = i
        _cover_search(c, left & ~c.masks[i], depth + 1)


def min_set_cover(sets, universe):
    if universe == 0:
        return 0, []
    if universe >> _MAXBITS:
        raise ValueError("compiled set cover supports at most 63 elements")
    cdef u64 uni = universe
    masks_np = np.asarray([s & universe for s in sets], dtype=np.uint64)
    cdef u64[::1] masks = masks_np
    cdef int nsets = masks.shape[0], i, e, nbits
    cdef u64 total = 0, left
    for i in range(nsets):
        total |= masks[i]
    if total != uni:
        return -1, []

    cdef int k, gain, best_gain, best_i
    greedy = []
    left = uni
    while left:
        best_gain = -1
        best_i = 0
        for k in range(nsets):
            gain = popcount(masks[k] & left)
            if gain > best_gain:
                best_gain = gain
                best_i = k
        greedy.append(best_i)
        left &= ~masks[best_i]

    nbits = 64 - _clz(uni)
    sizes_np = np.zeros(nsets, dtype=np.intc)
    cdef int[::1] sizes = sizes_np
    for i in range(nsets):
        sizes[i] = popcount(masks[i])
    by_size_np = np.argsort(-sizes_np, kind="stable").astype(np.intc)
    cdef int[::1] by_size = by_size_np
    order_np = np.zeros(nbits * nsets, dtype=np.intc)
    ncand_np = np.zeros(nbits, dtype=np.intc)
    cdef int[::1] order_w = order_np
    cdef int[::1] ncand_w = ncand_np
    cdef int j, cnt
    for e in range(nbits):
        if (uni >> e) & 1:
            cnt = 0
            for k in range(nsets):
                j = by_size[k]
                if (masks[j] >> e) & 1:
                    order_w[e * nsets + cnt] = j
                    cnt += 1
            ncand_w[e] = cnt
    cdef int[::1] order = order_np
    cdef int[::1] ncand = ncand_np
    best_np = np.zeros(max(len(greedy), 1), dtype=np.intc)
    best_np[:len(greedy)] = greedy
    cur_np = np.zeros(max(len(greedy), 1) + 1, dtype=np.intc)
    cdef int[::1] best_sel = best_np
    cdef int[::1] cur = cur_np

    cdef CoverCtx c
    c.masks = &masks[0]
    c.nsets = nsets
    c.order = &order[0]
    c.ncand = &ncand[0]
    c.maxsize = int(sizes_np.max())
    c.best = len(greedy)
    c.best_sel = &best_sel[0]
    c.cur = &cur[0]
    with nogil:
        _cover_search(&c, uni, 0)
    return c.best, [int(best_sel[k]) for k in range(c.best)]


cdef inline void _reduce(double ur, double ui, double vr, double vi,
                         double* our, double* oui, double* ovr, double* ovi) nogil:
    cdef double k, tr, ti, nu
    cdef int it
    if hypot(ur, ui) > hypot(vr, vi):
        ur, ui, vr, vi = vr, vi, ur, ui
    for it in range(10000):
        nu = ur * ur + ui * ui
        k = cround((vr * ur + vi * ui) / nu)
        vr -= k * ur
        vi -= k * ui
        if hypot(vr, vi) >= hypot(ur, ui):
            break
        tr = ur
        ti = ui
        ur = vr
        ui = vi
        vr = tr
        vi = ti
    our[0] = ur
    oui[0] = ui
    ovr[0] = vr
    ovi[0] = vi


def gauss_reduce(a, b):
    cdef double ur, ui, vr, vi
    a = complex(a)
    b = complex(b)
    _reduce(a.real, a.imag, b.real, b.imag, &ur, &ui, &vr, &vi)
    return complex(ur, ui), complex(vr, vi)


def gauss_reduce_many(a, b):
    a_np = np.ascontiguousarray(a, dtype=complex).ravel()
    b_np = np.ascontiguousarray(b, dtype=complex).ravel()
    cdef double[::1] ar = np.ascontiguousarray(a_np.real)
    cdef double[::1] ai = np.ascontiguousarray(a_np.imag)
    cdef double[::1] br = np.ascontiguousarray(b_np.real)
    cdef double[::1] bi = np.ascontiguousarray(b_np.imag)
    cdef Py_ssize_t n = ar.shape[0], i
    out = np.empty((4, n))
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(n):
            _reduce(ar[i], ai[i], br[i], bi[i], &o[0, i], &o[1, i], &o[2, i], &o[3, i])
    shape = np.shape(a)
    return (out[0] + 1j * out[1]).reshape(shape), (out[2] + 1j * out[3]).reshape(shape)


def torus_distance_matrix(points, u, v, int reach=2):
    z = np.ascontiguousarray(points, dtype=complex)
    cdef double[::1] xr = np.ascontiguousarray(z.real)
    cdef double[::1] xi = np.ascontiguousarray(z.imag)
    cdef Py_ssize_t n = xr.shape[0], i, j
    cdef int s, t
    cdef double ur = u.real, ui = u.imag, vr = v.real, vi = v.imag
    cdef double dr, di, best, d
    out = np.zeros((n, n))
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                best = 1e300
                for s in range(-reach, reach + 1):
                    for t in range(-reach, reach + 1):
                        dr = xr[i] - xr[j] + s * ur + t * vr
                        di = xi[i] - xi[j] + s * ui + t * vi
                        d = hypot(dr, di)
                        if d < best:
                            best = d
                o[i, j] = best
                o[j, i] = best
    return out


def clausen_series(theta, coeffs):
    th = np.asarray(theta, dtype=float)
    flat = np.ascontiguousarray(th).ravel()
    cdef double[::1] t = flat
    cdef double[::1] c = np.ascontiguousarray(coeffs, dtype=float)
    cdef Py_ssize_t n = t.shape[0], m = c.shape[0], i, k
    out = np.zeros(n)
    cdef double[::1] o = out
    cdef double x, x2, acc
    with nogil:
        for i in range(n):
            x = t[i]
            if x == 0.0:
                continue
            x2 = x * x
            acc = 0.0
            for k in range(m - 1, -1, -1):
                acc = acc * x2 + c[k]
            o[i] = x * (1.0 - log(fabs(x)) + x2 * acc)
    return out.reshape(th.shape)
