"""Hot kernels, compiled when available.

The Cython module ``hypcone._kernels`` is used when it was built; otherwise (or
when ``HYPCONE_PURE_PYTHON=1`` is set) the pure-Python twin in
``hypcone._kernels_py`` is used.  ``BACKEND`` names the active choice.
"""
import contextlib
import os

from . import _kernels_py

if os.environ.get("HYPCONE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "cython" if _impl is not _kernels_py else "python"

# the compiled searches use 64-bit masks; larger instances go to the Python twin
_MAXBITS = 63


def clique_cover_search(adj, x_bits, y_bits, full_x, full_y, need1, need2):
    if len(adj) > _MAXBITS or full_x >> _MAXBITS or full_y >> _MAXBITS:
        return _kernels_py.clique_cover_search(adj, x_bits, y_bits, full_x, full_y, need1, need2)
    return _impl.clique_cover_search(adj, x_bits, y_bits, full_x, full_y, need1, need2)


def min_set_cover(sets, universe):
    if universe >> _MAXBITS:
        return _kernels_py.min_set_cover(sets, universe)
    return _impl.min_set_cover(sets, universe)


gauss_reduce = _impl.gauss_reduce
gauss_reduce_many = _impl.gauss_reduce_many
torus_distance_matrix = _impl.torus_distance_matrix
clausen_series = _impl.clausen_series


def available_backends():
    """Return ``{name: module}`` for every importable kernel backend."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        out["cython"] = _kernels
    return out


@contextlib.contextmanager
def use_backend(name):
    """Temporarily route every kernel through backend ``name``."""
    global _impl, gauss_reduce, gauss_reduce_many, torus_distance_matrix, clausen_series
    mod = available_backends()[name]
    saved = (_impl, gauss_reduce, gauss_reduce_many, torus_distance_matrix, clausen_series)
    _impl = mod
    gauss_reduce, gauss_reduce_many = mod.gauss_reduce, mod.gauss_reduce_many
    torus_distance_matrix, clausen_series = mod.torus_distance_matrix, mod.clausen_series
    try:
        yield mod
    finally:
        _impl, gauss_reduce, gauss_reduce_many, torus_distance_matrix, clausen_series = saved
