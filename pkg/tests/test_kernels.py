import os
import subprocess
import sys

import numpy as np
import pytest

from hypcone import gh, kernels, volume
from hypcone import _kernels_py as pyk

from _oracles import random_space

backends = kernels.available_backends()
needs_cython = pytest.mark.skipif("cython" not in backends, reason="compiled kernels not built")


def test_backend_selection():
    assert kernels.BACKEND in backends
    assert "python" in backends


def test_env_var_forces_python_backend():
    env = dict(os.environ, HYPCONE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from hypcone import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_use_backend_restores_state():
    before = kernels.gauss_reduce
    with kernels.use_backend("python"):
        assert kernels.gauss_reduce is pyk.gauss_reduce
    assert kernels.gauss_reduce is before


@needs_cython
def test_gauss_reduce_equivalence():
    cy = backends["cython"]
    rng = np.random.default_rng(0)
    a = rng.normal(size=500) + 1j * rng.normal(size=500)
    b = rng.normal(size=500) + 1j * rng.normal(size=500)
    u1, v1 = pyk.gauss_reduce_many(a, b)
    u2, v2 = cy.gauss_reduce_many(a, b)
    assert np.allclose(np.abs(u1), np.abs(u2), rtol=1e-13)
    assert np.allclose(np.abs(v1), np.abs(v2), rtol=1e-13)
    for k in range(20):
        assert np.allclose(pyk.gauss_reduce(a[k], b[k]), cy.gauss_reduce(a[k], b[k]))


@needs_cython
def test_torus_distance_and_clausen_equivalence():
    cy = backends["cython"]
    rng = np.random.default_rng(1)
    pts = rng.uniform(0, 1, 40) + 1j * rng.uniform(0, 1, 40)
    u, v = pyk.gauss_reduce(1.1, 0.3 + 0.9j)
    assert np.allclose(pyk.torus_distance_matrix(pts, u, v, 2), cy.torus_distance_matrix(pts, u, v, 2), atol=1e-14)
    th = np.linspace(-np.pi, np.pi, 1001)
    coeffs = volume._clausen_coeffs()
    assert np.allclose(pyk.clausen_series(th, coeffs), cy.clausen_series(th, coeffs), atol=1e-15)


@needs_cython
def test_search_results_agree_across_backends():
    rng = np.random.default_rng(2)
    for _ in range(40):
        X = random_space(rng, int(rng.integers(1, 5)))
        Y = random_space(rng, int(rng.integers(1, 6)))
        res = []
        for name in ("python", "cython"):
            with kernels.use_backend(name):
                m = gh.min_eps(X, Y)
                c = gh.covering_number(X, 2.0, 0.7)
            res.append((m.value, m.attained, c.count))
        assert res[0] == res[1]


@needs_cython
def test_large_masks_fall_back_to_python():
    # 70 sets: beyond the 63-bit limit of the compiled cover search
    universe = (1 << 70) - 1
    sets = [1 << k for k in range(70)] + [universe]
    assert kernels.min_set_cover(sets, universe)[0] == 1
    with pytest.raises(ValueError):
        backends["cython"].min_set_cover(sets, universe)


def test_set_cover_reports_uncoverable():
    assert pyk.min_set_cover([1, 2], 7) == (-1, [])
    assert pyk.min_set_cover([], 0) == (0, [])
