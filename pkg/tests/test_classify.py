import itertools
import math

import numpy as np
import pytest

from hypcone import classify as cl
from hypcone.errors import AngleAbovePi, HypconeError

PI = math.pi
THIRD = 2 * PI / 3


def test_gauss_bonnet_examples():
    assert cl.gauss_bonnet_defect(cl.ConeSurface(2, (PI,) * 4)) == pytest.approx(0, abs=1e-15)
    assert cl.gauss_bonnet_defect(cl.ConeSurface(2, (0.5, 2.0, 2 * PI - 2.5))) == pytest.approx(0, abs=1e-14)
    assert cl.gauss_bonnet_defect(cl.ConeSurface(2, (PI / 2,) * 3)) == pytest.approx(-PI / 2, abs=1e-14)
    assert cl.gauss_bonnet_defect(cl.ConeSurface(0, ())) == 0.0


def test_flat_examples():
    v = cl.classify_flat_le_pi(cl.ConeSurface(2, (PI,) * 4))
    assert v.kind == cl.FOUR_PI_SPHERE and v.flat
    assert cl.classify_flat_le_pi(cl.ConeSurface(2, (PI / 2, PI / 2, PI))).kind == cl.TRIPLE_SPHERE
    v = cl.classify_flat_le_pi(cl.ConeSurface(2, (PI / 2,) * 8))
    assert v.kind == cl.NOT_FLAT and not v.flat
    assert v.to_json()["verdict"] == cl.NOT_FLAT
    # flat torus without cone points is outside this classification
    assert cl.classify_flat_le_pi(cl.ConeSurface(0, ())).kind == cl.NOT_FLAT


def test_angle_above_pi_and_invalid_surfaces():
    with pytest.raises(AngleAbovePi):
        cl.classify_flat_le_pi(cl.ConeSurface(2, (4.0, 1.0, 1.28)))
    for chi, angles in ((3, ()), (1, ()), (2, (0.0,)), (2, (7.0,))):
        with pytest.raises(HypconeError):
            cl.ConeSurface(chi, angles)


def test_defect_permutation_invariant():
    rng = np.random.default_rng(0)
    for _ in range(200):
        angles = tuple(rng.uniform(0.1, 2 * PI, int(rng.integers(0, 7))))
        base = cl.gauss_bonnet_defect(cl.ConeSurface(2, angles))
        perm = tuple(rng.permutation(angles)) if angles else ()
        assert cl.gauss_bonnet_defect(cl.ConeSurface(2, perm)) == pytest.approx(base, abs=1e-12)


def test_flat_iff_zero_defect_on_grid():
    # multiples of pi/12 keep the zero-defect cases exactly representable up to rounding
    step = PI / 12
    grid = [k * step for k in range(1, 13)]
    count = 0
    for n in (3, 4):
        for angles in itertools.product(grid, repeat=n):
            for chi in (2, 0, -2):
                S = cl.ConeSurface(chi, angles)
                v = cl.classify_flat_le_pi(S)
                assert v.flat == (chi == 2 and abs(cl.gauss_bonnet_defect(S)) <= 1e-12)
                count += 1
    assert count > 1e4


def test_gram_matrix_regular_ideal():
    T = cl.TetrahedronAngles(THIRD, THIRD, THIRD, 0.0)
    G = cl.gram_matrix(T)
    assert np.allclose(G, G.T)
    assert np.allclose(G[~np.eye(4, dtype=bool)], -0.5)
    # eigenvalues 3/2 (three times) and -1/2
    assert np.linalg.det(G) == pytest.approx(1.5 ** 3 * -0.5, rel=1e-12)
    assert np.allclose(cl.vertex_minors(G), 0, atol=1e-12)
    assert cl.signature(G) == (3, 1)


def test_opposite_edges_share_angles():
    T = cl.TetrahedronAngles(1.5, 2.0, 2 * PI - 3.5, 0.2)
    G = cl.gram_matrix(T)
    assert G[0, 1] == G[2, 3] == pytest.approx(-math.cos((1.5 - 0.2) / 2))
    assert G[0, 2] == G[1, 3] == pytest.approx(-math.cos((2.0 - 0.2) / 2))
    assert G[0, 3] == G[1, 2] == pytest.approx(-math.cos((2 * PI - 3.7) / 2))


def test_any_ideal_triple_has_singular_minors():
    rng = np.random.default_rng(1)
    for _ in range(100):
        a, b = rng.uniform(0.1, PI - 0.1, 2)
        c = 2 * PI - a - b
        if not 0 < c < PI:
            continue
        T = cl.TetrahedronAngles(a, b, c, 0.0)
        assert np.allclose(cl.vertex_minors(cl.gram_matrix(T)), 0, atol=1e-12)
        assert cl.tetrahedron_regime(T).regime == cl.IDEAL


def test_regimes():
    assert cl.tetrahedron_regime(cl.TetrahedronAngles(THIRD, THIRD, THIRD, 0.0)).regime == cl.IDEAL
    rep = cl.tetrahedron_regime(cl.TetrahedronAngles(THIRD, THIRD, THIRD, 0.1))
    assert rep.regime == cl.TRUNCATED
    assert rep.singular_link == pytest.approx((THIRD - 0.1,) * 6)
    assert all(m < 0 for m in rep.minors)
    # a nonpositive dihedral angle
    assert cl.tetrahedron_regime(cl.TetrahedronAngles(THIRD, THIRD, THIRD, 2.2)).regime == cl.INVALID
    assert cl.tetrahedron_regime(cl.TetrahedronAngles(THIRD, THIRD, THIRD, -0.05)).regime == cl.INVALID


def test_minor_sign_change_at_zero():
    signs = []
    for eps in (-1e-6, 0.0, 1e-6):
        m = cl.vertex_minors(cl.gram_matrix(cl.TetrahedronAngles(THIRD, THIRD, THIRD, eps)))
        signs.append(np.sign(np.where(np.abs(m) <= 1e-12, 0.0, m)))
    assert np.all(signs[0] > 0) and np.all(signs[1] == 0) and np.all(signs[2] < 0)


def test_tetra_validation():
    with pytest.raises(HypconeError) as err:
        cl.TetrahedronAngles(1.0, 1.0, 1.0)
    assert err.value.field == "gamma"
    with pytest.raises(HypconeError) as err:
        cl.TetrahedronAngles(PI, 0.5, PI - 0.5)
    assert err.value.field == "alpha"


def test_report_json():
    js = cl.tetrahedron_regime(cl.TetrahedronAngles(THIRD, THIRD, THIRD, 0.1)).to_json()
    assert js["regime"] == "Truncated"
    assert js["signature"] == [3, 1]
    assert len(js["singular_link_cone_angles"]) == 6
