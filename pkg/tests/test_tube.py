import math

import mpmath
import numpy as np
import pytest

from hypcone import tube
from hypcone.errors import HypconeError, UnsupportedCurvature
from hypcone.tube import FlatTorus, Tube


def brute_systole(a, b, reach=20):
    ks = np.arange(-reach, reach + 1)
    m, n = np.meshgrid(ks, ks)
    v = np.abs(m * a + n * b).ravel()
    return v[v > 1e-12].min()


def test_rectangle_area_volume_against_mpmath():
    T = Tube(sigma=1.0, delta=1.0, theta=math.pi)
    mp_sinh, mp_cosh, mp_pi = mpmath.sinh(1), mpmath.cosh(1), mpmath.pi
    w, h = tube.boundary_rectangle(T)
    assert w == pytest.approx(float(mp_pi * mp_sinh), rel=1e-15)
    assert h == pytest.approx(float(mp_cosh), rel=1e-15)
    assert tube.area(T) == pytest.approx(float(mp_pi * mp_sinh * mp_cosh), rel=1e-14)
    assert tube.volume(T) == pytest.approx(float(mp_pi * mp_sinh ** 2 / 2), rel=1e-14)
    assert tube.area_volume_ratio(T) == pytest.approx(float(2 * mpmath.coth(1)), rel=1e-14)


def test_rectangle_linearity():
    T1 = Tube(1.0, 1.0, math.pi)
    T2 = Tube(2.0, 1.0, math.pi)
    assert tube.boundary_rectangle(T2)[1] == pytest.approx(2 * tube.boundary_rectangle(T1)[1], rel=1e-15)
    assert tube.boundary_rectangle(Tube(1.0, 1.0, 1e-12))[0] < 1e-11


def test_ratio_tends_to_two():
    assert tube.area_volume_ratio(Tube(1.0, 30.0, 1.0)) == pytest.approx(2.0, rel=1e-12)


def test_unsupported_curvature():
    T = Tube(1.0, 1.0, 1.0, K=-0.25)
    for fn in (tube.boundary_rectangle, tube.area, tube.volume, tube.boundary_torus):
        with pytest.raises(UnsupportedCurvature) as err:
            fn(T)
        assert err.value.field == "K"


@pytest.mark.parametrize("field,kwargs", [
    ("sigma", dict(sigma=0, delta=1, theta=1)),
    ("delta", dict(sigma=1, delta=-1, theta=1)),
    ("theta", dict(sigma=1, delta=1, theta=0)),
    ("K", dict(sigma=1, delta=1, theta=1, K=0.5)),
])
def test_invalid_tubes(field, kwargs):
    with pytest.raises(HypconeError) as err:
        Tube(**kwargs)
    assert err.value.field == field


def test_euclidean_tube_is_exact():
    T = Tube(2.0, 0.5, 1.5, K=0.0)
    assert tube.area(T) == 1.5 * 2.0 * 0.5
    assert tube.volume(T) == 0.5 * 1.5 * 2.0 * 0.25
    assert tube.boundary_torus(T).area == pytest.approx(tube.area(T), rel=1e-15)


def test_small_radius_matches_euclidean():
    T = Tube(1.3, 1e-3, 0.7)
    assert tube.area(T) == pytest.approx(0.7 * 1.3 * 1e-3, rel=1e-5)


def test_boundary_torus_examples():
    T = Tube(1.0, 1.0, 2.0)
    F = tube.boundary_torus(T)
    assert F.a == pytest.approx(2 * math.sinh(1))
    assert F.b == pytest.approx(1j * math.cosh(1))
    for tau in (0.3, -1.7, 5.0):
        Ft = tube.boundary_torus(Tube(1.0, 1.0, 2.0, tau))
        assert Ft.area == pytest.approx(tube.area(T), rel=1e-14)
    # a full meridian shear gives the same lattice
    Fs = tube.boundary_torus(Tube(1.0, 1.0, 2.0, 2.0))
    assert Fs.modulus() == pytest.approx(F.modulus(), abs=1e-12)
    assert tube.systole(Fs) == pytest.approx(tube.systole(F), rel=1e-14)


def test_systole_examples():
    assert tube.systole(FlatTorus(3, 4j)) == 3
    F = FlatTorus(1, 0.5 + 0.1j)
    assert tube.systole(F) == pytest.approx(brute_systole(1, 0.5 + 0.1j), rel=1e-14)
    assert tube.systole(F) == pytest.approx(0.2, rel=1e-12)
    assert tube.injectivity_radius(F) == pytest.approx(0.1, rel=1e-12)
    # unimodular change of basis
    G = FlatTorus(1 + 3 * (0.5 + 0.1j), 2 + 7 * (0.5 + 0.1j))
    assert tube.systole(G) == pytest.approx(tube.systole(F), rel=1e-12)


def test_systole_against_brute_force():
    rng = np.random.default_rng(2)
    for _ in range(200):
        a = complex(*rng.normal(size=2))
        b = complex(*rng.normal(size=2))
        if abs((a.conjugate() * b).imag) < 0.05:
            continue
        assert tube.systole(FlatTorus(a, b)) == pytest.approx(brute_systole(a, b), rel=1e-12)


def test_degenerate_torus():
    with pytest.raises(HypconeError):
        FlatTorus(1, 2)


def test_modulus_in_fundamental_domain():
    rng = np.random.default_rng(3)
    for _ in range(200):
        F = FlatTorus(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)))
        m = F.modulus()
        assert -0.5 < m.real <= 0.5 + 1e-12
        assert abs(m) >= 1 - 1e-12


def test_rescale():
    T = Tube(1.0, 1.0, 2.0, 0.3)
    assert tube.rescale(T, 1.0) == T
    T2 = tube.rescale(T, 2.0)
    assert (T2.sigma, T2.delta, T2.theta, T2.tau, T2.K) == (2.0, 2.0, 2.0, 0.3, -0.25)
    a, b = 1.7, 0.3
    lhs, rhs = tube.rescale(tube.rescale(T, a), b), tube.rescale(T, a * b)
    for name in ("sigma", "delta", "theta", "tau", "K"):
        assert getattr(lhs, name) == pytest.approx(getattr(rhs, name), rel=1e-15)
    with pytest.raises(HypconeError):
        tube.rescale(T, 0)


def test_json_round_trip():
    T = Tube(1.0, 2.0, 3.0, 0.5)
    assert Tube.from_json(T.to_json()) == T
    with pytest.raises(HypconeError) as err:
        Tube.from_json({"sigma": 1, "delta": 1, "theta": 1, "radius": 2})
    assert err.value.field == "radius"


def test_angle_pinch_family():
    prev = None
    for i in range(1, 51):
        T = tube.cusp_opening_family("angle_pinch", i)
        assert tube.area(T) == pytest.approx(1.0, rel=1e-12)
        assert tube.disk_bounding_length(T) == pytest.approx(1.0, rel=1e-12)
        if prev is not None:
            assert T.theta < prev.theta and T.sigma < prev.sigma
        prev = T


def test_twist_family():
    lengths = []
    for i in range(1, 13):
        T = tube.cusp_opening_family("twist", i)
        F = tube.boundary_torus(T)
        assert F.area == pytest.approx(1.0, rel=1e-12)
        m = F.modulus()
        assert -0.5 < m.real <= 0.5 + 1e-9 and abs(m) >= 1 - 1e-9
        assert m.imag == pytest.approx(1.0, rel=1e-6)
        lengths.append(tube.disk_bounding_length(T))
    assert all(b > a for a, b in zip(lengths, lengths[1:]))


def test_family_errors():
    with pytest.raises(HypconeError):
        tube.cusp_opening_family("angle_pinch", 0)
    with pytest.raises(HypconeError):
        tube.cusp_opening_family("spiral", 1)
    with pytest.raises(HypconeError) as err:
        tube.cusp_opening_family("twist", 1, theta=0.1)
    assert err.value.field == "theta"


def test_report_keys():
    rep = tube.report(Tube(1.0, 1.0, math.pi))
    assert rep["area_volume_ratio"] == pytest.approx(rep["two_coth_delta"], rel=1e-14)
    assert rep["systole"] <= rep["rectangle"][0] + 1e-15
