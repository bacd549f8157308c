import numpy as np
import pytest

from nrshift.bidisk import (
    RationalInnerFunction,
    bidisk_numrange,
    bidisk_numrange_via_mtheta,
    boundary_curve,
    exceptional_check,
    lifted_blaschke,
    mtheta_fixture,
    poly2_eval,
    product_example,
    reflect_poly,
    slice_blaschke,
    tau_grid,
    theta_linear,
    theta_squared,
)
from nrshift.errors import InputError, NumericalError
from nrshift.geometry import convex_hull
from nrshift.numrange import elliptical_range, numerical_radius, numerical_range
from nrshift.shift import sb_matrix

GAMMAS = 2 * np.pi * np.arange(720) / 720


def test_reflect_figure_caption_example():
    p = np.array([[2, 1], [-1, 0]], dtype=complex)
    pr = reflect_poly(p, (1, 1))
    # 2 z1 z2 + z1 - z2
    assert np.array_equal(pr, np.array([[0, -1], [1, 2]], dtype=complex))


def test_reflect_constant_and_involution():
    assert np.array_equal(reflect_poly([[1, 0], [0, 0]]), np.array([[0, 0], [0, 1]]))
    rng = np.random.default_rng(0)
    p = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
    assert np.array_equal(reflect_poly(reflect_poly(p)), p)
    with pytest.raises(InputError):
        reflect_poly(p, (3, 3))


def test_reflect_matches_definition():
    rng = np.random.default_rng(1)
    p = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    z1, z2 = 0.3 + 0.4j, -0.7 + 0.1j
    ref = z1 ** 2 * z2 ** 2 * np.conj(poly2_eval(p, 1 / np.conj(z1), 1 / np.conj(z2)))
    assert abs(poly2_eval(reflect_poly(p), z1, z2) - ref) < 1e-12


def test_exceptional_examples():
    th = RationalInnerFunction([[2, -1], [-1, 0]])
    assert exceptional_check(th, 1.0)
    assert not exceptional_check(th, -1.0)
    assert exceptional_check(theta_linear(2, 1), -1.0)


def test_inner_on_torus():
    th = product_example()
    rng = np.random.default_rng(2)
    t1 = np.exp(2j * np.pi * rng.uniform(size=1000))
    t2 = np.exp(2j * np.pi * rng.uniform(size=1000))
    keep = np.abs(poly2_eval(th.p_coeffs, t1, t2)) > 1e-3
    assert np.max(np.abs(np.abs(th(t1[keep], t2[keep])) - 1)) < 1e-10


def test_rejects_non_inner():
    with pytest.raises(InputError):
        RationalInnerFunction([[0.5, 1], [1, 0]])
    with pytest.raises(InputError):
        RationalInnerFunction([[1, 0]], constant=2)


def test_slice_single_zero_in_disk():
    s = slice_blaschke(theta_linear(2, 1), 1j)
    assert not s.excluded
    (z,) = s.blaschke.zeros
    assert abs(z) < 1
    pr = reflect_poly(theta_linear(2, 1).p_coeffs)
    assert abs(poly2_eval(pr, z, 1j)) < 1e-12


def test_slice_lifted_blaschke_is_tau_independent():
    zeros = [0.3, -0.5j]
    th = lifted_blaschke(zeros)
    for tau in tau_grid(8):
        s = slice_blaschke(th, tau)
        got = np.sort_complex(s.blaschke.zeros)
        assert np.allclose(got, np.sort_complex(np.array(zeros)), atol=1e-12)


def test_slice_excluded_at_singularity():
    assert slice_blaschke(theta_squared(2, 1), -1).excluded


def test_slice_degree_and_match():
    th = product_example()
    rng = np.random.default_rng(3)
    for tau in tau_grid(24)[1:]:
        s = slice_blaschke(th, tau)
        assert s.blaschke.degree == 2
        assert np.all(np.abs(s.blaschke.zeros) < 1)
        z = 0.9 * np.exp(2j * np.pi * rng.uniform(size=20))
        assert np.max(np.abs(s.blaschke(z) - th(z, tau))) < 1e-8


def test_slice_rejects_bad_tau():
    with pytest.raises(InputError):
        slice_blaschke(product_example(), 0.5)


def test_bidisk_trivial_z1():
    th = RationalInnerFunction([[1.0], [0.0]])
    res = bidisk_numrange(th, 8, 16)
    assert len(res.polygon) == 1 and abs(res.polygon.vertices[0]) < 1e-15
    assert res.excluded == 0 and res.used == 8


def test_bidisk_rejects_small_grid():
    with pytest.raises(InputError):
        bidisk_numrange(product_example(), 4, 16)


def test_bidisk_monotone_in_tau():
    th = product_example()
    a = bidisk_numrange(th, 60, 180).polygon
    b = bidisk_numrange(th, 120, 180).polygon
    assert np.all(b.support(GAMMAS) - a.support(GAMMAS) >= -1e-9)


def test_bidisk_all_excluded_raises():
    # an exclusion radius this wide flags every slice
    with pytest.raises(NumericalError):
        bidisk_numrange(RationalInnerFunction([[2, -1], [-1, 0]]), 8, 16, tol=3.0)


def test_mtheta_fixture_values():
    assert np.allclose(mtheta_fixture(1), np.eye(2), atol=1e-15)
    ref = np.array([[1 / 3, 0], [-4 * np.sqrt(6) / 12, 0.5]])
    assert np.allclose(mtheta_fixture(-1), ref, atol=1e-15)
    ref0 = np.array([[0.5, 0], [-np.sqrt(6) / 6, 2 / 3]])
    assert np.allclose(mtheta_fixture(0), ref0, atol=1e-15)
    with pytest.raises(InputError):
        mtheta_fixture(1.5)


def test_mtheta_hull_contains_each_ellipse():
    H = bidisk_numrange_via_mtheta(36, 360)
    for tau in tau_grid(36):
        e = elliptical_range(mtheta_fixture(tau)).boundary(360)
        assert np.all(H.support(GAMMAS) - e.support(GAMMAS) >= -1e-9)


def test_mtheta_small_grid_contains_one():
    H = bidisk_numrange_via_mtheta(8, 90)
    assert H.contains(1.0, 1e-12)


def test_boundary_curve_examples():
    for a, c in [(2, 1), (3, 2), (1.5, 0.5)]:
        x, y = boundary_curve(a, c, 0.0)
        assert (x, y) == (1.0, 0.0)
    x, y = boundary_curve(2, 1, np.pi)
    assert abs(x + 1 / 9) < 1e-15 and abs(y) < 1e-15


def test_boundary_curve_rejects_bad_params():
    with pytest.raises(InputError):
        boundary_curve(2, 2, 0.0)
    with pytest.raises(InputError):
        boundary_curve(-1, -2, 0.0)


def test_boundary_curve_inside_outer():
    th = theta_squared(2, 1)
    res = bidisk_numrange(th, 180, 180)
    x, y = boundary_curve(2, 1, 2 * np.pi * np.arange(180) / 180)
    assert np.max(res.polygon.distance(x + 1j * y)) < 1e-2


def test_radius_dichotomy():
    singular = bidisk_numrange(theta_squared(2, 1), 180, 180).polygon
    smooth = bidisk_numrange(theta_squared(3, 1), 180, 180).polygon
    assert np.max(np.abs(singular.vertices)) > 0.99
    assert np.max(np.abs(smooth.vertices)) < 0.99


def test_slice_ranges_match_sb_numerical_range():
    th = theta_squared(2, 1)
    s = slice_blaschke(th, 1j)
    inner = numerical_range(sb_matrix(s.blaschke.zeros), 360).inner
    res = bidisk_numrange(th, 8, 360)
    assert np.all(res.polygon.support(GAMMAS) - inner.support(GAMMAS) >= -1e-12)
    assert numerical_radius(sb_matrix(s.blaschke.zeros)) <= 1
