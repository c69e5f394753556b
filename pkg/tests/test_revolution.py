import numpy as np
import pytest

from layerspec.catalog import build_chart
from layerspec.errors import InvalidSurfaceError, PoleSingularityError
from layerspec.surface import (
    MeridianSpec,
    profile_from_height,
    revolution_curvatures,
    revolution_from_meridian,
)

SQRT_HALF_PI = float(np.sqrt(np.pi / 2.0))


def test_zero_meridian_is_plane():
    prof = revolution_from_meridian(MeridianSpec(k_s=lambda s: 0.0 * np.asarray(s), s_max=10.0))
    ss = np.linspace(0.1, 10.0, 25)
    ps = prof.eval(ss)
    assert np.max(np.abs(ps.r - ss)) <= 1e-12
    assert np.max(np.abs(ps.z)) <= 1e-12


def test_constant_meridian_is_sphere():
    R = 2.0
    prof = revolution_from_meridian(
        MeridianSpec(k_s=lambda s: 1.0 / R + 0.0 * np.asarray(s), s_max=0.9 * np.pi * R)
    )
    ss = np.linspace(0.05, 0.9 * np.pi * R, 40)
    ps = prof.eval(ss)
    assert np.max(np.abs(ps.r - R * np.sin(ss / R))) <= 5e-9
    ks, kth, K, M, _ = revolution_curvatures(prof, 1.3)
    assert ks == pytest.approx(1.0 / R, rel=1e-9)
    assert kth == pytest.approx(1.0 / R, rel=1e-9)
    assert K == pytest.approx(1.0 / R**2, rel=1e-9)
    assert M == pytest.approx(1.0 / R, rel=1e-9)


def test_sphere_closes_and_raises():
    with pytest.raises(InvalidSurfaceError):
        revolution_from_meridian(MeridianSpec(k_s=lambda s: 1.0 + 0.0 * np.asarray(s), s_max=4.0))


def test_sine_meridian_limit_slope():
    # b(inf) = integral of sin(s^2)/s^2 = sqrt(pi/2), so r'(inf) = cos(sqrt(pi/2))
    chart = build_chart("sine-meridian", {"s_max": 60.0})
    dr = chart.profile.eval(np.array([60.0])).dr[0]
    assert dr == pytest.approx(np.cos(SQRT_HALF_PI), abs=1e-4)


def test_canonical_parametrization_invariant():
    for name, params in [
        ("sine-meridian", {"s_max": 40.0}),
        ("hyperboloid", {"s_max": 50.0}),
        ("capped-cylinder", {"R": 1.0, "s_max": 12.0}),
    ]:
        chart = build_chart(name, params)
        ss = np.linspace(0.01, chart.s_max, 200)
        ps = chart.profile.eval(ss)
        assert np.max(np.abs(ps.dr**2 + ps.dz**2 - 1.0)) <= 1e-10, name


def test_cylinder_part_of_capped_profile():
    chart = build_chart("capped-cylinder", {"R": 1.0, "s_max": 12.0})
    ks, kth, K, M, r = revolution_curvatures(chart.profile, 5.0)
    assert abs(ks) <= 1e-9
    assert kth == pytest.approx(1.0, rel=1e-9)
    assert abs(K) <= 1e-9
    assert M == pytest.approx(0.5, rel=1e-9)
    assert r == pytest.approx(1.0, rel=1e-9)


def test_pole_rejected():
    chart = build_chart("hyperboloid", {"s_max": 10.0})
    with pytest.raises(PoleSingularityError):
        revolution_curvatures(chart.profile, 0.0)


def test_meridian_roundtrip_reconstruction():
    # profile -> curvature function -> reconstruction reproduces (r, z)
    # up to a rigid vertical shift
    base = build_chart("hyperboloid", {"s_max": 20.0}).profile
    spec = MeridianSpec(k_s=lambda s: base.eval(np.maximum(np.atleast_1d(s), 1e-9)).k_s, s_max=20.0)
    rebuilt = revolution_from_meridian(spec, tol=1e-11)
    ss = np.linspace(0.05, 20.0, 60)
    pa, pb = base.eval(ss), rebuilt.eval(ss)
    shift = pa.z[0] - pb.z[0]
    assert np.max(np.abs(pa.r - pb.r)) <= 1e-8
    assert np.max(np.abs(pa.z - (pb.z + shift))) <= 1e-8


def test_height_profile_curvatures_match_closed_form():
    z0 = 1.0
    prof = profile_from_height(
        z_fn=lambda rho: z0 * np.sqrt(1 + rho**2),
        dz_fn=lambda rho: z0 * rho / np.sqrt(1 + rho**2),
        d2z_fn=lambda rho: z0 * (1 + rho**2) ** -1.5,
        s_max=30.0,
    )
    ss = np.linspace(0.2, 30.0, 30)
    ps = prof.eval(ss)
    rho = ps.r
    assert np.max(np.abs(ps.k_s - (1 + 2 * rho**2) ** -1.5)) <= 1e-8
    assert np.max(np.abs(ps.k_theta - (1 + 2 * rho**2) ** -0.5)) <= 1e-8
