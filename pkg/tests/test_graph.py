import numpy as np
import pytest

from layerspec.catalog import build_chart, graph_surface
from layerspec.surface import GraphSurface, geodesic_fan, graph_curvatures, profile_from_height


def shape_operator_oracle(surf, x, y, h=1e-5):
    """Principal curvatures from a finite-difference shape operator.

    Independent of the closed Weingarten formulas under test: builds the
    first/second fundamental forms from numerical derivatives of the
    embedding (x, y) -> (x, y, f).
    """
    f = surf.f
    e = lambda a, b: np.array([a, b, f(a, b)])
    ru = (e(x + h, y) - e(x - h, y)) / (2 * h)
    rv = (e(x, y + h) - e(x, y - h)) / (2 * h)
    ruu = (e(x + h, y) - 2 * e(x, y) + e(x - h, y)) / h**2
    rvv = (e(x, y + h) - 2 * e(x, y) + e(x, y - h)) / h**2
    ruv = (e(x + h, y + h) - e(x + h, y - h) - e(x - h, y + h) + e(x - h, y - h)) / (4 * h**2)
    n = np.cross(ru, rv)
    n /= np.linalg.norm(n)
    E, F, G = ru @ ru, ru @ rv, rv @ rv
    L, Mm, N = ruu @ n, ruv @ n, rvv @ n
    shape = np.linalg.solve(np.array([[E, F], [F, G]]), np.array([[L, Mm], [Mm, N]]))
    K = np.linalg.det(shape)
    M = 0.5 * np.trace(shape)
    return K, M


def test_plane_curvatures_zero():
    surf = GraphSurface(
        f=lambda x, y: 0.0 * x, fx=lambda x, y: 0.0 * x, fy=lambda x, y: 0.0 * x,
        fxx=lambda x, y: 0.0 * x, fxy=lambda x, y: 0.0 * x, fyy=lambda x, y: 0.0 * x,
    )
    assert graph_curvatures(surf, 0.3, -1.2) == (0.0, 0.0, 0.0, 0.0)


def test_saddle_origin_values():
    surf = graph_surface("hyperbolic-paraboloid")
    K, M, k1, k2 = graph_curvatures(surf, 0.0, 0.0)
    assert K == pytest.approx(-4.0, abs=1e-12)
    assert M == pytest.approx(0.0, abs=1e-12)
    assert (k1, k2) == (pytest.approx(2.0), pytest.approx(-2.0))
    K_o, M_o = shape_operator_oracle(surf, 0.0, 0.0)
    assert K == pytest.approx(K_o, abs=1e-6)
    assert M == pytest.approx(M_o, abs=1e-6)


def test_curvatures_match_shape_operator_off_origin():
    for name, pts in [
        ("hyperbolic-paraboloid", [(0.7, -0.2), (1.5, 1.1)]),
        ("monkey-saddle", [(0.4, 0.3), (-0.8, 0.6)]),
        ("elliptic-paraboloid", [(0.5, 0.25), (1.2, -0.7)]),
    ]:
        surf = graph_surface(name)
        for x, y in pts:
            K, M, k1, k2 = graph_curvatures(surf, x, y)
            K_o, M_o = shape_operator_oracle(surf, x, y)
            assert K == pytest.approx(K_o, rel=2e-5, abs=1e-7), (name, x, y)
            assert M == pytest.approx(M_o, rel=2e-5, abs=1e-7), (name, x, y)
            assert K == pytest.approx(k1 * k2, rel=1e-12, abs=1e-14)
            assert M == pytest.approx(0.5 * (k1 + k2), rel=1e-12, abs=1e-14)


def test_hemisphere_graph_umbilic():
    R = 2.0
    surf = GraphSurface(
        f=lambda x, y: np.sqrt(R**2 - x**2 - y**2),
        fx=lambda x, y: -x / np.sqrt(R**2 - x**2 - y**2),
        fy=lambda x, y: -y / np.sqrt(R**2 - x**2 - y**2),
        fxx=lambda x, y: -(R**2 - y**2) / (R**2 - x**2 - y**2) ** 1.5,
        fxy=lambda x, y: -x * y / (R**2 - x**2 - y**2) ** 1.5,
        fyy=lambda x, y: -(R**2 - x**2) / (R**2 - x**2 - y**2) ** 1.5,
    )
    K, M, k1, k2 = graph_curvatures(surf, 0.0, 0.0)
    assert K == pytest.approx(1.0 / R**2, rel=1e-12)
    assert abs(M) == pytest.approx(1.0 / R, rel=1e-12)
    assert k1 == pytest.approx(k2, abs=1e-12)


def test_flat_fan_is_polar_grid():
    surf = GraphSurface(
        f=lambda x, y: 0.0 * x, fx=lambda x, y: 0.0 * x, fy=lambda x, y: 0.0 * x,
        fxx=lambda x, y: 0.0 * x, fxy=lambda x, y: 0.0 * x, fyy=lambda x, y: 0.0 * x,
        pole=(1.0, -2.0),
    )
    chart = geodesic_fan(surf, theta_samples=16, s_max=5.0, tol=1e-10)
    g = chart.grid(np.array([1.0, 3.0]))
    expect_x = 1.0 + g.s[:, None] * np.cos(g.theta)[None, :]
    expect_y = -2.0 + g.s[:, None] * np.sin(g.theta)[None, :]
    assert np.max(np.abs(g.p[:, :, 0] - expect_x)) <= 1e-9
    assert np.max(np.abs(g.p[:, :, 1] - expect_y)) <= 1e-9
    assert np.max(np.abs(g.r - g.s[:, None])) <= 1e-9


def test_fan_matches_profile_chart_for_revolution_case():
    # two independent constructions of the same chart as mutual oracle
    fan = build_chart("elliptic-paraboloid", {"s_max": 30.0, "theta_samples": 64})
    prof = profile_from_height(
        z_fn=lambda rho: rho**2, dz_fn=lambda rho: 2.0 * rho,
        d2z_fn=lambda rho: 2.0 + 0.0 * rho, s_max=30.0, tol=1e-11,
    )
    ss = np.linspace(0.25, 28.0, 24)
    r_fan = fan.grid(ss).r
    r_prof = prof.eval(ss).r
    assert np.max(np.abs(r_fan - r_prof[:, None])) <= 1e-6


def test_unit_speed_along_rays():
    for name in ("hyperbolic-paraboloid", "monkey-saddle", "elliptic-paraboloid"):
        chart = build_chart(name, {"s_max": 40.0, "theta_samples": 64})
        g = chart.grid(np.linspace(0.5, 35.0, 12))
        speed = np.linalg.norm(g.dp_ds, axis=-1)
        assert np.max(np.abs(speed - 1.0)) <= 1e-8, name


def test_jacobi_consistency_cross_check():
    # metric factor from |dp/dtheta| vs the co-integrated Jacobi field:
    # one relation checking curvature, geodesic, and Jacobi code at once
    for name, s_hi in [
        ("hyperbolic-paraboloid", 8.0),
        ("monkey-saddle", 4.0),
        ("elliptic-paraboloid", 30.0),
    ]:
        chart = build_chart(name, {"s_max": 40.0, "theta_samples": 1024})
        g = chart.grid(np.linspace(0.2, s_hi, 10))
        r_theta = np.linalg.norm(g.dp_dtheta, axis=-1)
        rel = np.abs(r_theta / g.r - 1.0)
        assert rel.max() <= 1e-6, (name, rel.max())


def test_conjugate_point_truncates_fan():
    # Gaussian bump offset from the pole: rays passing over it are lensed
    # and refocus behind it, where the metric factor crosses zero
    h, w, d = 3.0, 1.0, 3.0
    surf = GraphSurface(
        f=lambda x, y: h * np.exp(-((x - d) ** 2 + y**2) / w**2),
        fx=lambda x, y: -2 * (x - d) / w**2 * h * np.exp(-((x - d) ** 2 + y**2) / w**2),
        fy=lambda x, y: -2 * y / w**2 * h * np.exp(-((x - d) ** 2 + y**2) / w**2),
        fxx=lambda x, y: h * np.exp(-((x - d) ** 2 + y**2) / w**2) * (4 * (x - d) ** 2 / w**4 - 2 / w**2),
        fxy=lambda x, y: 4 * (x - d) * y / w**4 * h * np.exp(-((x - d) ** 2 + y**2) / w**2),
        fyy=lambda x, y: h * np.exp(-((x - d) ** 2 + y**2) / w**2) * (4 * y**2 / w**4 - 2 / w**2),
    )
    with pytest.warns(RuntimeWarning, match="conjugate point"):
        chart = geodesic_fan(surf, theta_samples=64, s_max=8.0, tol=1e-9)
    assert chart.truncated
    assert chart.s_max < 8.0
