import numpy as np
import pytest

from layerspec.catalog import build_chart
from layerspec.surface import hypotheses_report

TWO_PI = 2.0 * np.pi


def test_plane_all_pass_with_tight_growth_constant():
    chart = build_chart("plane", {"s_max": 120.0})
    rep = hypotheses_report(chart, [10.0, 20.0, 40.0, 80.0, 115.0])
    assert (rep.sigma0, rep.sigma1, rep.sigma2) == ("pass", "pass", "pass")
    assert TWO_PI <= rep.growth_constant <= TWO_PI * 1.05 + 1e-12


def test_capped_cylinder_fails_asymptotic_planarity():
    chart = build_chart("capped-cylinder", {"R": 1.0, "s_max": 30.0})
    rep = hypotheses_report(chart, [1.8, 3.6, 7.2, 14.4, 28.8])
    assert rep.sigma0 == "fail"
    # constant mean curvature on the tail is the failing evidence
    assert rep.sigma0_sup_M[-1] == pytest.approx(1.05 * 0.5, rel=1e-6)


def test_sine_meridian_sigma1_pass_sigma2_fail():
    chart = build_chart("sine-meridian", {"s_max": 60.0})
    rep = hypotheses_report(chart, [3.5, 7.0, 14.0, 28.0, 56.0])
    assert rep.sigma1 == "pass"
    assert rep.sigma2 == "fail"
    assert rep.sigma0 == "pass"


@pytest.mark.parametrize(
    "name,params,radii",
    [
        ("hyperboloid", {"s_max": 200.0}, [12.0, 24.0, 48.0, 96.0, 190.0]),
        ("elliptic-paraboloid", {"s_max": 340.0, "theta_samples": 192}, [8.0, 16.0, 32.0, 64.0, 128.0]),
        ("hyperbolic-paraboloid", {"s_max": 340.0, "theta_samples": 1024}, [8.0, 16.0, 32.0, 64.0, 128.0]),
    ],
)
def test_asymptotically_planar_surfaces_pass(name, params, radii):
    chart = build_chart(name, params)
    rep = hypotheses_report(chart, radii)
    assert rep.sigma0 == "pass", name
    assert rep.sigma1 == "pass", name
    assert rep.sigma2 == "pass", name


def test_linear_growth_estimate_bounds_circumference():
    # int_0^{2pi} r dtheta <= C s, checked at many random radii
    chart = build_chart("hyperboloid", {"s_max": 200.0})
    rep = hypotheses_report(chart, [12.0, 24.0, 48.0, 96.0, 190.0])
    rng = np.random.default_rng(3)
    ss = rng.uniform(1e-3, 190.0, size=1000)
    g = chart.grid(np.sort(ss))
    circ = TWO_PI * g.r.mean(axis=1)
    assert np.all(circ <= rep.growth_constant * np.sort(ss) * (1 + 1e-12))
