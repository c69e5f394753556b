import numpy as np
import pytest

from layerspec.catalog import build_chart
from layerspec.layer import LayerSpec, c_bounds
from layerspec.numkernel import gauss_legendre
from layerspec.surface import hypotheses_report
from layerspec.varform import (
    RadialBump,
    RadialFactor,
    TrialFunction,
    bilinear_shifted,
    bump_mean_curvature_pairing,
    evaluate_form,
    gj_trial,
    mixed_term,
    surface_pairing,
    symmetric_log_trial,
    thin_trial,
)
from layerspec.varform.trials import _radial_term


def gaussian_radial(center, width, s_hi):
    g = lambda s: np.exp(-((np.asarray(s, dtype=float) - center) / width) ** 2)
    dg = lambda s: -2.0 * (np.asarray(s, dtype=float) - center) / width**2 * g(s)
    return RadialFactor(value=g, derivative=dg, support=(0.0, s_hi), breakpoints=())


def radial_trial(radial):
    return TrialFunction(
        family="radial", params={}, terms=(_radial_term(radial),),
        support=radial.support, s_breakpoints=radial.breakpoints,
        theta_invariant=True, radial=radial,
    )


@pytest.fixture(scope="module")
def plane_layer():
    return LayerSpec(build_chart("plane", {"s_max": 400.0}), a=0.5)


@pytest.fixture(scope="module")
def hyperboloid_layer():
    return LayerSpec(build_chart("hyperboloid", {"s_max": 3000.0}), a=0.3)


@pytest.fixture(scope="module")
def paraboloid_layer():
    return LayerSpec(
        build_chart("elliptic-paraboloid", {"s_max": 3000.0, "theta_samples": 192}), a=0.05
    )


def test_flat_layer_dimensional_reduction(plane_layer):
    # Q~ for phi(s) chi1(u) on the flat layer is 2 pi int phi'^2 s ds
    radial = gaussian_radial(4.0, 1.0, 14.0)
    fe = evaluate_form(plane_layer, radial_trial(radial))
    quad = gauss_legendre(40, np.linspace(0.0, 14.0, 15))
    oracle = 2.0 * np.pi * quad.integrate(lambda s: radial.derivative(s) ** 2 * s)
    assert fe.q_tilde == pytest.approx(oracle, rel=1e-8)
    assert fe.q_tilde > 0


def test_flat_layer_transverse_shift_vanishes(plane_layer):
    radial = gaussian_radial(6.0, 2.0, 20.0)
    fe = evaluate_form(plane_layer, radial_trial(radial))
    assert abs(fe.q2 - fe.kappa1_sq * fe.norm_sq) <= 1e-9 * fe.q2
    assert abs(fe.q_tilde - fe.q1) <= 1e-12 * max(1.0, fe.q1)


def relative_gap(lhs, rhs, scale):
    return abs(lhs - rhs) / max(abs(rhs), 1e-8 * scale)


@pytest.mark.parametrize("layer_name", ["plane", "hyperboloid", "paraboloid"])
def test_transverse_identity_three_profiles(layer_name, plane_layer, hyperboloid_layer, paraboloid_layer):
    # Q2[phi chi1] - kappa1^2 |phi chi1|^2 = (phi, K phi)_g for any radial phi
    layer = {"plane": plane_layer, "hyperboloid": hyperboloid_layer, "paraboloid": paraboloid_layer}[layer_name]
    profiles = [
        gj_trial(layer, s0=5.0, sigma=0.05).radial,
        gj_trial(layer, s0=2.0, sigma=0.1).radial,
        gaussian_radial(5.0, 2.0, 25.0),
    ]
    for radial in profiles:
        fe = evaluate_form(layer, radial_trial(radial))
        lhs = fe.q_tilde - fe.q1
        rhs = surface_pairing(layer, radial, lambda g: g.K)
        assert relative_gap(lhs, rhs, fe.kappa1_sq * fe.norm_sq) <= 1e-5


def test_thin_layer_transverse_identity(hyperboloid_layer):
    layer = hyperboloid_layer
    trial = thin_trial(layer, sigma=0.05, s0=5.0)
    fe = evaluate_form(layer, trial)
    lhs = fe.q_tilde - fe.q1
    coef = (np.pi**2 - 6.0) / (3.0 * layer.kappa1_sq)
    rhs = surface_pairing(layer, trial.radial, lambda g: g.K - g.M**2) + coef * surface_pairing(
        layer, trial.radial, lambda g: g.K * g.M**2
    )
    assert relative_gap(lhs, rhs, fe.kappa1_sq * fe.norm_sq) <= 1e-5


def test_thin_identity_negative_for_bowl(paraboloid_layer):
    # (phi, (K - M^2) phi)_g is strictly negative once the plateau is wide
    trial = thin_trial(paraboloid_layer, sigma=0.1, s0=1.0)
    val = surface_pairing(paraboloid_layer, trial.radial, lambda g: g.K - g.M**2)
    assert val < -1.0


def test_mixed_term_matches_pairing(hyperboloid_layer):
    bump = RadialBump(1.0, 2.0)
    value = mixed_term(hyperboloid_layer, sigma=0.05, s0=4.0, bump=bump)
    oracle = -bump_mean_curvature_pairing(hyperboloid_layer, bump)
    assert value == pytest.approx(oracle, rel=1e-4)
    # sigma-independence: the plateau covers the bump, so the cross terms
    # cannot see the scaling at all
    value2 = mixed_term(hyperboloid_layer, sigma=0.01, s0=4.0, bump=bump)
    assert abs(value - value2) <= 1e-6 * abs(oracle)


def test_mixed_term_sector_bump_on_saddle():
    layer = LayerSpec(
        build_chart("hyperbolic-paraboloid", {"s_max": 400.0, "theta_samples": 512}), a=0.1
    )
    from layerspec.varform import default_bump

    bump = default_bump(layer, 4.0)
    value = mixed_term(layer, sigma=0.05, s0=4.0, bump=bump)
    oracle = -bump_mean_curvature_pairing(layer, bump)
    assert abs(oracle) > 1e-3  # the sector pins a sign, pairing is non-degenerate
    assert value == pytest.approx(oracle, rel=1e-4)

    # a plain radial bump pairs to zero against the theta-odd mean curvature
    radial = RadialBump(1.0, 2.0)
    assert abs(bump_mean_curvature_pairing(layer, radial)) <= 1e-10
    assert abs(mixed_term(layer, sigma=0.05, s0=4.0, bump=radial)) <= 1e-8


def test_mixed_term_planar_layer_vanishes(plane_layer):
    assert abs(mixed_term(plane_layer, sigma=0.05, s0=4.0, bump=RadialBump(1.0, 2.0))) <= 1e-10


def test_quadratic_scaling(hyperboloid_layer):
    trial = gj_trial(hyperboloid_layer, s0=5.0, sigma=0.05)
    fe1 = evaluate_form(hyperboloid_layer, trial)
    fe2 = evaluate_form(hyperboloid_layer, trial.scaled(3.0))
    assert fe2.q_tilde == pytest.approx(9.0 * fe1.q_tilde, rel=1e-12)
    assert fe2.norm_sq == pytest.approx(9.0 * fe1.norm_sq, rel=1e-12)


def test_polarization_symmetry(hyperboloid_layer):
    t1 = gj_trial(hyperboloid_layer, s0=4.0, sigma=0.05)
    t2 = gj_trial(hyperboloid_layer, s0=2.0, sigma=0.08)
    v12, e12 = bilinear_shifted(hyperboloid_layer, t1, t2)
    v21, e21 = bilinear_shifted(hyperboloid_layer, t2, t1)
    assert v12 == pytest.approx(v21, abs=max(1e-12, e12 + e21))


def test_longitudinal_bound_via_growth_constant(hyperboloid_layer):
    # Q1[phi chi1] <= (C+/C-)^2 C int phi'^2 s ds
    layer = hyperboloid_layer
    rep = hypotheses_report(layer.chart, [12.0, 24.0, 48.0, 96.0, 190.0])
    cm, cp = c_bounds(layer)
    c1 = (cp / cm) ** 2 * rep.growth_constant
    for sigma, s0 in [(0.05, 5.0), (0.1, 2.0)]:
        trial = gj_trial(layer, s0=s0, sigma=sigma)
        fe = evaluate_form(layer, trial)
        quad = gauss_legendre(24, np.geomspace(s0, trial.support[1], 40))
        weighted = quad.integrate(lambda s: trial.radial.derivative(s) ** 2 * s)
        assert fe.q1 <= c1 * weighted * (1 + 1e-9)


def test_certificate_stability_under_refinement(hyperboloid_layer):
    from layerspec.varform import epsilon_choice

    big = LayerSpec(build_chart("hyperboloid", {"s_max": 2.0e7}), a=0.3)
    eps = epsilon_choice(big, 256)
    trial = symmetric_log_trial(big, 256, eps)
    fe = evaluate_form(big, trial)
    assert fe.q_tilde + fe.error < 0
    fe_fine = evaluate_form(big, trial, points_per_panel=28, n_u=40)
    assert fe_fine.q_tilde + fe_fine.error < 0
    assert fe_fine.q_tilde == pytest.approx(fe.q_tilde, abs=5 * (fe.error + fe_fine.error))


def test_transverse_identity_on_remaining_catalog_layers():
    # the identity is chart-agnostic: check it where the chart has a
    # coefficient kink (capped cylinder) and where the fan is distorted
    cases = [
        ("capped-cylinder", {"R": 1.0, "s_max": 30.0}, 0.3, dict(s0=3.0, sigma=0.45)),
        ("sine-meridian", {"s_max": 60.0}, 0.1, dict(s0=2.0, sigma=0.45)),
        ("hyperbolic-paraboloid", {"s_max": 400.0, "theta_samples": 512}, 0.1,
         dict(s0=4.0, sigma=0.1)),
        ("monkey-saddle", {"s_max": 400.0, "theta_samples": 512}, 0.1,
         dict(s0=4.0, sigma=0.1)),
    ]
    for name, params, a, gj_kw in cases:
        layer = LayerSpec(build_chart(name, params), a=a)
        trial = gj_trial(layer, **gj_kw)
        assert trial.support[1] <= layer.chart.s_max, name
        fe = evaluate_form(layer, radial_trial(trial.radial))
        lhs = fe.q_tilde - fe.q1
        rhs = surface_pairing(layer, trial.radial, lambda g: g.K)
        assert relative_gap(lhs, rhs, fe.kappa1_sq * fe.norm_sq) <= 1e-5, name


def test_q1_nonnegative_everywhere():
    for name, params, a in [
        ("plane", {"s_max": 400.0}, 0.3),
        ("hyperboloid", {"s_max": 3000.0}, 0.3),
        ("hyperbolic-paraboloid", {"s_max": 400.0, "theta_samples": 256}, 0.1),
    ]:
        layer = LayerSpec(build_chart(name, params), a=a)
        fe = evaluate_form(layer, gj_trial(layer, s0=4.0, sigma=0.1))
        assert fe.q1 >= 0.0
        assert fe.norm_sq > 0.0
        assert np.isfinite(fe.q_tilde)


def test_symmetry_tail_surplus_ratio_decreases():
    # the log-family surplus |phi/s|^2 / (phi, M phi/s)^2 must shrink along
    # the sweep for the family to reach the -2 limit
    from layerspec.varform import RadialFactor, log_pairing
    from layerspec.varform.trials import _log_ramp

    layer = LayerSpec(build_chart("hyperboloid", {"s_max": 5.6e5}), a=0.3)
    ratios = []
    for n in (10, 20, 40, 80):
        (b1, b2, b3), value, _ = _log_ramp(n)
        phi_over_s = RadialFactor(
            value=lambda s, v=value: v(s) / np.where(np.asarray(s) > 0, s, 1.0),
            derivative=lambda s: None, support=(b1, b3), breakpoints=(b2,),
        )
        norm_sq = surface_pairing(layer, phi_over_s, lambda g: np.ones_like(g.K))
        pairing = log_pairing(layer, n)
        ratios.append(norm_sq / pairing**2)
    assert all(r2 < r1 for r1, r2 in zip(ratios, ratios[1:]))


def test_metric_determinant_identity_on_fans():
    # det of the assembled surface block equals (r f)^2, the closed form
    rng = np.random.default_rng(31)
    from layerspec.layer import layer_metric

    for name, params, a in [
        ("monkey-saddle", {"s_max": 40.0, "theta_samples": 128}, 0.1),
        ("hyperboloid", {"s_max": 40.0}, 0.3),
    ]:
        layer = LayerSpec(build_chart(name, params), a=a)
        for _ in range(50):
            s = rng.uniform(0.1, 35.0)
            th = rng.uniform(0, 2 * np.pi)
            u = rng.uniform(-a, a)
            m = layer_metric(layer, s, th, u)
            det = m.G11 * m.G22 - m.G12**2
            closed = (m.sqrt_g * m.det_factor) ** 2
            assert abs(det - closed) <= 1e-12 * max(1.0, closed), name
