import numpy as np
import pytest

from layerspec.errors import InvalidInputError
from layerspec.numkernel import gauss_legendre, geometric_panels, panelize


def test_single_point_rule_is_midpoint():
    grid = gauss_legendre(1, [-1.0, 1.0])
    assert grid.nodes.tolist() == [0.0]
    assert grid.weights.tolist() == [2.0]


def test_x_squared_exact():
    grid = gauss_legendre(2, [0.0, 1.0])
    val = grid.integrate(lambda x: x**2)
    assert abs(val - 1.0 / 3.0) <= 1e-15


def test_sin_on_one_panel():
    # analytic antiderivative: integral of sin over [0, pi] is 2
    grid = gauss_legendre(20, [0.0, np.pi])
    assert abs(grid.integrate(np.sin) - 2.0) <= 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_degree_exactness(n):
    rng = np.random.default_rng(42 + n)
    panels = np.cumsum(np.r_[0.0, rng.uniform(0.3, 1.7, size=4)]) - 1.0
    grid = gauss_legendre(n, panels)
    for _ in range(20):
        deg = int(rng.integers(0, 2 * n))
        coef = rng.standard_normal(deg + 1)
        poly = np.polynomial.Polynomial(coef)
        exact = poly.integ()(panels[-1]) - poly.integ()(panels[0])
        got = grid.integrate(poly)
        assert abs(got - exact) <= 1e-14 * max(1.0, abs(exact))


def test_weights_sum_to_length_and_nodes_inside():
    panels = [0.0, 0.5, 2.0, 7.5]
    grid = gauss_legendre(6, panels)
    assert abs(grid.weights.sum() - 7.5) <= 1e-13
    for lo, hi in zip(panels[:-1], panels[1:]):
        inside = (grid.nodes > lo) & (grid.nodes < hi)
        assert inside.sum() == 6


def test_invalid_panels_rejected():
    with pytest.raises(InvalidInputError):
        gauss_legendre(4, [0.0, 1.0, 0.5])
    with pytest.raises(InvalidInputError):
        gauss_legendre(0, [0.0, 1.0])
    with pytest.raises(InvalidInputError):
        gauss_legendre(4, [1.0])


def test_geometric_panels_cover_and_grow():
    b = geometric_panels(0.0, 100.0, first=1.0, ratio=2.0)
    assert b[0] == 0.0 and b[-1] == 100.0
    widths = np.diff(b)
    assert np.all(widths[:-1] * 2.0 + 1e-12 >= widths[:-1])  # monotone construction
    assert np.all(widths > 0)


def test_panelize_hits_breakpoints():
    b = panelize(0.0, 50.0, breakpoints=(3.0, 10.0))
    assert any(abs(x - 3.0) < 1e-14 for x in b)
    assert any(abs(x - 10.0) < 1e-14 for x in b)
    assert b[0] == 0.0 and b[-1] == 50.0


def test_integrate_samples_matches_integrate():
    grid = gauss_legendre(12, [0.0, 1.0, 3.0])
    f = lambda x: np.exp(-x) * np.sin(3 * x)
    assert grid.integrate(f) == pytest.approx(grid.integrate_samples(f(grid.nodes)), abs=0)
