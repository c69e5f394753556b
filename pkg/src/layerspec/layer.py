"""Constant-width layer built over a polar chart.

The layer is the normal-bundle image p(q) + u n(q), |u| <= a, with hard-wall
boundary.  Its metric in chart coordinates is block diagonal: the surface
block (delta - u h)^2 g and a trivial normal block.  The determinant factor

    f(u) = 1 - 2 M u + K u^2 = (1 - u k1)(1 - u k2)

relates the layer and surface measures, sqrt(G) = sqrt(g) f, and stays
positive as long as the half-width is below the minimal normal curvature
radius rho_m (checked here with a sampled-sup estimate and a 5% safety
factor, reported as an estimate, never as a proof).
"""

from dataclasses import dataclass

import numpy as np

from .errors import HypothesisViolationError, InvalidInputError
from .numkernel import gauss_legendre

_SUP_SAFETY = 1.05
_PLANAR_SUP = 1e-12


def rho_m(chart, n_probe=400):
    """Minimal normal curvature radius: 1 / sup(|k1|, |k2|), sampled.

    Dense sampling over the chart with a 5% safety factor on the supremum;
    returns inf for (numerically) planar charts.
    """
    lo = min(1e-3, chart.s_max * 1e-4)
    s = np.concatenate([
        np.geomspace(lo, chart.s_max, n_probe // 2),
        np.linspace(lo, chart.s_max, n_probe // 2),
    ])
    kwargs = {"stride": chart.theta_stride_for(512)} if hasattr(chart, "theta_stride_for") else {}
    g = chart.grid(np.sort(s), **kwargs)
    sup = float(np.max(np.maximum(np.abs(g.k1), np.abs(g.k2))))
    sup *= _SUP_SAFETY
    if sup <= _PLANAR_SUP:
        return np.inf
    return 1.0 / sup


@dataclass(frozen=True)
class TransverseMode:
    """Dirichlet eigenfunction of -d^2/du^2 on (-a, a) at energy kappa_n^2."""

    n: int
    kappa: float
    a: float

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        amp = np.sqrt(1.0 / self.a)  # sqrt(2/d) with d = 2a
        if self.n % 2:
            return amp * np.cos(self.kappa * u)
        return amp * np.sin(self.kappa * u)

    def derivative(self, u):
        u = np.asarray(u, dtype=float)
        amp = np.sqrt(1.0 / self.a) * self.kappa
        if self.n % 2:
            return -amp * np.sin(self.kappa * u)
        return amp * np.cos(self.kappa * u)


class LayerSpec:
    """A chart plus half-width a, with the derived spectral constants.

    Raises HypothesisViolationError when a exceeds the (safety-adjusted)
    minimal normal curvature radius, unless ``force`` is set; the check
    outcome is recorded either way.
    """

    def __init__(self, chart, a, force=False):
        if a <= 0:
            raise InvalidInputError("half-width a must be positive")
        self.chart = chart
        self.a = float(a)
        self.d = 2.0 * self.a
        self.rho_m = rho_m(chart)
        self.omega1_ok = self.a < self.rho_m
        if not self.omega1_ok and not force:
            raise HypothesisViolationError(
                f"half-width a = {self.a:g} is not below the minimal normal "
                f"curvature radius estimate rho_m = {self.rho_m:g}"
            )

    @property
    def kappa1_sq(self):
        return (np.pi / self.d) ** 2

    def kappa(self, n):
        return n * np.pi / self.d

    def transverse_mode(self, n):
        if n < 1:
            raise InvalidInputError("transverse mode index starts at 1")
        return TransverseMode(n=n, kappa=self.kappa(n), a=self.a)


def transverse_mode(layer, n):
    return layer.transverse_mode(n)


def c_bounds(layer):
    """Metric sandwich constants C_- g <= G_surface-block <= C_+ g."""
    if not layer.omega1_ok:
        raise HypothesisViolationError("sandwich constants require a < rho_m")
    if np.isinf(layer.rho_m):
        return 1.0, 1.0
    ratio = layer.a / layer.rho_m
    return (1.0 - ratio) ** 2, (1.0 + ratio) ** 2


@dataclass(frozen=True)
class LayerMetricSample:
    """Layer metric at one (s, theta, u): surface block plus G_33 = 1."""

    G11: float
    G12: float
    G22: float
    det_factor: float
    sqrt_g: float

    @property
    def G33(self):
        return 1.0

    @property
    def sqrt_G(self):
        return self.sqrt_g * self.det_factor


def _chart_point(chart, s, theta):
    """Single-point chart sample; fans snap theta to the nearest ray."""
    if hasattr(chart, "theta_stride_for"):
        idx = int(np.argmin(np.abs(
            (chart.theta_nodes - theta + np.pi) % (2 * np.pi) - np.pi
        )))
        g = chart.grid(np.array([s]))
        return g, 0, idx
    g = chart.grid(np.array([s]), theta=np.array([float(theta)]))
    return g, 0, 0


def det_factor(layer, s, theta, u):
    """1 - 2 M u + K u^2 at a chart point; equals (1 - u k1)(1 - u k2)."""
    g, i, j = _chart_point(layer.chart, s, theta)
    u = np.asarray(u, dtype=float)
    return 1.0 - 2.0 * g.M[i, j] * u + g.K[i, j] * u**2


def layer_metric(layer, s, theta, u):
    """Metric sample at (s, theta, u): (delta - u h)^2 g block and weights."""
    g, i, j = _chart_point(layer.chart, s, theta)
    if not (-layer.a <= u <= layer.a):
        raise InvalidInputError("normal coordinate outside (-a, a)")
    r2 = g.r[i, j] ** 2
    g_cov = np.array([[1.0, 0.0], [0.0, r2]])
    II = np.array([[g.ii_ss[i, j], g.ii_st[i, j]], [g.ii_st[i, j], g.ii_tt[i, j]]])
    G = g_cov - 2.0 * u * II + u**2 * (II @ np.linalg.solve(g_cov, II))
    f = 1.0 - 2.0 * g.M[i, j] * u + g.K[i, j] * u**2
    return LayerMetricSample(
        G11=float(G[0, 0]), G12=float(G[0, 1]), G22=float(G[1, 1]),
        det_factor=float(f), sqrt_g=float(g.r[i, j]),
    )


def effective_potential(layer, s, theta, u):
    """(V2, K - M^2): transverse effective potential and its leading term.

    V2 = (K - M^2)/f^2; the numerator equals -((k1 - k2)/2)^2, the attractive
    contribution that vanishes only at umbilic points.
    """
    g, i, j = _chart_point(layer.chart, s, theta)
    km = g.K[i, j] - g.M[i, j] ** 2
    f = 1.0 - 2.0 * g.M[i, j] * u + g.K[i, j] * u**2
    return float(km / f**2), float(km)


@dataclass(frozen=True)
class CollisionScan:
    """Outcome of the coarse self-intersection probe (never a proof)."""

    result: str  # "no collision detected" | "possible self-intersection"
    checked_points: int
    closest_far_pair: float


def collision_scan(layer, n_s=48, n_theta=24, n_u=5):
    """Coarse spatial-hash probe for layer self-intersection.

    Samples layer points p + u n, buckets them into cubes of edge a, and
    looks inside each bucket for pairs whose chart coordinates are far
    apart (intrinsic separation proxy over 2.5a) but whose ambient distance
    is below a/2.  Complements the necessary condition det-factor > 0;
    the negative outcome reads "no collision detected", never "injective".
    """
    chart = layer.chart
    a = layer.a
    lo = min(1e-2, chart.s_max * 1e-3)
    s = np.geomspace(lo, chart.s_max * 0.98, n_s)
    kwargs = {"stride": chart.theta_stride_for(n_theta)} if hasattr(chart, "theta_stride_for") else {}
    g = chart.grid(s, **kwargs)
    normal = np.cross(g.dp_ds, g.dp_dtheta)
    norms = np.linalg.norm(normal, axis=-1, keepdims=True)
    normal = normal / np.where(norms > 0, norms, 1.0)
    us = np.linspace(-a, a, n_u)
    pts = (g.p[None, ...] + us[:, None, None, None] * normal[None, ...]).reshape(-1, 3)
    uu, ss, tt = np.meshgrid(us, g.s, g.theta, indexing="ij")
    rr = np.broadcast_to(g.r[None, ...], (n_u, g.s.size, g.theta.size))
    coords = np.stack([ss.ravel(), tt.ravel(), rr.ravel()], axis=1)

    buckets = {}
    keys = np.floor(pts / a).astype(np.int64)
    for i, key in enumerate(map(tuple, keys)):
        buckets.setdefault(key, []).append(i)

    closest = np.inf
    hit = False
    for members in buckets.values():
        if len(members) < 2:
            continue
        idx = np.asarray(members)
        sub = pts[idx]
        d2 = np.sum((sub[:, None, :] - sub[None, :, :]) ** 2, axis=-1)
        ds = np.abs(coords[idx, 0][:, None] - coords[idx, 0][None, :])
        dt = np.abs(coords[idx, 1][:, None] - coords[idx, 1][None, :])
        dt = np.minimum(dt, 2 * np.pi - dt)
        # chart separation with the local circumference radius of the pair
        r_loc = np.minimum(coords[idx, 2][:, None], coords[idx, 2][None, :])
        chart_far = (ds + r_loc * dt) > 2.5 * a
        cand = chart_far & (d2 < (0.5 * a) ** 2)
        if cand.any():
            hit = True
        far_d = np.sqrt(d2[chart_far]) if chart_far.any() else np.array([])
        if far_d.size:
            closest = min(closest, float(far_d.min()))
    return CollisionScan(
        result="possible self-intersection" if hit else "no collision detected",
        checked_points=pts.shape[0],
        closest_far_pair=closest,
    )


def check_mode_orthonormality(layer, n_max=5, n_quad=48):
    """Quadrature check of the transverse modes' orthonormality matrix."""
    quad = gauss_legendre(n_quad, [-layer.a, layer.a])
    modes = [layer.transverse_mode(n) for n in range(1, n_max + 1)]
    gram = np.array([
        [quad.integrate_samples(m1(quad.nodes) * m2(quad.nodes)) for m2 in modes]
        for m1 in modes
    ])
    return gram
