"""Composite Gauss-Legendre quadrature on explicit panels.

An n-point Gauss-Legendre rule is exact for polynomials of degree 2n-1 on
each panel, so placing panel boundaries on the kinks of a piecewise-smooth
integrand restores spectral accuracy.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError


@dataclass(frozen=True)
class QuadratureGrid:
    """Flattened nodes/weights of a composite Gauss-Legendre rule.

    ``nodes`` are ordered panel by panel; ``weights`` are positive and sum
    to the total panel length; ``panels`` holds the monotone boundaries.
    """

    nodes: np.ndarray
    weights: np.ndarray
    panels: np.ndarray

    @property
    def points_per_panel(self):
        return self.nodes.size // (self.panels.size - 1)

    def integrate(self, f):
        """Integrate a callable evaluated on all nodes at once."""
        return float(np.dot(self.weights, f(self.nodes)))

    def integrate_samples(self, values, axis=-1):
        """Contract sampled values (last axis = node axis by default)."""
        values = np.asarray(values)
        return np.tensordot(values, self.weights, axes=([axis], [0]))


def gauss_legendre(points_per_panel, panels):
    """Build a composite Gauss-Legendre rule.

    Parameters
    ----------
    points_per_panel : int
        Nodes per panel, >= 1.
    panels : array_like
        Strictly increasing panel boundaries, at least two entries.
    """
    if points_per_panel < 1:
        raise InvalidInputError("points_per_panel must be >= 1")
    panels = np.asarray(panels, dtype=float)
    if panels.ndim != 1 or panels.size < 2:
        raise InvalidInputError("panels must be a 1-d list with at least two boundaries")
    if not np.all(np.diff(panels) > 0.0):
        raise InvalidInputError("panels must be strictly increasing")
    x, w = np.polynomial.legendre.leggauss(points_per_panel)
    mid = 0.5 * (panels[1:] + panels[:-1])
    half = 0.5 * np.diff(panels)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return QuadratureGrid(nodes=nodes, weights=weights, panels=panels)


def geometric_panels(lo, hi, first, ratio=2.0):
    """Panel boundaries from ``lo`` to ``hi`` with geometrically growing width.

    The first panel has width <= ``first``; subsequent widths grow by at most
    ``ratio``.  Useful for integrands that decay over several decades.
    """
    if not hi > lo:
        raise InvalidInputError("need hi > lo")
    if first <= 0 or ratio <= 1.0:
        raise InvalidInputError("need first > 0 and ratio > 1")
    bounds = [lo]
    width = min(first, hi - lo)
    while bounds[-1] + width < hi:
        bounds.append(bounds[-1] + width)
        width *= ratio
    bounds.append(hi)
    # merge a trailing sliver into the previous panel
    if len(bounds) > 2 and (bounds[-1] - bounds[-2]) < 0.25 * (bounds[-2] - bounds[-3]):
        del bounds[-2]
    return np.asarray(bounds)


def panelize(lo, hi, breakpoints=(), first=None, ratio=2.0):
    """Geometric panels on [lo, hi] with boundaries forced onto breakpoints.

    Breakpoints outside (lo, hi) are ignored.  Between consecutive anchors
    the spacing grows geometrically away from the left anchor.
    """
    anchors = [lo] + sorted(b for b in breakpoints if lo < b < hi) + [hi]
    if first is None:
        first = (anchors[1] - anchors[0]) / 4.0
    bounds = [lo]
    for left, right in zip(anchors[:-1], anchors[1:]):
        seg = geometric_panels(left, right, first=min(first, (right - left) / 2.0), ratio=ratio)
        bounds.extend(seg[1:])
    return np.asarray(bounds)
