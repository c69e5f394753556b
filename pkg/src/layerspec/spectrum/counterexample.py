"""The capped-cylinder layer: a geometry with no discrete spectrum.

The layer over a semi-cylinder of radius R closed by a hemisphere has its
whole spectrum filled from the cylindrical end.  The bottom eps_1 is the
lowest Dirichlet eigenvalue of the radial operator -d^2/dr^2 - 1/(4 r^2)
on the interval (R - a, R + a), which sits strictly below the transverse
threshold; the hemispherical cap alone (via the full spherical shell, whose
l = 0 reduction is exactly the flat interval problem) contributes the
threshold itself.  Truncated-domain eigensolves therefore must land at or
above eps_1, and that is numerical evidence only: Dirichlet truncation
yields upper bounds, never an existence proof.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..errors import InvalidInputError
from ..numkernel import SparseSymmetricPair, lowest_eigenpairs
from .assemble import assemble_partial_wave
from .mesh import build_mesh
from .solve import SpectrumResult, mesh_threshold, solve_spectrum


def _interval_ground(R, a, n, potential=None, weight=None):
    """Lowest Dirichlet eigenvalue of -(w f')'/w + V on (R-a, R+a), FD."""
    h = 2.0 * a / n
    nodes = R - a + h * np.arange(1, n)
    faces = R - a + h * (np.arange(n) + 0.5)
    w_face = np.ones(n) if weight is None else weight(faces)
    w_node = np.ones(n - 1) if weight is None else weight(nodes)
    main = (w_face[:-1] + w_face[1:]) / h**2
    off = -w_face[1:-1] / h**2
    if potential is not None:
        main = main + potential(nodes)
    A = sp.diags([off, main, off], [-1, 0, 1], format="csr")
    B = sp.diags(w_node, format="csr")
    pair = SparseSymmetricPair.build(A, B)
    shift = float(main.min() - 2.0 * np.abs(off).max() - 1.0)
    return lowest_eigenpairs(pair, 1, shift=shift)[0].value


def _richardson(values, order=2.0):
    lam_h, lam_h2 = values[-2], values[-1]
    return lam_h2 + (lam_h2 - lam_h) / (2.0**order - 1.0)


def counterexample_radial(R, a, n=1600, levels=3):
    """eps_1: ground state of -d^2/dr^2 - 1/(4 r^2) on (R-a, R+a).

    Second-order finite differences with Richardson extrapolation over
    halved meshes.
    """
    if not 0.0 < a < R:
        raise InvalidInputError("need 0 < a < R")
    vals = [
        _interval_ground(R, a, n * 2**lev, potential=lambda x: -0.25 / x**2)
        for lev in range(levels)
    ]
    return _richardson(vals)


def spherical_shell_ground(R, a, n=1600, levels=3):
    """Ground state of the Dirichlet Laplacian between spheres of radii R -+ a.

    Computed from the l = 0 radial reduction with the rho^2 weight; the
    substitution f = g/rho removes the curvature term exactly, so the limit
    is the flat interval value (pi/(2a))^2 independently of R.
    """
    if not 0.0 < a < R:
        raise InvalidInputError("need 0 < a < R")
    vals = [
        _interval_ground(R, a, n * 2**lev, weight=lambda x: x**2)
        for lev in range(levels)
    ]
    return _richardson(vals)


def radial_order_estimate(R, a, n=400, levels=3, kind="shell"):
    """Observed convergence order of the interval solver on halved meshes."""
    if kind == "shell":
        vals = [_interval_ground(R, a, n * 2**lev, weight=lambda x: x**2) for lev in range(levels)]
    else:
        vals = [_interval_ground(R, a, n * 2**lev, potential=lambda x: -0.25 / x**2) for lev in range(levels)]
    num = vals[0] - vals[1]
    den = vals[1] - vals[2]
    return float(np.log2(num / den))


@dataclass(frozen=True)
class CounterexampleReport:
    R: float
    a: float
    eps1: float
    eps1_mesh: float  # same interval operator on the 2-d solve's u grid
    bracket: tuple
    kappa1_sq: float
    shell_ground: float
    cap_neumann: object  # SpectrumResult of the Neumann-cut hemisphere segment
    spectra: tuple  # SpectrumResult per truncation radius


def capped_layer(R, a, S, ode_tol=1e-10):
    from ..catalog import build_chart
    from ..layer import LayerSpec

    chart = build_chart("capped-cylinder", {"R": R, "s_max": S * 1.02 + 1.0}, ode_tol=ode_tol)
    return LayerSpec(chart, a=a)


def cap_neumann_ground(R, a, n_s=200, n_u=40):
    """Ground state of the hemispherical cap segment with a Neumann cut.

    By mirror symmetry through the cut this reproduces the full spherical
    shell's ground state, i.e. the transverse threshold; compare against the
    result's own mesh threshold, which carries the same O(h_u^2) bias.
    """
    layer = capped_layer(R, a, np.pi * R)
    junction = np.pi * R / 2.0
    mesh = build_mesh(junction, a, n_s, n_u)
    op = assemble_partial_wave(layer, 0, mesh, neumann_outer=True)
    return solve_spectrum(op, 1)


def counterexample_full(R, a, S, n_s_per_R=50, n_u=32, k=2):
    """Full m = 0 pipeline on truncations S x {1, 2, 4}: eigenvalues vs eps_1.

    The curvature jump at the junction is face-aligned on every mesh.
    Reports the analytic bracket for eps_1, the extrapolated interval value,
    the shell and cap grounds, and the truncated spectra.
    """
    if not 0.0 < a < R:
        raise InvalidInputError("need 0 < a < R")
    eps1 = counterexample_radial(R, a)
    kap2 = (np.pi / (2.0 * a)) ** 2
    bracket = (kap2 - 1.0 / (4.0 * (R - a) ** 2), kap2 - 1.0 / (4.0 * (R + a) ** 2))
    junction = np.pi * R / 2.0
    spectra = []
    for mult in (1, 2, 4):
        S_here = S * mult
        layer = capped_layer(R, a, S_here)
        mesh = build_mesh(S_here, a, int(n_s_per_R * S_here / R), n_u, align_face=junction)
        op = assemble_partial_wave(layer, 0, mesh)
        spectra.append(solve_spectrum(op, k))
    # the truncated 2-d eigenvalues inherit the transverse grid's O(h_u^2)
    # bias; the honest floor to compare them against is the same interval
    # operator discretized on that grid
    eps1_mesh = _interval_ground(R, a, n_u, potential=lambda x: -0.25 / x**2)
    return CounterexampleReport(
        R=R, a=a, eps1=eps1, eps1_mesh=eps1_mesh, bracket=bracket, kappa1_sq=kap2,
        shell_ground=spherical_shell_ground(R, a),
        cap_neumann=cap_neumann_ground(R, a),
        spectra=tuple(spectra),
    )
