"""Self-contained numerical primitives.

Composite Gauss-Legendre quadrature, adaptive ODE integration with dense
output, modified Bessel functions K0/K1, and a sparse symmetric generalized
eigensolver.  Everything here is pure given its inputs.
"""

from .quadrature import QuadratureGrid, gauss_legendre, geometric_panels, panelize
from .ode import OdeTrajectory, integrate_ode
from .bessel import bessel_k
from .eigensolve import SparseSymmetricPair, EigenPair, lowest_eigenpairs

__all__ = [
    "QuadratureGrid",
    "gauss_legendre",
    "geometric_panels",
    "panelize",
    "OdeTrajectory",
    "integrate_ode",
    "bessel_k",
    "SparseSymmetricPair",
    "EigenPair",
    "lowest_eigenpairs",
]
