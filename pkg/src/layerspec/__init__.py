"""Curved quantum layers of constant width over surfaces with a pole.

Builds geodesic polar charts of embedded surfaces, checks the geometric
hypotheses behind curvature-induced binding, certifies discrete spectrum
below the transverse threshold with explicit variational trial functions,
and solves axisymmetric layer spectra by finite differences.
"""

__version__ = "0.1.0"
