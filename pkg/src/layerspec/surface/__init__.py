"""Surfaces with a pole in geodesic polar coordinates."""

from .charts import ChartGrid, PlaneChart, uniform_theta
from .jacobi import JacobiField, jacobi_field
from .revolution import (
    MeridianSpec,
    ProfileSample,
    RevolutionChart,
    RevolutionProfile,
    profile_from_height,
    revolution_curvatures,
    revolution_from_meridian,
)
from .graph import FanChart, GraphSurface, geodesic_fan, graph_curvatures
from .totals import (
    TotalCurvatureEstimate,
    analyze_truncations,
    gauss_bonnet_residual,
    total_abs_gauss,
    total_gauss,
    total_gauss_cartesian,
    total_grad_mean_sq,
    total_mean_sq,
)
from .hypotheses import HypothesisReport, asymptotic_flatness_verdict, hypotheses_report

__all__ = [
    "ChartGrid",
    "PlaneChart",
    "uniform_theta",
    "JacobiField",
    "jacobi_field",
    "MeridianSpec",
    "ProfileSample",
    "RevolutionChart",
    "RevolutionProfile",
    "profile_from_height",
    "revolution_curvatures",
    "revolution_from_meridian",
    "FanChart",
    "GraphSurface",
    "geodesic_fan",
    "graph_curvatures",
    "TotalCurvatureEstimate",
    "analyze_truncations",
    "gauss_bonnet_residual",
    "total_abs_gauss",
    "total_gauss",
    "total_gauss_cartesian",
    "total_grad_mean_sq",
    "total_mean_sq",
    "HypothesisReport",
    "asymptotic_flatness_verdict",
    "hypotheses_report",
]
