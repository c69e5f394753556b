"""Variational certification of discrete spectrum below the threshold."""

from .trials import (
    RadialBump,
    RadialFactor,
    SeparableTerm,
    TrialFunction,
    combine,
    default_bump,
    deformation_trial,
    deformed_trial,
    derphi_integral,
    epsilon_choice,
    gj_trial,
    log_pairing,
    symmetric_log_trial,
    thin_trial,
)
from .form import (
    FormEvaluation,
    bilinear_shifted,
    bump_mean_curvature_pairing,
    evaluate_form,
    mixed_term,
    surface_pairing,
)
from .certify import Certificate, certify

__all__ = [
    "RadialBump",
    "RadialFactor",
    "SeparableTerm",
    "TrialFunction",
    "combine",
    "default_bump",
    "deformation_trial",
    "deformed_trial",
    "derphi_integral",
    "epsilon_choice",
    "gj_trial",
    "log_pairing",
    "symmetric_log_trial",
    "thin_trial",
    "FormEvaluation",
    "bilinear_shifted",
    "bump_mean_curvature_pairing",
    "evaluate_form",
    "mixed_term",
    "surface_pairing",
    "Certificate",
    "certify",
]
