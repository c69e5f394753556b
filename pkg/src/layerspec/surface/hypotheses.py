"""Numerical verdicts for the asymptotic-planarity and integrability boxes.

All verdicts here are sampled evidence with safety factors, reported as
estimates, never as proofs.  A verdict is "pass", "fail", or "undecided"
when the evidence is non-monotone.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidInputError
from ..numkernel import gauss_legendre, panelize
from .totals import (
    TotalCurvatureEstimate,
    total_abs_gauss,
    total_gauss,
    total_grad_mean_sq,
)

_SUP_SAFETY = 1.05
_ZERO_FLOOR = 1e-10


@dataclass(frozen=True)
class HypothesisReport:
    """Verdicts with the numerical evidence that produced them."""

    sigma0: str
    sigma0_sup_K: np.ndarray
    sigma0_sup_M: np.ndarray
    annuli: np.ndarray
    sigma1: str
    sigma1_partials: np.ndarray
    sigma2: str
    sigma2_partials: np.ndarray
    growth_constant: float
    notes: list = field(default_factory=list)


def _decay_verdict(sups):
    """pass / fail / undecided for a sequence that should decrease to zero."""
    sups = np.asarray(sups)
    peak = sups.max()
    if peak <= _ZERO_FLOOR:
        return "pass"
    tail = sups[-3:]
    strictly = np.all(np.diff(tail) < -1e-9 * np.maximum(tail[:-1], _ZERO_FLOOR))
    if strictly and tail[-1] <= 0.75 * tail[0] + _ZERO_FLOOR:
        return "pass"
    if tail[-1] >= 0.85 * tail.max() and tail[-1] > 0.05 * peak:
        return "fail"
    return "undecided"


def _integral_verdict(estimate):
    if estimate.divergent:
        return "fail"
    if estimate.principal_value:
        return "undecided"
    return "pass"


def asymptotic_flatness_verdict(chart, radii=None, samples_per_annulus=120):
    """Quick decay verdict for sup|K|, sup|M| on a few annuli.

    Used as a gate by consumers whose conclusions presuppose that the
    essential spectrum starts at the transverse threshold.
    """
    if radii is None:
        radii = chart.s_max * np.array([0.125, 0.25, 0.5, 0.96])
    kwargs = {"stride": chart.theta_stride_for(256)} if hasattr(chart, "theta_stride_for") else {}
    sup_K, sup_M = [], []
    edges = np.concatenate([[radii[0] * 0.5], radii])
    for lo, hi in zip(edges[:-1], edges[1:]):
        g = chart.grid(np.linspace(lo, hi, samples_per_annulus), **kwargs)
        sup_K.append(float(np.abs(g.K).max()))
        sup_M.append(float(np.abs(g.M).max()))
    v_K, v_M = _decay_verdict(np.asarray(sup_K)), _decay_verdict(np.asarray(sup_M))
    if "fail" in (v_K, v_M):
        return "fail"
    if v_K == v_M == "pass":
        return "pass"
    return "undecided"


def hypotheses_report(chart, probe_radii, samples_per_annulus=160):
    """Check curvature decay, K-integrability, and |grad M|^2-integrability.

    Parameters
    ----------
    chart : polar chart
    probe_radii : increasing radii bounding the annuli to probe; the largest
        must not exceed the chart validity radius.

    The linear-growth constant C is estimated as the max over the sampled
    radii of (circumference integral of r)/s, times a 5% safety factor.
    """
    probe_radii = np.asarray(probe_radii, dtype=float)
    if probe_radii.size < 4 or not np.all(np.diff(probe_radii) > 0):
        raise InvalidInputError("need at least 4 increasing probe radii")
    if probe_radii[-1] > chart.s_max * (1 + 1e-12):
        raise InvalidInputError("probe radii exceed chart validity range")

    notes = []
    if hasattr(chart, "radial_gauss_partials"):
        # drop radii beyond the fan's angular-resolution trust range
        full, half = chart.radial_gauss_partials(probe_radii)
        scale = max(float(np.max(np.abs(full))), 1.0)
        ok = np.abs(full - half) <= 1e-3 * scale
        n_ok = int(np.argmin(ok)) if not ok.all() else ok.size
        if 4 <= n_ok < probe_radii.size:
            notes.append(
                f"probe radii beyond s = {probe_radii[n_ok - 1]:g} dropped: "
                "fan ring integrals are not angularly resolved there"
            )
            probe_radii = probe_radii[:n_ok]
    sup_K, sup_M = [], []
    edges = np.concatenate([[probe_radii[0] * 0.5], probe_radii])
    for lo, hi in zip(edges[:-1], edges[1:]):
        s = np.linspace(lo, hi, samples_per_annulus)
        g = chart.grid(s)
        sup_K.append(_SUP_SAFETY * float(np.abs(g.K).max()))
        sup_M.append(_SUP_SAFETY * float(np.abs(g.M).max()))
    sup_K, sup_M = np.asarray(sup_K), np.asarray(sup_M)
    v_K, v_M = _decay_verdict(sup_K), _decay_verdict(sup_M)
    if v_K == "fail" or v_M == "fail":
        sigma0 = "fail"
    elif v_K == "pass" and v_M == "pass":
        sigma0 = "pass"
    else:
        sigma0 = "undecided"
    if sigma0 != "pass":
        notes.append(f"sup|K| verdict {v_K}, sup|M| verdict {v_M}")

    is_fan = hasattr(chart, "theta_stride_for")
    stride = chart.theta_stride_for(768) if is_fan else 1

    # K-integrability: when K has one sign on the chart (every catalog graph
    # does), |K| integrals equal |K integrals| and can use the exact per-ray
    # radial antiderivative, which is far more resolution-tolerant.
    sign_definite = False
    if is_fan:
        g_probe = chart.grid(probe_radii, stride=stride)
        sign_definite = g_probe.K.max() <= 1e-12 or g_probe.K.min() >= -1e-12
    if sign_definite:
        est1 = total_gauss(chart, probe_radii)
        est1 = TotalCurvatureEstimate(
            value=abs(est1.value), truncations=est1.truncations,
            partials=np.abs(est1.partials), tail=abs(est1.tail),
            error_bound=est1.error_bound, divergent=est1.divergent,
            principal_value=est1.principal_value,
        )
    else:
        est1 = total_abs_gauss(chart, probe_radii, stride=stride)
    sigma1 = _integral_verdict(est1)

    sigma2_radii = probe_radii
    if is_fan:
        # keep only radii where the grad-M ring integral is stride-converged
        ring = lambda g: 2.0 * np.pi * (g.grad_M_sq * g.r).mean(axis=1)
        v1 = ring(chart.grid(probe_radii, stride=stride))
        v2 = ring(chart.grid(probe_radii, stride=2 * stride))
        ok = np.abs(v1 - v2) <= 0.02 * np.maximum(np.abs(v1), _ZERO_FLOOR)
        n_ok = int(np.argmin(ok)) if not ok.all() else ok.size
        if 4 <= n_ok < probe_radii.size:
            sigma2_radii = probe_radii[:n_ok]
            notes.append(f"grad-M probe capped at s = {sigma2_radii[-1]:g} by fan resolution")
    est2 = total_grad_mean_sq(chart, sigma2_radii, stride=stride)
    sigma2 = _integral_verdict(est2)

    # growth estimate for the circumference: int r dtheta <= C s
    quad = gauss_legendre(8, panelize(probe_radii[0] * 1e-3, probe_radii[-1], first=probe_radii[0] / 4))
    g = chart.grid(quad.nodes)
    circ = g.r.mean(axis=1) * 2.0 * np.pi
    growth_C = _SUP_SAFETY * float(np.max(circ / quad.nodes))

    return HypothesisReport(
        sigma0=sigma0, sigma0_sup_K=sup_K, sigma0_sup_M=sup_M, annuli=probe_radii,
        sigma1=sigma1, sigma1_partials=est1.partials,
        sigma2=sigma2, sigma2_partials=est2.partials,
        growth_constant=growth_C, notes=notes,
    )
