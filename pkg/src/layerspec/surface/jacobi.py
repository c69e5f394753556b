"""Jacobi field along a geodesic: r'' + K r = 0, r(0) = 0, r'(0) = 1."""

import numpy as np

from ..errors import ConjugatePointError
from ..numkernel import integrate_ode


class JacobiField:
    """Dense (r, r') with a Taylor patch below the integration start.

    The curvature function may be undefined at s = 0, so the integration
    starts at a tiny ``s_start`` with initial data from r ~ s - K s^3/6.
    """

    def __init__(self, trajectory, s_start, K0):
        self._traj = trajectory
        self.s_start = s_start
        self._K0 = K0
        self.s_max = trajectory.s_end

    def r_and_dr(self, s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        out_r = np.empty_like(s)
        out_dr = np.empty_like(s)
        small = s < self.s_start
        if small.any():
            ss = s[small]
            out_r[small] = ss - self._K0 * ss**3 / 6.0
            out_dr[small] = 1.0 - self._K0 * ss**2 / 2.0
        if (~small).any():
            vals = self._traj.eval(s[~small])
            out_r[~small] = vals[0]
            out_dr[~small] = vals[1]
        return out_r, out_dr

    def r(self, s):
        return self.r_and_dr(s)[0]

    def dr(self, s):
        return self.r_and_dr(s)[1]


def jacobi_field(K_along, s_max, tol=1e-10):
    """Solve the Jacobi equation for a curvature profile K(s) on (0, s_max].

    Raises
    ------
    ConjugatePointError
        If r vanishes at some s* > 0 (the polar chart is invalid beyond s*).
    """
    s_start = min(1e-6, 1e-6 * s_max)
    K0 = float(K_along(s_start))
    r0 = s_start - K0 * s_start**3 / 6.0
    dr0 = 1.0 - K0 * s_start**2 / 2.0

    def rhs(s, y):
        return np.array([y[1], -float(K_along(s)) * y[0]])

    def hit_zero(s, y):
        return y[0]

    hit_zero.terminal = True
    hit_zero.direction = -1

    traj = integrate_ode(rhs, [r0, dr0], (s_start, s_max), tol=tol, events=[hit_zero])
    if traj.events and traj.events[0] is not None:
        raise ConjugatePointError(traj.events[0][0])
    return JacobiField(traj, s_start, K0)
