"""Assembly of the partial-wave layer forms over revolution charts.

The quadratic form in the angular-momentum-m subspace is

    Q_m[psi] = 2 pi int int [ psi_s^2/(1-u k_s)^2 + psi_u^2
                              + m^2 psi^2/((1-u k_th)^2 r^2) ] w ds du,

with the volume weight w = (1 - u k_s)(1 - u k_th) r.  Flux coefficients
are sampled at geometric cell-face midpoints and the mass is lumped, which
keeps the stiffness exactly symmetric and the scheme second order even with
the vanishing weight at the pole.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..errors import CapabilityError, HypothesisViolationError
from ..numkernel import SparseSymmetricPair


@dataclass(frozen=True)
class PartialWaveOperator:
    m: int
    pair: SparseSymmetricPair
    mesh: object
    weights: np.ndarray  # w at (cell center, u node)
    kappa1_sq: float


def _profile_columns(chart, s_values, u):
    g = chart.grid(np.asarray(s_values, dtype=float), theta=np.array([0.0]))
    ks = g.ii_ss[:, :1]
    kth = g.ii_tt[:, :1] / g.r[:, :1] ** 2
    r = g.r[:, :1]
    one_s = 1.0 - u[None, :] * ks
    one_t = 1.0 - u[None, :] * kth
    return one_s, one_t, r


def assemble_partial_wave(layer, m, mesh, neumann_outer=False):
    """Discretize Q_m over a rotation-invariant layer on the given mesh.

    Dirichlet walls at u = +-a; Dirichlet truncation at s = S (variational
    upper bounds) unless ``neumann_outer``; natural closure at the pole via
    the vanishing weight.  Raises when the weight loses positivity (the
    half-width check failing on the sampled mesh).
    """
    chart = layer.chart
    if not chart.rotation_invariant:
        raise CapabilityError("partial-wave assembly needs a rotation-invariant chart")
    if m < 0:
        raise CapabilityError("angular momentum index must be >= 0")
    if mesh.S > chart.s_max * (1 + 1e-12):
        raise CapabilityError("mesh truncation exceeds chart validity")
    nu_nodes = mesh.n_u - 1
    n = mesh.n_unknowns
    idx = lambda i, j: i * nu_nodes + j  # j over interior u nodes 0..nu_nodes-1

    u_n = mesh.u_nodes
    u_mid = mesh.u_midpoints

    # node weights (mass, centrifugal) at cell centers x u nodes
    one_s_n, one_t_n, r_n = _profile_columns(chart, mesh.s_centers, u_n)
    w_node = one_s_n * one_t_n * r_n
    if np.any(w_node <= 0.0):
        raise HypothesisViolationError(
            "volume weight non-positive on the mesh: half-width check fails here"
        )

    blocks_r, blocks_c, blocks_v = [], [], []

    def add_pairs(i1, i2, c):
        # symmetric flux stencil between unknowns i1 and i2 with coefficient c
        blocks_r.append(np.concatenate([i1, i2, i1, i2]))
        blocks_c.append(np.concatenate([i1, i2, i2, i1]))
        blocks_v.append(np.concatenate([c, c, -c, -c]))

    def add_diag(i1, c):
        blocks_r.append(i1)
        blocks_c.append(i1)
        blocks_v.append(c)

    jj = np.arange(nu_nodes)

    # radial fluxes through interior faces (the s = 0 face carries w = 0)
    one_s_f, one_t_f, r_f = _profile_columns(chart, mesh.s_faces[1:-1], u_n)
    c_face = (one_t_f * r_f / one_s_f) * (mesh.h_u / mesh.h_s)
    fi = np.arange(mesh.n_s - 1)[:, None]
    add_pairs((idx(fi, jj)).ravel(), (idx(fi + 1, jj)).ravel(), c_face.ravel())

    # outer boundary: ghost value 0 at distance h_s/2 beyond the last center
    if not neumann_outer:
        one_s_b, one_t_b, r_b = _profile_columns(chart, [mesh.S], u_n)
        c_b = (one_t_b * r_b / one_s_b)[0] * (mesh.h_u / (0.5 * mesh.h_s))
        add_diag(idx(mesh.n_s - 1, jj), c_b)

    # transverse fluxes: elements between consecutive u nodes and the walls
    one_s_m, one_t_m, r_m = _profile_columns(chart, mesh.s_centers, u_mid)
    c_elem = one_s_m * one_t_m * r_m * (mesh.h_s / mesh.h_u)
    ii = np.arange(mesh.n_s)[:, None]
    j_in = np.arange(nu_nodes - 1)
    add_pairs(idx(ii, j_in).ravel(), idx(ii, j_in + 1).ravel(), c_elem[:, 1:nu_nodes].ravel())
    iflat = np.arange(mesh.n_s)
    add_diag(idx(iflat, 0), c_elem[:, 0])
    add_diag(idx(iflat, nu_nodes - 1), c_elem[:, nu_nodes])

    A = sp.coo_matrix(
        (np.concatenate(blocks_v), (np.concatenate(blocks_r), np.concatenate(blocks_c))),
        shape=(n, n),
    ).tocsr()
    if m > 0:
        cent = (m**2) * w_node / (one_t_n**2 * r_n**2) * (mesh.h_s * mesh.h_u)
        A = A + sp.diags(cent.ravel(), format="csr")

    B = sp.diags((w_node * mesh.h_s * mesh.h_u).ravel(), format="csr")
    pair = SparseSymmetricPair.build(A, B)
    return PartialWaveOperator(m=int(m), pair=pair, mesh=mesh,
                               weights=w_node, kappa1_sq=layer.kappa1_sq)
