"""Vectorized residual kernels.

Reuses the two-point flux internals on node-pair batches.  States are
assumed valid; the solver validates once per residual evaluation.

Residual convention (per element and node, no mass-matrix factor):

    1D: R[j,k] = w_k sum_l D_kl Dtil(U[j,k], U[j,l]) + trace fluctuations
    2D: x-parts scaled by sx[ly] = w_ly*hy/2, y-parts by sy[kx] = w_kx*hx/2,
        where the 1D pattern runs per node line in each direction.

Interface index arrays hold the left/right element of each interface; a
transmissive end simply has no interface there (equal traces would cancel
exactly anyway).
"""

import numpy as np

from ..model import PhaseFields, closure_from_fields, phase_fields, _flux_from_fields
from ..numflux import _cblock, _dissipation, _ec_flux, _fluctuations

name = "numpy"


def _node(f, idx):
    """PhaseFields slice at trailing node index tuple idx."""
    sl = (Ellipsis,) + idx
    vsl = (Ellipsis,) + idx + (slice(None),)
    return PhaseFields(alpha=f.alpha[sl], rho=f.rho[sl], vel=f.vel[vsl],
                       e=f.e[sl], p=f.p[sl], T=f.T[sl])


def _iface(fl, fr, n, eos, chi, eps_nu, beta_s, d, batch):
    """Entropy-stable interface flux pair (D-, D+) from trace fields."""
    h = _ec_flux(fl, fr, n, eos, beta_s, d, batch)
    dm, dp = _fluctuations(fl, fr, n, chi, d, batch)
    dnu = _dissipation(fl, fr, n, eos, eps_nu, d, batch)
    f_l = _flux_from_fields(fl, n, d)
    f_r = _flux_from_fields(fr, n, d)
    return h - f_l + dm - dnu, f_r - h + dp + dnu


def residual_1d(U, wD, eos, chi, eps_nu, beta_if, if_left, if_right):
    ncell, pp1, nvar = U.shape
    n = np.array([1.0])
    R = np.zeros_like(U)
    F = phase_fields(U, eos)
    nodes = [_node(F, (k,)) for k in range(pp1)]
    cblocks = [_cblock(closure_from_fields(nodes[k], chi), n, 1, (ncell,))
               for k in range(pp1)]
    for k in range(pp1):
        for l in range(pp1):
            h0 = _ec_flux(nodes[k], nodes[l], n, eos, 0.0, 1, (ncell,))
            ja1 = nodes[l].alpha[0] - nodes[k].alpha[0]
            R[:, k, :] += wD[k, l] * (2.0 * h0 + ja1[:, None] * cblocks[k])
    nif = if_left.shape[0]
    if nif:
        fl = phase_fields(U[if_left, pp1 - 1], eos)
        fr = phase_fields(U[if_right, 0], eos)
        dm, dp = _iface(fl, fr, n, eos, chi, eps_nu, beta_if, 1, (nif,))
        # left/right element lists are duplicate-free, fancy += is safe
        R[if_left, pp1 - 1] += dm
        R[if_right, 0] += dp
    return R


def residual_2d(U, wD, eos, chi, eps_nu, sx, sy,
                beta_x, ix_left, ix_right, beta_y, iy_left, iy_right):
    ncx, ncy, pp1, _, nvar = U.shape
    nx = np.array([1.0, 0.0])
    ny = np.array([0.0, 1.0])
    R = np.zeros_like(U)
    F = phase_fields(U, eos)
    ebatch = (ncx, ncy)

    for ly in range(pp1):
        nodes = [_node(F, (k, ly)) for k in range(pp1)]
        cbs = [_cblock(closure_from_fields(nodes[k], chi), nx, 2, ebatch)
               for k in range(pp1)]
        for k in range(pp1):
            for m in range(pp1):
                h0 = _ec_flux(nodes[k], nodes[m], nx, eos, 0.0, 2, ebatch)
                ja1 = nodes[m].alpha[0] - nodes[k].alpha[0]
                R[:, :, k, ly, :] += (sx[ly] * wD[k, m]) * \
                    (2.0 * h0 + ja1[..., None] * cbs[k])
    for kx in range(pp1):
        nodes = [_node(F, (kx, l)) for l in range(pp1)]
        cbs = [_cblock(closure_from_fields(nodes[l], chi), ny, 2, ebatch)
               for l in range(pp1)]
        for l in range(pp1):
            for m in range(pp1):
                h0 = _ec_flux(nodes[l], nodes[m], ny, eos, 0.0, 2, ebatch)
                ja1 = nodes[m].alpha[0] - nodes[l].alpha[0]
                R[:, :, kx, l, :] += (sy[kx] * wD[l, m]) * \
                    (2.0 * h0 + ja1[..., None] * cbs[l])

    nifx = ix_left.shape[0]
    if nifx:
        for ly in range(pp1):
            fl = phase_fields(U[ix_left, :, pp1 - 1, ly, :], eos)
            fr = phase_fields(U[ix_right, :, 0, ly, :], eos)
            dm, dp = _iface(fl, fr, nx, eos, chi, eps_nu,
                            beta_x[:, :, ly], 2, (nifx, ncy))
            R[ix_left, :, pp1 - 1, ly, :] += sx[ly] * dm
            R[ix_right, :, 0, ly, :] += sx[ly] * dp
    nify = iy_left.shape[0]
    if nify:
        for kx in range(pp1):
            fl = phase_fields(U[:, iy_left, kx, pp1 - 1, :], eos)
            fr = phase_fields(U[:, iy_right, kx, 0, :], eos)
            dm, dp = _iface(fl, fr, ny, eos, chi, eps_nu,
                            beta_y[:, :, kx], 2, (ncx, nify))
            R[:, iy_left, kx, pp1 - 1, :] += sy[kx] * dm
            R[:, iy_right, kx, 0, :] += sy[kx] * dp
    return R
