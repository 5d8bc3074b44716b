"""Compiled residual kernels.

Scalar duplicates of the vectorized kernel math, jitted with numba.  The
node loops run in parallel over elements and over interfaces; every loop
iteration writes a disjoint (element, node) slot, so the passes are race
free and results do not depend on the worker count.

eos parameters travel as a flat float64 table (gamma, p_inf, c_v) x 2
because jitted code cannot hold dataclass instances.
"""

import numpy as np
from numba import njit, prange

name = "numba"


def _eos_table(eos):
    return np.array([eos[0].gamma, eos[0].p_inf, eos[0].c_v,
                     eos[1].gamma, eos[1].p_inf, eos[1].c_v])


@njit(cache=True)
def _lm(a, b):
    # logarithmic mean, series branch mirrors numflux.log_mean
    zeta = a / b
    f = (zeta - 1.0) / (zeta + 1.0)
    u = f * f
    if u < 1e-4:
        return 0.5 * (a + b) / (1.0 + u / 3.0 + u * u / 5.0 + u * u * u / 7.0)
    return (b - a) / np.log(b / a)


@njit(cache=True)
def _prim(u, d, i, eos6):
    """alpha, rho, vx, vy, e, p, T of phase i at one node."""
    alpha = u[0] if i == 0 else 1.0 - u[0]
    base = 1 + i * (d + 2)
    ar = u[base]
    rho = ar / alpha
    vx = u[base + 1] / ar
    vy = u[base + 2] / ar if d == 2 else 0.0
    e = u[base + 1 + d] / ar - 0.5 * (vx * vx + vy * vy)
    g = eos6[3 * i]
    pinf = eos6[3 * i + 1]
    cv = eos6[3 * i + 2]
    p = (g - 1.0) * rho * e - g * pinf
    T = (rho * e - pinf) / (rho * cv)
    return alpha, rho, vx, vy, e, p, T


@njit(cache=True)
def _closure(u, d, eos6, chi):
    """Interfacial velocity components and pressure at one node."""
    a1, r1, vx1, vy1, e1, p1, T1 = _prim(u, d, 0, eos6)
    a2, r2, vx2, vy2, e2, p2, T2 = _prim(u, d, 1, eos6)
    a1r1 = a1 * r1
    a2r2 = a2 * r2
    beta = chi * a1r1 / (chi * a1r1 + (1.0 - chi) * a2r2)
    uIx = beta * vx1 + (1.0 - beta) * vx2
    uIy = beta * vy1 + (1.0 - beta) * vy2
    mu = (1.0 - beta) * T2 / (beta * T1 + (1.0 - beta) * T2)
    pI = mu * p1 + (1.0 - mu) * p2
    return uIx, uIy, pI


@njit(cache=True)
def _volume_pair(ua, ub, d, ax, eos6, chi, out):
    """Two-point volume flux along axis ax of the node pair (ua, ub).

    Equals twice the entropy-conservative flux without jump penalty plus
    the void-fraction jump times the nonconservative block at ua.
    """
    ja1 = ub[0] - ua[0]
    uIx, uIy, pI = _closure(ua, d, eos6, chi)
    uIn = uIx if ax == 0 else uIy
    out[0] = ja1 * uIn
    for i in range(2):
        sgn = -1.0 if i == 0 else 1.0
        aa, ra, vxa, vya, ea, pa, Ta = _prim(ua, d, i, eos6)
        ab, rb, vxb, vyb, eb, pb, Tb = _prim(ub, d, i, eos6)
        abar = 0.5 * (aa + ab)
        rhat = _lm(ra, rb)
        vbx = 0.5 * (vxa + vxb)
        vby = 0.5 * (vya + vyb)
        vbn = vbx if ax == 0 else vby
        tha = 1.0 / Ta
        thb = 1.0 / Tb
        thhat = _lm(tha, thb)
        pt = (pa * tha + pb * thb) / (tha + thb)
        vdot = vxa * vxb + vya * vyb
        cv = eos6[3 * i + 2]
        pinf = eos6[3 * i + 1]
        ecoef = rhat * (cv / thhat + 0.5 * vdot)
        base = 1 + i * (d + 2)
        mass = abar * rhat * vbn
        out[base] = 2.0 * mass
        out[base + 1] = 2.0 * (mass * vbx + (abar * pt if ax == 0 else 0.0)) \
            + (ja1 * (sgn * pI) if ax == 0 else 0.0)
        if d == 2:
            out[base + 2] = 2.0 * (mass * vby + (abar * pt if ax == 1 else 0.0)) \
                + (ja1 * (sgn * pI) if ax == 1 else 0.0)
        out[base + 1 + d] = 2.0 * (abar * vbn * (ecoef + pt + pinf)) \
            + ja1 * (sgn * pI * uIn)


@njit(cache=True)
def _iface_pair(ul, ur, d, ax, eos6, chi, eps_nu, beta_s, dm, dp):
    """Entropy-stable interface fluxes into dm (left) and dp (right)."""
    ja1 = ur[0] - ul[0]
    uIxm, uIym, pIm = _closure(ul, d, eos6, chi)
    uIxp, uIyp, pIp = _closure(ur, d, eos6, chi)
    uInm = uIxm if ax == 0 else uIym
    uInp = uIxp if ax == 0 else uIyp
    coef = 0.0
    if eps_nu > 0.0:
        sl = 0.0
        sr = 0.0
        for i in range(2):
            g = eos6[3 * i]
            cv = eos6[3 * i + 2]
            aa, ra, vxa, vya, ea, pa, Ta = _prim(ul, d, i, eos6)
            ab, rb, vxb, vyb, eb, pb, Tb = _prim(ur, d, i, eos6)
            vna = vxa if ax == 0 else vya
            vnb = vxb if ax == 0 else vyb
            ca = np.sqrt(g * (g - 1.0) * cv * Ta)
            cb = np.sqrt(g * (g - 1.0) * cv * Tb)
            if abs(vna) + ca > sl:
                sl = abs(vna) + ca
            if abs(vnb) + cb > sr:
                sr = abs(vnb) + cb
        coef = 0.5 * eps_nu * max(sl, sr)
    dm[0] = -0.5 * beta_s * ja1 + 0.5 * ja1 * uInm
    dp[0] = 0.5 * beta_s * ja1 + 0.5 * ja1 * uInp
    for i in range(2):
        jai = ja1 if i == 0 else -ja1
        sgn = -1.0 if i == 0 else 1.0
        aa, ra, vxa, vya, ea, pa, Ta = _prim(ul, d, i, eos6)
        ab, rb, vxb, vyb, eb, pb, Tb = _prim(ur, d, i, eos6)
        abar = 0.5 * (aa + ab)
        rhat = _lm(ra, rb)
        vbx = 0.5 * (vxa + vxb)
        vby = 0.5 * (vya + vyb)
        vbn = vbx if ax == 0 else vby
        tha = 1.0 / Ta
        thb = 1.0 / Tb
        thhat = _lm(tha, thb)
        pt = (pa * tha + pb * thb) / (tha + thb)
        vdot = vxa * vxb + vya * vyb
        cv = eos6[3 * i + 2]
        pinf = eos6[3 * i + 1]
        ecoef = rhat * (cv / thhat + 0.5 * vdot)
        pen = 0.5 * beta_s * jai
        h_mass = abar * rhat * vbn - pen * rhat
        h_mx = (abar * rhat * vbn) * vbx + (abar * pt if ax == 0 else 0.0) \
            - (pen * rhat) * vbx
        h_my = (abar * rhat * vbn) * vby + (abar * pt if ax == 1 else 0.0) \
            - (pen * rhat) * vby
        h_en = abar * vbn * (ecoef + pt + pinf) - pen * (ecoef + pinf)
        vna = vxa if ax == 0 else vya
        vnb = vxb if ax == 0 else vyb
        Ea = ea + 0.5 * (vxa * vxa + vya * vya)
        Eb = eb + 0.5 * (vxb * vxb + vyb * vyb)
        fa_mass = (aa * ra) * vna
        fb_mass = (ab * rb) * vnb
        fa_mx = fa_mass * vxa + (aa * pa if ax == 0 else 0.0)
        fb_mx = fb_mass * vxb + (ab * pb if ax == 0 else 0.0)
        fa_my = fa_mass * vya + (aa * pa if ax == 1 else 0.0)
        fb_my = fb_mass * vyb + (ab * pb if ax == 1 else 0.0)
        fa_en = ((aa * ra) * Ea + aa * pa) * vna
        fb_en = ((ab * rb) * Eb + ab * pb) * vnb
        dmf_mx = 0.5 * ja1 * (sgn * pIm if ax == 0 else 0.0)
        dpf_mx = 0.5 * ja1 * (sgn * pIp if ax == 0 else 0.0)
        dmf_my = 0.5 * ja1 * (sgn * pIm if ax == 1 else 0.0)
        dpf_my = 0.5 * ja1 * (sgn * pIp if ax == 1 else 0.0)
        dmf_en = 0.5 * ja1 * (sgn * pIm * uInm)
        dpf_en = 0.5 * ja1 * (sgn * pIp * uInp)
        dn_mass = coef * (rb - ra)
        dn_mx = coef * (rb * vxb - ra * vxa)
        dn_my = coef * (rb * vyb - ra * vya)
        erow = (cv / thhat + 0.5 * vdot) * (rb - ra) \
            + (0.5 * (ra + rb)) * ((vbx * (vxb - vxa) + vby * (vyb - vya))
                                   + cv * (Tb - Ta))
        dn_en = coef * erow
        base = 1 + i * (d + 2)
        dm[base] = h_mass - fa_mass - dn_mass
        dp[base] = fb_mass - h_mass + dn_mass
        dm[base + 1] = h_mx - fa_mx + dmf_mx - dn_mx
        dp[base + 1] = fb_mx - h_mx + dpf_mx + dn_mx
        if d == 2:
            dm[base + 2] = h_my - fa_my + dmf_my - dn_my
            dp[base + 2] = fb_my - h_my + dpf_my + dn_my
        dm[base + 1 + d] = h_en - fa_en + dmf_en - dn_en
        dp[base + 1 + d] = fb_en - h_en + dpf_en + dn_en


@njit(cache=True, parallel=True)
def _res1(U, wD, eos6, chi, eps_nu, beta_if, ifL, ifR):
    ncell, pp1, nvar = U.shape
    R = np.zeros((ncell, pp1, nvar))
    for j in prange(ncell):
        dtil = np.empty(nvar)
        for k in range(pp1):
            for l in range(pp1):
                _volume_pair(U[j, k], U[j, l], 1, 0, eos6, chi, dtil)
                w = wD[k, l]
                for q in range(nvar):
                    R[j, k, q] += w * dtil[q]
    nif = ifL.shape[0]
    for m in prange(nif):
        dm = np.empty(nvar)
        dp = np.empty(nvar)
        _iface_pair(U[ifL[m], pp1 - 1], U[ifR[m], 0], 1, 0,
                    eos6, chi, eps_nu, beta_if[m], dm, dp)
        for q in range(nvar):
            R[ifL[m], pp1 - 1, q] += dm[q]
            R[ifR[m], 0, q] += dp[q]
    return R


@njit(cache=True, parallel=True)
def _res2(U, wD, eos6, chi, eps_nu, sx, sy,
          beta_x, ixL, ixR, beta_y, iyL, iyR):
    ncx, ncy, pp1, _, nvar = U.shape
    R = np.zeros((ncx, ncy, pp1, pp1, nvar))
    nel = ncx * ncy
    for e in prange(nel):
        jx = e // ncy
        jy = e - jx * ncy
        dtil = np.empty(nvar)
        for ly in range(pp1):
            for k in range(pp1):
                for m in range(pp1):
                    _volume_pair(U[jx, jy, k, ly], U[jx, jy, m, ly],
                                 2, 0, eos6, chi, dtil)
                    w = sx[ly] * wD[k, m]
                    for q in range(nvar):
                        R[jx, jy, k, ly, q] += w * dtil[q]
        for kx in range(pp1):
            for l in range(pp1):
                for m in range(pp1):
                    _volume_pair(U[jx, jy, kx, l], U[jx, jy, kx, m],
                                 2, 1, eos6, chi, dtil)
                    w = sy[kx] * wD[l, m]
                    for q in range(nvar):
                        R[jx, jy, kx, l, q] += w * dtil[q]
    # x-interface writes hit (left, jy, node p) and (right, jy, node 0);
    # all tasks target distinct slots, same for the y pass below
    nifx = ixL.shape[0]
    for t in prange(nifx * ncy):
        m = t // ncy
        jy = t - m * ncy
        dm = np.empty(nvar)
        dp = np.empty(nvar)
        for ly in range(pp1):
            _iface_pair(U[ixL[m], jy, pp1 - 1, ly], U[ixR[m], jy, 0, ly],
                        2, 0, eos6, chi, eps_nu, beta_x[m, jy, ly], dm, dp)
            for q in range(nvar):
                R[ixL[m], jy, pp1 - 1, ly, q] += sx[ly] * dm[q]
                R[ixR[m], jy, 0, ly, q] += sx[ly] * dp[q]
    nify = iyL.shape[0]
    for t in prange(ncx * nify):
        jx = t // nify
        m = t - jx * nify
        dm = np.empty(nvar)
        dp = np.empty(nvar)
        for kx in range(pp1):
            _iface_pair(U[jx, iyL[m], kx, pp1 - 1], U[jx, iyR[m], kx, 0],
                        2, 1, eos6, chi, eps_nu, beta_y[jx, m, kx], dm, dp)
            for q in range(nvar):
                R[jx, iyL[m], kx, pp1 - 1, q] += sy[kx] * dm[q]
                R[jx, iyR[m], kx, 0, q] += sy[kx] * dp[q]
    return R


def residual_1d(U, wD, eos, chi, eps_nu, beta_if, if_left, if_right):
    return _res1(np.ascontiguousarray(U), np.ascontiguousarray(wD),
                 _eos_table(eos), float(chi), float(eps_nu),
                 np.ascontiguousarray(beta_if, dtype=np.float64),
                 np.ascontiguousarray(if_left, dtype=np.int64),
                 np.ascontiguousarray(if_right, dtype=np.int64))


def residual_2d(U, wD, eos, chi, eps_nu, sx, sy,
                beta_x, ix_left, ix_right, beta_y, iy_left, iy_right):
    return _res2(np.ascontiguousarray(U), np.ascontiguousarray(wD),
                 _eos_table(eos), float(chi), float(eps_nu),
                 np.ascontiguousarray(sx), np.ascontiguousarray(sy),
                 np.ascontiguousarray(beta_x, dtype=np.float64),
                 np.ascontiguousarray(ix_left, dtype=np.int64),
                 np.ascontiguousarray(ix_right, dtype=np.int64),
                 np.ascontiguousarray(beta_y, dtype=np.float64),
                 np.ascontiguousarray(iy_left, dtype=np.int64),
                 np.ascontiguousarray(iy_right, dtype=np.int64))
