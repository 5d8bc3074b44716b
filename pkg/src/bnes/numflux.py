"""Two-point flux kernels: entropy-conservative flux, fluctuations, volume
flux, upwind dissipation, and entropy-stable interface fluxes.

Every kernel operates on a pair of state batches and an arbitrary unit
direction.  Jumps are right minus left throughout.  The kernels are pure;
callers are expected to validate states once per residual evaluation, while
the public ops here validate defensively.
"""

from dataclasses import dataclass

import numpy as np

from ._state import dim_of
from .errors import NonPositiveArgument
from .model import (
    ADMISSIBLE_CHI,
    _flux_from_fields,
    closure_from_fields,
    phase_fields,
    validate,
)
from .thermo import entropy_pair, entropy_variables


@dataclass(frozen=True)
class FluctuationPair:
    """Fluxes applied to the two sides of an interface."""

    d_minus: np.ndarray
    d_plus: np.ndarray


@dataclass(frozen=True)
class TwoPointContext:
    """Inputs of a two-point kernel evaluation.

    left/right are conservative state batches (..., nvar), n a unit
    direction, eos the per-phase EOS pair.  eps_nu scales the upwind
    dissipation, beta_s the interface jump penalty inside the
    entropy-conservative flux.
    """

    left: np.ndarray
    right: np.ndarray
    n: np.ndarray
    eos: tuple
    chi: float = 0.0
    eps_nu: float = 0.0
    beta_s: float = 0.0

    def __post_init__(self):
        if self.chi not in ADMISSIBLE_CHI:
            raise ValueError(f"chi must be one of {ADMISSIBLE_CHI}, got {self.chi}")
        if not self.eps_nu >= 0.0:
            raise ValueError(f"eps_nu must be nonnegative, got {self.eps_nu}")
        if not self.beta_s >= 0.0:
            raise ValueError(f"beta_s must be nonnegative, got {self.beta_s}")


def log_mean(a, b):
    """Logarithmic mean (b-a)/(ln b - ln a), stable near a = b.

    Uses the ratio-series evaluation: with z = a/b, f = (z-1)/(z+1), u = f*f,
    the mean is (a+b)/2 / (1 + u/3 + u^2/5 + u^3/7) when u < 1e-4.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(~(a > 0.0)) or np.any(~(b > 0.0)):
        raise NonPositiveArgument("log_mean requires positive arguments")
    zeta = a / b
    f = (zeta - 1.0) / (zeta + 1.0)
    u = f * f
    small = u < 1e-4
    series = 0.5 * (a + b) / (1.0 + u / 3.0 + u * u / 5.0 + u * u * u / 7.0)
    # keep the dead branch free of log(1)/0 artifacts
    ratio = np.where(small, 2.0, b / a)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (b - a) / np.log(ratio)
    out = np.where(small, series, direct)
    return out[()] if out.ndim == 0 else out


def _pair(ctx):
    """Phase fields of both sides plus shared geometry."""
    d = dim_of(ctx.left)
    fl = phase_fields(ctx.left, ctx.eos)
    fr = phase_fields(ctx.right, ctx.eos)
    n = np.asarray(ctx.n, dtype=float)
    batch = np.broadcast_shapes(ctx.left.shape[:-1], ctx.right.shape[:-1],
                                n.shape[:-1])
    return fl, fr, n, d, batch


def _ec_flux(fl, fr, n, eos, beta_s, d, batch):
    """Entropy-conservative flux h(u-, u+, n) including the beta_s penalty.

    The penalty block scales with the jump of the own phase's void fraction,
    so the two phases carry opposite signs.
    """
    out = np.zeros(batch + (1 + 2 * (d + 2),))
    ja1 = fr.alpha[0] - fl.alpha[0]
    out[..., 0] = -0.5 * beta_s * ja1
    for i in (0, 1):
        jai = ja1 if i == 0 else -ja1
        abar = 0.5 * (fl.alpha[i] + fr.alpha[i])
        rhat = log_mean(fl.rho[i], fr.rho[i])
        vbar = 0.5 * (fl.vel[i] + fr.vel[i])
        vbn = np.sum(vbar * n, axis=-1)
        thl = 1.0 / fl.T[i]
        thr = 1.0 / fr.T[i]
        thhat = log_mean(thl, thr)
        # p-tilde = mean(p theta) / mean(theta)
        pt = (fl.p[i] * thl + fr.p[i] * thr) / (thl + thr)
        vdot = np.sum(fl.vel[i] * fr.vel[i], axis=-1)
        ecoef = rhat * (eos[i].c_v / thhat + 0.5 * vdot)
        base = 1 + i * (d + 2)
        out[..., base] = abar * rhat * vbn
        out[..., base + 1:base + 1 + d] = \
            (abar * rhat * vbn)[..., None] * vbar + (abar * pt)[..., None] * n
        out[..., base + 1 + d] = abar * vbn * (ecoef + pt + eos[i].p_inf)
        # beta_s may be scalar or per-pair array
        pen = 0.5 * np.multiply(beta_s, jai)
        out[..., base] -= pen * rhat
        out[..., base + 1:base + 1 + d] -= (pen * rhat)[..., None] * vbar
        out[..., base + 1 + d] -= pen * (ecoef + eos[i].p_inf)
    return out


def _cblock(cl, n, d, batch):
    """Nonconservative coefficient vector from a closure evaluation."""
    out = np.zeros(batch + (1 + 2 * (d + 2),))
    uIn = np.sum(cl.u_I * n, axis=-1)
    out[..., 0] = uIn
    for i, sign in ((0, -1.0), (1, 1.0)):
        base = 1 + i * (d + 2)
        out[..., base + 1:base + 1 + d] = sign * cl.p_I[..., None] * n
        out[..., base + 1 + d] = sign * cl.p_I * uIn
    return out


def _fluctuations(fl, fr, n, chi, d, batch):
    """d-(closure at left trace) and d+(closure at right trace)."""
    ja1 = fr.alpha[0] - fl.alpha[0]
    cm = _cblock(closure_from_fields(fl, chi), n, d, batch)
    cp = _cblock(closure_from_fields(fr, chi), n, d, batch)
    return 0.5 * ja1[..., None] * cm, 0.5 * ja1[..., None] * cp


def _spectral_radius(f, n, eos):
    """max over phases of |v.n| + c from a PhaseFields bundle."""
    speed = None
    for i in (0, 1):
        vn = np.abs(np.sum(f.vel[i] * n, axis=-1))
        c = np.sqrt(eos[i].gamma * (eos[i].gamma - 1.0) * eos[i].c_v * f.T[i])
        s = vn + c
        speed = s if speed is None else np.maximum(speed, s)
    return speed


def _dissipation(fl, fr, n, eos, eps_nu, d, batch):
    """Upwind dissipation block, scaled by the larger spectral radius.

    Energy row uses the temperature-jump form, which keeps
    jump(v) . D_nu sign-definite for stiffened phases as well.
    """
    out = np.zeros(batch + (1 + 2 * (d + 2),))
    if eps_nu == 0.0:
        return out
    coef = 0.5 * eps_nu * np.maximum(_spectral_radius(fl, n, eos),
                                     _spectral_radius(fr, n, eos))
    for i in (0, 1):
        jrho = fr.rho[i] - fl.rho[i]
        jrv = fr.rho[i][..., None] * fr.vel[i] - fl.rho[i][..., None] * fl.vel[i]
        jT = fr.T[i] - fl.T[i]
        jv = fr.vel[i] - fl.vel[i]
        rbar = 0.5 * (fl.rho[i] + fr.rho[i])
        vbar = 0.5 * (fl.vel[i] + fr.vel[i])
        thhat = log_mean(1.0 / fl.T[i], 1.0 / fr.T[i])
        vdot = np.sum(fl.vel[i] * fr.vel[i], axis=-1)
        erow = (eos[i].c_v / thhat + 0.5 * vdot) * jrho \
            + rbar * (np.sum(vbar * jv, axis=-1) + eos[i].c_v * jT)
        base = 1 + i * (d + 2)
        out[..., base] = coef * jrho
        out[..., base + 1:base + 1 + d] = coef[..., None] * jrv
        out[..., base + 1 + d] = coef * erow
    return out


def ec_conservative_flux(ctx):
    """Entropy-conservative two-point flux h(u-, u+, n)."""
    validate(ctx.left, ctx.eos)
    validate(ctx.right, ctx.eos)
    fl, fr, n, d, batch = _pair(ctx)
    return _ec_flux(fl, fr, n, ctx.eos, ctx.beta_s, d, batch)


def ec_fluctuations(ctx):
    """Nonconservative fluctuations (d-, d+) of the interface jump."""
    validate(ctx.left, ctx.eos)
    validate(ctx.right, ctx.eos)
    fl, fr, n, d, batch = _pair(ctx)
    dm, dp = _fluctuations(fl, fr, n, ctx.chi, d, batch)
    return FluctuationPair(d_minus=dm, d_plus=dp)


def volume_flux(ctx):
    """Symmetrized two-point volume flux.

    Equals h(a,b) + h(b,a) + d-(a,b) - d+(b,a); the beta_s penalties cancel
    in the swap and the fluctuation pair collapses onto the left closure, so
    the reduced form below is exact.
    """
    validate(ctx.left, ctx.eos)
    validate(ctx.right, ctx.eos)
    fl, fr, n, d, batch = _pair(ctx)
    h0 = _ec_flux(fl, fr, n, ctx.eos, 0.0, d, batch)
    ja1 = fr.alpha[0] - fl.alpha[0]
    cm = _cblock(closure_from_fields(fl, ctx.chi), n, d, batch)
    return 2.0 * h0 + ja1[..., None] * cm


def dissipation(ctx):
    """Upwind dissipation D_nu(u-, u+, n)."""
    validate(ctx.left, ctx.eos)
    validate(ctx.right, ctx.eos)
    fl, fr, n, d, batch = _pair(ctx)
    return _dissipation(fl, fr, n, ctx.eos, ctx.eps_nu, d, batch)


def interface_fluxes(ctx):
    """Entropy-stable interface fluxes (D-, D+).

    D- enters the left element's residual, D+ the right element's.
    """
    validate(ctx.left, ctx.eos)
    validate(ctx.right, ctx.eos)
    fl, fr, n, d, batch = _pair(ctx)
    h = _ec_flux(fl, fr, n, ctx.eos, ctx.beta_s, d, batch)
    dm, dp = _fluctuations(fl, fr, n, ctx.chi, d, batch)
    dnu = _dissipation(fl, fr, n, ctx.eos, ctx.eps_nu, d, batch)
    f_l = _flux_from_fields(fl, n, d)
    f_r = _flux_from_fields(fr, n, d)
    return FluctuationPair(d_minus=h - f_l + dm - dnu,
                           d_plus=f_r - h + dp + dnu)


def entropy_condition_residual(ctx):
    """Entropy balance defect of the EC fluxes (zero up to roundoff).

    Evaluates -h . jump(v) + v- . d- + v+ . d+ + jump(f.n . v - q.n).
    """
    validate(ctx.left, ctx.eos)
    validate(ctx.right, ctx.eos)
    fl, fr, n, d, batch = _pair(ctx)
    h = _ec_flux(fl, fr, n, ctx.eos, ctx.beta_s, d, batch)
    dm, dp = _fluctuations(fl, fr, n, ctx.chi, d, batch)
    vl = entropy_variables(ctx.left, ctx.eos)
    vr = entropy_variables(ctx.right, ctx.eos)
    _, ql = entropy_pair(ctx.left, ctx.eos)
    _, qr = entropy_pair(ctx.right, ctx.eos)
    f_l = _flux_from_fields(fl, n, d)
    f_r = _flux_from_fields(fr, n, d)
    pot_l = np.sum(f_l * vl, axis=-1) - np.sum(ql * n, axis=-1)
    pot_r = np.sum(f_r * vr, axis=-1) - np.sum(qr * n, axis=-1)
    return (-np.sum(h * (vr - vl), axis=-1)
            + np.sum(vl * dm, axis=-1) + np.sum(vr * dp, axis=-1)
            + pot_r - pot_l)
