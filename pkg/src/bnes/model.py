"""Seven-equation two-phase state algebra.

Conservative layout (d = 1 or 2, nvar = 1 + 2(d+2)):

    (a1, a1*r1, a1*r1*v1 [d comps], a1*r1*E1, a2*r2, a2*r2*v2, a2*r2*E2)

a2 = 1 - a1 is never stored.  All functions broadcast over leading axes and
are pure; velocity lives only as momentum in the conservative vector.
"""

from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from ._state import dim_of, phase_space_violation, split
from .errors import InvalidState
from .thermo import PhasePrimitive, internal_energy, pressure, sound_speed, temperature

ADMISSIBLE_CHI = (0.0, 0.5, 1.0)


@dataclass(frozen=True)
class BnState:
    """Named wrapper around a conservative state array."""

    data: np.ndarray

    @property
    def dim(self):
        return dim_of(self.data)

    @property
    def alpha1(self):
        return self.data[..., 0]


@dataclass(frozen=True)
class InterfaceClosure:
    """Interfacial velocity/pressure weights for one closure selector chi."""

    chi: float
    beta: object = None
    mu: object = None
    u_I: object = None
    p_I: object = None

    def __post_init__(self):
        if self.chi not in ADMISSIBLE_CHI:
            raise ValueError(f"chi must be one of {ADMISSIBLE_CHI}, got {self.chi}")


# Plain-array bundle shared by the flux layer; phase axis first where present.
PhaseFields = namedtuple("PhaseFields", "alpha rho vel e p T")


def validate(u, eos):
    """Raise InvalidState unless u lies in the interior of the phase space."""
    report = phase_space_violation(u, eos)
    if report is not None:
        constraint, phase, where, value = report
        raise InvalidState(constraint, phase=phase, where=where, value=value)


def phase_fields(u, eos):
    """Decompose a batch of valid states into per-phase field arrays.

    No validation; call validate() first when the input is untrusted.
    """
    alpha, arho, mom, aE = split(u)
    rho = arho / alpha
    vel = mom / arho[..., None]
    e = aE / arho - 0.5 * np.sum(vel * vel, axis=-1)
    p = np.stack([pressure(rho[i], e[i], eos[i]) for i in (0, 1)])
    T = np.stack([(rho[i] * e[i] - eos[i].p_inf) / (rho[i] * eos[i].c_v)
                  for i in (0, 1)])
    return PhaseFields(alpha, rho, vel, e, p, T)


def to_conservative(prim, eos):
    """Assemble a conservative state array from a pair of PhasePrimitive.

    The two void fractions must saturate to 1; only prim[0].alpha is stored.
    """
    a1 = np.asarray(prim[0].alpha, dtype=float)
    a2 = np.asarray(prim[1].alpha, dtype=float)
    if np.max(np.abs(a1 + a2 - 1.0)) > 1e-12:
        raise InvalidState("void fractions do not sum to 1")
    vel0 = np.asarray(prim[0].vel, dtype=float)
    d = vel0.shape[-1]
    batch = np.broadcast_shapes(a1.shape, vel0.shape[:-1])
    u = np.zeros(batch + (1 + 2 * (d + 2),))
    u[..., 0] = a1
    for i in (0, 1):
        alpha = np.asarray(prim[i].alpha, dtype=float)
        rho = np.asarray(prim[i].rho, dtype=float)
        vel = np.asarray(prim[i].vel, dtype=float)
        p = np.asarray(prim[i].p, dtype=float)
        e = internal_energy(rho, p, eos[i])
        E = e + 0.5 * np.sum(vel * vel, axis=-1)
        base = 1 + i * (d + 2)
        u[..., base] = alpha * rho
        u[..., base + 1:base + 1 + d] = (alpha * rho)[..., None] * vel
        u[..., base + 1 + d] = alpha * rho * E
    validate(u, eos)
    return u


def to_primitive(u, eos):
    """Split a conservative state into a pair of PhasePrimitive."""
    validate(u, eos)
    f = phase_fields(u, eos)
    return tuple(
        PhasePrimitive(alpha=f.alpha[i], rho=f.rho[i], vel=f.vel[i], p=f.p[i])
        for i in (0, 1))


def _flux_from_fields(f, n, d):
    """Directional physical flux built from precomputed phase fields."""
    batch = np.broadcast_shapes(f.alpha.shape[1:], np.asarray(n).shape[:-1])
    out = np.zeros(batch + (1 + 2 * (d + 2),))
    n = np.asarray(n, dtype=float)
    for i in (0, 1):
        vn = np.sum(f.vel[i] * n, axis=-1)
        arho = f.alpha[i] * f.rho[i]
        ap = f.alpha[i] * f.p[i]
        E = f.e[i] + 0.5 * np.sum(f.vel[i] * f.vel[i], axis=-1)
        base = 1 + i * (d + 2)
        out[..., base] = arho * vn
        out[..., base + 1:base + 1 + d] = (arho * vn)[..., None] * f.vel[i] \
            + ap[..., None] * n
        out[..., base + 1 + d] = (arho * E + ap) * vn
    return out


def physical_flux(u, n, eos):
    """Conservative part of the flux projected on unit direction n.

    The void-fraction slot is zero; it evolves only through the
    nonconservative product.
    """
    validate(u, eos)
    d = dim_of(u)
    return _flux_from_fields(phase_fields(u, eos), np.asarray(n, dtype=float), d)


def closure_from_fields(f, chi):
    """InterfaceClosure computed from an existing PhaseFields bundle."""
    a1r1 = f.alpha[0] * f.rho[0]
    a2r2 = f.alpha[1] * f.rho[1]
    beta = chi * a1r1 / (chi * a1r1 + (1.0 - chi) * a2r2)
    u_I = beta[..., None] * f.vel[0] + (1.0 - beta)[..., None] * f.vel[1]
    mu = (1.0 - beta) * f.T[1] / (beta * f.T[0] + (1.0 - beta) * f.T[1])
    p_I = mu * f.p[0] + (1.0 - mu) * f.p[1]
    return InterfaceClosure(chi=chi, beta=beta, mu=mu, u_I=u_I, p_I=p_I)


def closure_detail(u, chi, eos):
    """Full InterfaceClosure (beta, mu, u_I, p_I) at every state in the batch."""
    if chi not in ADMISSIBLE_CHI:
        raise ValueError(f"chi must be one of {ADMISSIBLE_CHI}, got {chi}")
    return closure_from_fields(phase_fields(u, eos), chi)


def interface_closures(u, chi, eos):
    """Interfacial velocity and pressure (u_I, p_I) for selector chi."""
    validate(u, eos)
    c = closure_detail(u, chi, eos)
    return c.u_I, c.p_I


def noncons_coeff(u, chi, n, eos):
    """Coefficient vector of the nonconservative product along direction n.

    Multiplies the jump (or derivative) of a1.  Layout mirrors the state:
    (u_I.n, 0, -p_I n, -p_I u_I.n, 0, +p_I n, +p_I u_I.n).
    """
    validate(u, eos)
    d = dim_of(u)
    c = closure_detail(u, chi, eos)
    n = np.asarray(n, dtype=float)
    uIn = np.sum(c.u_I * n, axis=-1)
    batch = np.broadcast_shapes(uIn.shape, np.asarray(u).shape[:-1])
    out = np.zeros(batch + (1 + 2 * (d + 2),))
    out[..., 0] = uIn
    for i, sign in ((0, -1.0), (1, 1.0)):
        base = 1 + i * (d + 2)
        out[..., base + 1:base + 1 + d] = sign * c.p_I[..., None] * n
        out[..., base + 1 + d] = sign * c.p_I * uIn
    return out


def max_wave_speed(u, n, eos):
    """Spectral radius bound max_i(|v_i.n| + c_i) along unit direction n."""
    f = phase_fields(u, eos)
    n = np.asarray(n, dtype=float)
    speed = None
    for i in (0, 1):
        vn = np.abs(np.sum(f.vel[i] * n, axis=-1))
        c = sound_speed(f.rho[i], f.e[i], eos[i])
        s = vn + c
        speed = s if speed is None else np.maximum(speed, s)
    return speed


def eigenvalues(u, n, eos, chi=0.0):
    """Characteristic speeds along n: (u1-c1, u1, u1+c1, u2-c2, u2, u2+c2, u_I)."""
    validate(u, eos)
    f = phase_fields(u, eos)
    c = closure_detail(u, chi, eos)
    n = np.asarray(n, dtype=float)
    out = []
    for i in (0, 1):
        vn = np.sum(f.vel[i] * n, axis=-1)
        ci = sound_speed(f.rho[i], f.e[i], eos[i])
        out.extend([vn - ci, vn, vn + ci])
    out.append(np.sum(c.u_I * n, axis=-1))
    return np.stack(out, axis=-1)


def near_resonance(u, n, eos, chi=0.0, tol=1e-8):
    """Diagnostic: True where u_I falls within tol of an acoustic speed.

    Reported, never corrected; the scheme assumes the flow stays away from
    resonance.
    """
    lam = eigenvalues(u, n, eos, chi)
    uI = lam[..., 6]
    acoustic = lam[..., [0, 2, 3, 5]]
    return np.any(np.abs(acoustic - uI[..., None]) < tol, axis=-1)
