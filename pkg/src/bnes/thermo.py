"""Stiffened-gas thermodynamics, phasic entropies, and entropy variables.

All operations are pure and broadcast over arbitrary leading array axes.
Temperature is always derived from (rho, e); theta = 1/T is computed from
that single source.  Degenerate states (rho*e <= p_inf) raise a typed error
instead of being clamped; recovery policy belongs to the solver layer.
"""

from dataclasses import dataclass

import numpy as np

from ._state import dim_of, phase_space_violation, split
from .errors import DegenerateState, InvalidState


@dataclass(frozen=True)
class EosParams:
    """Stiffened-gas constants of one phase: p = (gamma-1) rho e - gamma p_inf."""

    gamma: float
    p_inf: float = 0.0
    c_v: float = 1.0

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")
        if self.p_inf < 0.0:
            raise ValueError(f"p_inf must be nonnegative, got {self.p_inf}")
        if not self.c_v > 0.0:
            raise ValueError(f"c_v must be positive, got {self.c_v}")

    @property
    def c_p(self):
        return self.gamma * self.c_v


@dataclass(frozen=True)
class PhasePrimitive:
    """Primitive description of one phase: void fraction, density, velocity, pressure.

    vel has the space dimension as its last axis.  Derived quantities
    (e, T, theta, s, c) are obtained through the module functions, never
    stored.
    """

    alpha: object
    rho: object
    vel: object
    p: object


def pressure(rho, e, eos):
    """Stiffened-gas pressure (gamma-1) rho e - gamma p_inf.

    May return a nonpositive value; validity is the caller's concern.
    """
    return (eos.gamma - 1.0) * np.asarray(rho) * e - eos.gamma * eos.p_inf


def internal_energy(rho, p, eos):
    """Inverse of pressure(): e = (p + gamma p_inf) / ((gamma - 1) rho)."""
    return (np.asarray(p) + eos.gamma * eos.p_inf) / ((eos.gamma - 1.0) * rho)


def _bracket(rho, e, eos, what):
    rho = np.asarray(rho, dtype=float)
    b = rho * e - eos.p_inf
    if np.any(b <= 0.0) or not np.all(np.isfinite(b)):
        worst = float(np.min(b))
        raise DegenerateState(
            f"{what} needs rho*e > p_inf; worst bracket {worst:.6g}")
    return rho, b


def sound_speed(rho, e, eos):
    """Speed of sound sqrt(gamma (gamma-1) (rho e - p_inf) / rho)."""
    rho, b = _bracket(rho, e, eos, "sound_speed")
    return np.sqrt(eos.gamma * (eos.gamma - 1.0) * b / rho)


def temperature(rho, e, eos):
    """T = (rho e - p_inf) / (rho c_v), positive on the phase space."""
    rho, b = _bracket(rho, e, eos, "temperature")
    return b / (rho * eos.c_v)


def phasic_entropy(rho, theta, eos):
    """Specific entropy s = -c_v (ln theta + (gamma - 1) ln rho)."""
    return -eos.c_v * (np.log(theta) + (eos.gamma - 1.0) * np.log(rho))


def _checked_phase_fields(u, eos):
    """Per-phase (alpha, rho, vel, e) stacks for a validated state array."""
    report = phase_space_violation(u, eos)
    if report is not None:
        constraint, phase, where, value = report
        raise InvalidState(constraint, phase=phase, where=where, value=value)
    alpha, arho, mom, aE = split(u)
    rho = arho / alpha
    vel = mom / arho[..., None]
    e = aE / arho - 0.5 * np.sum(vel * vel, axis=-1)
    return alpha, rho, vel, e


def entropy_pair(u, eos):
    """Mixture entropy density and flux: eta = -sum_i a_i rho_i s_i, q = -sum a rho s v.

    Parameters
    ----------
    u : array (..., 7) or (..., 9)
        Conservative states.
    eos : pair of EosParams

    Returns (eta, q) with eta shaped like the batch and q carrying the
    space dimension as its last axis.
    """
    d = dim_of(u)
    alpha, rho, vel, e = _checked_phase_fields(u, eos)
    eta = np.zeros(u.shape[:-1])
    q = np.zeros(u.shape[:-1] + (d,))
    for i in (0, 1):
        T = temperature(rho[i], e[i], eos[i])
        s = phasic_entropy(rho[i], 1.0 / T, eos[i])
        ars = alpha[i] * rho[i] * s
        eta -= ars
        q -= ars[..., None] * vel[i]
    return eta, q


def entropy_variables(u, eos):
    """Gradient of the mixture entropy with respect to the conservative state.

    Component layout matches the conservative layout: the void-fraction slot
    holds p2 theta2 - p1 theta1, each phase block holds
    (-s_i + (h_i - |v_i|^2/2) theta_i, v_i theta_i, -theta_i).
    """
    d = dim_of(u)
    alpha, rho, vel, e = _checked_phase_fields(u, eos)
    v = np.zeros_like(np.asarray(u, dtype=float))
    ptheta = []
    for i in (0, 1):
        T = temperature(rho[i], e[i], eos[i])
        theta = 1.0 / T
        s = phasic_entropy(rho[i], theta, eos[i])
        p = pressure(rho[i], e[i], eos[i])
        h = e[i] + p / rho[i]
        vsq = np.sum(vel[i] * vel[i], axis=-1)
        base = 1 + i * (d + 2)
        v[..., base] = -s + (h - 0.5 * vsq) * theta
        v[..., base + 1:base + 1 + d] = vel[i] * theta[..., None]
        v[..., base + 1 + d] = -theta
        ptheta.append(p * theta)
    v[..., 0] = ptheta[1] - ptheta[0]
    return v
