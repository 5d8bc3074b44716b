"""Conservative state layout shared by the thermo and model modules.

The conservative vector is ordered

    1D (7): (a1, a1*r1, a1*r1*u1, a1*r1*E1, a2*r2, a2*r2*u2, a2*r2*E2)
    2D (9): (a1, a1*r1, a1*r1*u1, a1*r1*v1, a1*r1*E1, a2*r2, ..., a2*r2*E2)

with a2 = 1 - a1 never stored.  State arrays carry the variable index last
so every operation broadcasts over arbitrary leading batch axes.
"""

import numpy as np

from .errors import InvalidState

NVAR_OF_DIM = {1: 7, 2: 9}
DIM_OF_NVAR = {7: 1, 9: 2}


def dim_of(u):
    """Space dimension encoded by the trailing axis of a state array."""
    nvar = u.shape[-1]
    try:
        return DIM_OF_NVAR[nvar]
    except KeyError:
        raise InvalidState("state vector length must be 7 (1D) or 9 (2D)",
                           value=nvar) from None


def phase_block(i, d):
    """Slice of the phase-i conservative block (mass, momentum, energy)."""
    start = 1 + i * (d + 2)
    return slice(start, start + d + 2)


def split(u):
    """Split conservative DOFs into stacked per-phase arrays.

    Returns (alpha, arho, mom, aE) where each array carries a leading
    phase axis of length 2: alpha (2, ...), arho (2, ...), mom (2, ..., d),
    aE (2, ...).
    """
    d = dim_of(u)
    a1 = u[..., 0]
    b = [u[..., phase_block(i, d)] for i in (0, 1)]
    alpha = np.stack((a1, 1.0 - a1))
    arho = np.stack((b[0][..., 0], b[1][..., 0]))
    mom = np.stack((b[0][..., 1:1 + d], b[1][..., 1:1 + d]))
    aE = np.stack((b[0][..., d + 1], b[1][..., d + 1]))
    return alpha, arho, mom, aE


def phase_space_violation(u, eos):
    """Return None if every state lies in the phase space, else a report.

    The report is a tuple (constraint, phase, flat_index, value) for the
    first violated constraint found.  Checks, in order: a1 in (0,1),
    a_i*rho_i > 0, rho_i*e_i > p_inf_i.
    """
    alpha, arho, mom, aE = split(u)
    a1 = alpha[0]
    bad = ~((a1 > 0.0) & (a1 < 1.0)) | ~np.isfinite(a1)
    if np.any(bad):
        j = int(np.argmax(bad.ravel()))
        return ("void fraction outside (0,1)", None, j, float(a1.ravel()[j]))
    for i in (0, 1):
        bad = ~(arho[i] > 0.0) | ~np.isfinite(arho[i])
        if np.any(bad):
            j = int(np.argmax(bad.ravel()))
            return ("partial density nonpositive", i, j,
                    float(arho[i].ravel()[j]))
    for i in (0, 1):
        rho = arho[i] / alpha[i]
        # rho*e = (aE - |mom|^2 / (2*arho)) / alpha
        ke = 0.5 * np.sum(mom[i] * mom[i], axis=-1) / arho[i]
        rho_e = (aE[i] - ke) / alpha[i]
        bad = ~(rho_e > eos[i].p_inf) | ~np.isfinite(rho_e)
        if np.any(bad):
            j = int(np.argmax(bad.ravel()))
            return ("internal energy at or below stiffening floor", i, j,
                    float(rho_e.ravel()[j] - eos[i].p_inf))
    return None
