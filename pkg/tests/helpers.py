"""Shared test utilities: random state generation and independent oracles."""

import numpy as np

from bnes.thermo import EosParams, internal_energy

# EOS pairs spanning ideal gas, mildly stiffened, and strongly stiffened.
EOS_PAIRS = [
    (EosParams(1.4), EosParams(1.4)),
    (EosParams(1.4, 0.1, 2.5), EosParams(1.4, 0.0, 2.5)),
    (EosParams(3.0, 0.1, 0.5), EosParams(1.4, 0.0, 1.786)),
    (EosParams(1.35, 0.0, 2.0), EosParams(3.0, 3400.0, 1.2)),
    (EosParams(1.4, 0.0, 1.0), EosParams(3.0, 100.0, 0.7)),
]


def random_states(rng, n, eos, dim=1, alpha_range=(0.05, 0.95),
                  rho_range=(0.5, 3.0), vel_range=(-2.0, 2.0),
                  p_range=(0.5, 5.0)):
    """Draw n valid conservative states for the given EOS pair.

    Pressures are drawn from p_range, so every state satisfies
    rho_i e_i > p_inf_i by construction.
    """
    nvar = 1 + 2 * (dim + 2)
    u = np.empty((n, nvar))
    a1 = rng.uniform(*alpha_range, size=n)
    u[:, 0] = a1
    alphas = (a1, 1.0 - a1)
    for i in (0, 1):
        rho = rng.uniform(*rho_range, size=n)
        vel = rng.uniform(*vel_range, size=(n, dim))
        p = rng.uniform(*p_range, size=n)
        e = internal_energy(rho, p, eos[i])
        E = e + 0.5 * np.sum(vel * vel, axis=-1)
        base = 1 + i * (dim + 2)
        u[:, base] = alphas[i] * rho
        u[:, base + 1:base + 1 + dim] = (alphas[i] * rho)[:, None] * vel
        u[:, base + 1 + dim] = alphas[i] * rho * E
    return u


def fd_gradient(f, u, scale=1e-6):
    """Central finite-difference gradient of scalar f at state vector u."""
    u = np.asarray(u, dtype=float)
    g = np.empty_like(u)
    for j in range(u.size):
        h = scale * max(1.0, abs(u[j]))
        up = u.copy()
        um = u.copy()
        up[j] += h
        um[j] -= h
        g[j] = (f(up) - f(um)) / (2.0 * h)
    return g


def fd_hessian(f, u, scale=1e-4):
    """Central finite-difference Hessian of scalar f at state vector u."""
    u = np.asarray(u, dtype=float)
    n = u.size
    H = np.empty((n, n))
    hs = scale * np.maximum(1.0, np.abs(u))
    for j in range(n):
        for k in range(j + 1):
            upp = u.copy()
            upm = u.copy()
            ump = u.copy()
            umm = u.copy()
            upp[j] += hs[j]
            upp[k] += hs[k]
            upm[j] += hs[j]
            upm[k] -= hs[k]
            ump[j] -= hs[j]
            ump[k] += hs[k]
            umm[j] -= hs[j]
            umm[k] -= hs[k]
            H[j, k] = (f(upp) - f(upm) - f(ump) + f(umm)) / (4.0 * hs[j] * hs[k])
            H[k, j] = H[j, k]
    return H


def chandrashekar_flux(rho_l, u_l, p_l, rho_r, u_r, p_r, gamma):
    """Entropy-conservative single-phase ideal-gas flux (density, momentum, energy).

    Independent reference for the two-phase flux when alpha jumps vanish
    and p_inf = 0.
    """
    from bnes.numflux import log_mean

    beta_l = rho_l / (2.0 * p_l)
    beta_r = rho_r / (2.0 * p_r)
    rho_hat = log_mean(rho_l, rho_r)
    beta_hat = log_mean(beta_l, beta_r)
    rho_bar = 0.5 * (rho_l + rho_r)
    beta_bar = 0.5 * (beta_l + beta_r)
    u_bar = 0.5 * (u_l + u_r)
    f_rho = rho_hat * u_bar
    f_mom = u_bar * f_rho + rho_bar / (2.0 * beta_bar)
    f_E = (1.0 / (2.0 * (gamma - 1.0) * beta_hat)
           - 0.25 * (u_l * u_l + u_r * u_r)) * f_rho + u_bar * f_mom
    return np.array([f_rho, f_mom, f_E])
