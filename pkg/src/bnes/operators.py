"""Gauss-Lobatto collocation operators with the summation-by-parts property.

Nodes are the roots of (1 - s^2) P'_p(s), weights the Gauss-Lobatto
quadrature weights, and D the nodal differentiation matrix of the Lagrange
basis.  These satisfy the SBP relation

    w_k D_kl + w_l D_lk = delta_kp delta_lp - delta_k0 delta_l0

which the discretization relies on for conservation and entropy balance.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import UnsupportedDegree

MAX_DEGREE = 12


@dataclass(frozen=True)
class LobattoOperator:
    p: int
    nodes: np.ndarray      # (p+1,) ascending, nodes[0] = -1, nodes[p] = 1
    weights: np.ndarray    # (p+1,) positive, sum to 2
    dmat: np.ndarray       # dmat[k, l] = l-th Lagrange basis derivative at node k
    bary: np.ndarray       # barycentric weights of the node set


def _legendre(p, s):
    """Value of P_p and P'_p at s (array), by the three-term recurrence."""
    s = np.asarray(s, dtype=float)
    pk_m1 = np.ones_like(s)
    if p == 0:
        return pk_m1, np.zeros_like(s)
    pk = s.copy()
    for n in range(1, p):
        pk_p1 = ((2 * n + 1) * s * pk - n * pk_m1) / (n + 1)
        pk_m1, pk = pk, pk_p1
    denom = s * s - 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        dpk = p * (s * pk - pk_m1) / denom
    at_end = np.abs(denom) < 1e-13
    if np.any(at_end):
        # P'_p(1) = p(p+1)/2 and P'_p(-1) = (-1)^(p-1) p(p+1)/2
        end_val = 0.5 * p * (p + 1) * np.where(s > 0, 1.0, (-1.0) ** (p - 1))
        dpk = np.where(at_end, end_val, dpk)
    return pk, dpk


def _lobatto_nodes(p):
    """Roots of (1 - s^2) P'_p, Newton-refined from Chebyshev guesses.

    Newton uses the identity (1-s^2) P''_p = 2 s P'_p - p(p+1) P_p, which
    collapses the update to s += (1-s^2) P'_p / (p(p+1) P_p).
    """
    k = np.arange(p + 1)
    s = -np.cos(np.pi * k / p)
    if p >= 2:
        for _ in range(100):
            pk, dpk = _legendre(p, s[1:-1])
            step = (1.0 - s[1:-1] ** 2) * dpk / (p * (p + 1) * pk)
            s[1:-1] += step
            if np.max(np.abs(step)) < 1e-15:
                break
    s[0], s[-1] = -1.0, 1.0
    # enforce exact antisymmetry so the operators are bitwise symmetric
    s = 0.5 * (s - s[::-1])
    if p % 2 == 0:
        s[p // 2] = 0.0
    return s


@lru_cache(maxsize=None)
def _build_cached(p):
    s = _lobatto_nodes(p)
    pk, _ = _legendre(p, s)
    w = 2.0 / (p * (p + 1) * pk * pk)

    diff = s[:, None] - s[None, :]
    np.fill_diagonal(diff, 1.0)
    bary = 1.0 / np.prod(diff, axis=1)

    dmat = np.zeros((p + 1, p + 1))
    off = (bary[None, :] / bary[:, None]) / diff
    np.fill_diagonal(off, 0.0)
    dmat[:] = off
    np.fill_diagonal(dmat, -np.sum(off, axis=1))

    for a in (s, w, dmat, bary):
        a.flags.writeable = False
    return LobattoOperator(p=p, nodes=s, weights=w, dmat=dmat, bary=bary)


def build(p):
    """Build (or fetch the cached) operator of degree p, 1 <= p <= MAX_DEGREE."""
    if not isinstance(p, (int, np.integer)) or not 1 <= p <= MAX_DEGREE:
        raise UnsupportedDegree(f"degree must be an integer in 1..{MAX_DEGREE}, got {p}")
    return _build_cached(int(p))


def sbp_check(op):
    """Max violation of the SBP identity over all (k, l)."""
    p = op.p
    q = op.weights[:, None] * op.dmat + (op.weights[:, None] * op.dmat).T
    b = np.zeros((p + 1, p + 1))
    b[0, 0] = -1.0
    b[p, p] = 1.0
    return float(np.max(np.abs(q - b)))


def basis_at(op, s):
    """Lagrange basis values at s: row vector(s) L with L[k] = l_k(s).

    s may be a scalar or an array; the result has shape s.shape + (p+1,).
    Exact (one-hot) at the nodes.
    """
    s = np.asarray(s, dtype=float)
    diff = s[..., None] - op.nodes
    at_node = np.abs(diff) < 1e-14
    safe = np.where(at_node, 1.0, diff)
    terms = op.bary / safe
    vals = terms / np.sum(terms, axis=-1, keepdims=True)
    hit = np.any(at_node, axis=-1)
    if np.any(hit):
        vals = np.where(hit[..., None], at_node.astype(float), vals)
    return vals


def interpolate(op, values, s):
    """Barycentric evaluation of nodal data at s in [-1, 1].

    values has the node axis first: shape (p+1, ...).  Returns shape
    s.shape + values.shape[1:].
    """
    l = basis_at(op, s)
    return np.tensordot(l, np.asarray(values), axes=(-1, 0))
