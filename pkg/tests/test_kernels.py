"""Residual kernel backends: cross-check numpy vs numba and the wiring
of both against the public two-point flux layer."""

import numpy as np
import pytest

from bnes import kernels
from bnes.errors import ConfigError
from bnes.kernels import numba_backend, numpy_backend
from bnes.numflux import TwoPointContext, interface_fluxes, volume_flux
from bnes.operators import build
from bnes.thermo import EosParams

from helpers import EOS_PAIRS, random_states

EOS = EOS_PAIRS[1]


def _field_1d(rng, ncell, pp1, eos):
    u = random_states(rng, ncell * pp1, eos, dim=1)
    return u.reshape(ncell, pp1, 7)


def _field_2d(rng, ncx, ncy, pp1, eos):
    u = random_states(rng, ncx * ncy * pp1 * pp1, eos, dim=2)
    return u.reshape(ncx, ncy, pp1, pp1, 9)


def _periodic(n):
    left = np.arange(n, dtype=np.int64)
    return left, (left + 1) % n


def _transmissive(n):
    return np.arange(n - 1, dtype=np.int64), np.arange(1, n, dtype=np.int64)


def _rel(a, b):
    return np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(a)))


def test_numpy_backend_matches_public_ops_1d():
    rng = np.random.default_rng(11)
    p = 2
    op = build(p)
    ncell = 4
    U = _field_1d(rng, ncell, p + 1, EOS)
    ifL, ifR = _periodic(ncell)
    beta = rng.uniform(0.0, 2.0, ncell)
    chi, eps_nu = 0.5, 0.3
    wD = op.weights[:, None] * op.dmat

    got = numpy_backend.residual_1d(U, wD, EOS, chi, eps_nu, beta, ifL, ifR)

    n = np.array([1.0])
    want = np.zeros_like(U)
    for j in range(ncell):
        for k in range(p + 1):
            for l in range(p + 1):
                ctx = TwoPointContext(left=U[j, k], right=U[j, l], n=n,
                                      eos=EOS, chi=chi)
                want[j, k] += wD[k, l] * volume_flux(ctx)
    for m in range(ncell):
        ctx = TwoPointContext(left=U[ifL[m], p], right=U[ifR[m], 0], n=n,
                              eos=EOS, chi=chi, eps_nu=eps_nu,
                              beta_s=float(beta[m]))
        pair = interface_fluxes(ctx)
        want[ifL[m], p] += pair.d_minus
        want[ifR[m], 0] += pair.d_plus
    assert _rel(got, want) < 1e-13


@pytest.mark.parametrize("eos", EOS_PAIRS[:3])
@pytest.mark.parametrize("bc", ["periodic", "transmissive"])
def test_backends_match_1d(eos, bc):
    rng = np.random.default_rng(5)
    p = 3
    op = build(p)
    ncell = 6
    U = _field_1d(rng, ncell, p + 1, eos)
    ifL, ifR = _periodic(ncell) if bc == "periodic" else _transmissive(ncell)
    beta = rng.uniform(0.0, 2.0, ifL.shape[0])
    wD = op.weights[:, None] * op.dmat
    args = (U, wD, eos, 0.5, 0.4, beta, ifL, ifR)
    a = numpy_backend.residual_1d(*args)
    b = numba_backend.residual_1d(*args)
    assert _rel(a, b) < 1e-12


def test_backends_match_2d():
    rng = np.random.default_rng(7)
    p = 2
    op = build(p)
    ncx, ncy = 3, 2
    U = _field_2d(rng, ncx, ncy, p + 1, EOS)
    ixL, ixR = _periodic(ncx)
    iyL, iyR = _transmissive(ncy)
    beta_x = rng.uniform(0.0, 2.0, (ixL.shape[0], ncy, p + 1))
    beta_y = rng.uniform(0.0, 2.0, (ncx, iyL.shape[0], p + 1))
    hx, hy = 0.25, 0.4
    sx = op.weights * hy / 2.0
    sy = op.weights * hx / 2.0
    wD = op.weights[:, None] * op.dmat
    args = (U, wD, EOS, 0.0, 0.2,
            sx, sy, beta_x, ixL, ixR, beta_y, iyL, iyR)
    a = numpy_backend.residual_2d(*args)
    b = numba_backend.residual_2d(*args)
    assert _rel(a, b) < 1e-12


def _embed_x(u1):
    """1D states placed on a 2D layout with zero y-velocity."""
    out = np.zeros(u1.shape[:-1] + (9,))
    out[..., 0] = u1[..., 0]
    out[..., [1, 2, 4, 5, 6, 8]] = u1[..., [1, 2, 3, 4, 5, 6]]
    return out


def test_2d_reduces_to_1d_along_x():
    rng = np.random.default_rng(3)
    p = 2
    op = build(p)
    ncell, ncy = 4, 3
    hx, hy = 0.5, 0.7
    U1 = _field_1d(rng, ncell, p + 1, EOS)
    ifL, ifR = _periodic(ncell)
    beta = rng.uniform(0.0, 2.0, ncell)
    wD = op.weights[:, None] * op.dmat
    R1 = numpy_backend.residual_1d(U1, wD, EOS, 0.5, 0.3, beta, ifL, ifR)

    # replicate along y, transmissive in y so no y interfaces exist
    U2 = np.zeros((ncell, ncy, p + 1, p + 1, 9))
    U2[...] = _embed_x(U1)[:, None, :, None, :]
    beta_x = np.broadcast_to(beta[:, None, None], (ncell, ncy, p + 1)).copy()
    beta_y = np.zeros((ncell, 0, p + 1))
    iy = np.zeros(0, dtype=np.int64)
    sx = op.weights * hy / 2.0
    sy = op.weights * hx / 2.0
    R2 = numpy_backend.residual_2d(U2, wD, EOS, 0.5, 0.3, sx, sy,
                                   beta_x, ifL, ifR, beta_y, iy, iy)

    want = np.zeros_like(R2)
    want[..., [0, 1, 2, 4, 5, 6, 8]] = \
        (R1[:, None, :, None, :] * sx[None, None, None, :, None])[..., [0, 1, 2, 3, 4, 5, 6]]
    assert _rel(R2, want) < 1e-12


def test_2d_reduces_to_1d_along_y():
    rng = np.random.default_rng(4)
    p = 2
    op = build(p)
    ncell, ncx = 4, 2
    hx, hy = 0.6, 0.5
    U1 = _field_1d(rng, ncell, p + 1, EOS)
    ifL, ifR = _transmissive(ncell)
    beta = rng.uniform(0.0, 2.0, ifL.shape[0])
    wD = op.weights[:, None] * op.dmat
    R1 = numpy_backend.residual_1d(U1, wD, EOS, 0.0, 0.1, beta, ifL, ifR)

    # 1D momentum becomes the y-component on the 2D layout
    U2 = np.zeros((ncx, ncell, p + 1, p + 1, 9))
    emb = np.zeros(U1.shape[:-1] + (9,))
    emb[..., 0] = U1[..., 0]
    emb[..., [1, 3, 4, 5, 7, 8]] = U1[..., [1, 2, 3, 4, 5, 6]]
    U2[...] = emb[None, :, None, :, :]
    beta_y = np.broadcast_to(beta[None, :, None], (ncx, ifL.shape[0], p + 1)).copy()
    beta_x = np.zeros((0, ncell, p + 1))
    ix = np.zeros(0, dtype=np.int64)
    sx = op.weights * hy / 2.0
    sy = op.weights * hx / 2.0
    R2 = numpy_backend.residual_2d(U2, wD, EOS, 0.0, 0.1, sx, sy,
                                   beta_x, ix, ix, beta_y, ifL, ifR)

    want = np.zeros_like(R2)
    want[..., [0, 1, 3, 4, 5, 7, 8]] = \
        (R1[None, :, None, :, :] * sy[None, None, :, None, None])[..., [0, 1, 2, 3, 4, 5, 6]]
    assert _rel(R2, want) < 1e-12


def test_numba_result_is_deterministic():
    rng = np.random.default_rng(9)
    p = 3
    op = build(p)
    U = _field_1d(rng, 8, p + 1, EOS)
    ifL, ifR = _periodic(8)
    beta = rng.uniform(0.0, 2.0, 8)
    wD = op.weights[:, None] * op.dmat
    args = (U, wD, EOS, 0.5, 0.25, beta, ifL, ifR)
    a = numba_backend.residual_1d(*args)
    b = numba_backend.residual_1d(*args)
    assert np.array_equal(a, b)


def test_resolve_backend(monkeypatch):
    monkeypatch.setenv("BNES_KERNELS", "numpy")
    assert kernels.resolve_backend() == "numpy"
    monkeypatch.setenv("BNES_KERNELS", "numba")
    assert kernels.resolve_backend() == "numba"
    monkeypatch.setenv("BNES_KERNELS", "auto")
    assert kernels.resolve_backend() in ("numba", "numpy")
    monkeypatch.setenv("BNES_KERNELS", "cupy")
    with pytest.raises(ConfigError):
        kernels.resolve_backend()
    monkeypatch.delenv("BNES_KERNELS")
    assert kernels.resolve_backend("numpy") == "numpy"
    assert kernels.get_backend("numpy").name == "numpy"
    with pytest.raises(ConfigError):
        kernels.resolve_backend("mkl")
