"""Entropy budget, error norms, convergence studies, conserved totals.

Everything here is read-only over solution fields.  Quadrature weights and
mesh spacings enter every reduction, so all functions take the operator
and the mesh explicitly.
"""

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from ._state import dim_of
from .cases import exact_solution, initial_field
from .errors import MeshMismatch
from .operators import basis_at, build
from .solver import integrate
from .thermo import entropy_pair

DEFAULT_SERIES_COLUMNS = ("total_entropy", "entropy_budget", "mass1", "mass2",
                          "kinetic1", "kinetic2")


@dataclass
class TimeSeries:
    """Scalar diagnostics sampled at strictly increasing times."""

    columns: tuple = DEFAULT_SERIES_COLUMNS
    times: list = dataclass_field(default_factory=list)
    samples: dict = dataclass_field(default_factory=dict)

    def __post_init__(self):
        self.columns = tuple(self.columns)
        if not self.samples:
            self.samples = {name: [] for name in self.columns}

    def append(self, t, values):
        t = float(t)
        if self.times and not t > self.times[-1]:
            raise ValueError(
                f"sample times must increase: {t} after {self.times[-1]}")
        if set(values) != set(self.columns):
            missing = set(self.columns) ^ set(values)
            raise ValueError(f"sample columns do not match: {sorted(missing)}")
        self.times.append(t)
        for name in self.columns:
            self.samples[name].append(float(values[name]))

    def __len__(self):
        return len(self.times)

    def rows(self):
        cols = [self.samples[name] for name in self.columns]
        return [(t, *vals) for t, *vals in zip(self.times, *cols)]


@dataclass(frozen=True)
class ConvergenceRow:
    """One refinement level of a fixed-degree error study."""

    p: int
    h: float
    l1: float
    l2: float
    linf: float
    order1: object = None
    order2: object = None
    orderinf: object = None


def _check_layout(u, op, mesh):
    pp1 = op.p + 1
    if mesh.dim == 1:
        expected = (mesh.cells[0], pp1, 7)
    else:
        expected = (mesh.cells[0], mesh.cells[1], pp1, pp1, 9)
    if u.shape != expected:
        raise MeshMismatch(
            f"field shape {u.shape} does not match mesh/degree {expected}")


def _cell_integrals(values, op, mesh):
    """Per-cell quadrature of a nodal scalar, in reference measure."""
    w = op.weights
    if mesh.dim == 1:
        return 0.5 * (values @ w)
    return 0.25 * np.einsum("xykl,k,l->xy", values, w, w)


def _node_volumes(op, mesh):
    w = op.weights
    if mesh.dim == 1:
        return np.broadcast_to(0.5 * mesh.hx * w, (mesh.cells[0], op.p + 1))
    cell = 0.25 * mesh.hx * mesh.hy * np.multiply.outer(w, w)
    return np.broadcast_to(cell, mesh.cells + cell.shape)


def entropy_budget(field, initial, eos, op, mesh):
    """Drift of the domain-summed cell-averaged entropy since the start."""
    if field.u.shape != initial.u.shape:
        raise MeshMismatch(
            f"fields live on different meshes: {field.u.shape} vs "
            f"{initial.u.shape}")
    _check_layout(field.u, op, mesh)
    eta_now, _ = entropy_pair(field.u, eos)
    eta_start, _ = entropy_pair(initial.u, eos)
    drift = np.sum(_cell_integrals(eta_now, op, mesh)
                   - _cell_integrals(eta_start, op, mesh))
    scale = mesh.hx if mesh.dim == 1 else mesh.hx * mesh.hy
    return float(scale * abs(drift))


def total_entropy(field, eos, op, mesh):
    _check_layout(field.u, op, mesh)
    eta, _ = entropy_pair(field.u, eos)
    scale = mesh.hx if mesh.dim == 1 else mesh.hx * mesh.hy
    return float(scale * np.sum(_cell_integrals(eta, op, mesh)))


def half_density_sum(u):
    """Default error functional: the mean of the two phase densities."""
    u = np.asarray(u)
    d = dim_of(u)
    a1 = u[..., 0]
    return 0.5 * (u[..., 1] / a1 + u[..., d + 3] / (1.0 - a1))


def error_norms(field, exact, op, mesh, functional=half_density_sum):
    """Normalized quadrature (L1, L2, Linf) of the functional error."""
    _check_layout(field.u, op, mesh)
    coords = mesh.node_coords(op)
    if mesh.dim == 1:
        u_exact = exact(coords)
    else:
        u_exact = exact(coords[..., 0], coords[..., 1])
    err = functional(field.u) - functional(np.asarray(u_exact))
    vols = _node_volumes(op, mesh)
    measure = float(np.sum(vols))
    l1 = float(np.sum(vols * np.abs(err)) / measure)
    l2 = float(np.sqrt(np.sum(vols * err * err) / measure))
    linf = float(np.max(np.abs(err)))
    return l1, l2, linf


def conserved_totals(field, op, mesh):
    """Per-phase (mass, momentum components, energy) domain integrals."""
    _check_layout(field.u, op, mesh)
    d = mesh.dim
    vols = _node_volumes(op, mesh)
    totals = np.empty((2, d + 2))
    for i in (0, 1):
        base = 1 + i * (d + 2)
        block = field.u[..., base:base + d + 2]
        totals[i] = np.sum(vols[..., None] * block, axis=tuple(range(2 * d)))
    return totals


def kinetic_totals(field, op, mesh):
    """Per-phase domain integral of alpha rho |v|^2 / 2."""
    _check_layout(field.u, op, mesh)
    d = mesh.dim
    vols = _node_volumes(op, mesh)
    out = np.empty(2)
    for i in (0, 1):
        base = 1 + i * (d + 2)
        arho = field.u[..., base]
        mom = field.u[..., base + 1:base + 1 + d]
        out[i] = np.sum(vols * 0.5 * np.sum(mom * mom, axis=-1) / arho)
    return out


def sample_1d(field, mesh, op, xs):
    """Evaluate a 1D field's polynomials at arbitrary points."""
    _check_layout(field.u, op, mesh)
    xs = np.asarray(xs, dtype=float).ravel()
    lo, _ = mesh.bounds[0]
    h = mesh.hx
    j = np.clip(((xs - lo) / h).astype(int), 0, mesh.cells[0] - 1)
    xi = np.clip(2.0 * (xs - (lo + j * h)) / h - 1.0, -1.0, 1.0)
    lag = basis_at(op, xi)
    return np.einsum("nk,nkv->nv", lag, field.u[j])


def convergence_table(case, degrees, meshes, t_final=None):
    """Error norms and observed orders over a degree/mesh refinement study.

    Orders compare consecutive meshes of the same degree only.  The case
    must have an analytic solution.
    """
    rows = []
    for p in degrees:
        op = build(p)
        prev = None
        for cells in meshes:
            mesh = case.mesh(cells)
            overrides = {} if t_final is None else {"t_final": t_final}
            cfg = case.run_config(p, **overrides)
            exact = exact_solution(case, cfg.t_final)
            final, _ = integrate(initial_field(case, mesh, op), cfg, mesh,
                                 case.bcs)
            l1, l2, linf = error_norms(final, exact, op, mesh)
            h = mesh.hx
            orders = (None, None, None)
            if prev is not None:
                shrink = np.log(prev[0] / h)
                orders = tuple(
                    float(np.log(e_prev / e_now) / shrink)
                    for e_prev, e_now in zip(prev[1], (l1, l2, linf)))
            rows.append(ConvergenceRow(p=p, h=h, l1=l1, l2=l2, linf=linf,
                                       order1=orders[0], order2=orders[1],
                                       orderinf=orders[2]))
            prev = (h, (l1, l2, linf))
    return rows
