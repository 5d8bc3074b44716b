"""Built-in experiment catalog.

Each case packages an initial condition, EOS pair, closure selector,
dissipation default, final time, domain, and boundary treatment.  Initial
conditions are plain functions of position so they can be collocated on
any mesh.  Discontinuous ones accept an optional decision coordinate (the
cell center) so that jumps land on element interfaces instead of being
split across a boundary node by floating-point rounding.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import CaseError, NotApplicable, UnknownCase
from .model import to_conservative
from .operators import build
from .solver import BoundarySpec, Mesh, RunConfig, SolutionField, integrate
from .thermo import EosParams, PhasePrimitive

STATE_COLUMNS = ("alpha1", "rho1", "u1", "p1", "rho2", "u2", "p2")

# Left/right primitive states (alpha1, rho1, u1, p1, rho2, u2, p2).
RIEMANN_STATES = {
    "ec": ((0.5, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0),
           (0.5, 1.125, 0.0, 1.1, 1.125, 0.0, 1.1)),
    "rp1": ((0.1, 1.0, 1.0, 1.0, 1.5, 1.0, 1.0),
            (0.9, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0)),
    "rp2": ((0.8, 2.0, 0.0, 3.0, 1900.0, 0.0, 10.0),
            (0.1, 1.0, 0.0, 1.0, 1950.0, 0.0, 1000.0)),
    "rp3": ((0.2, 0.99988, -1.99931, 0.4, 0.99988, -1.99931, 0.4),
            (0.5, 0.99988, 1.99931, 0.4, 0.99988, 1.99931, 0.4)),
    "rp4": ((0.3, 1.0, -19.59741, 1000.0, 1.0, -19.59716, 1000.0),
            (0.8, 1.0, -19.59741, 0.01, 1.0, -19.59741, 0.01)),
    "rp5": ((0.999, 1.6, 1.79057, 5.0, 2.0, 1.0, 10.0),
            (0.001, 2.0, 1.0, 10.0, 2.67183, 1.78888, 15.0)),
}

# Per problem (x0, t_final, gamma1, gamma2, p_inf1, p_inf2).
RIEMANN_PARAMS = {
    "ec": (0.0, 0.15, 1.4, 1.4, 0.1, 0.0),
    "rp1": (0.0, 0.25, 3.0, 1.4, 0.1, 0.0),
    "rp2": (0.0, 0.15, 1.35, 3.0, 0.0, 3400.0),
    "rp3": (0.0, 0.15, 1.4, 1.4, 0.0, 0.0),
    "rp4": (0.3, 0.007, 1.4, 3.0, 0.0, 100.0),
    "rp5": (0.0, 0.05, 3.0, 1.4, 0.0, 0.0),
}

# Shock-bubble setup: helium-rich bubble in air, hit by a left-running
# shock initially tangent to the bubble's rightmost point.
SB_HELIUM_RHO = 0.1819
SB_QUIESCENT = {"alpha1": 0.05, "rho2": 1.0, "u": 0.0, "v": 0.0, "p": 0.7143}
SB_COMPRESSED = {"alpha1": 0.05, "rho2": 1.3764, "u": -0.3336, "v": 0.0,
                 "p": 1.1213}
SB_BUBBLE = {"alpha1": 0.95, "rho1": SB_HELIUM_RHO, "u": 0.0, "v": 0.0,
             "p": 0.7143}
SB_CENTER = (3.5, 0.89)
SB_RADIUS = 0.5
SB_SHOCK_X0 = 4.0
SB_EOS = (EosParams(1.648, 0.0, 6.06), EosParams(1.4, 0.0, 1.786))
# One time unit is the bubble diameter over the quiescent sound speed,
# 145 us in the original experiment; 102 us is then t = 0.7034.
SB_T_FINAL = 0.7034

# Four cells of a 1300-wide mesh on [0, 6.5].
DEFAULT_INTERFACE_WIDTH = 0.02

ADVECT_EOS = (EosParams(1.4, 10.0, 2.5), EosParams(1.4, 10.0, 2.5))


def _cv(gamma):
    # Unstated heat capacity: normalize so (gamma - 1) c_v = 1.
    return 1.0 / (gamma - 1.0)


@dataclass(frozen=True)
class CaseSpec:
    """A fully determined experiment setup."""

    name: str
    dimension: int
    bounds: tuple
    ic: object
    eos: tuple
    chi: float
    t_final: float
    bcs: BoundarySpec
    x0: object = None
    eps_nu: float = 0.5

    def mesh(self, cells):
        if np.isscalar(cells):
            cells = (int(cells),) * self.dimension
        return Mesh(cells=tuple(int(c) for c in cells), bounds=self.bounds)

    def run_config(self, p, **overrides):
        base = {"p": p, "eos": self.eos, "chi": self.chi,
                "eps_nu": self.eps_nu, "t_final": self.t_final}
        base.update(overrides)
        return RunConfig(**base)


def _riemann_state(prims, eos, dim):
    a1, r1, u1, p1, r2, u2, p2 = (float(v) for v in prims)
    vel1 = np.zeros(dim)
    vel2 = np.zeros(dim)
    vel1[0] = u1
    vel2[0] = u2
    prim = (PhasePrimitive(alpha=a1, rho=r1, vel=vel1, p=p1),
            PhasePrimitive(alpha=1.0 - a1, rho=r2, vel=vel2, p=p2))
    return to_conservative(prim, eos)


def _jump_ic(x0, u_left, u_right):
    def ic(x, xc=None):
        pos = np.asarray(x if xc is None else xc, dtype=float)
        return np.where((pos < x0)[..., None], u_left, u_right)
    return ic


def _riemann_eos(name):
    _, _, g1, g2, pi1, pi2 = RIEMANN_PARAMS[name]
    return (EosParams(g1, pi1, _cv(g1)), EosParams(g2, pi2, _cv(g2)))


def _riemann_case(name, eps_nu):
    x0, t_final, _, _, _, _ = RIEMANN_PARAMS[name]
    eos = _riemann_eos(name)
    u_l = _riemann_state(RIEMANN_STATES[name][0], eos, 1)
    u_r = _riemann_state(RIEMANN_STATES[name][1], eos, 1)
    # x0 = 0.3 sits in a unit domain; the centered problems straddle 0.
    bounds = ((0.0, 1.0),) if x0 > 0.0 else ((-0.5, 0.5),)
    if name == "ec":
        bcs = BoundarySpec(x=("periodic", "periodic"))
    else:
        # the initial end states double as exterior data so an inflow end
        # stays well posed; no wave reaches a boundary before t_final
        bcs = BoundarySpec(x=("transmissive", "transmissive"),
                           x_states=(u_l, u_r))
    return CaseSpec(
        name="ec1d" if name == "ec" else name, dimension=1, bounds=bounds,
        ic=_jump_ic(x0, u_l, u_r), eos=eos, chi=0.0, t_final=t_final,
        bcs=bcs, x0=x0, eps_nu=eps_nu)


def _ec2d_case():
    eos = _riemann_eos("ec")
    u_l = _riemann_state(RIEMANN_STATES["ec"][0], eos, 2)
    u_r = _riemann_state(RIEMANN_STATES["ec"][1], eos, 2)
    jump = _jump_ic(0.0, u_l, u_r)

    def ic(x, y, xc=None, yc=None):
        del y, yc
        return jump(x, xc=xc)

    return CaseSpec(
        name="ec2d", dimension=2,
        bounds=((-0.5, 0.5), (-0.5, 0.5)), ic=ic, eos=eos, chi=0.0,
        t_final=0.15,
        bcs=BoundarySpec(x=("periodic",) * 2, y=("periodic",) * 2),
        x0=0.0, eps_nu=0.5)


def _advect1d_ic(x, xc=None):
    del xc
    x = np.asarray(x, dtype=float)
    a1 = 0.5 + 0.25 * np.sin(4.0 * np.pi * x)
    rho = 1.0 + 0.5 * np.sin(2.0 * np.pi * x)
    one = np.ones_like(x)
    prim = tuple(
        PhasePrimitive(alpha=a, rho=rho, vel=one[..., None], p=one)
        for a in (a1, 1.0 - a1))
    return to_conservative(prim, ADVECT_EOS)


def _advect2d_ic(x, y, xc=None, yc=None):
    del xc, yc
    s = np.asarray(x, dtype=float) + np.asarray(y, dtype=float)
    a1 = 0.5 + 0.25 * np.sin(4.0 * np.pi * s)
    rho = 1.0 + 0.5 * np.sin(2.0 * np.pi * s)
    one = np.ones_like(s)
    vel = np.stack([one, one], axis=-1)
    prim = tuple(
        PhasePrimitive(alpha=a, rho=rho, vel=vel, p=one)
        for a in (a1, 1.0 - a1))
    return to_conservative(prim, ADVECT_EOS)


def _advect1d_case():
    return CaseSpec(
        name="advect1d", dimension=1, bounds=((0.0, 1.0),),
        ic=_advect1d_ic, eos=ADVECT_EOS, chi=0.0, t_final=5.0,
        bcs=BoundarySpec(), eps_nu=0.5)


def _advect2d_case():
    return CaseSpec(
        name="advect2d", dimension=2, bounds=((0.0, 1.0), (0.0, 1.0)),
        ic=_advect2d_ic, eos=ADVECT_EOS, chi=0.0, t_final=5.0,
        bcs=BoundarySpec(x=("periodic",) * 2, y=("periodic",) * 2),
        eps_nu=0.5)


def _bubble_ic(width):
    """width=None gives the sharp bubble, otherwise a tanh blend."""
    cx, cy = SB_CENTER

    def ic(x, y, xc=None, yc=None):
        px = np.asarray(x if xc is None else xc, dtype=float)
        py = np.asarray(y if yc is None else yc, dtype=float)
        post = px > SB_SHOCK_X0
        if width is None:
            inside = np.hypot(px - cx, py - cy) < SB_RADIUS
            a1 = np.where(inside, SB_BUBBLE["alpha1"], SB_QUIESCENT["alpha1"])
        else:
            r = np.hypot(np.asarray(x, dtype=float) - cx,
                         np.asarray(y, dtype=float) - cy)
            lam = 0.5 * (1.0 - np.tanh((r - SB_RADIUS) / width))
            a1 = SB_QUIESCENT["alpha1"] + lam * (
                SB_BUBBLE["alpha1"] - SB_QUIESCENT["alpha1"])
        rho2 = np.where(post, SB_COMPRESSED["rho2"], SB_QUIESCENT["rho2"])
        u = np.where(post, SB_COMPRESSED["u"], SB_QUIESCENT["u"])
        p = np.where(post, SB_COMPRESSED["p"], SB_QUIESCENT["p"])
        vel = np.stack([u, np.zeros_like(u)], axis=-1)
        rho1 = np.full_like(rho2, SB_HELIUM_RHO)
        prim = (PhasePrimitive(alpha=a1, rho=rho1, vel=vel, p=p),
                PhasePrimitive(alpha=1.0 - a1, rho=rho2, vel=vel, p=p))
        return to_conservative(prim, SB_EOS)

    return ic


def _shock_bubble_case():
    ic = _bubble_ic(None)
    # exterior data from the initial condition at the end midpoints:
    # quiescent gas on the left, the post-shock inflow state on the right
    cy = 0.89
    bcs = BoundarySpec(x=("transmissive",) * 2, y=("periodic",) * 2,
                       x_states=(ic(0.0, cy), ic(6.5, cy)))
    return CaseSpec(
        name="shock_bubble", dimension=2, bounds=((0.0, 6.5), (0.0, 1.78)),
        ic=ic, eos=SB_EOS, chi=0.0, t_final=SB_T_FINAL,
        bcs=bcs, x0=SB_SHOCK_X0, eps_nu=0.1)


_CATALOG = {
    "advect1d": _advect1d_case,
    "advect2d": _advect2d_case,
    "ec1d": lambda: _riemann_case("ec", 0.5),
    "ec2d": _ec2d_case,
    "rp1": lambda: _riemann_case("rp1", 0.0),
    "rp2": lambda: _riemann_case("rp2", 0.5),
    "rp3": lambda: _riemann_case("rp3", 0.5),
    "rp4": lambda: _riemann_case("rp4", 0.5),
    "rp5": lambda: _riemann_case("rp5", 0.1),
}
_CATALOG["shock_bubble"] = _shock_bubble_case


def case_names():
    return tuple(sorted(_CATALOG))


def build_case(name):
    """Return the CaseSpec for a cataloged experiment name."""
    try:
        builder = _CATALOG[name]
    except KeyError:
        known = ", ".join(case_names())
        raise UnknownCase(f"unknown case {name!r}; available: {known}") from None
    return builder()


def override_riemann(name, left=None, right=None):
    """Rebuild a two-state 1D case with edited state-table entries.

    left and right map STATE_COLUMNS names to replacement values.  The
    edited states pass through the usual admissibility validation, so an
    out-of-range edit (say alpha1 = 0) raises InvalidState here, before
    any solver work.
    """
    key = "ec" if name == "ec1d" else name
    if key not in RIEMANN_STATES:
        raise CaseError(
            f"case {name!r} has no left/right state table to override")
    states = []
    for prims, edits in zip(RIEMANN_STATES[key], (left, right)):
        vals = list(prims)
        for col, value in (edits or {}).items():
            if col not in STATE_COLUMNS:
                raise CaseError(
                    f"unknown state column {col!r}; expected one of: "
                    + ", ".join(STATE_COLUMNS))
            vals[STATE_COLUMNS.index(col)] = float(value)
        states.append(tuple(vals))
    base = build_case(name)
    u_l = _riemann_state(states[0], base.eos, 1)
    u_r = _riemann_state(states[1], base.eos, 1)
    bcs = base.bcs
    if bcs.x_states is not None:
        bcs = replace(bcs, x_states=(u_l, u_r))
    return replace(base, ic=_jump_ic(base.x0, u_l, u_r), bcs=bcs)


def smooth_interface(case, width=DEFAULT_INTERFACE_WIDTH):
    """Replace a sharp bubble boundary by a tanh profile of signed distance."""
    if case.name != "shock_bubble":
        raise NotApplicable(
            f"case {case.name!r} has no material interface to smooth")
    if not width > 0.0:
        raise ValueError(f"width must be positive, got {width}")
    return replace(case, ic=_bubble_ic(float(width)))


def initial_field(case, mesh, op):
    """Collocate the case's initial condition on a mesh."""
    if mesh.dim != case.dimension:
        raise ValueError(
            f"case {case.name!r} is {case.dimension}D, mesh is {mesh.dim}D")
    coords = mesh.node_coords(op)
    if mesh.dim == 1:
        lo = mesh.bounds[0][0]
        xc = lo + (np.arange(mesh.cells[0]) + 0.5) * mesh.hx
        xc = np.broadcast_to(xc[:, None], coords.shape)
        u = case.ic(coords, xc=xc)
    else:
        (xlo, _), (ylo, _) = mesh.bounds
        nx, ny = mesh.cells
        shape = coords.shape[:-1]
        xc = xlo + (np.arange(nx) + 0.5) * mesh.hx
        yc = ylo + (np.arange(ny) + 0.5) * mesh.hy
        xc = np.broadcast_to(xc[:, None, None, None], shape)
        yc = np.broadcast_to(yc[None, :, None, None], shape)
        u = case.ic(coords[..., 0], coords[..., 1], xc=xc, yc=yc)
    return SolutionField(np.ascontiguousarray(u), 0.0)


def exact_solution(case, t):
    """Analytic state at time t for the uniform-advection cases."""
    if case.name == "advect1d":
        return lambda x: case.ic(np.asarray(x, dtype=float) - t)
    if case.name == "advect2d":
        return lambda x, y: case.ic(np.asarray(x, dtype=float) - t,
                                    np.asarray(y, dtype=float) - t)
    raise NotApplicable(f"case {case.name!r} has no analytic solution")


def reference_solution(case, cells, degree=1):
    """Fine-grid reference run for self-convergence studies.

    Callers should pass at least 8x the finest resolution they compare
    against; the result is the final-time field on `cells` elements.  The
    low-order default is the cheap choice; raise degree when comparison
    runs would otherwise saturate at the reference's own error.
    """
    if case.dimension != 1:
        raise NotApplicable("reference runs are one dimensional")
    mesh = case.mesh(int(cells))
    op = build(int(degree))
    cfg = RunConfig(p=int(degree), eos=case.eos, chi=case.chi, eps_nu=0.5,
                    t_final=case.t_final)
    final, _ = integrate(initial_field(case, mesh, op), cfg, mesh, case.bcs)
    return final


def describe(name):
    """Render the stored constants of a case for table round-trip checks."""
    case = build_case(name)
    key = "ec" if name in ("ec1d", "ec2d") else name
    lines = [f"{name} {case.dimension}d t_final={case.t_final!r}"]
    if key in RIEMANN_STATES:
        x0, t_final, g1, g2, pi1, pi2 = RIEMANN_PARAMS[key]
        lines[0] = (f"{name} {case.dimension}d x0={x0!r} t_final={t_final!r} "
                    f"gamma=({g1!r}, {g2!r}) p_inf=({pi1!r}, {pi2!r})")
        labels = ("left", "right")
        names = ("alpha1", "rho1", "u1", "p1", "rho2", "u2", "p2")
        for label, prims in zip(labels, RIEMANN_STATES[key]):
            row = " ".join(f"{n}={v!r}" for n, v in zip(names, prims))
            lines.append(f"  {label}: {row}")
    elif name == "shock_bubble":
        g1, g2 = (e.gamma for e in SB_EOS)
        cv1, cv2 = (e.c_v for e in SB_EOS)
        lines[0] = (f"{name} 2d x0={SB_SHOCK_X0!r} t_final={SB_T_FINAL!r} "
                    f"gamma=({g1!r}, {g2!r}) c_v=({cv1!r}, {cv2!r})")
        for label, row in (("quiescent air", SB_QUIESCENT),
                           ("helium bubble", SB_BUBBLE),
                           ("compressed air", SB_COMPRESSED)):
            body = " ".join(f"{k}={v!r}" for k, v in row.items())
            lines.append(f"  {label}: {body}")
        lines.append(f"  bubble: center={SB_CENTER!r} diameter={2 * SB_RADIUS!r}")
    else:
        lines.append("  alpha1 = 1/2 + sin(4 pi s)/4, rho_i = 1 + sin(2 pi s)/2,"
                     " u_i = 1, p_i = 1 with s = x" +
                     (" + y" if case.dimension == 2 else ""))
    return "\n".join(lines)
