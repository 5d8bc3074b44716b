"""Configuration-driven batch driver.

Subcommands: `run <config>` marches one case and writes snapshots, a time
series, and a manifest; `convergence <config>` sweeps a degree/mesh study
into convergence.csv; `list-cases` prints the catalog; `check` runs the
operator and flux property self-tests.

Config files are YAML mappings.  Keys: case (required), p, cells, eps_nu,
chi, safety, limiter_eps, t_max, out_dir, cadence, reference, convergence
(degrees/meshes lists), riemann_overrides (left/right state-table edits),
backend.  The BNES_OUTPUT_DIR environment variable overrides out_dir.

Exit codes: 0 success, 2 configuration or case error, 3 positivity or
degeneracy abort (also failed self-tests), 4 I/O error.
"""

import argparse
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .cases import (STATE_COLUMNS, build_case, case_names, describe,
                    initial_field, override_riemann, reference_solution)
from .diagnostics import (DEFAULT_SERIES_COLUMNS, TimeSeries,
                          conserved_totals, convergence_table, entropy_budget,
                          kinetic_totals, total_entropy)
from .errors import (AveragePreconditionViolated, CaseError, ConfigError,
                     DegenerateState, InvalidState, IoError, NonFiniteBound,
                     NotApplicable, PositivityFailure, UnknownCase)
from .model import to_primitive
from .numflux import TwoPointContext, dissipation, entropy_condition_residual
from .operators import MAX_DEGREE, basis_at, build, sbp_check
from .solver import integrate
from .thermo import EosParams, entropy_pair, entropy_variables, internal_energy

OUTPUT_DIR_ENV = "BNES_OUTPUT_DIR"
REFERENCE_CELLS = 800
SNAPSHOT_COLUMNS = ("x", "alpha1", "rho1", "u1", "p1", "rho2", "u2", "p2")
VTK_ARRAYS = ("alpha1", "rho1", "u1", "v1", "p1",
              "rho2", "u2", "v2", "p2", "total_p", "schlieren")


def _fmt(v):
    # shortest decimal that parses back to the same double
    return repr(float(v))


# ---------------------------------------------------------------------------
# configuration


_KNOWN_KEYS = ("case", "p", "cells", "eps_nu", "chi", "safety", "limiter_eps",
               "t_max", "out_dir", "cadence", "reference", "convergence",
               "riemann_overrides", "backend", "version")


@dataclass
class CliConfig:
    """Parsed run configuration; None means "use the case default"."""

    case: str
    p: int = 3
    cells: tuple = None
    eps_nu: float = None
    chi: float = None
    safety: float = None
    limiter_eps: float = None
    t_max: float = None
    out_dir: str = None
    cadence: float = 0.0
    reference: int = 0
    convergence: dict = None
    riemann_overrides: dict = None
    backend: str = None


def _field_error(name, want, got):
    return ConfigError(f"field {name!r}: expected {want}, got {got!r}")


def _as_float(name, v, minimum=None):
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise _field_error(name, "a number", v)
    v = float(v)
    if minimum is not None and not v >= minimum:
        raise _field_error(name, f"a number >= {minimum}", v)
    return v


def _as_int(name, v, minimum):
    if isinstance(v, bool) or not isinstance(v, int):
        raise _field_error(name, "an integer", v)
    if v < minimum:
        raise _field_error(name, f"an integer >= {minimum}", v)
    return v


def _as_cells(v):
    if v is None:
        return None
    if isinstance(v, int) and not isinstance(v, bool):
        return (_as_int("cells", v, 1),)
    if isinstance(v, (list, tuple)) and 1 <= len(v) <= 2:
        return tuple(_as_int("cells", c, 1) for c in v)
    raise _field_error("cells", "an integer or a 1- or 2-entry list", v)


def _as_reference(v):
    if v is None or v is False:
        return 0
    if v is True:
        return REFERENCE_CELLS
    v = _as_int("reference", v, 0)
    if v == 1:
        raise _field_error("reference", "0 (off) or a cell count >= 2", v)
    return v


def _as_overrides(v):
    if v is None:
        return None
    if not isinstance(v, dict) or not set(v) <= {"left", "right"}:
        raise _field_error("riemann_overrides",
                           "a mapping with keys left/right", v)
    for side, edits in v.items():
        if not isinstance(edits, dict):
            raise _field_error(f"riemann_overrides.{side}",
                               "a mapping of state columns", edits)
        for col, value in edits.items():
            if col not in STATE_COLUMNS:
                raise ConfigError(
                    f"field 'riemann_overrides.{side}': unknown state "
                    f"column {col!r}; expected one of: "
                    + ", ".join(STATE_COLUMNS))
            _as_float(f"riemann_overrides.{side}.{col}", value)
    return {side: dict(edits) for side, edits in v.items()}


def _as_convergence(v):
    if v is None:
        return None
    if not isinstance(v, dict) or set(v) != {"degrees", "meshes"}:
        raise _field_error("convergence",
                           "a mapping with keys degrees and meshes", v)
    degrees = v["degrees"]
    meshes = v["meshes"]
    if not isinstance(degrees, list) or not degrees:
        raise _field_error("convergence.degrees",
                           "a nonempty list of degrees", degrees)
    if not isinstance(meshes, list) or len(meshes) < 2:
        raise _field_error("convergence.meshes",
                           "a list of at least two resolutions", meshes)
    return {"degrees": [_as_int("convergence.degrees", d, 1) for d in degrees],
            "meshes": [_as_int("convergence.meshes", m, 1) for m in meshes]}


def parse_config(path):
    """Read and validate a YAML config file into a CliConfig."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise IoError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}" if mark is not None else str(path)
        problem = getattr(exc, "problem", None) or "invalid YAML"
        raise ConfigError(f"{where}: {problem}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config root must be a mapping")
    unknown = sorted(set(data) - set(_KNOWN_KEYS))
    if unknown:
        raise ConfigError(
            "unknown keys: " + ", ".join(repr(k) for k in unknown)
            + "; known keys: " + ", ".join(_KNOWN_KEYS[:-1]))
    if "case" not in data or not isinstance(data["case"], str):
        raise ConfigError("field 'case': a case name string is required")
    p = data.get("p", 3)
    if p is not None:
        p = _as_int("p", p, 1)
        if p > MAX_DEGREE:
            raise _field_error("p", f"an integer <= {MAX_DEGREE}", p)
    backend = data.get("backend")
    if backend is not None and backend not in ("numpy", "numba"):
        raise _field_error("backend", "one of numpy, numba", backend)
    out_dir = data.get("out_dir")
    if out_dir is not None and not isinstance(out_dir, str):
        raise _field_error("out_dir", "a path string", out_dir)
    return CliConfig(
        case=data["case"],
        p=3 if p is None else p,
        cells=_as_cells(data.get("cells")),
        eps_nu=_as_float("eps_nu", data.get("eps_nu"), minimum=0.0),
        chi=_as_float("chi", data.get("chi")),
        safety=_as_float("safety", data.get("safety")),
        limiter_eps=_as_float("limiter_eps", data.get("limiter_eps")),
        t_max=_as_float("t_max", data.get("t_max"), minimum=0.0),
        out_dir=out_dir,
        cadence=_as_float("cadence", data.get("cadence"), minimum=0.0) or 0.0,
        reference=_as_reference(data.get("reference")),
        convergence=_as_convergence(data.get("convergence")),
        riemann_overrides=_as_overrides(data.get("riemann_overrides")),
        backend=backend)


@dataclass
class RunContext:
    """Everything a resolved config determines about one run."""

    cfg: CliConfig
    case: object
    mesh: object
    op: object
    run_cfg: object
    out_dir: Path


def resolve(cfg):
    """Build case, mesh, operator, and RunConfig from a parsed config."""
    try:
        if cfg.riemann_overrides is not None:
            case = override_riemann(cfg.case,
                                    left=cfg.riemann_overrides.get("left"),
                                    right=cfg.riemann_overrides.get("right"))
        else:
            case = build_case(cfg.case)
    except InvalidState as exc:
        raise ConfigError(f"initial state rejected: {exc}") from exc
    if cfg.t_max is not None:
        case = replace(case, t_final=cfg.t_max)
    cells = cfg.cells if cfg.cells is not None else (100,) * case.dimension
    if len(cells) == 1 and case.dimension == 2:
        cells = cells * 2
    if len(cells) != case.dimension:
        raise ConfigError(
            f"field 'cells': case {case.name!r} is {case.dimension}D, "
            f"got {len(cells)} resolutions")
    mesh = case.mesh(cells)
    op = build(cfg.p)
    overrides = {"cadence": cfg.cadence}
    for key in ("eps_nu", "chi", "safety", "limiter_eps", "backend"):
        value = getattr(cfg, key)
        if value is not None:
            overrides[key] = value
    try:
        run_cfg = case.run_config(cfg.p, **overrides)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out = os.environ.get(OUTPUT_DIR_ENV) or cfg.out_dir or f"out/{case.name}"
    return RunContext(cfg=cfg, case=case, mesh=mesh, op=op, run_cfg=run_cfg,
                      out_dir=Path(out))


def resolved_mapping(ctx, command):
    """The manifest payload: a config mapping that reproduces the run."""
    cfg, case, run_cfg = ctx.cfg, ctx.case, ctx.run_cfg
    data = {
        "version": __version__,
        "case": cfg.case,
        "p": run_cfg.p,
        "cells": list(ctx.mesh.cells),
        "eps_nu": run_cfg.eps_nu,
        "chi": run_cfg.chi,
        "safety": run_cfg.safety,
        "limiter_eps": run_cfg.limiter_eps,
        "t_max": case.t_final,
        "cadence": cfg.cadence,
        "reference": cfg.reference,
        "out_dir": str(ctx.out_dir),
        "backend": run_cfg.backend,
    }
    if cfg.riemann_overrides is not None:
        data["riemann_overrides"] = cfg.riemann_overrides
    if command == "convergence":
        data["convergence"] = {
            "degrees": list(cfg.convergence["degrees"]),
            "meshes": list(cfg.convergence["meshes"]),
        }
    return data


# ---------------------------------------------------------------------------
# file writers


def write_table(path, names, columns):
    """CSV with one repr-formatted float column per name."""
    columns = [np.asarray(c, dtype=float) for c in columns]
    if len(columns) != len(names) or len({c.shape for c in columns}) > 1:
        raise ValueError("need one equally sized column per name")
    lines = [",".join(names)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(v) for v in row))
    _write_text(Path(path), "\n".join(lines) + "\n")


def read_table(path):
    """Inverse of write_table: (names, dict of float columns)."""
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise IoError(f"{path}: empty table")
    names = tuple(lines[0].split(","))
    try:
        rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
    except ValueError as exc:
        raise IoError(f"{path}: non-numeric table entry: {exc}") from exc
    if any(len(r) != len(names) for r in rows):
        raise IoError(f"{path}: ragged table")
    data = np.asarray(rows, dtype=float).reshape(len(rows), len(names))
    return names, {name: data[:, j] for j, name in enumerate(names)}


def _write_text(path, text):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _snapshot_columns_1d(field, mesh, op, eos):
    x = mesh.node_coords(op).reshape(-1)
    p1, p2 = to_primitive(field.u, eos)
    flat = [p1.alpha, p1.rho, p1.vel[..., 0], p1.p,
            p2.rho, p2.vel[..., 0], p2.p]
    return [x] + [np.asarray(c).reshape(-1) for c in flat]


def _subcell_basis(op):
    # cell-centered sub-lattice, p+1 sample points per cell per axis
    nsub = op.p + 1
    xi = 2.0 * (np.arange(nsub) + 0.5) / nsub - 1.0
    return basis_at(op, xi)


def _resample_2d(values, basis):
    # (nx, ny, p+1, p+1) nodal -> (nx*nsub, ny*nsub) point samples
    out = np.einsum("rk,sl,xykl->xrys", basis, basis, values, optimize=True)
    nx, nsub, ny = out.shape[0], out.shape[1], out.shape[2]
    return out.reshape(nx * nsub, ny * nsub)


def _schlieren(field, mesh, op, eos):
    """|grad rho| of the mixture density, from the element derivative."""
    p1, p2 = to_primitive(field.u, eos)
    rho = p1.alpha * p1.rho + p2.alpha * p2.rho
    # a flat density differentiates to pure rounding noise; report zero
    # so the normalized exponent stays exp(0) = 1
    if np.ptp(rho) <= 1e-13 * max(1.0, float(np.max(np.abs(rho)))):
        return np.zeros_like(rho)
    dx = (2.0 / mesh.hx) * np.einsum("km,xyml->xykl", op.dmat, rho)
    dy = (2.0 / mesh.hy) * np.einsum("lm,xykm->xykl", op.dmat, rho)
    return np.hypot(dx, dy)


def write_snapshot(field, mesh, op, eos, path, fmt=None):
    """Write nodal state to disk: 1D primitive CSV or 2D legacy VTK."""
    path = Path(path)
    if fmt is None:
        fmt = "vtk" if path.suffix == ".vtk" else "csv"
    if fmt == "csv":
        if mesh.dim != 1:
            raise ValueError("CSV snapshots are 1D only")
        write_table(path, SNAPSHOT_COLUMNS,
                    _snapshot_columns_1d(field, mesh, op, eos))
        return
    if fmt != "vtk":
        raise ValueError(f"unknown snapshot format {fmt!r}")
    if mesh.dim != 2:
        raise ValueError("VTK snapshots are 2D only")
    p1, p2 = to_primitive(field.u, eos)
    nodal = {
        "alpha1": p1.alpha, "rho1": p1.rho, "u1": p1.vel[..., 0],
        "v1": p1.vel[..., 1], "p1": p1.p, "rho2": p2.rho,
        "u2": p2.vel[..., 0], "v2": p2.vel[..., 1], "p2": p2.p,
        "total_p": p1.alpha * p1.p + p2.alpha * p2.p,
        "schlieren": _schlieren(field, mesh, op, eos),
    }
    basis = _subcell_basis(op)
    point = {name: _resample_2d(vals, basis) for name, vals in nodal.items()}
    grad = point["schlieren"]
    gmax = float(np.max(grad))
    point["schlieren"] = np.exp(grad / gmax) if gmax > 0.0 \
        else np.ones_like(grad)
    nsub = op.p + 1
    npx, npy = point["alpha1"].shape
    dx, dy = mesh.hx / nsub, mesh.hy / nsub
    ox = mesh.bounds[0][0] + 0.5 * dx
    oy = mesh.bounds[1][0] + 0.5 * dy
    lines = [
        "# vtk DataFile Version 3.0",
        f"bnes snapshot t={_fmt(field.t)}",
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {npx} {npy} 1",
        f"ORIGIN {_fmt(ox)} {_fmt(oy)} 0.0",
        f"SPACING {_fmt(dx)} {_fmt(dy)} 1.0",
        f"POINT_DATA {npx * npy}",
    ]
    for name in VTK_ARRAYS:
        vals = point[name]
        lines.append(f"SCALARS {name} double 1")
        lines.append("LOOKUP_TABLE default")
        # x varies fastest in legacy structured-points ordering
        lines.extend(" ".join(_fmt(v) for v in vals[:, j])
                     for j in range(npy))
    _write_text(path, "\n".join(lines) + "\n")


def _series_values(field, initial, eos, op, mesh):
    totals = conserved_totals(field, op, mesh)
    kin = kinetic_totals(field, op, mesh)
    return {
        "total_entropy": total_entropy(field, eos, op, mesh),
        "entropy_budget": entropy_budget(field, initial, eos, op, mesh),
        "mass1": totals[0, 0],
        "mass2": totals[1, 0],
        "kinetic1": kin[0],
        "kinetic2": kin[1],
    }


def write_timeseries(path, series):
    rows = series.rows()
    names = ("time",) + series.columns
    write_table(path, names, list(zip(*rows)) if rows
                else [[] for _ in names])


def write_manifest(path, mapping):
    _write_text(Path(path), yaml.safe_dump(mapping, sort_keys=True,
                                           default_flow_style=False))


# ---------------------------------------------------------------------------
# subcommands


def cmd_run(args):
    ctx = resolve(parse_config(args.config))
    case, mesh, op, run_cfg = ctx.case, ctx.mesh, ctx.op, ctx.run_cfg
    eos = run_cfg.eos
    if ctx.cfg.reference and case.dimension != 1:
        raise ConfigError("field 'reference': reference runs are 1D only")
    try:
        field0 = initial_field(case, mesh, op)
    except InvalidState as exc:
        raise ConfigError(f"initial state rejected: {exc}") from exc
    out = ctx.out_dir
    write_manifest(out / "manifest.yaml", resolved_mapping(ctx, "run"))
    ext = ".csv" if mesh.dim == 1 else ".vtk"
    write_snapshot(field0, mesh, op, eos, out / f"snap_0000{ext}")

    series = TimeSeries(DEFAULT_SERIES_COLUMNS)
    series.append(0.0, _series_values(field0, field0, eos, op, mesh))
    cadence = run_cfg.cadence
    tick = 1e-12 * max(1.0, case.t_final)
    state = {"snap": 1, "due": cadence if cadence > 0.0 else np.inf}

    def on_step(f):
        series.append(f.t, _series_values(f, field0, eos, op, mesh))
        while f.t >= state["due"] - tick:
            write_snapshot(f, mesh, op, eos,
                           out / f"snap_{state['snap']:04d}{ext}")
            state["snap"] += 1
            state["due"] += cadence

    final, steps = integrate(field0, run_cfg, mesh, case.bcs, on_step=on_step)
    write_snapshot(final, mesh, op, eos, out / f"final{ext}")
    write_timeseries(out / "timeseries.csv", series)
    if ctx.cfg.reference:
        ref = reference_solution(case, ctx.cfg.reference)
        # the reference runs first order; write it with matching nodes
        write_snapshot(ref, case.mesh(ctx.cfg.reference), build(1), eos,
                       out / "reference.csv")
    print(f"{case.name}: {len(steps)} steps to t={_fmt(final.t)}, "
          f"{state['snap']} snapshots in {out}")
    return 0


def cmd_convergence(args):
    cfg = parse_config(args.config)
    if cfg.convergence is None:
        raise ConfigError("field 'convergence': a degrees/meshes mapping is "
                          "required by the convergence command")
    ctx = resolve(cfg)
    rows = convergence_table(ctx.case, cfg.convergence["degrees"],
                             cfg.convergence["meshes"],
                             t_final=cfg.t_max)
    out = ctx.out_dir
    write_manifest(out / "manifest.yaml", resolved_mapping(ctx, "convergence"))
    lines = ["p,h,l1,order1,l2,order2,linf,orderinf"]
    for r in rows:
        opt = ["" if o is None else _fmt(o)
               for o in (r.order1, r.order2, r.orderinf)]
        lines.append(",".join([
            str(r.p), _fmt(r.h), _fmt(r.l1), opt[0],
            _fmt(r.l2), opt[1], _fmt(r.linf), opt[2]]))
    _write_text(out / "convergence.csv", "\n".join(lines) + "\n")
    print(f"{ctx.case.name}: {len(rows)} refinement rows in {out}")
    return 0


def cmd_list_cases(args):
    del args
    for name in case_names():
        print(describe(name).splitlines()[0])
    return 0


# property self-tests -------------------------------------------------------

_CHECK_EOS = (
    (EosParams(1.4, 0.0, 2.5), EosParams(1.6, 0.2, 1.0)),
    (EosParams(1.35, 0.0, 2.0), EosParams(3.0, 3400.0, 1.2)),
)


def _random_states(rng, n, eos, dim):
    nvar = 1 + 2 * (dim + 2)
    u = np.empty((n, nvar))
    a1 = rng.uniform(0.05, 0.95, size=n)
    u[:, 0] = a1
    for i, alpha in enumerate((a1, 1.0 - a1)):
        rho = rng.uniform(0.5, 3.0, size=n)
        vel = rng.uniform(-2.0, 2.0, size=(n, dim))
        p = rng.uniform(0.5, 5.0, size=n)
        energy = internal_energy(rho, p, eos[i]) \
            + 0.5 * np.sum(vel * vel, axis=-1)
        base = 1 + i * (dim + 2)
        u[:, base] = alpha * rho
        u[:, base + 1:base + 1 + dim] = (alpha * rho)[:, None] * vel
        u[:, base + 1 + dim] = alpha * rho * energy
    return u


def _random_normal(rng, dim):
    if dim == 1:
        return np.array([rng.choice([-1.0, 1.0])])
    angle = rng.uniform(0.0, 2.0 * np.pi)
    return np.array([np.cos(angle), np.sin(angle)])


def _pair_scale(ul, ur, eos, n):
    _, ql = entropy_pair(ul, eos)
    _, qr = entropy_pair(ur, eos)
    qn = np.maximum(np.abs(np.sum(ql * n, axis=-1)),
                    np.abs(np.sum(qr * n, axis=-1)))
    return np.maximum(1.0, qn)


def check_sbp(max_p=8):
    """Worst SBP identity violation over degrees 1..max_p."""
    return max(sbp_check(build(p)) for p in range(1, max_p + 1))


def check_entropy_condition(pairs=1000, seed=2718):
    """Worst scaled entropy-condition residual over random state pairs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for eos in _CHECK_EOS:
        for dim in (1, 2):
            ul = _random_states(rng, pairs, eos, dim)
            ur = _random_states(rng, pairs, eos, dim)
            for chi in (0.0, 0.5, 1.0):
                for beta_s in (0.0, 1.0, 5.0):
                    n = _random_normal(rng, dim)
                    ctx = TwoPointContext(left=ul, right=ur, n=n, eos=eos,
                                          chi=chi, beta_s=beta_s)
                    dq = entropy_condition_residual(ctx)
                    scale = _pair_scale(ul, ur, eos, n)
                    worst = max(worst, float(np.max(np.abs(dq) / scale)))
    return worst


def check_dissipation_sign(pairs=1000, seed=2718):
    """Most negative scaled entropy production of the jump penalty."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for eos in _CHECK_EOS:
        for dim in (1, 2):
            ul = _random_states(rng, pairs, eos, dim)
            ur = _random_states(rng, pairs, eos, dim)
            jump_v = entropy_variables(ur, eos) - entropy_variables(ul, eos)
            for eps_nu in (0.1, 0.5):
                n = _random_normal(rng, dim)
                ctx = TwoPointContext(left=ul, right=ur, n=n, eos=eos,
                                      eps_nu=eps_nu)
                produced = np.sum(jump_v * dissipation(ctx), axis=-1)
                scale = _pair_scale(ul, ur, eos, n)
                worst = min(worst, float(np.min(produced / scale)))
    return worst


def cmd_check(args):
    sbp = check_sbp()
    ec = check_entropy_condition(pairs=args.pairs, seed=args.seed)
    sign = check_dissipation_sign(pairs=args.pairs, seed=args.seed)
    results = (
        ("sbp", f"max defect {sbp:.3e} (tol 1e-12)", sbp <= 1e-12),
        ("entropy-condition",
         f"max residual {ec:.3e} (tol 1e-11)", ec <= 1e-11),
        ("dissipation-sign",
         f"min production {sign:.3e} (tol -1e-13)", sign >= -1e-13),
    )
    ok = True
    for name, detail, passed in results:
        print(f"{name}: {detail} {'pass' if passed else 'FAIL'}")
        ok = ok and passed
    return 0 if ok else 3


# ---------------------------------------------------------------------------
# entry point


def _parser():
    parser = argparse.ArgumentParser(
        prog="bnes",
        description="batch driver for the two-phase flow solver")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="march one case and write artifacts")
    run.add_argument("config", help="YAML config file")
    run.set_defaults(func=cmd_run)
    conv = sub.add_parser("convergence", help="run a degree/mesh error study")
    conv.add_argument("config", help="YAML config file")
    conv.set_defaults(func=cmd_convergence)
    lst = sub.add_parser("list-cases", help="print the case catalog")
    lst.set_defaults(func=cmd_list_cases)
    check = sub.add_parser("check", help="run the property self-tests")
    check.add_argument("--pairs", type=int, default=1000)
    check.add_argument("--seed", type=int, default=2718)
    check.set_defaults(func=cmd_check)
    return parser


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"bnes: config error: {exc}", file=sys.stderr)
        return 2
    except (CaseError, UnknownCase, NotApplicable) as exc:
        message = exc.args[0] if exc.args else exc
        print(f"bnes: case error: {message}", file=sys.stderr)
        return 2
    except (PositivityFailure, DegenerateState, NonFiniteBound,
            AveragePreconditionViolated, InvalidState) as exc:
        print(f"bnes: run aborted: {exc}", file=sys.stderr)
        return 3
    except (IoError, OSError) as exc:
        print(f"bnes: io error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
