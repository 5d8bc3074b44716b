"""Catalog fidelity: pinned states, mesh collocation, smoothing, references."""

import numpy as np
import pytest

from bnes.cases import (
    DEFAULT_INTERFACE_WIDTH,
    build_case,
    case_names,
    describe,
    exact_solution,
    initial_field,
    override_riemann,
    reference_solution,
    smooth_interface,
)
from bnes.errors import NotApplicable, UnknownCase
from bnes.model import phase_space_violation, to_primitive
from bnes.operators import build


ALL_NAMES = ("advect1d", "advect2d", "ec1d", "ec2d", "rp1", "rp2", "rp3",
             "rp4", "rp5", "shock_bubble")


def primitives_1d(u, eos):
    p1, p2 = to_primitive(np.asarray(u), eos)
    return (float(p1.alpha), float(p1.rho), float(p1.vel[..., 0]),
            float(p1.p), float(p2.rho), float(p2.vel[..., 0]), float(p2.p))


def test_catalog_names():
    assert case_names() == tuple(sorted(ALL_NAMES))
    with pytest.raises(UnknownCase):
        build_case("sod")


def test_rp1_pinned_states():
    case = build_case("rp1")
    assert case.x0 == 0.0
    assert case.t_final == 0.25
    assert (case.eos[0].gamma, case.eos[1].gamma) == (3.0, 1.4)
    assert (case.eos[0].p_inf, case.eos[1].p_inf) == (0.1, 0.0)
    left = primitives_1d(case.ic(np.array(-0.25)), case.eos)
    right = primitives_1d(case.ic(np.array(0.25)), case.eos)
    assert left == pytest.approx((0.1, 1.0, 1.0, 1.0, 1.5, 1.0, 1.0))
    assert right == pytest.approx((0.9, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0))
    assert case.bcs.axis(0) == ("transmissive", "transmissive")
    assert case.eps_nu == 0.0
    # the end states double as exterior data for the boundary interfaces
    lo, hi = case.bcs.axis_states(0)
    assert np.allclose(lo, case.ic(np.array(-0.25)))
    assert np.allclose(hi, case.ic(np.array(0.25)))


def test_override_riemann_refreshes_exterior_data():
    case = override_riemann("rp1", left={"alpha1": 0.3})
    lo, hi = case.bcs.axis_states(0)
    assert lo[0] == pytest.approx(0.3)
    assert np.allclose(hi, build_case("rp1").bcs.axis_states(0)[1])


def test_ec1d_pinned_states():
    case = build_case("ec1d")
    assert case.t_final == 0.15
    assert (case.eos[0].gamma, case.eos[1].gamma) == (1.4, 1.4)
    assert (case.eos[0].p_inf, case.eos[1].p_inf) == (0.1, 0.0)
    right = primitives_1d(case.ic(np.array(0.25)), case.eos)
    assert right == pytest.approx((0.5, 1.125, 0.0, 1.1, 1.125, 0.0, 1.1))
    assert case.bcs.axis(0) == ("periodic", "periodic")


def test_rp4_distinct_phase_velocities():
    case = build_case("rp4")
    left = primitives_1d(case.ic(np.array(0.1)), case.eos)
    assert left[2] == pytest.approx(-19.59741, abs=0.0)
    assert left[5] == pytest.approx(-19.59716, abs=0.0)
    assert case.bounds == ((0.0, 1.0),)
    assert case.x0 == 0.3
    assert case.t_final == 0.007
    assert case.eos[1].p_inf == 100.0


def test_advect1d_point_values():
    case = build_case("advect1d")
    prims = primitives_1d(case.ic(np.array(0.0)), case.eos)
    assert prims == pytest.approx((0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0))
    at_eighth = primitives_1d(case.ic(np.array(0.125)), case.eos)
    assert at_eighth[0] == pytest.approx(0.75)
    assert at_eighth[1] == pytest.approx(1.0 + 0.5 * np.sin(0.25 * np.pi))
    assert case.eos[0].p_inf == 10.0
    assert case.t_final == 5.0
    assert case.bounds == ((0.0, 1.0),)


def test_advect2d_point_values():
    case = build_case("advect2d")
    u = case.ic(np.array(0.25), np.array(0.375))
    p1, p2 = to_primitive(u, case.eos)
    assert float(p1.alpha) == pytest.approx(0.75)
    assert float(p1.rho) == pytest.approx(1.0 - 0.5 * np.sin(0.25 * np.pi))
    assert p1.vel == pytest.approx(np.array([1.0, 1.0]))
    assert float(p2.p) == pytest.approx(1.0)
    assert case.t_final == 5.0


def test_shock_bubble_regions():
    case = build_case("shock_bubble")
    eos = case.eos
    assert (eos[0].gamma, eos[0].c_v) == (1.648, 6.06)
    assert (eos[1].gamma, eos[1].c_v) == (1.4, 1.786)

    def prims_at(x, y):
        u = case.ic(np.array(x), np.array(y))
        return to_primitive(u, eos)

    helium, air = prims_at(3.5, 0.89)
    assert float(helium.alpha) == pytest.approx(0.95)
    assert float(helium.rho) == pytest.approx(0.1819)
    assert float(air.p) == pytest.approx(0.7143)
    assert helium.vel == pytest.approx(np.zeros(2))

    _, quiescent = prims_at(1.0, 0.5)
    assert float(quiescent.alpha) == pytest.approx(0.95)
    assert float(quiescent.rho) == pytest.approx(1.0)
    assert float(quiescent.p) == pytest.approx(0.7143)

    _, compressed = prims_at(5.0, 0.9)
    assert float(compressed.rho) == pytest.approx(1.3764)
    assert float(compressed.p) == pytest.approx(1.1213)
    assert compressed.vel == pytest.approx(np.array([-0.3336, 0.0]))
    assert case.bounds == ((0.0, 6.5), (0.0, 1.78))
    assert case.bcs.axis(0) == ("transmissive", "transmissive")
    assert case.bcs.axis(1) == ("periodic", "periodic")
    lo, hi = case.bcs.axis_states(0)
    assert np.allclose(lo, case.ic(0.0, 0.89))
    assert np.allclose(hi, case.ic(6.5, 0.89))
    assert case.bcs.axis_states(1) == (None, None)


@pytest.mark.parametrize("name", ALL_NAMES)
def test_initial_conditions_valid_on_fine_mesh(name):
    case = build_case(name)
    op = build(3)
    mesh = case.mesh(512 if case.dimension == 1 else (64, 64))
    field = initial_field(case, mesh, op)
    assert phase_space_violation(field.u, case.eos) is None
    assert field.t == 0.0


def test_smoothed_bubble_valid_on_fine_mesh():
    case = smooth_interface(build_case("shock_bubble"))
    mesh = case.mesh((64, 64))
    field = initial_field(case, mesh, build(3))
    assert phase_space_violation(field.u, case.eos) is None


def test_jump_lands_on_element_interface():
    case = build_case("ec1d")
    mesh = case.mesh(100)
    field = initial_field(case, mesh, build(3))
    u_left = case.ic(np.array(-0.25))
    u_right = case.ic(np.array(0.25))
    assert np.allclose(field.u[49], u_left, rtol=0.0, atol=1e-15)
    assert np.allclose(field.u[50], u_right, rtol=0.0, atol=1e-15)


def test_initial_field_rejects_dimension_mismatch():
    case = build_case("advect1d")
    mesh_2d = build_case("advect2d").mesh((8, 8))
    with pytest.raises(ValueError):
        initial_field(case, mesh_2d, build(2))


def test_smooth_interface_profile():
    sharp = build_case("shock_bubble")
    case = smooth_interface(sharp, DEFAULT_INTERFACE_WIDTH)
    phi = 2.0 * np.pi / 3.0
    bx = 3.5 + 0.5 * np.cos(phi)
    by = 0.89 + 0.5 * np.sin(phi)
    u = case.ic(np.array(bx), np.array(by))
    assert float(u[..., 0]) == pytest.approx(0.5, abs=1e-12)

    radii = np.linspace(0.3, 0.7, 9)
    xs = 3.5 - radii
    ys = np.full_like(xs, 0.89)
    alphas = case.ic(xs, ys)[..., 0]
    assert np.all(np.diff(alphas) < 0.0)

    tight = smooth_interface(sharp, 1e-6)
    inner = float(tight.ic(np.array(3.5), np.array(0.89 - 0.45))[..., 0])
    outer = float(tight.ic(np.array(3.5), np.array(0.89 - 0.55))[..., 0])
    assert inner == pytest.approx(0.95, abs=1e-12)
    assert outer == pytest.approx(0.05, abs=1e-12)

    with pytest.raises(NotApplicable):
        smooth_interface(build_case("rp1"))
    with pytest.raises(ValueError):
        smooth_interface(sharp, 0.0)


def test_table_round_trip_strings():
    rp4 = describe("rp4")
    assert ("rp4 1d x0=0.3 t_final=0.007 gamma=(1.4, 3.0) "
            "p_inf=(0.0, 100.0)") in rp4
    assert "u1=-19.59741" in rp4
    assert "u2=-19.59716" in rp4
    assert "p1=0.01" in rp4

    rp2 = describe("rp2")
    for token in ("rho2=1900.0", "rho2=1950.0", "p2=1000.0",
                  "gamma=(1.35, 3.0)", "p_inf=(0.0, 3400.0)"):
        assert token in rp2

    rp3 = describe("rp3")
    assert "rho1=0.99988" in rp3
    assert "u1=-1.99931" in rp3

    rp5 = describe("rp5")
    for token in ("alpha1=0.999", "alpha1=0.001", "u1=1.79057",
                  "rho2=2.67183", "u2=1.78888", "t_final=0.05"):
        assert token in rp5

    sb = describe("shock_bubble")
    for token in ("rho2=1.3764", "u=-0.3336", "p=1.1213", "rho1=0.1819",
                  "p=0.7143", "gamma=(1.648, 1.4)", "c_v=(6.06, 1.786)",
                  "center=(3.5, 0.89)", "diameter=1.0", "x0=4.0"):
        assert token in sb

    ec = describe("ec1d")
    assert "rho1=1.125" in ec and "p1=1.1" in ec


def test_exact_solution_translates_and_wraps():
    case = build_case("advect1d")
    xs = np.linspace(0.0, 1.0, 17)
    shifted = exact_solution(case, 0.3)(xs)
    assert np.allclose(shifted, case.ic(xs - 0.3), rtol=0.0, atol=0.0)
    full_laps = exact_solution(case, 5.0)(xs)
    assert np.allclose(full_laps, case.ic(xs), rtol=0.0, atol=1e-13)

    case2 = build_case("advect2d")
    grid = np.linspace(0.0, 1.0, 5)
    X, Y = np.meshgrid(grid, grid, indexing="ij")
    shifted2 = exact_solution(case2, 0.25)(X, Y)
    assert np.allclose(shifted2, case2.ic(X - 0.25, Y - 0.25))

    with pytest.raises(NotApplicable):
        exact_solution(build_case("rp1"), 0.1)


def test_reference_solution_advection_accuracy():
    case = build_case("advect1d")
    op = build(1)
    errors = {}
    for cells in (32, 64):
        ref = reference_solution(case, cells)
        mesh = case.mesh(cells)
        exact = exact_solution(case, case.t_final)(mesh.node_coords(op))
        rho_err = 0.5 * ((ref.u[..., 1] / ref.u[..., 0]
                          - exact[..., 1] / exact[..., 0])
                         + (ref.u[..., 4] / (1.0 - ref.u[..., 0])
                            - exact[..., 4] / (1.0 - exact[..., 0])))
        errors[cells] = float(np.mean(np.abs(rho_err)))
    assert errors[64] < errors[32]
    assert errors[64] < 0.05
    assert ref.t == pytest.approx(case.t_final)

    with pytest.raises(NotApplicable):
        reference_solution(build_case("advect2d"), 64)


def test_run_config_helper_carries_case_defaults():
    case = build_case("rp2")
    cfg = case.run_config(3)
    assert cfg.p == 3
    assert cfg.eos == case.eos
    assert cfg.chi == case.chi
    assert cfg.eps_nu == 0.5
    assert cfg.t_final == 0.15
    quiet = case.run_config(2, eps_nu=0.0, t_final=0.01)
    assert quiet.eps_nu == 0.0
    assert quiet.t_final == 0.01
