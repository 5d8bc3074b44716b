import numpy as np
import pytest

from bnes.errors import UnsupportedDegree
from bnes.operators import build, interpolate, sbp_check


def test_frozen_low_degree_tables():
    op1 = build(1)
    assert np.allclose(op1.nodes, [-1.0, 1.0], atol=1e-15)
    assert np.allclose(op1.weights, [1.0, 1.0], atol=1e-15)
    assert np.allclose(op1.dmat, [[-0.5, 0.5], [-0.5, 0.5]], atol=1e-15)

    op2 = build(2)
    assert np.allclose(op2.nodes, [-1.0, 0.0, 1.0], atol=1e-15)
    assert np.allclose(op2.weights, [1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0], atol=1e-15)

    op3 = build(3)
    s = 1.0 / np.sqrt(5.0)
    assert np.allclose(op3.nodes, [-1.0, -s, s, 1.0], atol=1e-14)
    assert np.allclose(op3.weights,
                       [1.0 / 6.0, 5.0 / 6.0, 5.0 / 6.0, 1.0 / 6.0], atol=1e-14)
    assert abs(op3.dmat[0, 0] - (-3.0)) < 1e-13


def test_corner_derivative_value():
    # D[0,0] = -p(p+1)/4 for Lobatto collocation
    for p in range(1, 9):
        op = build(p)
        assert abs(op.dmat[0, 0] + p * (p + 1) / 4.0) < 1e-11 * p * p
        assert abs(op.dmat[p, p] - p * (p + 1) / 4.0) < 1e-11 * p * p


def test_sbp_property_all_degrees():
    for p in range(1, 13):
        assert sbp_check(build(p)) < 1e-12


def test_weights_sum_and_symmetry():
    for p in range(1, 13):
        op = build(p)
        assert abs(np.sum(op.weights) - 2.0) < 1e-13
        assert np.allclose(op.nodes, -op.nodes[::-1], atol=0.0)
        assert np.allclose(op.weights, op.weights[::-1], atol=0.0)


def test_derivative_exactness_on_polynomials():
    rng = np.random.default_rng(7)
    for p in range(1, 13):
        op = build(p)
        coef = rng.standard_normal(p + 1)
        vals = np.polynomial.polynomial.polyval(op.nodes, coef)
        dvals = np.polynomial.polynomial.polyval(
            op.nodes, np.polynomial.polynomial.polyder(coef))
        assert np.max(np.abs(op.dmat @ vals - dvals)) < 1e-10


def test_quadrature_exactness():
    # Lobatto with p+1 nodes integrates degree 2p-1 exactly
    for p in range(1, 13):
        op = build(p)
        for deg in range(0, 2 * p):
            exact = (1.0 - (-1.0) ** (deg + 1)) / (deg + 1)
            approx = np.sum(op.weights * op.nodes ** deg)
            assert abs(approx - exact) < 1e-12


def test_column_sums_give_boundary_picks():
    # sum_k w_k D[k,l] = delta_lp - delta_l0
    for p in range(1, 13):
        op = build(p)
        cs = op.weights @ op.dmat
        expect = np.zeros(p + 1)
        expect[0] = -1.0
        expect[-1] = 1.0
        assert np.max(np.abs(cs - expect)) < 1e-12


def test_interpolation_reproduces_polynomials():
    rng = np.random.default_rng(11)
    pts = np.linspace(-1.0, 1.0, 37)
    for p in (1, 3, 6):
        op = build(p)
        coef = rng.standard_normal(p + 1)
        vals = np.polynomial.polynomial.polyval(op.nodes, coef)
        want = np.polynomial.polynomial.polyval(pts, coef)
        got = interpolate(op, vals, pts)
        assert np.max(np.abs(got - want)) < 1e-11
        # exact one-hot at the nodes themselves
        at_nodes = interpolate(op, vals, op.nodes)
        assert np.max(np.abs(at_nodes - vals)) < 1e-13


def test_interpolate_vector_values():
    op = build(3)
    vals = np.stack([op.nodes ** 2, op.nodes ** 3], axis=-1)
    got = interpolate(op, vals, np.array([0.25]))
    assert got.shape == (1, 2)
    assert abs(got[0, 0] - 0.0625) < 1e-13
    assert abs(got[0, 1] - 0.015625) < 1e-13


def test_invalid_degrees_rejected():
    for bad in (0, -1, 13, 2.5, "3"):
        with pytest.raises(UnsupportedDegree):
            build(bad)


def test_operator_arrays_frozen():
    op = build(4)
    with pytest.raises(ValueError):
        op.dmat[0, 0] = 0.0
