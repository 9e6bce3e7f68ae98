import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad, solve_ivp as ode_solve

from conftest import dirac_combs, mixed_problems
from quadspec import CoefficientMeasure, Problem, ValidationError
from quadspec.propagator import (atom_transfer, cell_functions, fundamental_pair, lagrange_residual,
                                 lagrange_sides, piece_transfer, solve_inhomogeneous, solve_ivp,
                                 SolutionFrame, sweep_values, wronskian)
from quadspec.sampling import random_comb

ZERO = Problem(CoefficientMeasure(), CoefficientMeasure(signed=False))
zs = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def test_piece_at_zero_spectral_parameter():
    d = 1.7
    T = piece_transfer(0, 5.0, 2.0, d)
    want = [[np.cosh(d / 2), 2 * np.sinh(d / 2)], [0.5 * np.sinh(d / 2), np.cosh(d / 2)]]
    assert np.allclose(T, want, rtol=1e-15, atol=1e-15)


def test_piece_shear_limit():
    T = piece_transfer(0.125, 2.0, 0.0, 3.0)
    assert np.allclose(T, [[1, 3], [0, 1]], atol=1e-15)


def test_piece_against_ode_integration():
    T = piece_transfer(1, 1, 0, 1)
    assert abs(np.linalg.det(T) - 1) < 1e-13
    for y0 in ([1.0, 0.0], [0.0, 1.0]):
        sol = ode_solve(lambda t, y: [y[1], -0.75 * y[0]], (0, 1), y0, method="DOP853",
                        rtol=1e-13, atol=1e-14)
        assert np.allclose(T @ np.array(y0), sol.y[:, -1], atol=1e-12)


def test_piece_requires_positive_length():
    with pytest.raises(ValidationError):
        piece_transfer(1, 0, 0, 0.0)


def test_series_branch_is_continuous_at_cutoff():
    q = np.array([0.99e-2, 1.01e-2, -0.99e-2, -1.01e-2, 1e-2j])
    C, Sn, Tn = cell_functions(q)
    r = np.sqrt(q.astype(complex))
    assert np.allclose(C, np.cosh(r), rtol=1e-15)
    assert np.allclose(Sn, np.sinh(r) / r, rtol=1e-15)
    assert np.allclose(Tn, (np.cosh(r) - 1) / q, rtol=1e-12)


def test_atom_examples():
    assert np.array_equal(atom_transfer(0, 3, 4), np.eye(2))
    assert np.array_equal(atom_transfer(1, 2, 0), [[1, 0], [-2, 1]])
    assert np.allclose(atom_transfer(1j, 0, 1), [[1, 0], [1, 1]])


@given(zs, st.floats(-3, 3), st.floats(0, 3), st.floats(1e-3, 4))
def test_unimodular(z, w, v, dx):
    d = np.linalg.det(piece_transfer(z, w, v, dx))
    assert abs(d - 1) <= 1e-13 * max(1.0, np.abs(piece_transfer(z, w, v, dx)).max() ** 2)
    assert abs(np.linalg.det(atom_transfer(z, w, v)) - 1) < 1e-15


@given(zs, st.floats(-2, 2), st.floats(0, 2), st.floats(0.01, 2), st.floats(0.01, 2))
def test_composition(z, w, v, d1, d2):
    whole = piece_transfer(z, w, v, d1 + d2)
    parts = piece_transfer(z, w, v, d2) @ piece_transfer(z, w, v, d1)
    assert np.abs(whole - parts).max() <= 1e-13 * max(1.0, np.abs(whole).max())


def test_ivp_zero_coefficients():
    x = np.linspace(-3, 3, 7)
    for z in (0.3, 1 + 2j, -4):
        fr = solve_ivp(ZERO, z, 0.0, 0, z, x)
        assert np.allclose([f.f for f in fr], 2 * z * np.sinh(x / 2), rtol=1e-14, atol=1e-15)


def test_ivp_atom_jump_by_hand():
    p = Problem.dirac([0.0], [2.0], [0.0])
    (fr,) = solve_ivp(p, 1.0, -1.0, np.exp(-0.5), 0.5 * np.exp(-0.5), [0.0])
    assert fr.f == pytest.approx(1, abs=1e-15)
    assert fr.df_left == pytest.approx(0.5, abs=1e-15)
    assert fr.df_right == pytest.approx(-1.5, abs=1e-15)


@given(mixed_problems(), st.floats(-3, 3))
def test_ivp_at_zero_is_decaying_exponential(problem, c):
    x = [-4.0, -1.0, 0.5, 4.0]
    fr = solve_ivp(problem, 0.0, c, 1.0, -0.5, x)
    assert np.allclose([f.f for f in fr], np.exp(-(np.array(x) - c) / 2), rtol=1e-13)


@given(dirac_combs(), st.floats(-3, 3), st.floats(-2, 2))
def test_realness(problem, z, c):
    fr = solve_ivp(problem, z, c, 0.7, -0.2, [-4, -1, 0, 2, 5])
    scale = max(1.0, max(abs(f.f) for f in fr))
    assert all(abs(f.f.imag) <= 1e-15 * scale and abs(f.df_left.imag) <= 1e-15 * scale for f in fr)


def test_leftward_sweep_inverts_rightward(rng):
    for _ in range(20):
        p = random_comb(rng)
        z = complex(*rng.normal(size=2))
        (g,) = solve_ivp(p, z, -4.0, 0.3, 1.1, [4.0])
        (back,) = solve_ivp(p, z, 4.0, g.f, g.df_left, [-4.0])
        assert abs(back.f - 0.3) < 1e-10 * max(1, abs(g.f))
        assert abs(back.df_left - 1.1) < 1e-10 * max(1, abs(g.f))


def test_atom_at_base_acts_rightward_only():
    p = Problem.dirac([0.0], [1.0], [0.0])
    (r,) = solve_ivp(p, 1.0, 0.0, 1.0, 0.0, [1.0])
    (l,) = solve_ivp(p, 1.0, 0.0, 1.0, 0.0, [-1.0])
    (l0,) = solve_ivp(ZERO, 1.0, 0.0, 1.0, 0.0, [-1.0])
    (r0,) = solve_ivp(ZERO, 1.0, 0.0, 1.0, -1.0, [1.0])
    assert l.f == pytest.approx(l0.f, rel=1e-15)
    assert r.f == pytest.approx(r0.f, rel=1e-14)


def test_entire_in_z_by_cauchy_average(rng):
    p = random_comb(rng)
    for z0 in (0.0, 0.8 - 0.3j, -1.5 + 1j):
        t = np.exp(2j * np.pi * np.arange(64) / 64)
        z = z0 + 0.1 * t
        F, _, _ = sweep_values(p, z, -3.5, 1.0, 0.2, [3.5])
        (centre,) = solve_ivp(p, z0, -3.5, 1.0, 0.2, [3.5])
        assert abs(F[0].mean() - centre.f) <= 1e-8 * max(1, abs(centre.f))


def test_inhomogeneous_point_source():
    chi = CoefficientMeasure(((1.0, 1.0),))
    x = [0.0, 0.5, 1.0, 2.0, 3.0]
    fr = solve_inhomogeneous(ZERO, 0.7, chi, 0.0, 0, 0, x)
    want = np.where(np.array(x) > 1, -2 * np.sinh((np.array(x) - 1) / 2), 0)
    assert np.allclose([f.f for f in fr], want, atol=1e-15)
    jump = fr[2].df_right - fr[2].df_left
    assert jump == pytest.approx(-1, abs=1e-15)


def test_inhomogeneous_without_source_matches_ivp(rng):
    p = random_comb(rng)
    x = [-4.0, -0.3, 1.2, 4.0]
    a = solve_inhomogeneous(p, 0.4 + 0.2j, CoefficientMeasure(allow_complex=True), 0.1, 1.0, -2.0, x)
    b = solve_ivp(p, 0.4 + 0.2j, 0.1, 1.0, -2.0, x)
    for u, w in zip(a, b):
        assert abs(u.f - w.f) <= 1e-13 * max(1, abs(w.f))


def test_inhomogeneous_density_against_quadrature():
    chi = CoefficientMeasure((), ((0.0, 1.0, 1.0),))
    (fr,) = solve_inhomogeneous(ZERO, 0.0, chi, 0.0, 0, 0, [2.0])
    theta = lambda s: np.cosh(s / 2)
    phi = lambda s: 2 * np.sinh(s / 2)
    want = quad(lambda s: theta(2) * phi(s) - theta(s) * phi(2), 0, 1, epsabs=1e-15)[0]
    assert abs(fr.f - want) < 1e-12


def test_fundamental_pair_closed_forms():
    L = 1.3
    for z in (0.5, 2j, -1.1 + 0.4j):
        fp = fundamental_pair(ZERO, z, 0.0, 0.0, [0.0, L])
        assert fp.phi[1].f == pytest.approx(2 * z * np.sinh(L / 2), rel=1e-14)
        assert fp.theta[1].f == pytest.approx(np.cosh(L / 2), rel=1e-14)
        assert wronskian(fp.theta[0], fp.phi[0]) == pytest.approx(z, rel=1e-15)
    fp = fundamental_pair(ZERO, 3.0, 0.0, np.pi / 2, [0.0])
    assert fp.phi[0].f == pytest.approx(1) and fp.phi[0].df_left == pytest.approx(0, abs=1e-15)


def test_wronskian_of_hyperbolic_pair_is_one():
    x = np.linspace(-2, 2, 9)
    th = solve_ivp(ZERO, 0.0, 0.0, 1.0, 0.0, x)
    ph = solve_ivp(ZERO, 0.0, 0.0, 0.0, 1.0, x)
    assert np.allclose([wronskian(a, b) for a, b in zip(th, ph)], 1, rtol=1e-14)


def test_wronskian_rejects_mismatched_points():
    with pytest.raises(ValidationError):
        wronskian(SolutionFrame(0.0, 1, 0, 0), SolutionFrame(1.0, 1, 0, 0))


def test_wronskian_constancy_random_combs(rng):
    for _ in range(10):
        p = random_comb(rng)
        z = complex(*rng.normal(size=2))
        pts = np.sort(rng.uniform(-5, 5, 50))
        f = solve_ivp(p, z, 0.0, *rng.normal(size=2), pts)
        g = solve_ivp(p, z, 0.0, *rng.normal(size=2), pts)
        W = np.array([wronskian(a, b) for a, b in zip(f, g)])
        assert np.abs(W - W[0]).max() <= 1e-12 * max(abs(W[0]), np.abs([a.f * b.df_left for a, b in zip(f, g)]).max())


def test_lagrange_equal_parameters_vanish():
    p = Problem.dirac([0.0, 1.0], [1.0, -0.5], [0.3, 0.0])
    f0 = SolutionFrame(0.0, 1.0, 0.2, 0.2)
    g0 = SolutionFrame(0.0, -0.4, 1.0, 1.0)
    lhs, rhs = lagrange_sides(p, 0.7, 0.7, f0, g0, -2, 3)
    assert rhs == 0
    assert abs(lhs) < 1e-13


def test_lagrange_zero_coefficients():
    f0 = SolutionFrame(0.0, 1.0, 0.0, 0.0)
    g0 = SolutionFrame(0.0, 0.0, 1.0, 1.0)
    assert lagrange_residual(ZERO, 0.5 + 1j, -2.0, f0, g0, -1.5, 2.5) <= 1e-12


def test_lagrange_one_atom():
    p = Problem.dirac([0.0], [1.5], [0.0])
    f0 = SolutionFrame(-1.0, 1.0, -0.5, -0.5)
    g0 = SolutionFrame(-1.0, 1.0, 0.5, 0.5)
    assert lagrange_residual(p, 1, 2, f0, g0, -2, 2) <= 1e-10


def test_lagrange_with_densities():
    om = CoefficientMeasure(((0.0, 1.0),), ((-1.0, 0.5, 0.8),))
    up = CoefficientMeasure(((1.0, 0.5),), ((0.2, 1.5, 0.6),), signed=False)
    p = Problem(om, up)
    f0 = SolutionFrame(0.0, 1.0, 0.3, 0.3)
    g0 = SolutionFrame(0.0, 0.5, -1.0, -1.0)
    lhs, rhs = lagrange_sides(p, 0.4 + 0.9j, -0.7 + 0.1j, f0, g0, -2, 2.5)
    assert abs(lhs - rhs) <= 1e-10 * max(1, abs(lhs))


@given(dirac_combs(), zs, zs, st.floats(-4, 4), st.floats(-4, 4))
def test_lagrange_property(problem, z1, z2, x, y):
    f0 = SolutionFrame(0.0, 1.0, 0.5, 0.5)
    g0 = SolutionFrame(0.0, 0.2, -1.0, -1.0)
    lhs, rhs = lagrange_sides(problem, z1, z2, f0, g0, x, y)
    (fx, fy) = solve_ivp(problem, z1, 0.0, 1.0, 0.5, [x, y])
    (gx, gy) = solve_ivp(problem, z2, 0.0, 0.2, -1.0, [x, y])
    scale = max(1.0, *(abs(a.f) + abs(a.df_left) for a in (fx, fy, gx, gy))) ** 2 * max(1, abs(z1), abs(z2)) ** 3
    assert abs(lhs - rhs) <= 1e-10 * scale
