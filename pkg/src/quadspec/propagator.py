"""Exact propagation of solutions of  -f'' + f/4 = z w f + z^2 v f.

On a cell with constant densities (w, v) the equation reads f'' = k2 f with
k2 = 1/4 - z w - z^2 v, and the transfer matrix is

    [[C, S], [k2 S, C]],   C = cosh(k dx),  S = sinh(k dx) / k.

Both entries are even in k, so they are evaluated as entire functions of
q = k2 dx^2 (power series for small |q|) and no square-root branch is ever
chosen.  A point mass (w_p, v_p) at p keeps f continuous and shifts the
derivative by -(z w_p + z^2 v_p) f(p).

Derivatives are left-continuous: the derivative reported at x is f'(x-), and
frames also carry f'(x+).  An initial slope at c is the left limit, so an atom
at c acts when moving right from c and not when moving left.

All sweeps broadcast over arrays of z.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import ValidationError
from .measures import CoefficientMeasure, support_mesh
from .problem import Problem

_SERIES_CUTOFF = 1e-2

# C(q)       = sum q^k / (2k)!
# S(q)/dx    = sum q^k / (2k+1)!
# (C - 1)/q  = sum q^k / (2k+2)!
_C_COEF = [1.0, 1 / 2, 1 / 24, 1 / 720, 1 / 40320, 1 / 3628800, 1 / 479001600]
_S_COEF = [1.0, 1 / 6, 1 / 120, 1 / 5040, 1 / 362880, 1 / 39916800, 1 / 6227020800]
_T_COEF = [1 / 2, 1 / 24, 1 / 720, 1 / 40320, 1 / 3628800, 1 / 479001600, 1 / 87178291200]


def _poly(coef, q):
    out = np.zeros_like(q) + coef[-1]
    for c in coef[-2::-1]:
        out = out * q + c
    return out


def cell_functions(q):
    """Return (C, S/dx, (C-1)/q) as entire functions of q = k2 dx^2."""
    q = np.asarray(q, dtype=complex)
    small = np.abs(q) < _SERIES_CUTOFF
    C = np.empty_like(q)
    Sn = np.empty_like(q)
    Tn = np.empty_like(q)
    if np.any(small):
        qs = q[small]
        C[small] = _poly(_C_COEF, qs)
        Sn[small] = _poly(_S_COEF, qs)
        Tn[small] = _poly(_T_COEF, qs)
    big = ~small
    if np.any(big):
        qb = q[big]
        r = np.sqrt(qb)
        C[big] = np.cosh(r)
        Sn[big] = np.sinh(r) / r
        Tn[big] = (C[big] - 1.0) / qb
    return C, Sn, Tn


def _kappa2(z, w, v):
    return 0.25 - z * w - z * z * v


def piece_transfer(z, w: float, v: float, dx: float) -> np.ndarray:
    """Transfer matrix across a cell of length dx with constant densities w, v.

    Broadcasts over array ``z``; the result has shape ``z.shape + (2, 2)``.
    """
    if not dx > 0:
        raise ValidationError(f"cell length must be positive, got {dx}")
    z = np.asarray(z, dtype=complex)
    k2 = _kappa2(z, w, v)
    C, Sn, _ = cell_functions(k2 * dx * dx)
    S = Sn * dx
    out = np.empty(z.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = C
    out[..., 0, 1] = S
    out[..., 1, 0] = k2 * S
    out[..., 1, 1] = C
    return out


def atom_transfer(z, w_p: float, v_p: float) -> np.ndarray:
    """Jump matrix of a point mass: f'(p+) = f'(p) - (z w_p + z^2 v_p) f(p)."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = 1.0
    out[..., 1, 1] = 1.0
    out[..., 1, 0] = -(z * w_p + z * z * v_p)
    return out


@dataclass(frozen=True)
class SolutionFrame:
    """Value and both one-sided derivatives at x.

    Fields are complex scalars, or arrays when the solver was called with an
    array of spectral parameters.
    """

    x: float
    f: complex
    df_left: complex
    df_right: complex

    def df(self, side: str = "left"):
        return self.df_left if side == "left" else self.df_right


@dataclass(frozen=True)
class FundamentalPair:
    z: complex
    base: float
    angle: float
    theta: list
    phi: list


class _Grid:
    """Mesh restricted to a window, with per-node atom masses and per-cell densities."""

    def __init__(self, problem: Problem, points: Iterable[float], chi: CoefficientMeasure | None = None):
        points = [float(p) for p in points]
        lo, hi = min(points), max(points)
        extra = (chi,) if chi is not None else ()
        mesh = support_mesh(problem.omega, problem.upsilon, points, *extra).points
        x = mesh[(mesh >= lo) & (mesh <= hi)]
        self.x = x
        om, up = problem.omega, problem.upsilon
        self.w_atom = om.atom_masses_at(x)
        self.v_atom = up.atom_masses_at(x)
        self.dx = np.diff(x)
        mids = 0.5 * (x[:-1] + x[1:])
        self.w_cell = np.array([om.density_at(m) for m in mids])
        self.v_cell = np.array([up.density_at(m) for m in mids])
        if chi is not None:
            self.chi_atom = chi.atom_masses_at(x).astype(complex)
            self.chi_cell = np.array([chi.density_at(m) for m in mids], dtype=complex)

    def index(self, x: float) -> int:
        i = int(np.searchsorted(self.x, x))
        if i >= len(self.x) or self.x[i] != x:
            raise KeyError(x)
        return i

    def jump(self, i: int, z):
        return z * self.w_atom[i] + z * z * self.v_atom[i]

    def cell(self, i: int, z):
        k2 = _kappa2(z, self.w_cell[i], self.v_cell[i])
        C, Sn, Tn = cell_functions(k2 * self.dx[i] ** 2)
        dx = self.dx[i]
        return C, Sn * dx, Tn * dx * dx, k2


def _sweep(grid: _Grid, z, c: float, d1, d2):
    """Propagate (f(c), f'(c-)) = (d1, d2) to every grid node.

    Returns arrays F, DL, DR of shape (n_nodes,) + z.shape.
    """
    z = np.asarray(z, dtype=complex)
    n = len(grid.x)
    shape = (n,) + z.shape
    F = np.empty(shape, dtype=complex)
    DL = np.empty(shape, dtype=complex)
    DR = np.empty(shape, dtype=complex)
    i0 = grid.index(c)
    F[i0] = d1
    DL[i0] = d2
    DR[i0] = DL[i0] - grid.jump(i0, z) * F[i0]
    for i in range(i0, n - 1):
        C, S, _, k2 = grid.cell(i, z)
        F[i + 1] = C * F[i] + S * DR[i]
        DL[i + 1] = k2 * S * F[i] + C * DR[i]
        DR[i + 1] = DL[i + 1] - grid.jump(i + 1, z) * F[i + 1]
    for i in range(i0, 0, -1):
        C, S, _, k2 = grid.cell(i - 1, z)
        F[i - 1] = C * F[i] - S * DL[i]
        DR[i - 1] = -k2 * S * F[i] + C * DL[i]
        DL[i - 1] = DR[i - 1] + grid.jump(i - 1, z) * F[i - 1]
    return F, DL, DR


def _frames(grid, F, DL, DR, targets):
    out = []
    for t in targets:
        i = grid.index(float(t))
        f, dl, dr = F[i], DL[i], DR[i]
        if np.ndim(f) == 0:
            f, dl, dr = complex(f), complex(dl), complex(dr)
        out.append(SolutionFrame(float(t), f, dl, dr))
    return out


def sweep_values(problem: Problem, z, c: float, d1, d2, targets: Sequence[float]):
    """Vectorized core: arrays (f, f'(x-), f'(x+)) at targets, shape (len(targets),) + z.shape."""
    targets = [float(t) for t in targets]
    grid = _Grid(problem, targets + [c])
    F, DL, DR = _sweep(grid, z, c, d1, d2)
    idx = [grid.index(t) for t in targets]
    return F[idx], DL[idx], DR[idx]


def solve_ivp(problem: Problem, z, c: float, d1, d2, targets: Sequence[float]) -> list[SolutionFrame]:
    """Solution with f(c) = d1 and f'(c-) = d2, reported at each target."""
    targets = [float(t) for t in targets]
    grid = _Grid(problem, targets + [float(c)])
    F, DL, DR = _sweep(grid, z, float(c), d1, d2)
    return _frames(grid, F, DL, DR, targets)


def solve_inhomogeneous(problem: Problem, z, chi: CoefficientMeasure, c: float, d1, d2,
                        targets: Sequence[float]) -> list[SolutionFrame]:
    """Solve -f'' + f/4 = z w f + z^2 v f + chi with f(c) = d1, f'(c-) = d2.

    Variation of constants with the pair of unit initial data at c
    (theta: (1, 0), phi: (0, 1)), whose Wronskian is 1 for every z:

        f(x) = d1 theta + d2 phi + int_c^x (theta(x) phi(s) - theta(s) phi(x)) dchi(s).
    """
    c = float(c)
    targets = [float(t) for t in targets]
    z = np.asarray(z, dtype=complex)
    grid = _Grid(problem, targets + [c], chi=chi)
    TF, TL, TR = _sweep(grid, z, c, 1.0, 0.0)
    PF, PL, PR = _sweep(grid, z, c, 0.0, 1.0)
    n = len(grid.x)
    i0 = grid.index(c)
    # running oriented integrals int_c^{x_i} theta dchi and int_c^{x_i} phi dchi
    It = np.zeros((n,) + z.shape, dtype=complex)
    Ip = np.zeros((n,) + z.shape, dtype=complex)

    def cell_integral(i, Fv, Rv):
        # int over [x_i, x_{i+1}) of the solution starting from (Fv, Rv) at x_i+
        dens = grid.chi_cell[i]
        if dens == 0:
            return 0.0
        _, S, T, _ = grid.cell(i, z)
        return dens * (S * Fv + T * Rv)

    for i in range(i0, n - 1):
        It[i + 1] = It[i] + grid.chi_atom[i] * TF[i] + cell_integral(i, TF[i], TR[i])
        Ip[i + 1] = Ip[i] + grid.chi_atom[i] * PF[i] + cell_integral(i, PF[i], PR[i])
    for i in range(i0, 0, -1):
        It[i - 1] = It[i] - grid.chi_atom[i - 1] * TF[i - 1] - cell_integral(i - 1, TF[i - 1], TR[i - 1])
        Ip[i - 1] = Ip[i] - grid.chi_atom[i - 1] * PF[i - 1] - cell_integral(i - 1, PF[i - 1], PR[i - 1])

    F = d1 * TF + d2 * PF + TF * Ip - PF * It
    DL = d1 * TL + d2 * PL + TL * Ip - PL * It
    jumps = np.stack([grid.jump(i, z) for i in range(n)]) if n else np.zeros(0)
    chi_j = grid.chi_atom.reshape((n,) + (1,) * z.ndim)
    DR = DL - jumps * F - chi_j
    return _frames(grid, F, DL, DR, targets)


def fundamental_pair(problem: Problem, z, base: float, angle: float,
                     targets: Sequence[float]) -> FundamentalPair:
    """theta, phi with phi(base) = sin a, phi'(base) = z cos a,
    theta(base) = cos a, theta'(base) = -z sin a.  W(theta, phi) = z."""
    targets = [float(t) for t in targets]
    grid = _Grid(problem, targets + [float(base)])
    s, co = np.sin(angle), np.cos(angle)
    z_arr = np.asarray(z, dtype=complex)
    th = _sweep(grid, z_arr, float(base), co + 0 * z_arr, -z_arr * s)
    ph = _sweep(grid, z_arr, float(base), s + 0 * z_arr, z_arr * co)
    return FundamentalPair(z, float(base), float(angle),
                           _frames(grid, *th, targets), _frames(grid, *ph, targets))


def wronskian(a: SolutionFrame, b: SolutionFrame, side: str = "left"):
    """W(a, b) = a.f b' - a' b.f with matching one-sided derivatives."""
    if a.x != b.x:
        raise ValidationError(f"Wronskian needs frames at the same point, got {a.x} and {b.x}")
    return a.f * b.df(side) - a.df(side) * b.f


# ---------------------------------------------------------------------------
# bilinear integrals of two solutions


def _vanloan_block(p, q, dx, weight):
    """int_0^dx E_p(t)^T W E_q(t) dt for the cell propagators E_p, E_q."""
    Ap = np.array([[0.0, 1.0], [p, 0.0]], dtype=complex)
    Aq = np.array([[0.0, 1.0], [q, 0.0]], dtype=complex)
    M = np.zeros((4, 4), dtype=complex)
    M[:2, :2] = -Ap.T
    M[:2, 2:] = weight
    M[2:, 2:] = Aq
    E = scipy.linalg.expm(M * dx)
    Ep = scipy.linalg.expm(Ap * dx)
    return Ep.T @ E[:2, 2:]


_W_VAL = np.array([[1.0, 0.0], [0.0, 0.0]])
_W_DER = np.array([[0.0, 0.0], [0.0, 1.0]])


def pairing_integrals(problem: Problem, z1: complex, z2: complex,
                      f0: SolutionFrame, g0: SolutionFrame, x: float, y: float):
    """Oriented integrals over [x, y) of f g, f' g' and f g dupsilon.

    f solves the equation at z1 with data f0, g at z2 with data g0.  Either
    endpoint may be infinite provided both solutions decay there (pure
    e^{-|s|/2} tails outside the support); the tails are then integrated in
    closed form from the last support point.
    """
    sign = 1.0
    if y < x:
        x, y, sign = y, x, -1.0
    if x == y:
        return 0j, 0j, 0j
    support = problem.support()
    pts = [f0.x, g0.x]
    left_inf, right_inf = np.isneginf(x), np.isposinf(y)
    if support is None:
        support = (min(pts), max(pts))
    xl = min(support[0], *pts) - 1.0 if left_inf else x
    yr = max(support[1], *pts) + 1.0 if right_inf else y
    pts += [xl, yr]
    grid = _Grid(problem, pts)
    z1 = complex(z1)
    z2 = complex(z2)
    Ff, Lf, Rf = _sweep(grid, np.asarray(z1), f0.x, f0.f, f0.df_left)
    Fg, Lg, Rg = _sweep(grid, np.asarray(z2), g0.x, g0.f, g0.df_left)
    i_lo, i_hi = grid.index(xl), grid.index(yr)
    I_val = I_der = I_ups = 0j
    for i in range(i_lo, i_hi):
        u = np.array([Ff[i], Rf[i]])
        w = np.array([Fg[i], Rg[i]])
        p = _kappa2(z1, grid.w_cell[i], grid.v_cell[i])
        q = _kappa2(z2, grid.w_cell[i], grid.v_cell[i])
        Nv = _vanloan_block(p, q, grid.dx[i], _W_VAL)
        Nd = _vanloan_block(p, q, grid.dx[i], _W_DER)
        fg = u @ Nv @ w
        I_val += fg
        I_der += u @ Nd @ w
        I_ups += grid.v_atom[i] * Ff[i] * Fg[i] + grid.v_cell[i] * fg
    if right_inf:
        # e^{-s/2} tails: int f g = f g (X), int f' g' = f g (X) / 4
        prod = Ff[i_hi] * Fg[i_hi]
        I_val += prod
        I_der += 0.25 * prod
    if left_inf:
        prod = Ff[i_lo] * Fg[i_lo]
        I_val += prod
        I_der += 0.25 * prod
    return sign * complex(I_val), sign * complex(I_der), sign * complex(I_ups)


def modified_wronskian(z1, z2, f: SolutionFrame, g: SolutionFrame):
    """V = z1 f g' - f' z2 g for eigen-pairs (f, z1 f), (g, z2 g); left derivatives."""
    return z1 * f.f * g.df_left - f.df_left * z2 * g.f


def lagrange_sides(problem: Problem, z1, z2, f0: SolutionFrame, g0: SolutionFrame, x: float, y: float):
    """Both sides of V(y) - V(x) = (z1 - z2)(int fg/4 + int f'g' + z1 z2 int fg dupsilon)."""
    fx, fy = solve_ivp(problem, z1, f0.x, f0.f, f0.df_left, [x, y])
    gx, gy = solve_ivp(problem, z2, g0.x, g0.f, g0.df_left, [x, y])
    lhs = modified_wronskian(z1, z2, fy, gy) - modified_wronskian(z1, z2, fx, gx)
    I_val, I_der, I_ups = pairing_integrals(problem, z1, z2, f0, g0, x, y)
    rhs = (z1 - z2) * (0.25 * I_val + I_der + z1 * z2 * I_ups)
    return complex(lhs), complex(rhs)


def lagrange_residual(problem: Problem, z1, z2, f0: SolutionFrame, g0: SolutionFrame,
                      x: float, y: float) -> float:
    lhs, rhs = lagrange_sides(problem, z1, z2, f0, g0, x, y)
    return float(abs(lhs - rhs))
