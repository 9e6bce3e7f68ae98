"""Invariant suite run by ``quadspec check`` on a single problem."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounded import eigenvalues_bounded, weyl_m_bounded
from .errors import QuadspecError
from .line import (delta_element, eigenvalues_halfline, parseval_check, residue_mass, residue_radius,
                   singular_M, spectral_measure, weyl_m_halfline)
from .pencil import real_pencil_eigenvalues
from .problem import Bounded, HalfLine, Problem, WholeLine
from .propagator import SolutionFrame, lagrange_sides, piece_transfer, solve_ivp, wronskian


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    tolerance: float


def _result(name, value, tol):
    value = float(value)
    return CheckResult(name, bool(np.isfinite(value) and value <= tol), value, tol)


def _window_points(problem: Problem) -> np.ndarray:
    sup = problem.support() or (0.0, 0.0)
    pts = set(np.linspace(sup[0] - 1.0, sup[1] + 1.0, 7).tolist())
    pts.update(problem.atom_sites().tolist())
    return np.array(sorted(pts))


def _rel(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _spectrum_match(shoot, oracle) -> float:
    shoot, oracle = np.sort(np.asarray(shoot)), np.sort(np.asarray(oracle))
    if len(shoot) != len(oracle):
        return np.inf
    if not len(shoot):
        return 0.0
    return float(np.max(np.abs(shoot - oracle) / np.maximum(1.0, np.abs(oracle))))


def run_checks(problem: Problem, seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    out: list[CheckResult] = []
    pts = _window_points(problem)
    zs = rng.normal(size=4) + 1j * rng.normal(size=4)

    dets = [abs(np.linalg.det(piece_transfer(z, rng.normal(), abs(rng.normal()), 0.7)) - 1) for z in zs]
    out.append(_result("transfer_unimodular", max(dets), 1e-13))

    worst = 0.0
    for z in zs:
        a = solve_ivp(problem, z, pts[0], 1.0, 0.3, pts)
        b = solve_ivp(problem, z, pts[-1], -0.4, 1.1, pts)
        w = np.array([wronskian(p, q) for p, q in zip(a, b)])
        # relative to the terms of f g' - f' g, which can dwarf |W|
        scale = max(abs(p.f * q.df_left) + abs(p.df_left * q.f) for p, q in zip(a, b))
        worst = max(worst, np.max(np.abs(w - w[0])) / scale)
    out.append(_result("wronskian_constancy", worst, 1e-12))

    worst = 0.0
    for z1, z2 in zip(zs[:2], zs[2:]):
        f0 = SolutionFrame(pts[0], 1.0, 0.2, 0.2)
        g0 = SolutionFrame(pts[-1], 0.5, -0.7, -0.7)
        lhs, rhs = lagrange_sides(problem, z1, z2, f0, g0, pts[0], pts[-1])
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
    out.append(_result("lagrange_identity", worst, 1e-10))

    geo = problem.geometry
    upper = rng.normal(size=20) + 1j * np.abs(rng.normal(size=20)) + 0.05j
    try:
        if isinstance(geo, WholeLine):
            M = singular_M(problem, upper)
            Mc = singular_M(problem, upper.conj())
            out.append(_result("M_conjugation", np.max(np.abs(Mc - M.conj()) / np.maximum(1, np.abs(M))), 1e-12))
            if problem.is_dirac_comb:
                sm = spectral_measure(problem)
                lams = [d.lam for d in sm]
                oracle = real_pencil_eigenvalues(problem, WholeLine())
                out.append(_result("oracle_equivalence", _spectrum_match(lams, oracle), 1e-8))
                dev = [_rel(residue_mass(problem, l, residue_radius(lams, k)), d.mass) for k, (l, d) in
                       enumerate(zip(lams, sm))]
                out.append(_result("mass_vs_residue", max(dev, default=0.0), 1e-6))
                dev = [abs(l - 1.0) for l, _ in (parseval_check(problem, delta_element(c), sm)
                                                 for c in problem.atom_sites())]
                out.append(_result("parseval_delta", max(dev, default=0.0), 1e-8))
        elif isinstance(geo, HalfLine):
            m = weyl_m_halfline(problem, upper, geo.c, geo.gamma, geo.side)
            out.append(_result("herglotz", max(0.0, -np.min(m.imag / np.maximum(1, np.abs(m)))), 1e-12))
            m0 = weyl_m_halfline(problem, upper, geo.c, 0.0, geo.side)
            m2 = weyl_m_halfline(problem, upper, geo.c, np.pi / 2, geo.side)
            out.append(_result("m_half_pi_identity", np.max(np.abs(m2 + 1 / m0) / np.abs(m2)), 1e-11))
            if problem.is_dirac_comb:
                ev = [l for l, _ in eigenvalues_halfline(problem) if l != 0.0]
                out.append(_result("oracle_equivalence", _spectrum_match(ev, real_pencil_eigenvalues(problem)), 1e-8))
        elif isinstance(geo, Bounded):
            m = weyl_m_bounded(problem, upper)
            out.append(_result("herglotz", max(0.0, -np.min(m.imag / np.maximum(1, np.abs(m)))), 1e-12))
            m2 = weyl_m_bounded(problem, upper, form="pair")
            out.append(_result("weyl_forms_agree", np.max(np.abs(m - m2) / np.abs(m)), 1e-11))
            if problem.is_dirac_comb:
                ev = [l for l, _ in eigenvalues_bounded(problem) if l != 0.0]
                out.append(_result("oracle_equivalence", _spectrum_match(ev, real_pencil_eigenvalues(problem)), 1e-8))
    except QuadspecError as exc:
        out.append(CheckResult(f"error:{type(exc).__name__}", False, np.nan, 0.0))
    return out
