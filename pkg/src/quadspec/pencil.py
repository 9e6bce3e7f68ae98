"""Finite-matrix oracle for the quadratic pencil I - z Omega - z^2 Upsilon.

For Dirac-comb coefficients every eigenfunction is a combination of the
resolvent kernels K(x_k, .) centred at the atoms x_k, so restricting to that
span loses nothing.  With the nodal basis (b_i(x_k) = delta_ik) the Gram
matrix of the modified H^1 product is the inverse of the kernel matrix
G_ij = K(x_i, x_j) and the coefficient forms are diagonal:

    (G^{-1} - z W - z^2 V) u = 0,   W = diag(omega masses), V = diag(upsilon masses).

Boundary angles strictly between 0 and pi use the natural-boundary kernel and
add a point mass to the omega form at the endpoint (-cot alpha at a, +cot beta
at b, -cot gamma at c for [c, inf), +cot gamma for (-inf, c)).  Angle 0 is a
Dirichlet condition and uses the vanishing kernel.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import SingularParameterError, ValidationError
from .measures import CoefficientMeasure
from .problem import Bounded, Geometry, HalfLine, Problem, WholeLine

_COT_ZERO = 1e-14


def _cot(angle: float) -> float:
    c = np.cos(angle) / np.sin(angle)
    return 0.0 if abs(c) < _COT_ZERO else c


def _check_domain(geometry: Geometry, x):
    x = np.asarray(x, dtype=float)
    if isinstance(geometry, Bounded):
        ok = (x >= geometry.a) & (x <= geometry.b)
    elif isinstance(geometry, HalfLine):
        ok = x >= geometry.c if geometry.side == "+" else x <= geometry.c
    else:
        ok = np.isfinite(x)
    if not np.all(ok):
        raise ValidationError(f"kernel argument outside the domain of {geometry}")


def resolvent_kernel(geometry: Geometry, x, s):
    """Reproducing kernel of the modified H^1 space attached to ``geometry``.

    Dirichlet (angle 0) endpoints give the kernels that vanish there, other
    angles the natural-boundary kernels.  The whole line gives exp(-|x-s|/2).
    Broadcasts over x and s.
    """
    _check_domain(geometry, x)
    _check_domain(geometry, s)
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)
    lo, hi = np.minimum(x, s), np.maximum(x, s)
    if isinstance(geometry, WholeLine):
        return np.exp(-(hi - lo) / 2)
    if isinstance(geometry, HalfLine):
        c = geometry.c
        dirichlet = geometry.gamma == 0.0
        near = np.sinh if dirichlet else np.cosh
        if geometry.side == "+":
            return 2 * np.exp(-(hi - c) / 2) * near((lo - c) / 2)
        return 2 * np.exp(-(c - lo) / 2) * near((c - hi) / 2)
    a, b = geometry.a, geometry.b
    L = b - a
    left = np.sinh if geometry.alpha == 0.0 else np.cosh
    right = np.sinh if geometry.beta == 0.0 else np.cosh
    dirichlet_count = (geometry.alpha == 0.0) + (geometry.beta == 0.0)
    denom = np.cosh(L / 2) if dirichlet_count == 1 else np.sinh(L / 2)
    return 2 * left((lo - a) / 2) * right((b - hi) / 2) / denom


@dataclass(frozen=True)
class PencilMatrices:
    """Galerkin forms of the identity, omega and upsilon on a finite basis."""

    M_I: np.ndarray
    M_Omega: np.ndarray
    M_Upsilon: np.ndarray
    nodes: np.ndarray
    basis: str = "nodal"
    approximate: bool = False

    @property
    def n(self) -> int:
        return len(self.nodes)

    def evaluate(self, z) -> np.ndarray:
        return self.M_I - z * self.M_Omega - z * z * self.M_Upsilon


def _quadrature_atoms(mu: CoefficientMeasure, per_piece: int) -> CoefficientMeasure:
    """Replace each density piece by midpoint atoms (approximation only)."""
    atoms = dict(mu.atoms)
    for lo, hi, d in mu.pieces:
        h = (hi - lo) / per_piece
        for k in range(per_piece):
            x = lo + (k + 0.5) * h
            atoms[x] = atoms.get(x, 0.0) + d * h
    return CoefficientMeasure(tuple(atoms.items()), (), mu.signed)


def assemble_pencil(problem: Problem, geometry: Geometry | None = None, approximate: bool = False,
                    basis: str = "nodal", per_piece: int = 16) -> PencilMatrices:
    """Assemble (M_I, M_Omega, M_Upsilon) for the problem on ``geometry``.

    ``basis='nodal'`` uses functions equal to 1 at one node and 0 at the
    others; ``basis='delta'`` uses the kernels K(x_i, .) themselves, so that
    M_I = G, M_Omega = G W G and M_Upsilon = G V G.
    """
    geometry = problem.geometry if geometry is None else geometry
    omega, upsilon = problem.omega, problem.upsilon
    if not problem.is_dirac_comb:
        if not approximate:
            raise ValidationError("density pieces present: pass approximate=True to discretize them by quadrature atoms")
        omega = _quadrature_atoms(omega, per_piece)
        upsilon = _quadrature_atoms(upsilon, per_piece)

    masses: dict[float, list[float]] = {}
    for x, m in omega.atoms:
        masses.setdefault(x, [0.0, 0.0])[0] += m
    for x, m in upsilon.atoms:
        masses.setdefault(x, [0.0, 0.0])[1] += m

    def inside(x):
        if isinstance(geometry, WholeLine):
            return True
        return geometry.contains(x)

    nodes = {x: wv for x, wv in masses.items() if inside(x) and (wv[0] != 0 or wv[1] != 0)}
    # boundary-condition masses
    if isinstance(geometry, Bounded):
        extra = []
        if geometry.alpha != 0.0:
            extra.append((geometry.a, -_cot(geometry.alpha)))
        if geometry.beta != 0.0:
            extra.append((geometry.b, _cot(geometry.beta)))
    elif isinstance(geometry, HalfLine) and geometry.gamma != 0.0:
        sign = -1.0 if geometry.side == "+" else 1.0
        extra = [(geometry.c, sign * _cot(geometry.gamma))]
    else:
        extra = []
    for x, m in extra:
        if m != 0.0:
            wv = nodes.setdefault(x, [0.0, 0.0])
            wv[0] += m
    # nodes where the kernel vanishes (Dirichlet endpoints) carry no information
    xs = np.array(sorted(nodes))
    if len(xs):
        diag = resolvent_kernel(geometry, xs, xs)
        xs = xs[diag > 0]
    w = np.array([nodes[x][0] for x in xs])
    v = np.array([nodes[x][1] for x in xs])
    G = resolvent_kernel(geometry, xs[:, None], xs[None, :]) if len(xs) else np.zeros((0, 0))
    if basis == "nodal":
        M_I = np.linalg.inv(G) if len(xs) else G
        M_I = 0.5 * (M_I + M_I.T)
        M_O, M_U = np.diag(w), np.diag(v)
    elif basis == "delta":
        M_I = G
        M_O = G @ np.diag(w) @ G
        M_U = G @ np.diag(v) @ G
    else:
        raise ValidationError(f"unknown basis {basis!r}")
    return PencilMatrices(M_I, M_O, M_U, xs, basis, not problem.is_dirac_comb)


def pencil_spectrum(matrices: PencilMatrices, max_modulus: float = 1e12,
                    residual_tol: float = 1e-10) -> np.ndarray:
    """Finite roots of det(M_I - z M_Omega - z^2 M_Upsilon), sorted by real part.

    First-companion linearization on (u, z u); infinite or huge eigenvalues
    are dropped and every kept root must pass a smallest-singular-value test.
    """
    A, B, C = matrices.M_I, matrices.M_Omega, matrices.M_Upsilon
    n = A.shape[0]
    if n == 0:
        return np.zeros(0, dtype=complex)
    if np.linalg.cond(A) > 1e14:
        raise SingularParameterError("M_I is numerically singular")
    I, Z = np.eye(n), np.zeros((n, n))
    P = np.block([[Z, I], [A, -B]])
    Q = np.block([[I, Z], [Z, C]])
    ab = scipy.linalg.eig(P, Q, right=False, homogeneous_eigvals=True)
    alpha, beta = ab
    finite = np.abs(beta) > np.abs(alpha) / max_modulus
    z = alpha[finite] / beta[finite]
    z = z[np.abs(z) <= max_modulus]
    keep = []
    for zk in z:
        L = matrices.evaluate(zk)
        svals = np.linalg.svd(L, compute_uv=False)
        scale = np.linalg.norm(A, 2) + abs(zk) * np.linalg.norm(B, 2) + abs(zk) ** 2 * np.linalg.norm(C, 2)
        if svals[-1] <= residual_tol * scale:
            keep.append(zk)
    keep = np.array(keep, dtype=complex)
    return keep[np.lexsort((keep.imag, keep.real))]


def pencil_eigenvector(matrices: PencilMatrices, z: complex) -> np.ndarray:
    """Right singular vector of L(z) for its smallest singular value."""
    _, _, vh = np.linalg.svd(matrices.evaluate(z))
    return vh[-1].conj()


def pencil_residual(problem: Problem, geometry: Geometry | None, z: complex, coeffs,
                    matrices: PencilMatrices | None = None) -> float:
    """||L(z) c|| / ||c|| for the assembled pencil."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if not np.any(coeffs):
        raise ValidationError("coefficient vector must be nonzero")
    M = assemble_pencil(problem, geometry) if matrices is None else matrices
    return float(np.linalg.norm(M.evaluate(z) @ coeffs) / np.linalg.norm(coeffs))


def pencil_radius(problem: Problem, geometry: Geometry | None = None) -> float:
    """Largest modulus among the finite pencil roots (0 if there are none)."""
    spec = pencil_spectrum(assemble_pencil(problem, geometry))
    return float(np.max(np.abs(spec))) if len(spec) else 0.0


def real_pencil_eigenvalues(problem: Problem, geometry: Geometry | None = None) -> np.ndarray:
    """Real parts of the finite pencil roots, after checking they are real."""
    spec = pencil_spectrum(assemble_pencil(problem, geometry))
    if len(spec) and np.max(np.abs(spec.imag) / np.maximum(1.0, np.abs(spec))) > 1e-8:
        raise SingularParameterError(f"pencil produced non-real roots: {spec}")
    return np.sort(spec.real)
