"""Spectral quantities on a bounded interval [a, b) with separated angles.

The angle-alpha solution phi starts at a with (sin alpha, z cos alpha) and the
angle-beta solution psi starts at b with (sin beta, z cos beta).  Nonzero
eigenvalues are the nonzero zeros of

    char(z) = z phi(z, b) cos beta - phi'(z, b-) sin beta,

while the kernel at z = 0 has dimension 2, 1 or 0 depending on how many of
the two angles vanish.  That count is also the order of the zero of char at 0.
"""
from __future__ import annotations

import numpy as np

from .errors import SingularParameterError, ValidationError
from .pencil import pencil_radius
from .problem import Bounded, Problem
from .propagator import sweep_values
from .roots import certified_real_roots


def _geometry(problem: Problem) -> Bounded:
    g = problem.geometry
    if not isinstance(g, Bounded):
        raise ValidationError(f"bounded-interval operation called with geometry {g}")
    return g


def kernel_dim_zero(alpha: float, beta: float) -> int:
    return int(alpha == 0.0) + int(beta == 0.0)


def lambda_beta(a: float, b: float, beta: float) -> float:
    if not a < b:
        raise ValidationError("need a < b")
    half = (b - a) / 2
    return 1.0 / np.tanh(half) if beta == 0.0 else float(np.tanh(half))


def _phi_at_b(problem: Problem, z):
    g = _geometry(problem)
    z = np.asarray(z, dtype=complex)
    f, dl, _ = sweep_values(problem, z, g.a, np.sin(g.alpha) + 0 * z, z * np.cos(g.alpha), [g.b])
    return f[0], dl[0]


def _psi_at_a(problem: Problem, z):
    g = _geometry(problem)
    z = np.asarray(z, dtype=complex)
    f, dl, _ = sweep_values(problem, z, g.b, np.sin(g.beta) + 0 * z, z * np.cos(g.beta), [g.a])
    return f[0], dl[0]


def characteristic(problem: Problem, z):
    """z phi_alpha(z, b) cos beta - phi_alpha'(z, b) sin beta (broadcasts over z)."""
    g = _geometry(problem)
    z = np.asarray(z, dtype=complex)
    f, df = _phi_at_b(problem, z)
    out = z * f * np.cos(g.beta) - df * np.sin(g.beta)
    return out if out.ndim else complex(out)


def default_window(problem: Problem) -> tuple[float, float]:
    if not problem.is_dirac_comb:
        raise ValidationError("an explicit window is required when densities are present")
    r = pencil_radius(problem) + 1.0
    return -r, r


def eigenvalues_bounded(problem: Problem, window=None, tol: float = 1e-10) -> list[tuple[float, int]]:
    """Eigenvalues in the window as (lambda, multiplicity), ascending.

    Nonzero eigenvalues are simple.  z = 0 is listed with the multiplicity
    given by the number of Dirichlet (zero) angles when it lies in the window.
    """
    g = _geometry(problem)
    lo, hi = default_window(problem) if window is None else window
    k = kernel_dim_zero(g.alpha, g.beta)
    n_atoms = len(problem.atom_sites())
    density = 8 * (2 * n_atoms + 2)
    roots = certified_real_roots(lambda z: characteristic(problem, z), (lo, hi), density,
                                 zero_order=k, gap=tol)
    out = [(float(r), 1) for r in roots]
    if k and lo < 0 < hi:
        out.append((0.0, k))
    return sorted(out)


def greens_value(problem: Problem, z, x: float, s: float) -> complex:
    """G(x, s) = psi(max) phi(min) / W(psi, phi), W(psi, phi) = -char(z)."""
    g = _geometry(problem)
    for t in (x, s):
        if not g.a <= t <= g.b:
            raise ValidationError(f"point {t} outside [{g.a}, {g.b}]")
    z = complex(z)
    d = characteristic(problem, z)
    scale = abs(z) * abs(_phi_at_b(problem, z)[0]) + abs(_phi_at_b(problem, z)[1])
    if d == 0 or abs(d) <= 1e-14 * scale:
        raise SingularParameterError(f"z = {z} is an eigenvalue")
    lo, hi = min(x, s), max(x, s)
    phi = sweep_values(problem, np.asarray(z), g.a, np.sin(g.alpha), z * np.cos(g.alpha), [lo])[0][0]
    psi = sweep_values(problem, np.asarray(z), g.b, np.sin(g.beta), z * np.cos(g.beta), [hi])[0][0]
    return complex(-psi * phi / d)


def k0_kernel(a: float, b: float, x, s):
    """Dirichlet kernel 2 sinh((b - max)/2) sinh((min - a)/2) / sinh((b - a)/2)."""
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any((x < a) | (x > b) | (s < a) | (s > b)):
        raise ValidationError("k0_kernel arguments must lie in [a, b]")
    hi, lo = np.maximum(x, s), np.minimum(x, s)
    return 2 * np.sinh((b - hi) / 2) * np.sinh((lo - a) / 2) / np.sinh((b - a) / 2)


def weyl_m_bounded(problem: Problem, z, form: str = "psi"):
    """Weyl function m_{alpha,beta}(z).

    ``form='psi'`` uses the angle-beta solution at a; ``form='pair'`` uses the
    angle-alpha pair (theta, phi) at b.  The two agree away from poles.
    """
    g = _geometry(problem)
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise SingularParameterError("m is not defined at z = 0")
    sa, ca = np.sin(g.alpha), np.cos(g.alpha)
    sb, cb = np.sin(g.beta), np.cos(g.beta)
    if form == "psi":
        psi, dpsi = _psi_at_a(problem, z)
        num = z * psi * sa + dpsi * ca
        den = z * psi * ca - dpsi * sa
    elif form == "pair":
        th, dth, _ = sweep_values(problem, z, g.a, ca + 0 * z, -z * sa, [g.b])
        ph, dph, _ = sweep_values(problem, z, g.a, sa + 0 * z, z * ca, [g.b])
        num = -(z * th[0] * cb - dth[0] * sb)
        den = z * ph[0] * cb - dph[0] * sb
    else:
        raise ValidationError(f"unknown form {form!r}")
    if np.any(den == 0):
        raise SingularParameterError("z is a pole of m (an eigenvalue)")
    out = num / den
    return out if out.ndim else complex(out)
