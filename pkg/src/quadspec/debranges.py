"""Structure functions and reproducing kernels of the half-line transform spaces.

E(z, c) = z phi(z, c) - i phi'(z, c) with the whole-line solution phi, and
the "open" variant E(z, c+) uses the right derivative phi'(z, c+).  The
kernel has a quotient form in E and an equal integral form

    K(zeta, z, c) = int_c^inf phi(z) phi(zeta*)/4 + phi'(z) phi'(zeta*) ds
                    + z zeta* int_[c, inf) phi(z) phi(zeta*) dupsilon,

the open variant integrating over (c, inf) instead.
"""
from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, PreconditionError, ValidationError
from .line import HilbertElement, SpectralDatum, _anchor, phi_values, spectral_measure
from .problem import Problem
from .propagator import SolutionFrame, pairing_integrals

_VARIANTS = ("closed", "open")


def _check_variant(variant: str):
    if variant not in _VARIANTS:
        raise ValidationError(f"variant must be one of {_VARIANTS}, got {variant!r}")


def structure_E(problem: Problem, z, c: float, variant: str = "closed"):
    _check_variant(variant)
    z = np.asarray(z, dtype=complex)
    f, dl, dr = phi_values(problem, z, [c])
    d = dl[0] if variant == "closed" else dr[0]
    out = z * f[0] - 1j * d
    return out if out.ndim else complex(out)


def _kernel_quotient(problem, zeta, z, c, variant):
    E = lambda w: structure_E(problem, w, c, variant)
    num = E(z) * np.conj(E(zeta)) - E(np.conj(zeta)) * np.conj(E(np.conj(z)))
    return num / (2j * (np.conj(zeta) - z))


def _kernel_integral(problem, zeta, z, c, variant):
    x0, f0, d0 = _anchor(problem, "+")
    fr = SolutionFrame(x0, f0, d0, d0)
    zs = np.conj(zeta)
    I_val, I_der, I_ups = pairing_integrals(problem, z, zs, fr, fr, c, np.inf)
    out = 0.25 * I_val + I_der + z * zs * I_ups
    if variant == "open":
        m = problem.upsilon.atom_mass(c)
        if m:
            f, _, _ = phi_values(problem, np.array([z, zs]), [c])
            out -= m * z * zs * f[0][0] * f[0][1]
    return out


def kernel_K(problem: Problem, zeta: complex, z: complex, c: float,
             variant: str = "closed", form: str = "auto") -> complex:
    """Reproducing kernel K(zeta, z, c) as a function of z.

    ``form`` is 'quotient', 'integral', or 'auto' (quotient except near the
    diagonal z = zeta*, where the integral form avoids the 0/0).
    """
    _check_variant(variant)
    zeta, z = complex(zeta), complex(z)
    if form == "auto":
        form = "integral" if abs(np.conj(zeta) - z) < 1e-6 * (1 + abs(z)) else "quotient"
    if form == "quotient":
        return complex(_kernel_quotient(problem, zeta, z, c, variant))
    if form == "integral":
        return complex(_kernel_integral(problem, zeta, z, c, variant))
    raise ValidationError(f"unknown form {form!r}")


def kernel_row(problem: Problem, zeta: complex, zs, c: float, variant: str = "closed") -> np.ndarray:
    """Quotient-form K(zeta, z, c) over an array of z (none may equal zeta*)."""
    _check_variant(variant)
    zs = np.asarray(zs, dtype=complex)
    return _kernel_quotient(problem, complex(zeta), zs, c, variant)


def _require_site(problem: Problem, c: float):
    if not problem.is_dirac_comb:
        raise ValidationError("Dirac-comb coefficients required")
    if float(c) not in set(problem.atom_sites().tolist()):
        raise PreconditionError(f"c = {c} is not in the support of the coefficients")


def embedding_sides(problem: Problem, zeta1, zeta2, c: float,
                    spectrum: list[SpectralDatum] | None = None):
    """(sum_i K(z1, l_i) K(z2, l_i)* m_i,  K(z1, z2) - e^c K(z1, 0) K(z2, 0)*)."""
    _require_site(problem, c)
    spectrum = spectral_measure(problem) if spectrum is None else spectrum
    lams = np.array([d.lam for d in spectrum], dtype=complex)
    masses = np.array([d.mass for d in spectrum])

    def K_at(zeta, zs):
        return np.array([kernel_K(problem, zeta, w, c) for w in zs])

    lhs = np.sum(K_at(zeta1, lams) * np.conj(K_at(zeta2, lams)) * masses)
    k1 = kernel_K(problem, zeta1, 0.0, c)
    k2 = kernel_K(problem, zeta2, 0.0, c)
    rhs = kernel_K(problem, zeta1, zeta2, c) - np.exp(c) * k1 * np.conj(k2)
    return complex(lhs), complex(rhs)


def embedding_residual(problem: Problem, zeta1, zeta2, c: float,
                       spectrum: list[SpectralDatum] | None = None) -> float:
    lhs, rhs = embedding_sides(problem, zeta1, zeta2, c, spectrum)
    return float(abs(lhs - rhs))


def base_point_estimate(problem: Problem, c: float, spectrum: list[SpectralDatum] | None = None,
                        center: complex = 1.5j, radius: float = 1.0, attempts: int = 4) -> float:
    """sup |F(0)|^2 over the unit ball of L^2(mu) inside span{K(zeta_j, ., c)}.

    With B_ij = sqrt(m_i) K(zeta_j, l_i) and v_j = K(zeta_j, 0), F(0) = v^T a
    and ||F|| = ||B a||; the supremum is ||w||^2 for the minimum-norm solution
    of B^T w = v, which exists because point evaluation at 0 is a bounded
    functional on the embedded space.
    """
    _require_site(problem, c)
    spectrum = spectral_measure(problem) if spectrum is None else spectrum
    lams = np.array([d.lam for d in spectrum], dtype=complex)
    root_m = np.sqrt(np.array([d.mass for d in spectrum]))
    n_atoms = len(problem.atom_sites())
    J = 2 * n_atoms + 2
    for attempt in range(attempts):
        offset = attempt * np.pi / (J * attempts)
        zetas = center + radius * np.exp(1j * (2 * np.pi * np.arange(J) / J + offset))
        B = np.array([root_m * kernel_row(problem, zt, lams, c) for zt in zetas]).T
        v = np.array([kernel_K(problem, zt, 0.0, c) for zt in zetas])
        w, *_ = np.linalg.lstsq(B.T, v, rcond=1e-12)
        if np.linalg.norm(B.T @ w - v) <= 1e-9 * np.linalg.norm(v):
            return float(np.vdot(w, w).real)
    raise ConvergenceError("kernel samples do not determine point evaluation at 0")


def transform_halfline(problem: Problem, f: HilbertElement, z, c: float):
    """F_c f(z) = int_c^inf phi f1/4 + phi' f1' + z int_[c, inf) phi f2 dupsilon.

    Integrating by parts on each knot interval right of c gives
    sum_{t_k > c} a_k phi(z, t_k) - phi(z, c) f1'(c+) + z sum_{p >= c} v_p phi(z, p) f2(p).
    """
    z = np.asarray(z, dtype=complex)
    t, a = f.knots, f.jumps()
    right = t > c
    ups = [(p, m) for p, m in problem.upsilon.atoms if m != 0 and p >= c]
    pts = [c] + list(t[right]) + [p for p, _ in ups]
    vals, _, _ = phi_values(problem, z, pts)
    # f1'(c+): left derivative just right of c, i.e. right limit at c
    if np.any(t == c):
        k = int(np.where(t == c)[0][0])
        df_right = f.df1(np.array([c]))[0] - a[k]
    else:
        df_right = f.df1(np.array([c]))[0]
    nr = int(right.sum())
    out = np.tensordot(a[right], vals[1:1 + nr], axes=(0, 0)) - vals[0] * df_right
    for j, (p, m) in enumerate(ups):
        out = out + z * m * vals[1 + nr + j] * f.f2(p)
    return out if out.ndim else complex(out)
