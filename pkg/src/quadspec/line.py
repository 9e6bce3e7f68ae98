"""Semi-axis and whole-line spectral theory for compactly supported coefficients.

Outside the support every solution is a combination of exp(x/2) and
exp(-x/2), so the Weyl solutions are fixed exactly by their tails:

    psi_+(z, x) = exp(-x/2)   right of the support,
    psi_-(z, x) = exp(x/2)    left of the support.

The real entire pair used for the singular Weyl function is phi = psi_+ and
theta = exp(x/2) right of the support (W(phi, theta) = 1), and

    M(z) = W(psi_-, theta) / W(phi, psi_-).

Whole-line eigenvalues are the zeros of W(phi, psi_-); zero never is one.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError, SingularParameterError, ValidationError
from .pencil import pencil_radius
from .problem import HalfLine, Problem, WholeLine
from .propagator import SolutionFrame, pairing_integrals, sweep_values
from .roots import certified_real_roots


def _anchor(problem: Problem, side: str) -> tuple[float, float, float]:
    """A point strictly outside the support on ``side`` with the tail data there."""
    sup = problem.support()
    if side == "+":
        R = 0.0 if sup is None else sup[1] + 1.0
        e = np.exp(-R / 2)
        return R, e, -0.5 * e
    L = 0.0 if sup is None else sup[0] - 1.0
    e = np.exp(L / 2)
    return L, e, 0.5 * e


def weyl_values(problem: Problem, z, side: str, points):
    """(psi, psi'(x-), psi'(x+)) at the given points; arrays of shape (len(points),) + z.shape."""
    x0, f0, d0 = _anchor(problem, side)
    z = np.asarray(z, dtype=complex)
    return sweep_values(problem, z, x0, f0 + 0 * z, d0 + 0 * z, list(points))


@dataclass(frozen=True)
class WeylSolution:
    """Weyl solution psi_side(z, .) normalized by its unit exponential tail."""

    problem: Problem
    z: complex
    side: str

    def __post_init__(self):
        if self.side not in ("+", "-"):
            raise ValidationError(f"side must be '+' or '-', got {self.side!r}")

    @property
    def tail(self) -> tuple[float, float]:
        """(anchor point, tail exponent): psi = exp(exponent * x) beyond the anchor."""
        x0, _, _ = _anchor(self.problem, self.side)
        return x0, (-0.5 if self.side == "+" else 0.5)

    def frames(self, points) -> list[SolutionFrame]:
        f, dl, dr = weyl_values(self.problem, self.z, self.side, points)
        return [SolutionFrame(float(x), complex(a), complex(b), complex(c))
                for x, a, b, c in zip(points, f, dl, dr)]


def weyl_solution(problem: Problem, z, side: str) -> WeylSolution:
    return WeylSolution(problem, complex(z), side)


def phi_values(problem: Problem, z, points):
    """Whole-line entire solution phi(z, .) = exp(-x/2) right of the support."""
    return weyl_values(problem, z, "+", points)


def weyl_m_halfline(problem: Problem, z, c: float, gamma: float, side: str):
    """m_{gamma,side}(z) from the Weyl solution at c (left derivative).

        side * m = (z psi(c) sin g + psi'(c) cos g) / (z psi(c) cos g - psi'(c) sin g)
    """
    if side not in ("+", "-"):
        raise ValidationError(f"side must be '+' or '-', got {side!r}")
    if not 0.0 <= gamma < np.pi:
        raise ValidationError(f"gamma = {gamma} outside [0, pi)")
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise SingularParameterError("m is not defined at z = 0")
    f, dl, _ = weyl_values(problem, z, side, [c])
    psi, dpsi = f[0], dl[0]
    s, co = np.sin(gamma), np.cos(gamma)
    num = z * psi * s + dpsi * co
    den = z * psi * co - dpsi * s
    if np.any(den == 0):
        raise SingularParameterError("z is an eigenvalue of the half-line problem")
    out = num / den
    if side == "-":
        out = -out
    return out if out.ndim else complex(out)


def _wronskians(problem: Problem, z):
    """(W(psi_-, theta), W(phi, psi_-)) evaluated right of the support."""
    z = np.asarray(z, dtype=complex)
    R, _, _ = _anchor(problem, "+")
    f, dl, _ = weyl_values(problem, z, "-", [R])
    psi, dpsi = f[0], dl[0]
    eR, emR = np.exp(R / 2), np.exp(-R / 2)
    # theta = e^{x/2}, phi = e^{-x/2} at R
    w_psi_theta = psi * 0.5 * eR - dpsi * eR
    w_phi_psi = emR * dpsi + 0.5 * emR * psi
    return w_psi_theta, w_phi_psi


def line_characteristic(problem: Problem, z):
    """W(phi, psi_-)(z); its zeros are the whole-line eigenvalues."""
    out = _wronskians(problem, z)[1]
    return out if np.ndim(out) else complex(out)


def singular_M(problem: Problem, z):
    """Singular Weyl function M(z) = W(psi_-, theta) / W(phi, psi_-)."""
    z = np.asarray(z, dtype=complex)
    num, den = _wronskians(problem, z)
    if np.any(den == 0):
        raise SingularParameterError("z is a whole-line eigenvalue")
    out = np.where(z == 0, 0.0, num / den)
    return out if out.ndim else complex(out)


def _density(problem: Problem) -> float:
    return 8 * (2 * len(problem.atom_sites()) + 2)


def default_line_window(problem: Problem, geometry=None) -> tuple[float, float]:
    if not problem.is_dirac_comb:
        raise ValidationError("an explicit window is required when densities are present")
    r = pencil_radius(problem, geometry if geometry is not None else WholeLine()) + 1.0
    return -r, r


def eigenvalues_line(problem: Problem, window=None, tol: float = 1e-9) -> np.ndarray:
    """Whole-line eigenvalues in the window, ascending, count-certified."""
    window = default_line_window(problem) if window is None else window
    return certified_real_roots(lambda z: line_characteristic(problem, z), window,
                                _density(problem), zero_order=0, gap=tol)


def halfline_characteristic(problem: Problem, z, c: float, gamma: float, side: str):
    z = np.asarray(z, dtype=complex)
    f, dl, _ = weyl_values(problem, z, side, [c])
    out = z * f[0] * np.cos(gamma) - dl[0] * np.sin(gamma)
    return out if out.ndim else complex(out)


def eigenvalues_halfline(problem: Problem, window=None, tol: float = 1e-9) -> list[tuple[float, int]]:
    """Eigenvalues of the half-line problem in problem.geometry as (lambda, multiplicity)."""
    g = problem.geometry
    if not isinstance(g, HalfLine):
        raise ValidationError(f"half-line operation called with geometry {g}")
    window = default_line_window(problem, g) if window is None else window
    k = 1 if g.gamma == 0.0 else 0
    roots = certified_real_roots(lambda z: halfline_characteristic(problem, z, g.c, g.gamma, g.side),
                                 window, _density(problem), zero_order=k, gap=tol)
    out = [(float(r), 1) for r in roots]
    if k and window[0] < 0 < window[1]:
        out.append((0.0, 1))
    return sorted(out)


# ---------------------------------------------------------------------------
# spectral measure


@dataclass(frozen=True)
class SpectralDatum:
    lam: float
    mass: float


def _phi_frame(problem: Problem) -> SolutionFrame:
    x0, f0, d0 = _anchor(problem, "+")
    return SolutionFrame(x0, f0, d0, d0)


def _check_eigenvalue(problem: Problem, lam: float, rtol: float = 1e-6):
    # at an eigenvalue phi and psi_- are proportional
    if _matched_split(problem, lam)[2] > rtol:
        raise PreconditionError(f"lambda = {lam} is not a whole-line eigenvalue")


def _matched_split(problem: Problem, lam: float):
    """(m, k, residual) with phi = k psi_- best satisfied at the point m.

    Each Weyl solution is only trusted on its own side of m: swept across the
    whole support, phi picks up a growing exp(-x/2) component on the left when
    |lam| is large.
    """
    sites = problem.atom_sites()
    sup = problem.support()
    if sup is None:
        return 0.0, 1.0, 0.0
    cand = list(0.5 * (sites[1:] + sites[:-1])) if len(sites) > 1 else []
    cand += [sup[0] - 0.5, sup[1] + 0.5] if len(sites) <= 1 else []
    z = np.asarray(complex(lam))
    f, df, _ = phi_values(problem, z, cand)
    g, dg, _ = weyl_values(problem, z, "-", cand)
    k = (f * np.conj(g) + df * np.conj(dg)) / (np.abs(g) ** 2 + np.abs(dg) ** 2)
    resid = np.hypot(np.abs(f - k * g), np.abs(df - k * dg)) / np.hypot(np.abs(f), np.abs(df))
    j = int(np.argmin(resid))
    return float(cand[j]), complex(k[j]), float(resid[j])


def norming_constant(problem: Problem, lambda0: float, check: bool = True) -> float:
    """Spectral mass 1 / (int phi^2/4 + int phi'^2 + lambda0^2 int phi^2 dupsilon)."""
    lam = float(lambda0)
    if check:
        _check_eigenvalue(problem, lam)
    m, k, _ = _matched_split(problem, lam)
    x0, f0, d0 = _anchor(problem, "-")
    right, left = _phi_frame(problem), SolutionFrame(x0, f0, d0, d0)
    a = pairing_integrals(problem, lam, lam, right, right, m, np.inf)
    b = pairing_integrals(problem, lam, lam, left, left, -np.inf, m)
    norm2 = (0.25 * a[0] + a[1] + lam * lam * a[2] + k * k * (0.25 * b[0] + b[1] + lam * lam * b[2])).real
    if not norm2 > 0:
        raise PreconditionError(f"non-positive eigenfunction norm at lambda = {lam}")
    return float(1.0 / norm2)


def eigenfunction_values(problem: Problem, lam: float, points) -> np.ndarray:
    """phi(lam, .) at a whole-line eigenvalue, swept from the nearer tail.

    Left of the matching point phi is evaluated as k psi_-, which avoids the
    spurious growth of a single right-to-left sweep at large |lam|.
    """
    pts = np.asarray(points, dtype=float)
    m, k, _ = _matched_split(problem, float(lam))
    z = np.asarray(complex(lam))
    out = np.empty(pts.shape, dtype=complex)
    right = pts >= m
    if np.any(right):
        out[right] = phi_values(problem, z, list(pts[right]))[0]
    if np.any(~right):
        out[~right] = k * weyl_values(problem, z, "-", list(pts[~right]))[0]
    return out


def residue_mass(problem: Problem, lam: float, radius: float = 1e-3, n: int = 64) -> float:
    """-Res_{z=lam} M(z)/z by the trapezoidal rule on a circle."""
    theta = 2 * np.pi * np.arange(n) / n
    ring = radius * np.exp(1j * theta)
    vals = singular_M(problem, lam + ring) / (lam + ring)
    res = np.mean(vals * ring)
    return float(-res.real)


def spectral_measure(problem: Problem, window=None) -> list[SpectralDatum]:
    lams = eigenvalues_line(problem, window)
    return [SpectralDatum(float(l), norming_constant(problem, l, check=False)) for l in lams]


def residue_radius(lams, k: int, radius: float = 1e-3) -> float:
    """Circle radius around lams[k] kept clear of the neighbours and of 0."""
    others = [abs(lams[k] - l) for j, l in enumerate(lams) if j != k] + [abs(lams[k])]
    return min(radius, 0.25 * min(others))


# ---------------------------------------------------------------------------
# elements of H^1(R) x L^2(upsilon) and the transform


@dataclass(frozen=True)
class HilbertElement:
    """Pair (f1, f2) with f1 piecewise in span{exp(x/2), exp(-x/2)}.

    f1 interpolates ``values`` at ``knots`` by the exponential splines and
    continues as values[0] exp((x - t0)/2) on the left and values[-1]
    exp(-(x - tN)/2) on the right, so it is compactly supported exactly when
    both end values vanish.  f2 is given by its values at upsilon atoms.
    Equivalently f1 = sum_k a_k exp(-|x - t_k|/2) with a_k = f1'(t_k-) - f1'(t_k+).
    """

    knots: np.ndarray
    values: np.ndarray
    second: tuple = field(default=())

    def __post_init__(self):
        t = np.atleast_1d(np.asarray(self.knots, dtype=float))
        y = np.atleast_1d(np.asarray(self.values, dtype=complex))
        if t.shape != y.shape or t.ndim != 1 or len(t) == 0:
            raise ValidationError("knots and values must be equal-length non-empty 1-d arrays")
        if np.any(np.diff(t) <= 0):
            raise ValidationError("knots must be strictly increasing")
        object.__setattr__(self, "knots", t)
        object.__setattr__(self, "values", y)
        object.__setattr__(self, "second", tuple((float(p), complex(v)) for p, v in self.second))

    def f2(self, p: float) -> complex:
        return dict(self.second).get(float(p), 0j)

    def jumps(self) -> np.ndarray:
        t, y = self.knots, self.values
        left = np.empty_like(y)
        right = np.empty_like(y)
        left[0] = 0.5 * y[0]
        right[-1] = -0.5 * y[-1]
        h = np.diff(t)
        sh, ch = np.sinh(h / 2), np.cosh(h / 2)
        right[:-1] = 0.5 * (y[1:] - y[:-1] * ch) / sh
        left[1:] = 0.5 * (y[1:] * ch - y[:-1]) / sh
        return left - right

    def f1(self, x):
        x = np.asarray(x, dtype=float)
        a = self.jumps()
        return np.sum(a[:, None] * np.exp(-np.abs(x.ravel()[None, :] - self.knots[:, None]) / 2),
                      axis=0).reshape(x.shape)

    def df1(self, x):
        """Derivative of f1 (left limit at knots)."""
        x = np.asarray(x, dtype=float)
        a = self.jumps()
        d = x.ravel()[None, :] - self.knots[:, None]
        slope = np.where(d > 0, -0.5, 0.5) * np.exp(-np.abs(d) / 2)
        return np.sum(a[:, None] * slope, axis=0).reshape(x.shape)

    def inner(self, other: "HilbertElement", upsilon) -> complex:
        """<self, other>, conjugate-linear in ``other``."""
        b = other.jumps()
        first = np.sum(self.f1(other.knots) * np.conj(b))
        second = sum(m * self.f2(p) * np.conj(other.f2(p)) for p, m in upsilon.atoms)
        return complex(first + second)

    def norm2(self, upsilon) -> float:
        return float(self.inner(self, upsilon).real)


def delta_element(c: float) -> HilbertElement:
    """Point-evaluation element (exp(-|x - c|/2), 0)."""
    return HilbertElement(np.array([float(c)]), np.array([1.0]))


def eigen_element(problem: Problem, lam: float) -> HilbertElement:
    """(phi(lam, .), lam phi(lam, .)) for a whole-line eigenvalue lam of a Dirac comb."""
    sites = problem.atom_sites()
    f = eigenfunction_values(problem, lam, sites)
    second = [(p, lam * f[list(sites).index(p)]) for p, m in problem.upsilon.atoms if m != 0]
    return HilbertElement(sites, f, tuple(second))


def _transform_from_values(problem: Problem, f: HilbertElement, lam, values):
    ups = [(p, m) for p, m in problem.upsilon.atoms if m != 0 and f.f2(p) != 0]
    pts = list(f.knots) + [p for p, _ in ups]
    vals = values(pts)
    n = len(f.knots)
    out = np.tensordot(f.jumps(), vals[:n], axes=(0, 0))
    for j, (p, m) in enumerate(ups):
        out = out + lam * m * vals[n + j] * f.f2(p)
    return out


def transform_hat(problem: Problem, f: HilbertElement, lam):
    """Generalized Fourier transform f^(lam) = sum_k a_k phi(lam, t_k) + lam sum_p v_p phi(lam, p) f2(p).

    For compactly supported f1 this is the integral
    int phi f1 / 4 + int phi' f1' + lam int phi f2 dupsilon, evaluated exactly.
    Broadcasts over ``lam``.
    """
    lam = np.asarray(lam, dtype=complex)
    out = _transform_from_values(problem, f, lam, lambda pts: phi_values(problem, lam, pts)[0])
    return out if out.ndim else complex(out)


def transform_at_eigenvalues(problem: Problem, f: HilbertElement, lams) -> np.ndarray:
    """f^ at whole-line eigenvalues, using the two-sided eigenfunction evaluation."""
    return np.array([complex(_transform_from_values(problem, f, l, lambda pts, l=l: eigenfunction_values(problem, l, pts)))
                     for l in np.asarray(lams, dtype=float)])


def projection_norm(problem: Problem, f: HilbertElement) -> float:
    """||P f||^2 = v^* G^{-1} v + ||f2||^2 for the projection onto the closed domain."""
    if not problem.is_dirac_comb:
        raise ValidationError("projection_norm supports Dirac-comb coefficients only")
    xs = problem.atom_sites()
    second = sum(m * abs(f.f2(p)) ** 2 for p, m in problem.upsilon.atoms)
    if len(xs) == 0:
        return float(second)
    v = f.f1(xs)
    G = np.exp(-np.abs(xs[:, None] - xs[None, :]) / 2)
    return float(np.real(np.conj(v) @ np.linalg.solve(G, v)) + second)


def parseval_check(problem: Problem, f: HilbertElement, spectrum: list[SpectralDatum] | None = None):
    """(sum_i |f^(lam_i)|^2 mass_i, ||P f||^2)."""
    spectrum = spectral_measure(problem) if spectrum is None else spectrum
    if spectrum:
        lams = np.array([d.lam for d in spectrum])
        masses = np.array([d.mass for d in spectrum])
        lhs = float(np.sum(np.abs(transform_at_eigenvalues(problem, f, lams)) ** 2 * masses))
    else:
        lhs = 0.0
    return lhs, projection_norm(problem, f)
