"""Compactly supported measures made of point masses and piecewise-constant densities.

All integrals follow the half-open orientation rule

    int_x^y g dmu = int_[x, y) g dmu        (y > x)
                  = 0                       (y = x)
                  = -int_[y, x) g dmu       (y < x)

so an atom sitting at the lower endpoint counts and one at the upper endpoint
does not.  Distribution functions built from this rule are left-continuous.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ValidationError

_GAUSS_ORDER = 24
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GAUSS_ORDER)


def _as_number(value, allow_complex: bool, what: str):
    if isinstance(value, bool):
        raise ValidationError(f"{what}: boolean is not a number")
    if allow_complex:
        out = complex(value)
        if not (np.isfinite(out.real) and np.isfinite(out.imag)):
            raise ValidationError(f"{what}: non-finite value {value!r}")
        return out if out.imag != 0 else out.real
    if isinstance(value, complex):
        raise ValidationError(f"{what}: complex value {value!r} not allowed")
    try:
        out = float(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{what}: not a real number ({value!r})") from exc
    if not np.isfinite(out):
        raise ValidationError(f"{what}: non-finite value {value!r}")
    return out


@dataclass(frozen=True)
class CoefficientMeasure:
    """Finite sum of point masses plus a piecewise-constant density.

    Parameters
    ----------
    atoms : sequence of (position, mass)
        Positions must be strictly increasing after sorting (no duplicates).
    pieces : sequence of (left, right, density)
        Density on the half-open cell [left, right).  Cells may touch but not
        overlap.
    signed : bool
        If False, every mass and density must be non-negative.
    allow_complex : bool
        Permit complex masses and densities (used for inhomogeneous terms).
    """

    atoms: tuple = ()
    pieces: tuple = ()
    signed: bool = True
    allow_complex: bool = False

    def __post_init__(self):
        atoms = []
        for k, item in enumerate(self.atoms):
            try:
                x, m = item
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"atom {k}: expected [position, mass]") from exc
            x = _as_number(x, False, f"atom {k} position")
            m = _as_number(m, self.allow_complex, f"atom {k} mass")
            if not self.signed and m < 0:
                raise ValidationError(f"atom {k} at x={x}: negative mass {m} in a non-negative measure")
            atoms.append((x, m))
        atoms.sort(key=lambda a: a[0])
        for (x0, _), (x1, _) in zip(atoms, atoms[1:]):
            if x0 == x1:
                raise ValidationError(f"duplicate atom position x={x0}")

        pieces = []
        for k, item in enumerate(self.pieces):
            try:
                lo, hi, d = item
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"piece {k}: expected [left, right, density]") from exc
            lo = _as_number(lo, False, f"piece {k} left")
            hi = _as_number(hi, False, f"piece {k} right")
            d = _as_number(d, self.allow_complex, f"piece {k} density")
            if not lo < hi:
                raise ValidationError(f"piece {k}: need left < right, got [{lo}, {hi})")
            if not self.signed and d < 0:
                raise ValidationError(f"piece {k} on [{lo}, {hi}): negative density {d}")
            pieces.append((lo, hi, d))
        pieces.sort(key=lambda p: p[0])
        for p, q in zip(pieces, pieces[1:]):
            if q[0] < p[1]:
                raise ValidationError(f"overlapping pieces [{p[0]}, {p[1]}) and [{q[0]}, {q[1]})")

        object.__setattr__(self, "atoms", tuple(atoms))
        object.__setattr__(self, "pieces", tuple(pieces))

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, signed: bool = True) -> "CoefficientMeasure":
        return cls((), (), signed)

    @classmethod
    def dirac(cls, positions: Iterable[float], masses: Iterable[float], signed: bool = True) -> "CoefficientMeasure":
        return cls(tuple(zip(positions, masses)), (), signed)

    # queries --------------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return all(m == 0 for _, m in self.atoms) and all(d == 0 for _, _, d in self.pieces)

    @property
    def is_dirac_comb(self) -> bool:
        return all(d == 0 for _, _, d in self.pieces)

    def support(self) -> tuple[float, float] | None:
        """Smallest closed interval containing every nonzero atom and piece."""
        pts = [x for x, m in self.atoms if m != 0]
        for lo, hi, d in self.pieces:
            if d != 0:
                pts.extend((lo, hi))
        if not pts:
            return None
        return min(pts), max(pts)

    def breakpoints(self) -> list[float]:
        pts = [x for x, _ in self.atoms]
        for lo, hi, _ in self.pieces:
            pts.extend((lo, hi))
        return pts

    def atom_mass(self, x: float):
        for xa, m in self.atoms:
            if xa == x:
                return m
        return 0.0

    def atom_masses_at(self, xs: Sequence[float]) -> np.ndarray:
        lookup = dict(self.atoms)
        dtype = complex if self.allow_complex else float
        return np.array([lookup.get(float(x), 0.0) for x in xs], dtype=dtype)

    def density_at(self, x: float):
        """Density value at x using the [left, right) cell convention."""
        for lo, hi, d in self.pieces:
            if lo <= x < hi:
                return d
        return 0.0

    def restrict(self, lo: float, hi: float) -> "CoefficientMeasure":
        """Restriction to the half-open window [lo, hi)."""
        atoms = tuple((x, m) for x, m in self.atoms if lo <= x < hi)
        pieces = []
        for a, b, d in self.pieces:
            a2, b2 = max(a, lo), min(b, hi)
            if a2 < b2:
                pieces.append((a2, b2, d))
        return CoefficientMeasure(atoms, tuple(pieces), self.signed, self.allow_complex)

    def distribution(self, x: float, base: float = 0.0):
        """Left-continuous distribution function F(x) = int_base^x dmu."""
        return integrate_oriented(self, lambda s: np.ones_like(s), base, x)


@dataclass(frozen=True)
class Mesh:
    """Strictly increasing breakpoints; coefficients are constant between them."""

    points: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or np.any(np.diff(pts) <= 0):
            raise ValidationError("mesh points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def cells(self):
        return list(zip(self.points[:-1], self.points[1:]))


def support_mesh(omega: CoefficientMeasure, upsilon: CoefficientMeasure,
                 extra: Iterable[float] = (), *others: CoefficientMeasure) -> Mesh:
    """Union of all atom positions, piece endpoints and the extra points."""
    pts = set(float(x) for x in extra)
    for mu in (omega, upsilon) + others:
        pts.update(mu.breakpoints())
    return Mesh(np.array(sorted(pts)))


def _integrate_half_open(mu: CoefficientMeasure, g: Callable, lo: float, hi: float,
                         breaks: Iterable[float]) -> complex:
    # int over [lo, hi) with lo < hi
    total = 0.0 + 0.0j
    for x, m in mu.atoms:
        if lo <= x < hi and m != 0:
            total += m * complex(np.asarray(g(np.array([x])))[0])
    cuts = {lo, hi}
    cuts.update(b for b in breaks if lo < b < hi)
    for a, b, d in mu.pieces:
        a2, b2 = max(a, lo), min(b, hi)
        if a2 < b2 and d != 0:
            cuts.update(c for c in (a2, b2))
            inner = sorted(c for c in cuts if a2 <= c <= b2)
            for u, v in zip(inner[:-1], inner[1:]):
                half = 0.5 * (v - u)
                s = u + half * (_GL_NODES + 1.0)
                total += d * half * np.dot(_GL_WEIGHTS, np.asarray(g(s)))
    return total


def integrate_oriented(mu: CoefficientMeasure, g: Callable, x: float, y: float,
                       breaks: Iterable[float] = ()) -> complex:
    """Oriented Stieltjes integral int_x^y g dmu with the half-open rule.

    ``g`` must accept a numpy array.  It is treated as smooth inside each cell
    of the measure mesh refined by ``breaks``; density cells are integrated
    with a 24-point Gauss-Legendre rule, which is exact to round-off for the
    exponential and polynomial integrands used in this package.  Left limits
    of ``g`` are not taken: at an atom the value ``g(x)`` is used as given.
    """
    breaks = tuple(breaks)
    if y > x:
        return _integrate_half_open(mu, g, x, y, breaks)
    if y < x:
        return -_integrate_half_open(mu, g, y, x, breaks)
    return 0.0 + 0.0j


def integration_by_parts_residual(mu: CoefficientMeasure, nu: CoefficientMeasure,
                                  x: float, y: float, base: float = 0.0) -> float:
    """|LHS - RHS| of  int_x^y F dnu = [F G]_x^y - int_x^y G(s+) dmu.

    F and G are the left-continuous distribution functions of mu and nu
    anchored at ``base``.
    """
    F = _distribution_fn(mu, base, right=False)
    G_left = _distribution_fn(nu, base, right=False)
    G_right = _distribution_fn(nu, base, right=True)
    brk = mu.breakpoints() + nu.breakpoints()
    lhs = integrate_oriented(nu, F, x, y, brk)
    rhs = F(np.array([y]))[0] * G_left(np.array([y]))[0] - F(np.array([x]))[0] * G_left(np.array([x]))[0]
    rhs -= integrate_oriented(mu, G_right, x, y, brk)
    return float(abs(lhs - rhs))


def _distribution_fn(mu: CoefficientMeasure, base: float, right: bool) -> Callable:
    """Vectorized F(s) = mu([base, s)) oriented, or its right limit F(s+)."""
    atom_x = np.array([x for x, _ in mu.atoms])
    atom_m = np.array([m for _, m in mu.atoms])

    def F(s):
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape, dtype=complex if mu.allow_complex else float)
        for xa, m in zip(atom_x, atom_m):
            if right:
                inside = (xa >= base) & (xa <= s)
                outside = (xa < base) & (xa > s)
            else:
                inside = (xa >= base) & (xa < s)
                outside = (xa < base) & (xa >= s)
            out = out + m * inside - m * outside
        for lo, hi, d in mu.pieces:
            # oriented length of [base, s) intersected with [lo, hi)
            upper = np.clip(s, lo, hi)
            lower = np.clip(base, lo, hi)
            out = out + d * (upper - lower)
        return out

    return F
