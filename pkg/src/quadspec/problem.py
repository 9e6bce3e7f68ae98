"""Problem value: coefficient pair plus geometry."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import ValidationError
from .measures import CoefficientMeasure


def _check_angle(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value < np.pi):
        raise ValidationError(f"{name} = {value} outside [0, pi)")
    return value


@dataclass(frozen=True)
class WholeLine:
    pass


@dataclass(frozen=True)
class HalfLine:
    """Semi-axis [c, inf) for side '+' or (-inf, c) for side '-'."""

    c: float
    side: str = "+"
    gamma: float = 0.0

    def __post_init__(self):
        if self.side not in ("+", "-"):
            raise ValidationError(f"half-line side must be '+' or '-', got {self.side!r}")
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "gamma", _check_angle("gamma", self.gamma))

    def contains(self, x: float) -> bool:
        return x >= self.c if self.side == "+" else x < self.c


@dataclass(frozen=True)
class Bounded:
    """Half-open interval [a, b) with separated boundary angles."""

    a: float
    b: float
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not a < b:
            raise ValidationError(f"bounded geometry needs a < b, got a={a}, b={b}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "alpha", _check_angle("alpha", self.alpha))
        object.__setattr__(self, "beta", _check_angle("beta", self.beta))

    def contains(self, x: float) -> bool:
        return self.a <= x < self.b


Geometry = Union[WholeLine, HalfLine, Bounded]


@dataclass(frozen=True)
class Problem:
    omega: CoefficientMeasure = field(default_factory=CoefficientMeasure)
    upsilon: CoefficientMeasure = field(default_factory=lambda: CoefficientMeasure(signed=False))
    geometry: Geometry = field(default_factory=WholeLine)

    def __post_init__(self):
        if self.upsilon.signed:
            # upsilon is non-negative by definition; re-validate under that rule
            object.__setattr__(self, "upsilon",
                               CoefficientMeasure(self.upsilon.atoms, self.upsilon.pieces, signed=False))
        if self.omega.allow_complex or self.upsilon.allow_complex:
            raise ValidationError("coefficient measures must be real")

    @classmethod
    def dirac(cls, positions, w, v=None, geometry: Geometry | None = None) -> "Problem":
        """Convenience constructor for Dirac combs sharing atom positions."""
        positions = list(positions)
        v = [0.0] * len(positions) if v is None else list(v)
        omega = CoefficientMeasure(tuple((x, m) for x, m in zip(positions, w) if m != 0))
        upsilon = CoefficientMeasure(tuple((x, m) for x, m in zip(positions, v) if m != 0), signed=False)
        return cls(omega, upsilon, geometry or WholeLine())

    def with_geometry(self, geometry: Geometry) -> "Problem":
        return Problem(self.omega, self.upsilon, geometry)

    @property
    def is_dirac_comb(self) -> bool:
        return self.omega.is_dirac_comb and self.upsilon.is_dirac_comb

    def support(self) -> tuple[float, float] | None:
        spans = [s for s in (self.omega.support(), self.upsilon.support()) if s is not None]
        if not spans:
            return None
        return min(s[0] for s in spans), max(s[1] for s in spans)

    def atom_sites(self) -> np.ndarray:
        """Positions carrying a nonzero atom of omega or upsilon, ascending."""
        pts = {x for x, m in self.omega.atoms if m != 0}
        pts.update(x for x, m in self.upsilon.atoms if m != 0)
        return np.array(sorted(pts))

    def domain_atoms(self) -> np.ndarray:
        """Atom sites that lie inside the geometry's domain."""
        sites = self.atom_sites()
        g = self.geometry
        if isinstance(g, WholeLine):
            return sites
        return np.array([x for x in sites if g.contains(x)])
