"""Random Dirac-comb problems for property tests and sweep scripts."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problem import Geometry, Problem, WholeLine


@dataclass(frozen=True)
class CombConfig:
    max_atoms: int = 6
    min_atoms: int = 1
    span: tuple[float, float] = (-3.0, 3.0)
    min_gap: float = 0.2
    w_range: tuple[float, float] = (-2.0, 2.0)
    v_range: tuple[float, float] = (0.0, 2.0)
    v_probability: float = 0.5


def random_positions(rng: np.random.Generator, n: int, span, min_gap: float) -> np.ndarray:
    lo, hi = span
    # spread the gaps: sample n points in a shortened interval, then re-insert the gaps
    free = (hi - lo) - (n - 1) * min_gap
    base = np.sort(rng.uniform(0.0, free, size=n))
    return np.round(lo + base + min_gap * np.arange(n), 12)


def random_comb(rng: np.random.Generator, config: CombConfig = CombConfig(),
                geometry: Geometry | None = None) -> Problem:
    n = int(rng.integers(config.min_atoms, config.max_atoms + 1))
    xs = random_positions(rng, n, config.span, config.min_gap)
    w = rng.uniform(*config.w_range, size=n)
    v = np.where(rng.random(n) < config.v_probability, rng.uniform(*config.v_range, size=n), 0.0)
    return Problem.dirac(xs, w, v, geometry or WholeLine())
