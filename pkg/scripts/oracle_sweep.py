"""Compare shooting eigenvalues against the Galerkin pencil on random Dirac combs.

Prints one CSV row per comb and geometry with the eigenvalue counts, the
largest deviation, and the largest gap between norming masses and residues
of M(z)/z (whole line only).  Mass gaps are relative, floored at 1e-12 of the
total mass: masses far below that are fixed only to absolute accuracy.
The pencil never has the eigenvalue 0, so zero modes of the shooting side
(Dirichlet-type endpoints) are dropped before comparing.
"""
import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from quadspec import Bounded, HalfLine
from quadspec.bounded import eigenvalues_bounded
from quadspec.line import eigenvalues_halfline, residue_mass, residue_radius, spectral_measure
from quadspec.pencil import real_pencil_eigenvalues
from quadspec.sampling import CombConfig, random_comb


@dataclass
class SweepConfig:
    combs: int = 50
    seed: int = 0
    max_atoms: int = 6
    box: float = 3.5


def expand(pairs):
    return np.array([lam for lam, mult in pairs for _ in range(mult)])


def sweep(cfg: SweepConfig, out):
    rng = np.random.default_rng(cfg.seed)
    geometries = {
        "whole_line": None,
        "dirichlet_box": Bounded(-cfg.box, cfg.box, 0.0, 0.0),
        "robin_box": Bounded(-cfg.box, cfg.box, 1.0, 2.0),
        "half_line": HalfLine(-cfg.box, "+", 0.5),
    }
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["comb", "geometry", "n_shooting", "n_pencil", "max_deviation", "mass_vs_residue"])
    for k in range(cfg.combs):
        base = random_comb(rng, CombConfig(max_atoms=cfg.max_atoms))
        for name, geo in geometries.items():
            p = base if geo is None else base.with_geometry(geo)
            want = real_pencil_eigenvalues(p)
            mass_gap = float("nan")
            if geo is None:
                spec = spectral_measure(p)
                got = np.array([d.lam for d in spec])
                lams = list(got)
                floor = 1e-12 * sum(d.mass for d in spec)
                mass_gap = max((abs(residue_mass(p, d.lam, residue_radius(lams, i)) - d.mass) / max(d.mass, floor)
                                for i, d in enumerate(spec)), default=0.0)
            elif isinstance(geo, Bounded):
                got = expand(eigenvalues_bounded(p))
            else:
                got = expand(eigenvalues_halfline(p))
            got = got[got != 0.0]
            dev = float(np.abs(got - want).max(initial=0.0)) if len(got) == len(want) else float("inf")
            w.writerow([k, name, len(got), len(want), f"{dev:.3e}", f"{mass_gap:.3e}"])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--combs", type=int, default=SweepConfig.combs)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    ap.add_argument("--max-atoms", type=int, default=SweepConfig.max_atoms)
    ap.add_argument("--box", type=float, default=SweepConfig.box)
    a = ap.parse_args(argv)
    sweep(SweepConfig(a.combs, a.seed, a.max_atoms, a.box), sys.stdout)


if __name__ == "__main__":
    main()
