"""Tabulate Weyl functions along z = i*eps as eps -> 0 for one random comb.

For a bounded interval [a, b] with angles (alpha, beta) the table shows
m(i eps) next to its small-z model -cot(alpha) + 2 i eps / (sin(alpha)^2 lambda_beta),
with lambda_beta = coth((b - a)/2) for beta = 0 and tanh((b - a)/2)
otherwise.  For the half-lines at c the model is -+cot(gamma) + 2 i eps / sin(gamma)^2.
"""
import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from quadspec import Bounded
from quadspec.bounded import lambda_beta, weyl_m_bounded
from quadspec.line import weyl_m_halfline
from quadspec.sampling import random_comb


@dataclass
class AsymptoticsConfig:
    seed: int = 0
    a: float = -3.5
    b: float = 3.5
    alpha: float = 1.0
    beta: float = 0.5
    gamma: float = 1.0
    c: float = 0.0
    decades: int = 8


def tabulate(cfg: AsymptoticsConfig, out):
    p = random_comb(np.random.default_rng(cfg.seed))
    eps = 10.0 ** -np.arange(1, cfg.decades + 1)
    z = 1j * eps
    lam = lambda_beta(cfg.a, cfg.b, cfg.beta)
    rows = {
        "bounded": (weyl_m_bounded(p.with_geometry(Bounded(cfg.a, cfg.b, cfg.alpha, cfg.beta)), z),
                    -1 / np.tan(cfg.alpha) + 2j * eps / (np.sin(cfg.alpha) ** 2 * lam)),
        "half_line_plus": (weyl_m_halfline(p, z, cfg.c, cfg.gamma, "+"),
                           -1 / np.tan(cfg.gamma) + 2j * eps / np.sin(cfg.gamma) ** 2),
        "half_line_minus": (weyl_m_halfline(p, z, cfg.c, cfg.gamma, "-"),
                            1 / np.tan(cfg.gamma) + 2j * eps / np.sin(cfg.gamma) ** 2),
    }
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["case", "eps", "m_re", "m_im", "model_re", "model_im", "relative_gap"])
    for name, (m, model) in rows.items():
        for e, mv, mm in zip(eps, m, model):
            gap = abs(mv - mm) / abs(mm)
            w.writerow([name, f"{e:.0e}", f"{mv.real:.12e}", f"{mv.imag:.12e}",
                        f"{mm.real:.12e}", f"{mm.imag:.12e}", f"{gap:.2e}"])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(AsymptoticsConfig()).items():
        ap.add_argument(f"--{name}", type=type(default), default=default)
    tabulate(AsymptoticsConfig(**vars(ap.parse_args(argv))), sys.stdout)


if __name__ == "__main__":
    main()
