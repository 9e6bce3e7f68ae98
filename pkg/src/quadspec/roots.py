"""Certified real-root search for real-entire characteristic functions.

Real roots are bracketed by sign changes on a grid in t with z = sinh(t),
which is uniform near the origin and geometrically graded for large |z|, then
refined by Brent's method.  The count is certified with the argument principle
on a rectangle around the window; on a mismatch the grid is refined.
"""
from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import BoundaryCollisionError, ConvergenceError, ValidationError


def winding_number(func: Callable, lo: float, hi: float, height: float = 1.0,
                   n_init: int = 64, max_step: float = np.pi / 4, max_rounds: int = 60,
                   step: float | None = None) -> int:
    """Number of zeros of ``func`` inside the rectangle [lo, hi] x [-height, height].

    Horizontal edges are parametrized like the real-axis scan (uniform in
    arcsinh), so wide windows are sampled densely near the origin and sparsely
    far out; ``step`` sets their initial spacing in that variable.  The
    boundary is then refined until every phase increment is below ``max_step``.
    """
    s0, s1 = np.arcsinh(lo), np.arcsinh(hi)

    def contour(t):
        t = np.asarray(t, dtype=float)
        k = np.minimum(np.floor(t).astype(int), 3)
        frac = t - k
        out = np.empty(t.shape, dtype=complex)
        bottom, right, top, left = (k == 0), (k == 1), (k == 2), (k == 3)
        out[bottom] = np.sinh(s0 + frac[bottom] * (s1 - s0)) - 1j * height
        out[right] = hi + 1j * height * (2 * frac[right] - 1)
        out[top] = np.sinh(s1 - frac[top] * (s1 - s0)) + 1j * height
        out[left] = lo + 1j * height * (1 - 2 * frac[left])
        return out

    n_edge = n_init if step is None else max(n_init, int(np.ceil((s1 - s0) / step)))
    t = np.concatenate([k + np.arange(n_edge) / n_edge for k in range(4)] + [[4.0]])
    vals = np.asarray(func(contour(t)), dtype=complex)
    for _ in range(max_rounds):
        if np.any(vals == 0) or not np.all(np.isfinite(vals)):
            raise ConvergenceError("characteristic vanishes or overflows on the counting contour")
        dphi = np.angle(vals[1:] / vals[:-1])
        bad = np.abs(dphi) > max_step
        if not bad.any():
            total = dphi.sum() / (2 * np.pi)
            count = int(round(total))
            if abs(total - count) > 1e-6:
                raise ConvergenceError(f"non-integral winding number {total}")
            return count
        mids = 0.5 * (t[:-1][bad] + t[1:][bad])
        new_vals = np.asarray(func(contour(mids)), dtype=complex)
        t = np.concatenate([t, mids])
        vals = np.concatenate([vals, new_vals])
        order = np.argsort(t, kind="stable")
        t, vals = t[order], vals[order]
    raise ConvergenceError("argument-principle contour refinement did not converge")


def _scan_grid(lo: float, hi: float, step: float) -> np.ndarray:
    t0, t1 = np.arcsinh(lo), np.arcsinh(hi)
    n = max(int(np.ceil((t1 - t0) / step)), 8)
    return np.sinh(np.linspace(t0, t1, n + 1))


def bracket_real_roots(func: Callable, lo: float, hi: float, step: float) -> np.ndarray:
    """Sign-change roots of Re func on [lo, hi], refined by Brent's method."""
    x = _scan_grid(lo, hi, step)
    # keep the grid off the origin, where deflated functions are undefined
    x[x == 0.0] = 0.5 * step
    vals = np.asarray(func(x + 0j)).real
    scalar = lambda s: float(np.real(func(np.array([s + 0j]))[0]))
    roots = []
    for k in range(len(x) - 1):
        a, b = vals[k], vals[k + 1]
        if a == 0.0:
            roots.append(x[k])
        elif a * b < 0:
            roots.append(brentq(scalar, x[k], x[k + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps,
                                maxiter=200))
    if vals[-1] == 0.0:
        roots.append(x[-1])
    return np.array(sorted(set(roots)))


def certified_real_roots(func: Callable, window: tuple[float, float], density: float,
                         zero_order: int = 0, gap: float = 1e-9, height: float = 1.0,
                         max_refine: int = 6) -> np.ndarray:
    """All nonzero real roots of ``func`` in the window, count-certified.

    Parameters
    ----------
    func : callable
        Vectorized, real on the real axis, with a zero of exact order
        ``zero_order`` at the origin (that zero is deflated and not reported).
    window : (lo, hi)
        Search interval.  A root within ``gap * max(1, |end|)`` of either end
        raises BoundaryCollisionError.
    density : float
        Minimal number of samples per unit length near the origin.
    """
    lo, hi = float(window[0]), float(window[1])
    if not lo < hi:
        raise ValidationError(f"empty window [{lo}, {hi}]")
    for end in (lo, hi):
        if zero_order and abs(end) <= gap:
            raise BoundaryCollisionError(f"window endpoint {end} hits the root at 0; perturb the window")

    if zero_order:
        deflated = lambda z: func(z) / z ** zero_order
    else:
        deflated = func

    expected_zero = zero_order if lo < 0 < hi else 0
    step = 1.0 / density
    pad_lo = gap * max(1.0, abs(lo))
    pad_hi = gap * max(1.0, abs(hi))
    count = None
    for _ in range(max_refine + 1):
        pad = 4 * step * max(1.0, abs(lo), abs(hi))
        roots = bracket_real_roots(deflated, lo - pad, hi + pad, step)
        for end, p in ((lo, pad_lo), (hi, pad_hi)):
            if np.any(np.abs(roots - end) <= p):
                raise BoundaryCollisionError(
                    f"a root lies within {p:.1e} of window endpoint {end}; perturb the window")
        inside = roots[(roots > lo) & (roots < hi)]
        if count is None:
            count = winding_number(func, lo, hi, height, step=step) - expected_zero
        if len(inside) == count:
            return inside
        step *= 0.5
    raise ConvergenceError(f"found {len(inside)} real roots but the argument principle counts {count}")
