"""Property tests for the spectral invariants on random Dirac combs."""
import numpy as np
from hypothesis import assume, given, settings, strategies as st

from conftest import dirac_combs
from quadspec import Bounded
from quadspec.bounded import eigenvalues_bounded, weyl_m_bounded
from quadspec.debranges import kernel_K, structure_E
from quadspec.line import (HilbertElement, eigenfunction_values, eigenvalues_line, parseval_check,
                           spectral_measure, weyl_m_halfline)
from quadspec.pencil import real_pencil_eigenvalues

upper = st.tuples(st.floats(-4, 4), st.floats(0.05, 4)).map(lambda t: complex(*t))


@settings(max_examples=15)
@given(dirac_combs())
def test_shooting_matches_pencil(p):
    got = eigenvalues_line(p)
    want = real_pencil_eigenvalues(p)
    assert len(got) == len(want)
    assert np.allclose(got, want, rtol=1e-8, atol=1e-8)


@settings(max_examples=15)
@given(dirac_combs(), st.floats(0.1, 3.0), st.floats(0.1, 3.0))
def test_bounded_shooting_matches_pencil(p, alpha, beta):
    q = p.with_geometry(Bounded(-3.5, 3.5, alpha, beta))
    got = [lam for lam, mult in eigenvalues_bounded(q) for _ in range(mult)]
    want = real_pencil_eigenvalues(q)
    assert len(got) == len(want)
    assert np.allclose(got, want, rtol=1e-8, atol=1e-8)


@given(dirac_combs(), upper, st.floats(0.0, 3.0), st.sampled_from("+-"))
def test_halfline_weyl_function_is_herglotz(p, z, gamma, side):
    m = weyl_m_halfline(p, z, 0.0, gamma, side)
    assert m.imag >= -1e-12 * max(1.0, abs(m))
    assert weyl_m_halfline(p, np.conj(z), 0.0, gamma, side) == np.conj(m)


@given(dirac_combs(), upper, st.floats(0.0, 3.0), st.floats(0.0, 3.0))
def test_bounded_weyl_function_is_herglotz(p, z, alpha, beta):
    m = weyl_m_bounded(p.with_geometry(Bounded(-3.5, 3.5, alpha, beta)), z)
    assert m.imag >= -1e-12 * max(1.0, abs(m))


@settings(max_examples=15)
@given(dirac_combs(), st.lists(st.floats(-2, 2), min_size=3, max_size=3))
def test_parseval_and_point_sum_rule(p, inner):
    spec = spectral_measure(p)
    f = HilbertElement(np.linspace(-4, 4, 5), [0, *inner, 0])
    lhs, rhs = parseval_check(p, f, spec)
    assert abs(lhs - rhs) <= 1e-8 * max(rhs, 1e-12)
    masses = np.array([d.mass for d in spec])
    for c in p.atom_sites():
        phi = np.array([eigenfunction_values(p, d.lam, [c])[0].real for d in spec])
        assert abs(np.sum(phi ** 2 * masses) - 1) <= 1e-8


@given(dirac_combs(), upper)
def test_structure_function_dominates_its_reflection(p, z):
    for c in p.atom_sites():
        assert abs(structure_E(p, z, c)) > abs(structure_E(p, np.conj(z), c))


@given(dirac_combs(), upper, upper)
def test_kernel_is_hermitian(p, zeta, z):
    assume(len(p.atom_sites()) > 0)
    c = float(p.atom_sites()[0])
    k = kernel_K(p, zeta, z, c)
    assert abs(k - np.conj(kernel_K(p, z, zeta, c))) <= 1e-10 * max(1.0, abs(k))
