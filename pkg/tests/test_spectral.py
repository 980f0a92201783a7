from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuntzsections.catalog import STABILITY_CATALOG, catalog_element
from cuntzsections.sections import SizeSchedule, element_matrix, reflection_matrix
from cuntzsections.spectral import (
    PseudospectrumGrid,
    classify_trend,
    hausdorff_distance,
    hermitian_eigenvalues,
    matched_symbol_shape,
    pseudospectrum_grid,
    sigma_min_grid,
    singular_values,
    spectral_convergence_report,
    stability_verdict,
    symbol_sigma_min_trend,
)
from cuntzsections.symbolic import Element


def disk_oracle(centers, eps, lo, hi, resolution):
    """Grid membership in a union of closed disks, decided in exact rational arithmetic."""
    (x0, x1), (y0, y1) = lo, hi
    xs = [Fraction(x0) + (Fraction(x1) - Fraction(x0)) * k / (resolution - 1) for k in range(resolution)]
    ys = [Fraction(y0) + (Fraction(y1) - Fraction(y0)) * k / (resolution - 1) for k in range(resolution)]
    eps2 = Fraction(eps) ** 2
    return np.array(
        [[any((x - c) ** 2 + y**2 <= eps2 for c in centers) for x in xs] for y in ys]
    )


def test_singular_value_examples():
    assert np.array_equal(singular_values(np.zeros((3, 3))), np.zeros(3))
    assert np.allclose(singular_values(np.eye(4)), 1, atol=1e-15)
    T = element_matrix(Element.generator(2, 0), 8)
    # Gram oracle: T^T T is diagonal 0/1
    gram = np.diag(T.T @ T)
    assert sorted(gram) == [0, 0, 0, 0, 1, 1, 1, 1]
    assert np.allclose(singular_values(T), sorted(np.sqrt(gram)), atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**31))
def test_singular_values_ascending_and_norm(n, seed):
    M = np.random.default_rng(seed).normal(size=(n, n)) + 1j * np.random.default_rng(seed + 1).normal(size=(n, n))
    s = singular_values(M)
    assert np.all(np.diff(s) >= 0) and s[0] >= 0
    assert np.isclose(s[-1], np.linalg.norm(M, 2), rtol=1e-12)
    R = reflection_matrix(n)
    assert np.allclose(singular_values(R @ M @ R), s, rtol=1e-12, atol=1e-12)


def test_singular_values_rejects_non_square():
    with pytest.raises(ValueError):
        singular_values(np.zeros((2, 3)))


def test_hermitian_examples():
    assert np.array_equal(hermitian_eigenvalues(np.diag([1.0, 0.0])), [0, 1])
    s0 = Element.generator(2, 0)
    M = element_matrix(s0 + s0.adjoint(), 2)
    assert np.array_equal(M, [[2, 0], [0, 0]])
    assert np.allclose(hermitian_eigenvalues(M), [0, 2], atol=1e-15)
    assert np.array_equal(hermitian_eigenvalues(np.zeros((3, 3))), np.zeros(3))
    with pytest.raises(ValueError):
        hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_pseudospectrum_zero_matrix():
    g = pseudospectrum_grid(np.zeros((2, 2)), (-1, 1, -1, 1), 21, 0.5)
    assert np.array_equal(g.mask, disk_oracle([0], Fraction(1, 2), (-1, 1), (-1, 1), 21))


def test_pseudospectrum_diag01():
    g = pseudospectrum_grid(np.diag([0.0, 1.0]), (-0.5, 1.5, -0.5, 0.5), 101, 0.1)
    half = Fraction(1, 2)
    oracle = disk_oracle([0, 1], Fraction(1, 10), (-half, 3 * half), (-half, half), 101)
    assert np.array_equal(g.mask, oracle)


def test_pseudospectrum_contains_zero_for_shift():
    M = element_matrix(Element.generator(2, 0), 4)
    g = pseudospectrum_grid(M, (-1, 1, -1, 1), 21, 0.3)
    assert g.mask[10, 10]
    assert g.sigma[10, 10] < 1e-14


def test_pseudospectrum_monotone_in_eps():
    M = element_matrix(catalog_element("I + 0.5*S0"), 16)
    re, im, sigma = sigma_min_grid(M, (-1, 2, -1.5, 1.5), 31)
    masks = [PseudospectrumGrid(re, im, sigma, e).mask for e in (0.01, 0.05, 0.1, 0.5)]
    for small, large in zip(masks, masks[1:]):
        assert np.all(small <= large)


def test_pseudospectrum_workers_deterministic():
    M = element_matrix(catalog_element("S0 + S1^*"), 8)
    a = sigma_min_grid(M, (-2, 2, -2, 2), 9)[2]
    b = sigma_min_grid(M, (-2, 2, -2, 2), 9, workers=3)[2]
    assert np.array_equal(a, b)


def test_pseudospectrum_input_errors():
    with pytest.raises(ValueError):
        pseudospectrum_grid(np.eye(2), (0, 1, 0, 1), 1, 0.1)
    with pytest.raises(ValueError):
        pseudospectrum_grid(np.eye(2), (0, 1, 0, 1), 5, 0.0)


def test_hausdorff_examples():
    assert hausdorff_distance([0], [1]) == 1
    assert hausdorff_distance([0, 1], [0]) == 1
    assert hausdorff_distance([1j, 2], [1j, 2]) == 0
    with pytest.raises(ValueError):
        hausdorff_distance([], [1])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31))
def test_hausdorff_metric_properties(seed):
    rng = np.random.default_rng(seed)
    A, B, C = (rng.normal(size=(rng.integers(1, 8), 2)) @ [1, 1j] for _ in range(3))

    def brute(X, Y):
        D = np.abs(np.asarray(X)[:, None] - np.asarray(Y)[None, :])
        return max(D.min(axis=1).max(), D.min(axis=0).max())

    assert np.isclose(hausdorff_distance(A, B), brute(A, B), rtol=1e-12)
    assert hausdorff_distance(A, B) == hausdorff_distance(B, A)
    assert hausdorff_distance(A, C) <= hausdorff_distance(A, B) + hausdorff_distance(B, C) + 1e-12


def test_classify_trend():
    assert classify_trend([1, 1, 1], 1e-8) == "stable"
    assert classify_trend([1, 0.5, 0.25, 0.125], 1e-8) == "inconclusive"
    assert classify_trend([1, 0, 0], 1e-8) == "unstable"
    assert classify_trend([0, 1, 0], 1e-8) == "inconclusive"
    with pytest.raises(ValueError):
        classify_trend([1, 1], 1e-8)


def test_stability_examples():
    sched = SizeSchedule(N=2, max_power=7)
    r = stability_verdict(Element.identity(2), schedule=sched)
    assert r.verdict == "stable" and np.allclose(r.sigma_min, 1, atol=1e-15)
    r = stability_verdict(catalog_element("I + 0.5*S0"), schedule=sched)
    assert r.verdict == "stable" and min(r.sigma_min) >= 0.5 - 1e-12
    r = stability_verdict(catalog_element("S0"), schedule=SizeSchedule(N=2, start=1, max_power=7))
    assert r.verdict == "unstable" and max(r.sigma_min) == 0


@pytest.mark.parametrize("expr", sorted(STABILITY_CATALOG))
def test_catalog_verdicts(expr):
    r = stability_verdict(catalog_element(expr), schedule=SizeSchedule(N=2, max_power=8), full=True)
    assert r.verdict == STABILITY_CATALOG[expr]
    if r.verdict == "unstable":
        # singular-value dichotomy: the three smallest values vanish at the largest size
        assert max(r.sigma_full[-1][:3]) < 10 * r.tol


def test_stability_needs_three_sizes():
    with pytest.raises(ValueError):
        stability_verdict(Element.identity(2), schedule=SizeSchedule(N=2, max_power=1))


def test_symbol_trend_matches_catalog():
    sched = SizeSchedule(N=2, max_power=8)
    assert symbol_sigma_min_trend(catalog_element("I + 0.5*S0"), sched).verdict == "stable"
    assert symbol_sigma_min_trend(catalog_element("S0"), sched).verdict != "stable"


def test_matched_shape():
    assert matched_symbol_shape(2, 1) == (1, 1)
    assert matched_symbol_shape(2, 8) == (2, 4)
    assert matched_symbol_shape(3, 81) == (9, 9)


def test_convergence_examples():
    sched = SizeSchedule(N=2, max_power=6)
    rows = spectral_convergence_report(Element.identity(2), sched)
    assert all(r.d_sigma2 == 0 for r in rows)
    p = catalog_element("S0 S0^*")
    rows = spectral_convergence_report(p, sched)
    assert all(r.d_sigma2 == 0 for r in rows if r.n >= 2)
    rows = spectral_convergence_report(catalog_element("S0 + S1^*"), sched, eps_list=[0.25], resolution=15)
    assert len(rows) == len(sched.values())
    assert all(np.isfinite(r.d_sigma2) and 0.25 in r.d_pseudo for r in rows)
