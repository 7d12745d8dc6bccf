import math

import mpmath as mp
import numpy as np
import pytest

from renyi_lab import hermitian as hm
from renyi_lab.algebra import gaussian_hermitian
from renyi_lab.errors import DomainError, InvalidInput, NumericalFailure

from oracles import mp_fun, to_np


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_eig_matches_lapack(n):
    rng = np.random.default_rng(n)
    for _ in range(20):
        h = gaussian_hermitian(n, rng, scale=3.0)
        dec = hm.eig_hermitian(h)
        np.testing.assert_allclose(dec.eigenvalues, np.linalg.eigvalsh(h), atol=1e-12 * max(1, np.abs(h).max()))
        v = dec.eigenvectors
        assert np.abs(v.conj().T @ v - np.eye(n)).max() < 1e-13
        assert np.abs(dec.reconstruct() - h).max() < 1e-12 * max(1, np.abs(h).max())
        assert np.all(np.diff(dec.eigenvalues) >= 0)


def test_eig_degenerate_and_diagonal():
    dec = hm.eig_hermitian(np.eye(4) * 2.5)
    np.testing.assert_allclose(dec.eigenvalues, [2.5] * 4)
    d = np.diag([3.0, -1.0, 2.0])
    np.testing.assert_allclose(hm.eigvalsh(d), [-1.0, 2.0, 3.0])
    u = np.linalg.qr(np.arange(9).reshape(3, 3) + 1j * np.eye(3))[0]
    m = u @ np.diag([1.0, 1.0, 5.0]) @ u.conj().T
    np.testing.assert_allclose(hm.eigvalsh(m), [1.0, 1.0, 5.0], atol=1e-13)


def test_eig_pauli_and_complex_phase():
    np.testing.assert_allclose(hm.eigvalsh([[0, 1], [1, 0]]), [-1, 1], atol=1e-15)
    np.testing.assert_allclose(hm.eigvalsh([[0, -1j], [1j, 0]]), [-1, 1], atol=1e-15)


def test_eig_rejects_bad_input():
    with pytest.raises(InvalidInput):
        hm.eig_hermitian(np.ones((2, 3)))
    with pytest.raises(InvalidInput):
        hm.eig_hermitian([[1.0, np.nan], [np.nan, 1.0]])
    with pytest.raises(NumericalFailure):
        hm.eig_hermitian([[1.0, 0.5], [0.5, 2.0]], max_sweeps=0)


def test_hermitize_residual():
    m = np.array([[1.0, 2.0], [0.0, 1.0]])
    h, r = hm.hermitize(m, return_residual=True)
    np.testing.assert_allclose(h, [[1.0, 1.0], [1.0, 1.0]])
    assert r == pytest.approx(1.0)


@pytest.mark.parametrize(
    "f, mpf",
    [
        (hm.LOG, mp.log),
        (hm.EXP, mp.exp),
        (hm.power(0.5), mp.sqrt),
        (hm.power(-1.3), lambda x: mp.power(x, -1.3)),
        (hm.power(2), lambda x: x**2),
    ],
    ids=["log", "exp", "sqrt", "pow-1.3", "square"],
)
def test_matrix_function_against_extended_precision(f, mpf):
    rng = np.random.default_rng(7)
    for n in (2, 3, 5):
        for _ in range(5):
            h = gaussian_hermitian(n, rng)
            pd = hm.matrix_function(h, hm.EXP)
            ours = hm.matrix_function(pd, f)
            ref = to_np(mp_fun(pd, mpf))
            assert np.abs(ours - ref).max() < 1e-12 * max(1, np.abs(ref).max())


def test_matrix_function_output_is_hermitian():
    rng = np.random.default_rng(1)
    h = hm.matrix_function(gaussian_hermitian(4, rng), hm.EXP)
    out, resid = hm.matrix_function(h, hm.power(0.3), return_residual=True)
    assert np.array_equal(out, out.conj().T)
    assert resid < 1e-13


def test_domain_checks():
    psd = np.diag([1.0, 0.0])
    with pytest.raises(DomainError):
        hm.matrix_function(psd, hm.LOG)
    with pytest.raises(DomainError):
        hm.matrix_function(psd, hm.power(-0.5))
    np.testing.assert_allclose(hm.matrix_function(psd, hm.power(0.5)), psd)
    with pytest.raises(DomainError):
        hm.matrix_function(np.diag([1.0, -0.1]), hm.power(0.5))
    # integer powers are defined on the real line
    np.testing.assert_allclose(hm.matrix_function(np.diag([-2.0, 1.0]), hm.power(2)), np.diag([4.0, 1.0]))


def test_positivity_threshold_is_relative():
    assert hm.is_positive_spectrum(np.array([1e-10, 1.0]))
    assert not hm.is_positive_spectrum(np.array([1e-13, 1.0]))
    assert not hm.is_positive_spectrum(np.array([1e-6, 1e7]))


def test_power_function_metadata():
    assert hm.power(2).domain == "real"
    assert hm.power(0.5).domain == "nonnegative"
    assert hm.power(-1).domain == "positive"
    x = np.array([0.5, 2.0])
    np.testing.assert_allclose(hm.power(1.5).derivative(x), 1.5 * np.sqrt(x))
    np.testing.assert_allclose(hm.power(0).derivative(x), 0.0)


def test_loewner_order():
    a = np.diag([1.0, 2.0])
    assert hm.loewner_leq(a, a)
    assert hm.loewner_leq(a, a + np.ones((2, 2)))
    assert not hm.loewner_leq(a + np.ones((2, 2)), a)
    assert not hm.loewner_leq(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    # within tolerance
    assert hm.loewner_leq(a, a - 1e-14 * np.eye(2))
    with pytest.raises(InvalidInput):
        hm.loewner_leq(np.eye(2), np.eye(3))


def test_operator_norm():
    rng = np.random.default_rng(3)
    for _ in range(10):
        h = gaussian_hermitian(4, rng)
        assert hm.operator_norm(h) == pytest.approx(np.abs(np.linalg.eigvalsh(h)).max(), rel=1e-12)
        g = h + 1j * gaussian_hermitian(4, rng)
        assert hm.operator_norm(g) == pytest.approx(np.linalg.svd(g, compute_uv=False)[0], rel=1e-12)
    assert hm.operator_norm([[3.0]]) == 3.0
    assert math.isclose(hm.operator_norm(np.diag([-5.0, 2.0])), 5.0)
