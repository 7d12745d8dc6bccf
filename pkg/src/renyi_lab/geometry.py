"""Thompson metric, geometric mean and point reflections on the positive definite cone."""

from __future__ import annotations

import math

import numpy as np

from . import hermitian as hm
from .algebra import Element, PositiveElement, as_positive, same_algebra
from .errors import CrossCheckFailure

#: Allowed disagreement between the two Thompson distance formulas.
THOMPSON_CROSSCHECK_TOL = 1e-8


def _pair(a: Element, b: Element):
    same_algebra(a, b)
    return as_positive(a), as_positive(b)


def _congruence_spectra(a: PositiveElement, b: PositiveElement):
    # Per block eigenvalues of B^{-1/2} A B^{-1/2}.
    out = []
    for blk, db in zip(a.blocks, b.eig()):
        b_mhalf = hm.apply_function(db, hm.power(-0.5))
        out.append(hm.eigvalsh(b_mhalf @ blk @ b_mhalf))
    return out


def m_ratio(a: Element, b: Element) -> float:
    """``M(A/B) = inf{t > 0 : A <= tB}``, the largest eigenvalue of ``B^{-1/2} A B^{-1/2}``."""
    a, b = _pair(a, b)
    return max(float(lam[-1]) for lam in _congruence_spectra(a, b))


def thompson_distance(a: Element, b: Element, crosscheck: bool = True) -> float:
    """Thompson part metric ``log max{M(A/B), M(B/A)}``.

    With ``crosscheck`` the value is compared against
    ``||log(A^{-1/2} B A^{-1/2})||`` and CrossCheckFailure is raised when the two
    disagree by more than ``1e-8 * max(1, d)``.
    """
    a, b = _pair(a, b)
    d = math.log(max(m_ratio(a, b), m_ratio(b, a)))
    if crosscheck:
        d_log = thompson_distance_log(a, b)
        if abs(d - d_log) > THOMPSON_CROSSCHECK_TOL * max(1.0, d):
            raise CrossCheckFailure(f"Thompson formulas disagree: {d!r} vs {d_log!r}")
    return d


def thompson_distance_log(a: Element, b: Element) -> float:
    """``||log(A^{-1/2} B A^{-1/2})||``, the norm-of-log form of the Thompson metric."""
    a, b = _pair(a, b)
    return max(float(np.max(np.abs(np.log(lam)))) for lam in _congruence_spectra(b, a))


def geometric_mean(a: Element, b: Element) -> PositiveElement:
    """``A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}``."""
    a, b = _pair(a, b)
    blocks = []
    for da, blk in zip(a.eig(), b.blocks):
        a_half = hm.apply_function(da, hm.power(0.5))
        a_mhalf = hm.apply_function(da, hm.power(-0.5))
        mid = hm.matrix_function(a_mhalf @ blk @ a_mhalf, hm.power(0.5))
        blocks.append(hm.hermitize(a_half @ mid @ a_half))
    return PositiveElement(a.spec, blocks)


def point_reflection(a: Element, b: Element) -> PositiveElement:
    """``A <> B = A B^{-1} A``, the reflection of ``B`` through ``A``."""
    a, b = _pair(a, b)
    binv = b.inv()
    return PositiveElement(a.spec, [hm.hermitize(x @ y @ x) for x, y in zip(a.blocks, binv.blocks)])


def reflection_solve(a: Element, b: Element) -> PositiveElement:
    """The unique ``X`` with ``X <> A = B``, i.e. ``X A^{-1} X = B``; equals ``A # B``."""
    return geometric_mean(a, b)


def riccati_residual(x: Element, a: Element, b: Element) -> float:
    """``||X A^{-1} X - B||`` (operator norm), zero exactly when ``X = A # B``."""
    a = as_positive(a)
    return (x @ a.inv() @ x - b).norm()


def homothety_defect(a: Element, b: Element, gamma: float) -> float:
    """``||A^g B^g A^g|| - ||ABA||^g``.

    Vanishes identically on commutative algebras; a nonzero value shows that
    ``B -> B^g`` cannot be a Thompson homothety of ratio ``g``.
    """
    a, b = _pair(a, b)
    ag, bg = a.power(gamma), b.power(gamma)
    lhs = (ag @ bg @ ag).hermitian_part().norm()
    rhs = (a @ b @ a).hermitian_part().norm() ** gamma
    return lhs - rhs
