"""Dense Hermitian kernel: Jacobi eigensolver, matrix functions, Loewner order.

Every routine works on plain ``numpy`` arrays of shape ``(n, n)``.  Outputs
of matrix functions are Hermitized; the size of the anti-Hermitian part that
was discarded can be requested for diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, InvalidInput, NumericalFailure

#: Relative threshold below which an eigenvalue is not considered positive.
PD_TOL = 1e-12
#: Off-diagonal Frobenius mass (relative) at which Jacobi sweeps stop.
JACOBI_TOL = 1e-14


def as_square(m, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a finite complex square array, or raise InvalidInput."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidInput(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{name} has non-finite entries")
    return a


def hermitize(m, return_residual: bool = False):
    """Symmetrize ``m`` as ``(m + m*) / 2``.

    With ``return_residual=True`` also returns ``max |m - m*| / 2``, the size
    of the discarded anti-Hermitian part.
    """
    a = as_square(m)
    h = (a + a.conj().T) / 2
    if return_residual:
        return h, float(np.max(np.abs(a - h)))
    return h


class EigenDecomposition(NamedTuple):
    """Eigenvalues in ascending order and the unitary matrix of eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self, values=None) -> np.ndarray:
        """Return ``V diag(values) V*`` (``values`` defaults to the eigenvalues)."""
        lam = self.eigenvalues if values is None else values
        v = self.eigenvectors
        return (v * lam) @ v.conj().T

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])


_PAIRS: dict[int, list[tuple[int, int]]] = {}


def _rotate(a: list, v: list, n: int, p: int, q: int) -> None:
    # Annihilate a[p][q] in place with a complex Givens-Jacobi rotation.
    apq = a[p][q]
    mag = abs(apq)
    if mag == 0.0:
        return
    app = a[p][p].real
    aqq = a[q][q].real
    theta = (aqq - app) / (2.0 * mag)
    if abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    phase = apq / mag
    sc = s * phase.conjugate()
    cc = c * phase.conjugate()
    for row in a:
        x, y = row[p], row[q]
        row[p] = c * x - sc * y
        row[q] = s * x + cc * y
    rp, rq = a[p], a[q]
    sp = s * phase
    cp = c * phase
    for k in range(n):
        x, y = rp[k], rq[k]
        rp[k] = c * x - sp * y
        rq[k] = s * x + cp * y
    rp[q] = 0j
    rq[p] = 0j
    rp[p] = complex(app - t * mag)
    rq[q] = complex(aqq + t * mag)
    for row in v:
        x, y = row[p], row[q]
        row[p] = c * x - sc * y
        row[q] = s * x + cc * y


def eig_hermitian(m, max_sweeps: int | None = None) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    The input is Hermitized first.  Sweeps stop once the Frobenius norm of the
    off-diagonal part drops below ``1e-14 * ||M||_F``; the default budget is
    ``30 * n**2`` sweeps.

    Raises
    ------
    InvalidInput
        Non-square or non-finite input.
    NumericalFailure
        The sweep budget was exhausted.
    """
    h = hermitize(m)
    n = h.shape[0]
    if n == 1:
        return EigenDecomposition(h.real[0].copy(), np.ones((1, 1), dtype=complex))
    a = h.tolist()
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    budget = 30 * n * n if max_sweeps is None else max_sweeps
    threshold = JACOBI_TOL * math.sqrt(sum(abs(x) ** 2 for row in a for x in row))
    pairs = _PAIRS.get(n) or _PAIRS.setdefault(
        n, [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    )
    for _ in range(budget + 1):
        off = math.sqrt(2.0 * sum(abs(a[p][q]) ** 2 for p, q in pairs))
        if off <= threshold:
            break
        for p, q in pairs:
            _rotate(a, v, n, p, q)
    else:
        raise NumericalFailure(f"Jacobi did not converge within {budget} sweeps")
    lam = [a[k][k].real for k in range(n)]
    order = sorted(range(n), key=lam.__getitem__)
    return EigenDecomposition(
        np.array([lam[k] for k in order]),
        np.array([[row[k] for k in order] for row in v], dtype=complex),
    )


def eigvalsh(m) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix."""
    return eig_hermitian(m).eigenvalues


@dataclass(frozen=True)
class ScalarFunction:
    """A real function applied through the spectral calculus.

    ``domain`` is one of ``"real"``, ``"nonnegative"`` or ``"positive"`` and is
    checked against the spectrum before the function is applied.
    """

    name: str
    value: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray] | None = None
    domain: str = "real"

    def __call__(self, x):
        return self.value(np.asarray(x, dtype=float))


def power(p: float) -> ScalarFunction:
    """``t -> t**p``.  Integer ``p >= 0`` is defined on the whole real line."""
    p = float(p)
    if p >= 0 and p.is_integer():
        k = int(p)
        domain = "real"
        value = lambda t: t**k  # noqa: E731
        deriv = (lambda t: k * t ** (k - 1)) if k > 0 else (lambda t: np.zeros_like(t))
    else:
        domain = "nonnegative" if p > 0 else "positive"
        value = lambda t: np.power(t, p)  # noqa: E731
        deriv = lambda t: p * np.power(t, p - 1)  # noqa: E731
    return ScalarFunction(f"power({p:g})", value, deriv, domain)


LOG = ScalarFunction("log", np.log, lambda t: 1.0 / t, "positive")
EXP = ScalarFunction("exp", np.exp, np.exp, "real")
IDENTITY = ScalarFunction("id", lambda t: t, lambda t: np.ones_like(t), "real")


def positive_threshold(eigenvalues: np.ndarray) -> float:
    """Smallest value an eigenvalue must exceed to count as positive."""
    return PD_TOL * max(1.0, float(np.max(eigenvalues)))


def is_positive_spectrum(eigenvalues: np.ndarray) -> bool:
    return bool(eigenvalues[0] > positive_threshold(eigenvalues))


def check_domain(eigenvalues: np.ndarray, f: ScalarFunction) -> np.ndarray:
    """Validate the spectrum against ``f.domain``; returns values to apply ``f`` to."""
    if f.domain == "real":
        return eigenvalues
    thr = positive_threshold(eigenvalues)
    if f.domain == "positive":
        if eigenvalues[0] <= thr:
            raise DomainError(
                f"{f.name} requires a positive definite argument (lambda_min={eigenvalues[0]:.3e})"
            )
        return eigenvalues
    if f.domain == "nonnegative":
        if eigenvalues[0] < -thr:
            raise DomainError(
                f"{f.name} requires a positive semidefinite argument (lambda_min={eigenvalues[0]:.3e})"
            )
        return np.maximum(eigenvalues, 0.0)
    raise ValueError(f"unknown domain {f.domain!r}")


def apply_function(dec: EigenDecomposition, f: ScalarFunction, return_residual: bool = False):
    """``f`` applied to a matrix given by its eigendecomposition."""
    lam = check_domain(dec.eigenvalues, f)
    raw = dec.reconstruct(f(lam))
    return hermitize(raw, return_residual=return_residual)


def matrix_function(m, f: ScalarFunction, return_residual: bool = False):
    """``f(M) = V f(Lambda) V*`` for Hermitian ``M``.

    Raises DomainError when the spectrum leaves the domain of ``f`` (log and
    negative powers need ``lambda > 1e-12 * max(1, lambda_max)``).
    """
    return apply_function(eig_hermitian(m), f, return_residual=return_residual)


def loewner_leq(a, b, tol: float = 1e-12) -> bool:
    """``A <= B`` in the Loewner order, up to ``tol * max(1, ||A||, ||B||)``."""
    a = as_square(a, "A")
    b = as_square(b, "B")
    if a.shape != b.shape:
        raise InvalidInput(f"dimension mismatch: {a.shape} vs {b.shape}")
    scale = max(1.0, operator_norm(a), operator_norm(b))
    return eigvalsh(b - a)[0] >= -tol * scale


def operator_norm(m) -> float:
    """Largest singular value.  Hermitian input goes through the Jacobi solver."""
    a = as_square(m)
    if np.array_equal(a, a.conj().T):
        lam = eigvalsh(a)
        return float(max(abs(lam[0]), abs(lam[-1])))
    return float(np.linalg.norm(a, 2))
