"""Quantum Renyi relative entropies and their alpha -> 1 limits.

All quantities are evaluated block by block and combined with the trace
weights of the algebra.  ``q_value`` returns the trace functionals
(conventional, minimal, alpha-z, maximal, Mosonyi-Ogawa and the Mosonyi-Ogawa
functional divided by ``tau(A)``); ``d_value`` applies ``log(.) / (alpha - 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import hermitian as hm
from .algebra import Element, as_density, as_positive, same_algebra, trace
from .errors import NumericalFailure, ParameterError

#: Parametric quantities are refused within this distance of alpha = 1.
ALPHA_GUARD = 1e-6
#: Largest admissible ``|Im tr| / |Re tr|`` for trace values.
IMAG_TOL = 1e-10

CONVENTIONAL = "conventional"
MINIMAL = "minimal"
ALPHA_Z = "alpha_z"
MAXIMAL = "maximal"
MOSONYI_OGAWA = "mosonyi_ogawa"
NORMALIZED_MO = "normalized_mo"
UMEGAKI = "umegaki"
BELAVKIN_STASZEWSKI = "belavkin_staszewski"

PARAMETRIC = (CONVENTIONAL, MINIMAL, ALPHA_Z, MAXIMAL, MOSONYI_OGAWA, NORMALIZED_MO)
#: The five families whose pairwise comparison is the subject of distinctness checks.
FIVE_FAMILIES = (CONVENTIONAL, MINIMAL, ALPHA_Z, MAXIMAL, MOSONYI_OGAWA)
FAMILIES = PARAMETRIC + (UMEGAKI, BELAVKIN_STASZEWSKI)

_ALIASES = {
    "c": CONVENTIONAL,
    "petz": CONVENTIONAL,
    "standard": CONVENTIONAL,
    "min": MINIMAL,
    "sandwiched": MINIMAL,
    "alpha-z": ALPHA_Z,
    "alphaz": ALPHA_Z,
    "az": ALPHA_Z,
    "max": MAXIMAL,
    "mo": MOSONYI_OGAWA,
    "mosonyi-ogawa": MOSONYI_OGAWA,
    "normalized-mo": NORMALIZED_MO,
    "nmo": NORMALIZED_MO,
    "u": UMEGAKI,
    "bs": BELAVKIN_STASZEWSKI,
    "belavkin-staszewski": BELAVKIN_STASZEWSKI,
}


def canonical_family(name: str) -> str:
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    if key not in FAMILIES:
        raise ParameterError(f"unknown divergence family {name!r}; choose from {', '.join(FAMILIES)}")
    return key


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0:
        raise ParameterError(f"alpha must be a positive real number, got {alpha}")
    if abs(alpha - 1.0) < ALPHA_GUARD:
        raise ParameterError(
            f"alpha={alpha} is within {ALPHA_GUARD:g} of 1; "
            "use alpha_limit (CLI: `limit`) for the alpha -> 1 value"
        )
    return alpha


@dataclass(frozen=True)
class DivergenceKind:
    """A divergence family together with its parameters.

    Use the constructors (``DivergenceKind.minimal(2.0)`` etc.) or
    :func:`parse_kind`.  ``alpha`` is unused for Umegaki and
    Belavkin-Staszewski; ``z`` is only used by the alpha-z family.
    """

    family: str
    alpha: float | None = None
    z: float | None = None

    def __post_init__(self):
        family = canonical_family(self.family)
        object.__setattr__(self, "family", family)
        if family in PARAMETRIC:
            if self.alpha is None:
                raise ParameterError(f"{family} needs alpha")
            object.__setattr__(self, "alpha", check_alpha(self.alpha))
        else:
            object.__setattr__(self, "alpha", None)
        if family == ALPHA_Z:
            if self.z is None or not math.isfinite(self.z) or self.z <= 0:
                raise ParameterError(f"alpha_z needs z > 0, got {self.z}")
            object.__setattr__(self, "z", float(self.z))
        else:
            object.__setattr__(self, "z", None)

    @classmethod
    def conventional(cls, alpha):
        return cls(CONVENTIONAL, alpha)

    @classmethod
    def minimal(cls, alpha):
        return cls(MINIMAL, alpha)

    @classmethod
    def alpha_z(cls, alpha, z):
        return cls(ALPHA_Z, alpha, z)

    @classmethod
    def maximal(cls, alpha):
        return cls(MAXIMAL, alpha)

    @classmethod
    def mosonyi_ogawa(cls, alpha):
        return cls(MOSONYI_OGAWA, alpha)

    @classmethod
    def normalized_mo(cls, alpha):
        return cls(NORMALIZED_MO, alpha)

    @classmethod
    def umegaki(cls):
        return cls(UMEGAKI)

    @classmethod
    def belavkin_staszewski(cls):
        return cls(BELAVKIN_STASZEWSKI)

    @property
    def parametric(self) -> bool:
        return self.family in PARAMETRIC

    @property
    def theorem_applicable(self) -> bool:
        """False for the maximal family with alpha > 2 (outside the symmetry results)."""
        return not (self.family == MAXIMAL and self.alpha > 2)

    @property
    def label(self) -> str:
        if self.family == ALPHA_Z:
            return f"{self.family}(alpha={self.alpha:g},z={self.z:g})"
        if self.parametric:
            return f"{self.family}(alpha={self.alpha:g})"
        return self.family

    def to_json(self) -> dict:
        return {"family": self.family, "alpha": self.alpha, "z": self.z}

    @classmethod
    def from_json(cls, data: dict) -> "DivergenceKind":
        return cls(data["family"], data.get("alpha"), data.get("z"))


def parse_kind(name: str, alpha: float | None = None, z: float | None = None) -> DivergenceKind:
    family = canonical_family(name)
    return DivergenceKind(family, alpha if family in PARAMETRIC else None, z if family == ALPHA_Z else None)


def reduced_kind(kind: DivergenceKind, densities: bool = True) -> DivergenceKind:
    """Canonical representative of the quantity ``kind`` computes.

    Folds the exact identities between parameterizations: alpha-z with
    ``z = 1`` is conventional, alpha-z with ``z = alpha`` is minimal, and the
    maximal functional at ``alpha = 2`` equals the conventional one, because
    ``tau(A B^-1 A) = tau(A^2 B^-1)``.  With ``densities`` the normalized
    Mosonyi-Ogawa quantity folds onto the plain one.
    """
    if kind.family == ALPHA_Z:
        if kind.z == 1.0:
            return DivergenceKind.conventional(kind.alpha)
        if kind.z == kind.alpha:
            return DivergenceKind.minimal(kind.alpha)
    if kind.family == MAXIMAL and kind.alpha == 2.0:
        return DivergenceKind.conventional(2.0)
    if densities and kind.family == NORMALIZED_MO:
        return DivergenceKind.mosonyi_ogawa(kind.alpha)
    return kind


def same_quantity(k1: DivergenceKind, k2: DivergenceKind, densities: bool = True) -> bool:
    """True when ``k1`` and ``k2`` agree identically (on densities, by default)."""
    return reduced_kind(k1, densities) == reduced_kind(k2, densities)


# block kernels; each returns the unweighted block trace


def _pow(dec: hm.EigenDecomposition, p: float) -> np.ndarray:
    if p == 0:
        return np.eye(len(dec.eigenvalues), dtype=complex)
    return hm.apply_function(dec, hm.power(p))


def _tr_product(x: np.ndarray, y: np.ndarray) -> tuple[complex, float]:
    # Tr(XY) and the magnitude sum |X_kl Y_lk| that bounds its rounding error.
    prod = x * y.T
    return complex(prod.sum()), float(np.abs(prod).sum())


def _tr_power_of(m: np.ndarray, p: float) -> float:
    lam = hm.check_domain(hm.eigvalsh(m), hm.power(p))
    return float(np.sum(lam**p))


def _block_conventional(da, db, alpha, z):
    return _tr_product(_pow(da, alpha), _pow(db, 1 - alpha))


def _block_alpha_z(da, db, alpha, z):
    bs = _pow(db, (1 - alpha) / (2 * z))
    m = bs @ _pow(da, alpha / z) @ bs
    return _tr_power_of(m, z), None


def _block_minimal(da, db, alpha, z):
    return _block_alpha_z(da, db, alpha, alpha)


def _block_maximal(da, db, alpha, z):
    b_half = _pow(db, 0.5)
    b_mhalf = _pow(db, -0.5)
    a = da.reconstruct()
    inner = hm.apply_function(hm.eig_hermitian(b_mhalf @ a @ b_mhalf), hm.power(alpha))
    out = hm.hermitize(b_half @ inner @ b_half)
    return float(np.trace(out).real), None


def _block_mosonyi_ogawa(da, db, alpha, z):
    la = hm.apply_function(da, hm.LOG)
    lb = hm.apply_function(db, hm.LOG)
    lam = hm.eigvalsh(alpha * la + (1 - alpha) * lb)
    return float(np.sum(np.exp(lam))), None


_KERNELS = {
    CONVENTIONAL: _block_conventional,
    MINIMAL: _block_minimal,
    ALPHA_Z: _block_alpha_z,
    MAXIMAL: _block_maximal,
    MOSONYI_OGAWA: _block_mosonyi_ogawa,
    NORMALIZED_MO: _block_mosonyi_ogawa,
}


def _combine(spec, parts) -> float:
    """Weighted sum of block traces; complex parts are checked for a spurious imaginary part."""
    total = 0j
    magnitude = 0.0
    for w, (value, mag) in zip(spec.weights, parts):
        total += w * value
        magnitude += w * (abs(value) if mag is None else mag)
    if abs(total.imag) > IMAG_TOL * max(abs(total.real), magnitude):
        raise NumericalFailure(f"trace has a non-negligible imaginary part: {total!r}")
    return float(total.real)


def _positive_pair(a: Element, b: Element):
    spec = same_algebra(a, b)
    return spec, as_positive(a), as_positive(b)


def q_value(kind: DivergenceKind, a: Element, b: Element) -> float:
    """The trace functional ``Q(A || B)`` of a parametric family.

    ``A`` and ``B`` must be positive definite elements of the same algebra;
    densities are not required.

    Raises
    ------
    DomainError
        ``A`` or ``B`` is not positive definite.
    ParameterError
        ``kind`` is Umegaki / Belavkin-Staszewski.
    """
    if not kind.parametric:
        raise ParameterError(f"{kind.family} has no Q-functional; use d_value")
    spec, a, b = _positive_pair(a, b)
    kernel = _KERNELS[kind.family]
    parts = [kernel(da, db, kind.alpha, kind.z) for da, db in zip(a.eig(), b.eig())]
    q = _combine(spec, parts)
    if kind.family == NORMALIZED_MO:
        q /= trace(a)
    if not q > 0:
        raise NumericalFailure(f"{kind.label} evaluated to a non-positive value {q!r}")
    return q


def d_value(kind: DivergenceKind, a: Element, b: Element) -> float:
    """``log Q(A || B) / (alpha - 1)``, or the Umegaki / Belavkin-Staszewski entropy."""
    if kind.family == UMEGAKI:
        return umegaki(a, b)
    if kind.family == BELAVKIN_STASZEWSKI:
        return belavkin_staszewski(a, b)
    return math.log(q_value(kind, a, b)) / (kind.alpha - 1.0)


def umegaki(a: Element, b: Element) -> float:
    """``tau(A (log A - log B))``."""
    spec, a, b = _positive_pair(a, b)
    parts = []
    for da, db in zip(a.eig(), b.eig()):
        diff = hm.apply_function(da, hm.LOG) - hm.apply_function(db, hm.LOG)
        parts.append(_tr_product(da.reconstruct(), diff))
    return _combine(spec, parts)


def belavkin_staszewski(a: Element, b: Element) -> float:
    """``tau(A log(A^{1/2} B^{-1} A^{1/2}))``."""
    spec, a, b = _positive_pair(a, b)
    parts = []
    for da, db in zip(a.eig(), b.eig()):
        a_half = _pow(da, 0.5)
        inner = hm.hermitize(a_half @ _pow(db, -1) @ a_half)
        parts.append(_tr_product(da.reconstruct(), hm.matrix_function(inner, hm.LOG)))
    return _combine(spec, parts)


def classical_d_value(alpha: float, a: Element, b: Element) -> float:
    """``log(sum_i w_i p_i^alpha q_i^(1-alpha)) / (alpha - 1)`` on a commutative algebra."""
    spec = same_algebra(a, b)
    if not spec.is_commutative():
        raise ParameterError("classical formula needs a commutative algebra")
    alpha = check_alpha(alpha)
    p = np.array([blk[0, 0].real for blk in as_positive(a).blocks])
    q = np.array([blk[0, 0].real for blk in as_positive(b).blocks])
    w = np.array(spec.weights)
    return math.log(float(np.sum(w * p**alpha * q ** (1 - alpha)))) / (alpha - 1)


# alpha -> 1


@dataclass
class LimitEstimate:
    """Extrapolated alpha -> 1 limit together with the raw sequence and its target."""

    family: str
    z: float | None
    alphas: list[float]
    values: list[float]
    estimate: float
    target_name: str
    target: float
    tableau: list[list[float]] = field(default_factory=list, repr=False)

    @property
    def error(self) -> float:
        return abs(self.estimate - self.target)


def richardson(hs: Sequence[float], values: Sequence[float]) -> tuple[float, list[list[float]]]:
    """Polynomial (Neville) extrapolation of ``values(h)`` to ``h = 0``."""
    n = len(hs)
    table = [list(map(float, values))]
    for m in range(1, n):
        prev = table[-1]
        row = []
        for i in range(n - m):
            h_i, h_j = hs[i], hs[i + m]
            row.append((h_i * prev[i + 1] - h_j * prev[i]) / (h_i - h_j))
        table.append(row)
    return table[-1][0], table


def check_schedule(schedule: Sequence[float]) -> list[float]:
    alphas = [float(a) for a in schedule]
    if not alphas:
        raise ParameterError("limit schedule is empty")
    for a in alphas:
        check_alpha(a)
    sides = {a > 1 for a in alphas}
    dist = [abs(a - 1) for a in alphas]
    if len(sides) != 1 or any(d2 >= d1 for d1, d2 in zip(dist, dist[1:])):
        raise ParameterError("limit schedule must approach 1 strictly monotonically from one side")
    return alphas


def alpha_limit(
    family: str,
    a: Element,
    b: Element,
    schedule: Sequence[float] = (1.1, 1.01, 1.001),
    z: float | None = None,
) -> LimitEstimate:
    """Richardson-extrapolated ``lim_{alpha -> 1} D_alpha(A || B)``.

    The conventional, minimal, alpha-z and Mosonyi-Ogawa families are compared
    against the Umegaki entropy, the maximal family against the
    Belavkin-Staszewski entropy.  Except for ``normalized_mo`` (whose target
    is ``S_U(A||B) / tau(A)``), ``A`` and ``B`` must be densities.
    """
    family = canonical_family(family)
    if family not in PARAMETRIC:
        raise ParameterError(f"{family} is not a parametric family")
    alphas = check_schedule(schedule)
    if family != NORMALIZED_MO:
        a, b = as_density(a), as_density(b)
    values = [d_value(DivergenceKind(family, al, z), a, b) for al in alphas]
    estimate, table = richardson([al - 1 for al in alphas], values)
    if family == MAXIMAL:
        target_name, target = BELAVKIN_STASZEWSKI, belavkin_staszewski(a, b)
    else:
        target_name, target = UMEGAKI, umegaki(a, b)
        if family == NORMALIZED_MO:
            target /= trace(as_positive(a))
    return LimitEstimate(family, z if family == ALPHA_Z else None, alphas, values, estimate,
                         target_name, target, table)

