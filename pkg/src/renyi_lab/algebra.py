"""Finite-dimensional C*-algebras with faithful traces.

An algebra is a direct sum ``M_{n_1} + ... + M_{n_k}`` of full matrix blocks,
and a faithful trace on it is ``tau(A) = sum_i w_i Tr(A_i)`` with strictly
positive weights.  Elements are block-diagonal and stored block by block.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from numbers import Number
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from . import hermitian as hm
from .errors import DomainError, InvalidInput

DENSITY_TOL = 1e-10
HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class AlgebraSpec:
    """Block dimensions and trace weights of ``(A, tau)``."""

    blocks: tuple[int, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        blocks = tuple(int(n) for n in self.blocks)
        weights = tuple(float(w) for w in self.weights)
        if not blocks or len(blocks) != len(weights):
            raise InvalidInput("blocks and weights must be non-empty and of equal length")
        if any(n < 1 for n in blocks):
            raise InvalidInput(f"block dimensions must be >= 1, got {blocks}")
        if not all(math.isfinite(w) and w > 0 for w in weights):
            raise InvalidInput(f"trace weights must be finite and strictly positive, got {weights}")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def full(cls, n: int, weight: float = 1.0) -> "AlgebraSpec":
        """The single matrix block ``M_n``."""
        return cls((n,), (weight,))

    @classmethod
    def commutative(cls, weights: Sequence[float]) -> "AlgebraSpec":
        """``C^k`` with the given point weights."""
        return cls((1,) * len(weights), tuple(weights))

    @property
    def dim(self) -> int:
        """Size of the ambient matrix (sum of block dimensions)."""
        return sum(self.blocks)

    def is_commutative(self) -> bool:
        return all(n == 1 for n in self.blocks)

    def trace_of_identity(self) -> float:
        return sum(w * n for w, n in zip(self.weights, self.blocks))

    def identity(self) -> "Element":
        return Element(self, [np.eye(n) for n in self.blocks])

    def zeros(self) -> "Element":
        return Element(self, [np.zeros((n, n)) for n in self.blocks])

    def to_json(self) -> dict:
        return {"blocks": list(self.blocks), "weights": list(self.weights)}

    @classmethod
    def from_json(cls, data: dict) -> "AlgebraSpec":
        try:
            return cls(tuple(data["blocks"]), tuple(data["weights"]))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed algebra description: {exc}") from exc


def _as_block(m, n: int) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim == 0 and n == 1:
        a = a.reshape(1, 1)
    if a.shape != (n, n):
        raise InvalidInput(f"block has shape {a.shape}, expected {(n, n)}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput("block has non-finite entries")
    a = a.copy()
    a.setflags(write=False)
    return a


class Element:
    """A block-diagonal element of an algebra.

    Elements are immutable.  Arithmetic (``+``, ``-``, scalar ``*``, blockwise
    ``@``) returns plain :class:`Element` instances; eigendecompositions are
    computed lazily and cached.
    """

    __slots__ = ("spec", "blocks", "_eig")

    def __init__(self, spec: AlgebraSpec, blocks: Sequence):
        blocks = list(blocks)
        if len(blocks) != len(spec.blocks):
            raise InvalidInput(f"expected {len(spec.blocks)} blocks, got {len(blocks)}")
        self.spec = spec
        self.blocks = tuple(_as_block(b, n) for b, n in zip(blocks, spec.blocks))
        self._eig = None

    def __repr__(self) -> str:
        return f"{type(self).__name__}(blocks={self.spec.blocks}, weights={self.spec.weights})"

    # arithmetic

    def _check_same(self, other: "Element") -> None:
        if not isinstance(other, Element):
            raise InvalidInput(f"expected an Element, got {type(other).__name__}")
        if other.spec.blocks != self.spec.blocks:
            raise InvalidInput(f"block structure mismatch: {self.spec.blocks} vs {other.spec.blocks}")

    def __add__(self, other):
        if isinstance(other, Number):
            return Element(self.spec, [b + other * np.eye(len(b)) for b in self.blocks])
        self._check_same(other)
        return Element(self.spec, [x + y for x, y in zip(self.blocks, other.blocks)])

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rsub__(self, other):
        return (-1.0) * self + other

    def __neg__(self):
        return (-1.0) * self

    def __mul__(self, scalar):
        if not isinstance(scalar, Number):
            return NotImplemented
        return Element(self.spec, [scalar * b for b in self.blocks])

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __matmul__(self, other):
        self._check_same(other)
        return Element(self.spec, [x @ y for x, y in zip(self.blocks, other.blocks)])

    def adjoint(self) -> "Element":
        return Element(self.spec, [b.conj().T for b in self.blocks])

    def hermitian_part(self) -> "Element":
        return Element(self.spec, [hm.hermitize(b) for b in self.blocks])

    def max_abs(self) -> float:
        return max(float(np.max(np.abs(b))) for b in self.blocks)

    def distance(self, other: "Element") -> float:
        """Largest entrywise absolute difference."""
        self._check_same(other)
        return max(float(np.max(np.abs(x - y))) for x, y in zip(self.blocks, other.blocks))

    def norm(self) -> float:
        """C*-norm: the largest operator norm over blocks."""
        return max(hm.operator_norm(b) for b in self.blocks)

    def to_dense(self) -> np.ndarray:
        """The block-diagonal ambient matrix."""
        out = np.zeros((self.spec.dim, self.spec.dim), dtype=complex)
        k = 0
        for b in self.blocks:
            n = len(b)
            out[k : k + n, k : k + n] = b
            k += n
        return out

    # spectral calculus

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return all(
            float(np.max(np.abs(b - b.conj().T))) <= tol * max(1.0, float(np.max(np.abs(b))))
            for b in self.blocks
        )

    def eig(self) -> tuple[hm.EigenDecomposition, ...]:
        """Per-block eigendecompositions (Hermitian elements only)."""
        if self._eig is None:
            if not self.is_hermitian():
                raise InvalidInput("spectral calculus needs a Hermitian element")
            self._eig = tuple(hm.eig_hermitian(b) for b in self.blocks)
        return self._eig

    def spectrum(self) -> np.ndarray:
        """All eigenvalues, concatenated block by block (each block ascending)."""
        return np.concatenate([d.eigenvalues for d in self.eig()])

    def lambda_min(self) -> float:
        return min(d.lambda_min for d in self.eig())

    def lambda_max(self) -> float:
        return max(d.lambda_max for d in self.eig())

    def apply(self, f: hm.ScalarFunction) -> "Element":
        return Element(self.spec, [hm.apply_function(d, f) for d in self.eig()])

    def power(self, p: float) -> "Element":
        if p == 1:
            return self
        return self.apply(hm.power(p))

    def log(self) -> "Element":
        return self.apply(hm.LOG)

    def exp(self) -> "Element":
        return self.apply(hm.EXP)

    def inv(self) -> "Element":
        return self.apply(hm.power(-1))

    def sqrt(self) -> "Element":
        return self.apply(hm.power(0.5))


class PositiveElement(Element):
    """Element of the positive definite cone (Hermitian, invertible, positive).

    Construction Hermitizes the blocks and raises DomainError when some block
    has ``lambda_min <= 1e-12 * max(1, lambda_max)``.
    """

    __slots__ = ()

    def __init__(self, spec: AlgebraSpec, blocks: Sequence):
        super().__init__(spec, blocks)
        if not self.is_hermitian():
            raise DomainError("element is not Hermitian")
        self.blocks = tuple(_as_block(hm.hermitize(b), len(b)) for b in self.blocks)
        for d in self.eig():
            if not hm.is_positive_spectrum(d.eigenvalues):
                raise DomainError(
                    f"element is not positive definite (block lambda_min={d.lambda_min:.3e})"
                )


class DensityElement(PositiveElement):
    """Positive definite element with ``tau(A) = 1`` (to within 1e-10)."""

    __slots__ = ()

    def __init__(self, spec: AlgebraSpec, blocks: Sequence):
        super().__init__(spec, blocks)
        t = trace(self)
        if abs(t - 1.0) > DENSITY_TOL:
            raise DomainError(f"element has trace {t!r}, not 1")


def as_positive(a: Element) -> PositiveElement:
    """Return ``a`` as a PositiveElement, or raise DomainError."""
    if isinstance(a, PositiveElement):
        return a
    if not isinstance(a, Element):
        raise InvalidInput(f"expected an Element, got {type(a).__name__}")
    pos = PositiveElement(a.spec, a.blocks)
    return pos


def as_density(a: Element) -> DensityElement:
    if isinstance(a, DensityElement):
        return a
    return DensityElement(a.spec, as_positive(a).blocks)


def same_algebra(*elements: Element) -> AlgebraSpec:
    """Common spec of the arguments; InvalidInput if they differ."""
    spec = elements[0].spec
    for e in elements[1:]:
        if e.spec != spec:
            raise InvalidInput(f"elements live on different algebras: {spec} vs {e.spec}")
    return spec


def trace(a: Element):
    """``tau(A) = sum_i w_i Tr(A_i)``.

    The result is returned as a float when its imaginary part is below
    ``1e-13 * max(1, |tau(A)|)`` (the Hermitian case), else as a complex.
    """
    if not isinstance(a, Element):
        raise InvalidInput(f"expected an Element, got {type(a).__name__}")
    t = sum(w * complex(np.trace(b)) for w, b in zip(a.spec.weights, a.blocks))
    if abs(t.imag) <= 1e-13 * max(1.0, abs(t)):
        return float(t.real)
    return t


def is_positive_definite(a: Element, tol: float = HERMITIAN_TOL) -> bool:
    """Membership in the positive definite cone."""
    if not a.is_hermitian(tol):
        return False
    return all(hm.is_positive_spectrum(hm.eigvalsh(b)) for b in a.blocks)


def normalize_to_density(a: Element) -> DensityElement:
    """``A / tau(A)``."""
    pos = as_positive(a)
    t = trace(pos)
    if not isinstance(t, float) or t <= 0:
        raise InvalidInput(f"cannot normalize an element with trace {t!r}")
    return DensityElement(pos.spec, [b / t for b in pos.blocks])


def is_central(a: Element, tol: float = 1e-10) -> bool:
    """True iff every block is a multiple of the identity (within ``tol``)."""
    for b in a.blocks:
        n = len(b)
        lam = complex(np.trace(b)) / n
        if float(np.max(np.abs(b - lam * np.eye(n)))) > tol * max(1.0, abs(lam)):
            return False
    return True


def central_element(spec: AlgebraSpec, scalars: Sequence[float]) -> Element:
    """The central element acting as ``scalars[i] * I`` on block ``i``."""
    if len(scalars) != len(spec.blocks):
        raise InvalidInput(f"need {len(spec.blocks)} scalars, got {len(scalars)}")
    return Element(spec, [c * np.eye(n) for c, n in zip(scalars, spec.blocks)])


def commutator_norm(a: Element, b: Element) -> float:
    """Largest entry of ``AB - BA``."""
    return (a @ b - b @ a).max_abs()


def matrix_units(spec: AlgebraSpec) -> Iterator[tuple[int, int, int, Element]]:
    """Yield ``(block, k, l, E)`` for every matrix unit ``E = e_k e_l^*`` of every block."""
    for i, n in enumerate(spec.blocks):
        for k in range(n):
            for l in range(n):
                blocks = [np.zeros((m, m)) for m in spec.blocks]
                blocks[i] = blocks[i].copy()
                blocks[i][k, l] = 1.0
                yield i, k, l, Element(spec, blocks)


# sampling


def _rng(rng) -> np.random.Generator:
    return np.random.default_rng(rng)


def gaussian_hermitian(n: int, rng, scale: float = 1.0) -> np.ndarray:
    """``scale * (G + G*) / 2`` with ``G`` of iid standard complex normal entries."""
    rng = _rng(rng)
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    return scale * (g + g.conj().T) / 2


def random_unitary(n: int, rng) -> np.ndarray:
    """Haar-distributed unitary (QR of a complex Ginibre matrix, phases fixed)."""
    rng = _rng(rng)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hermitian(spec: AlgebraSpec, rng, scale: float = 1.0) -> Element:
    rng = _rng(rng)
    return Element(spec, [gaussian_hermitian(n, rng, scale) for n in spec.blocks])


def random_positive(spec: AlgebraSpec, rng, scale: float = 1.0) -> PositiveElement:
    """``exp(H)`` for a Gaussian Hermitian ``H``; positive definite by construction."""
    h = random_hermitian(spec, rng, scale)
    return PositiveElement(spec, h.exp().blocks)


def random_density(spec: AlgebraSpec, rng, scale: float = 1.0) -> DensityElement:
    return normalize_to_density(random_positive(spec, rng, scale))


# JSON


def element_to_json(a: Element) -> dict:
    return {
        "blocks": [
            [[[float(z.real), float(z.imag)] for z in row] for row in b] for b in a.blocks
        ]
    }


def element_from_json(spec: AlgebraSpec, data: dict) -> Element:
    try:
        blocks = [
            np.array([[complex(re, im) for re, im in row] for row in b], dtype=complex)
            for b in data["blocks"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed element description: {exc}") from exc
    return Element(spec, blocks)


def load_spec(path) -> AlgebraSpec:
    try:
        return AlgebraSpec.from_json(json.loads(Path(path).read_text()))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: {exc}") from exc


def load_element(spec: AlgebraSpec, path) -> Element:
    try:
        return element_from_json(spec, json.loads(Path(path).read_text()))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: {exc}") from exc


def save_json(data: dict, path) -> None:
    Path(path).write_text(json.dumps(data, indent=1) + "\n")
