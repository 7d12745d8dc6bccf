"""Jordan *-isomorphisms, standard-form maps and invariance checks.

A Jordan *-isomorphism between block algebras is stored in reduced form: a
block permutation, one unitary per block and one transpose flag per block.
Source block ``i`` goes to target block ``perm[i]`` as ``U_i A_i U_i*`` or
``U_i A_i^T U_i*``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import geometry
from .algebra import (
    AlgebraSpec,
    DensityElement,
    Element,
    PositiveElement,
    as_positive,
    central_element,
    matrix_units,
    random_density,
    trace,
)
from .divergence import DivergenceKind, d_value, q_value
from .errors import InvalidInput
from .report import FAIL, PASS, WitnessReport
from .runtime import pmap, sample_rng

UNITARY_TOL = 1e-12
TRACE_COMPAT_TOL = 1e-12
THOMPSON = "thompson"


def _complex_matrix_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _complex_matrix_from_json(rows) -> np.ndarray:
    try:
        return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed matrix: {exc}") from exc


@dataclass(frozen=True, eq=False)
class JordanIso:
    """Block permutation plus per-block unitary conjugation and optional transpose.

    ``unitaries[i]`` acts on target block ``perm[i]`` and has that block's
    dimension.
    """

    source: AlgebraSpec
    target: AlgebraSpec
    perm: tuple[int, ...]
    unitaries: tuple[np.ndarray, ...]
    transpose: tuple[bool, ...]

    def __post_init__(self):
        k = len(self.source.blocks)
        perm = tuple(int(p) for p in self.perm)
        transpose = tuple(bool(t) for t in self.transpose)
        if len(self.target.blocks) != k or len(perm) != k or len(transpose) != k:
            raise InvalidInput("source, target, perm and transpose must have equal block counts")
        if sorted(perm) != list(range(k)):
            raise InvalidInput(f"{perm} is not a permutation of 0..{k - 1}")
        for i, j in enumerate(perm):
            if self.source.blocks[i] != self.target.blocks[j]:
                raise InvalidInput(
                    f"block {i} (dim {self.source.blocks[i]}) cannot map to block {j} "
                    f"(dim {self.target.blocks[j]})"
                )
        if len(self.unitaries) != k:
            raise InvalidInput(f"need {k} unitaries, got {len(self.unitaries)}")
        us = []
        for i, u in enumerate(self.unitaries):
            u = np.array(u, dtype=complex)
            n = self.source.blocks[i]
            if u.shape != (n, n):
                raise InvalidInput(f"unitary {i} has shape {u.shape}, expected {(n, n)}")
            if float(np.max(np.abs(u.conj().T @ u - np.eye(n)))) > UNITARY_TOL:
                raise InvalidInput(f"matrix {i} is not unitary within {UNITARY_TOL}")
            u.setflags(write=False)
            us.append(u)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "transpose", transpose)
        object.__setattr__(self, "unitaries", tuple(us))

    @classmethod
    def identity(cls, spec: AlgebraSpec) -> "JordanIso":
        k = len(spec.blocks)
        return cls(spec, spec, tuple(range(k)), tuple(np.eye(n) for n in spec.blocks), (False,) * k)

    @classmethod
    def conjugation(cls, spec: AlgebraSpec, unitaries: Sequence) -> "JordanIso":
        k = len(spec.blocks)
        return cls(spec, spec, tuple(range(k)), tuple(unitaries), (False,) * k)

    @classmethod
    def transpose_map(cls, spec: AlgebraSpec) -> "JordanIso":
        k = len(spec.blocks)
        return cls(spec, spec, tuple(range(k)), tuple(np.eye(n) for n in spec.blocks), (True,) * k)

    @classmethod
    def block_permutation(cls, source: AlgebraSpec, target: AlgebraSpec, perm: Sequence[int]) -> "JordanIso":
        return cls(
            source, target, tuple(perm), tuple(np.eye(n) for n in source.blocks), (False,) * len(perm)
        )

    @property
    def inverse_perm(self) -> tuple[int, ...]:
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return tuple(inv)

    def apply(self, a: Element) -> Element:
        return apply_jordan(self, a)

    __call__ = apply

    def inverse(self) -> "JordanIso":
        k = len(self.perm)
        unitaries = [None] * k
        for i, j in enumerate(self.perm):
            u = self.unitaries[i]
            # B = U A U*  =>  A = U* B U;  B = U A^T U*  =>  A = U^T B^T conj(U)
            unitaries[j] = u.T if self.transpose[i] else u.conj().T
        transpose = [False] * k
        for i, j in enumerate(self.perm):
            transpose[j] = self.transpose[i]
        return JordanIso(self.target, self.source, self.inverse_perm, tuple(unitaries), tuple(transpose))

    def to_json(self) -> dict:
        return {
            "perm": list(self.perm),
            "unitaries": [_complex_matrix_json(u) for u in self.unitaries],
            "transpose": list(self.transpose),
        }


def apply_jordan(jordan: JordanIso, a: Element) -> Element:
    """Image of ``a`` under ``jordan``; a plain Element on the target algebra."""
    if not isinstance(a, Element) or a.spec.blocks != jordan.source.blocks:
        raise InvalidInput("element does not live on the map's source algebra")
    out = [None] * len(a.blocks)
    for i, blk in enumerate(a.blocks):
        u = jordan.unitaries[i]
        x = blk.T if jordan.transpose[i] else blk
        out[jordan.perm[i]] = u @ x @ u.conj().T
    return Element(jordan.target, out)


@dataclass(frozen=True, eq=False)
class StandardFormMap:
    """``A -> C J(A)`` with ``C`` a positive central element of the target.

    ``central[j]`` is the scalar by which ``C`` acts on target block ``j``.
    """

    jordan: JordanIso
    central: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(x) for x in self.central)
        if len(c) != len(self.jordan.target.blocks):
            raise InvalidInput(f"need {len(self.jordan.target.blocks)} central scalars, got {len(c)}")
        if not all(math.isfinite(x) and x > 0 for x in c):
            raise InvalidInput(f"central scalars must be positive, got {c}")
        object.__setattr__(self, "central", c)

    @classmethod
    def trace_preserving(cls, jordan: JordanIso) -> "StandardFormMap":
        """The unique trace-compatible central multiplier, ``c_{pi(i)} = w_i / v_{pi(i)}``."""
        c = [0.0] * len(jordan.perm)
        for i, j in enumerate(jordan.perm):
            c[j] = jordan.source.weights[i] / jordan.target.weights[j]
        return cls(jordan, tuple(c))

    @property
    def source(self) -> AlgebraSpec:
        return self.jordan.source

    @property
    def target(self) -> AlgebraSpec:
        return self.jordan.target

    def central_element(self) -> Element:
        return central_element(self.target, self.central)

    @property
    def trace_compatible(self) -> bool:
        return closed_form_residual(self) <= TRACE_COMPAT_TOL

    def apply(self, a: Element) -> PositiveElement:
        return apply_standard_form(self, a)

    __call__ = apply

    def to_json(self) -> dict:
        return {**self.jordan.to_json(), "central": list(self.central), "target": self.target.to_json()}

    @classmethod
    def from_json(cls, data: dict, source: AlgebraSpec, target: AlgebraSpec | None = None) -> "StandardFormMap":
        try:
            if target is None:
                target = AlgebraSpec.from_json(data["target"]) if "target" in data else source
            jordan = JordanIso(
                source,
                target,
                tuple(data["perm"]),
                tuple(_complex_matrix_from_json(u) for u in data["unitaries"]),
                tuple(data["transpose"]),
            )
            return cls(jordan, tuple(data["central"]))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed map description: {exc}") from exc


def apply_standard_form(phi: StandardFormMap, a: Element) -> PositiveElement:
    """``C J(A)``; a density when ``phi`` is trace compatible and ``A`` is a density."""
    a = as_positive(a)
    image = apply_jordan(phi.jordan, a)
    blocks = [c * b for c, b in zip(phi.central, image.blocks)]
    if isinstance(a, DensityElement) and phi.trace_compatible:
        return DensityElement(phi.target, blocks)
    return PositiveElement(phi.target, blocks)


def closed_form_residual(phi: StandardFormMap) -> float:
    """``max_i |v_{pi(i)} c_{pi(i)} - w_i| / w_i``."""
    j = phi.jordan
    return max(
        abs(j.target.weights[p] * phi.central[p] - j.source.weights[i]) / j.source.weights[i]
        for i, p in enumerate(j.perm)
    )


def trace_constraint_residuals(jordan: JordanIso, c: Element) -> list[float]:
    """``|omega(C J(E)) - tau(E)|`` for every matrix unit ``E`` of the source."""
    if c.spec.blocks != jordan.target.blocks:
        raise InvalidInput("C must live on the target algebra")
    out = []
    for _, _, _, e in matrix_units(jordan.source):
        out.append(abs(trace(c @ apply_jordan(jordan, e)) - trace(e)))
    return out


@dataclass(frozen=True)
class TraceCompatReport:
    compatible: bool
    closed_form: bool
    closed_form_residual: float
    max_residual: float
    residuals: tuple[float, ...]


def check_trace_compat(phi: StandardFormMap, tol: float = TRACE_COMPAT_TOL) -> TraceCompatReport:
    """Check ``omega(C J(X)) = tau(X)`` by the weight condition and on matrix units.

    Both tests are run independently; ``compatible`` requires both.
    """
    cf = closed_form_residual(phi)
    res = trace_constraint_residuals(phi.jordan, phi.central_element())
    mx = max(res)
    closed = cf <= tol
    return TraceCompatReport(closed and mx <= tol, closed, cf, mx, tuple(res))


def extend_to_cone(phi_density: Callable[[DensityElement], Element], a: Element) -> PositiveElement:
    """``psi(A) = tau(A) phi(A / tau(A))``, the homogeneous extension of a density map."""
    a = as_positive(a)
    t = trace(a)
    if not isinstance(t, float) or t <= 0:
        raise InvalidInput(f"trace must be positive, got {t!r}")
    image = phi_density(DensityElement(a.spec, [b / t for b in a.blocks]))
    return PositiveElement(image.spec, [t * b for b in image.blocks])


@dataclass(frozen=True, eq=False)
class LogAffineMap:
    """``A -> exp(J(log A) + X0)`` with ``X0`` Hermitian on the target."""

    jordan: JordanIso
    shift: Element

    def __post_init__(self):
        if self.shift.spec.blocks != self.jordan.target.blocks:
            raise InvalidInput("shift must live on the target algebra")
        if not self.shift.is_hermitian():
            raise InvalidInput("shift must be Hermitian")

    def apply(self, a: Element) -> PositiveElement:
        return apply_log_affine(self, a)

    __call__ = apply


def apply_log_affine(m: LogAffineMap, a: Element) -> PositiveElement:
    a = as_positive(a)
    x = apply_jordan(m.jordan, a.log()) + m.shift
    return PositiveElement(m.jordan.target, x.hermitian_part().exp().blocks)


def _quantity(kind, a, b) -> float:
    if kind == THOMPSON:
        return geometry.thompson_distance(a, b)
    if kind.parametric:
        return q_value(kind, a, b)
    return d_value(kind, a, b)


def _kind_label(kind) -> str:
    return THOMPSON if kind == THOMPSON else kind.label


def _kind_json(kind):
    return THOMPSON if kind == THOMPSON else kind.to_json()


def verify_invariance(
    phi: StandardFormMap,
    kind: DivergenceKind | str,
    n_samples: int = 100,
    seed: int = 0,
    tol: float = 1e-9,
    scale: float = 1.0,
) -> WitnessReport:
    """Compare ``kind`` on sampled density pairs before and after ``phi``.

    Parametric kinds are compared through their Q-functionals, Umegaki and
    Belavkin-Staszewski through their values, and ``"thompson"`` through the
    Thompson distance.  The gap is the largest ``|lhs - rhs| / max(1, |lhs|)``;
    the verdict is PASS iff it stays within ``tol``.  On FAIL the worst pair
    is attached as witnesses.
    """
    spec = phi.source

    def one(i):
        rng = sample_rng(seed, i)
        a = random_density(spec, rng, scale)
        b = random_density(spec, rng, scale)
        lhs = _quantity(kind, a, b)
        rhs = _quantity(kind, phi(a), phi(b))
        return abs(lhs - rhs) / max(1.0, abs(lhs)), a, b, lhs, rhs

    worst = None
    for res in pmap(one, range(n_samples)):
        if worst is None or res[0] > worst[0]:
            worst = res
    gap = worst[0] if worst else 0.0
    verdict = PASS if gap <= tol else FAIL
    return WitnessReport(
        verdict=verdict,
        witnesses=[] if verdict == PASS else [worst[1], worst[2]],
        gap=gap,
        samples_used=n_samples,
        residuals=[] if worst is None else [worst[3], worst[4]],
        search={
            "type": "invariance",
            "kind": _kind_json(kind),
            "map": phi.to_json(),
            "algebra": spec.to_json(),
            "n_samples": n_samples,
            "seed": seed,
            "tol": tol,
            "scale": scale,
        },
        message=f"{_kind_label(kind)}: max relative difference {gap:.3e}",
    )
