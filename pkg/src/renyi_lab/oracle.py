"""Numerical checks of trace inequalities, order characterizations and centrality.

Searches return a :class:`~renyi_lab.report.WitnessReport`.  Every sample
draws from its own generator ``default_rng([seed, index])``, so a report is a
function of its parameters alone and can be replayed with :func:`replay`.
Witnesses are always re-evaluated before being reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import hermitian as hm
from .algebra import (
    AlgebraSpec,
    Element,
    PositiveElement,
    as_positive,
    central_element,
    element_from_json,
    element_to_json,
    is_central,
    random_density,
    random_hermitian,
    random_positive,
    trace,
)
from .divergence import DivergenceKind, belavkin_staszewski, d_value, q_value, umegaki
from .errors import CrossCheckFailure, InvalidInput, NumericalFailure, ParameterError
from .report import NO_WITNESS, WITNESS_FOUND, WitnessReport
from .runtime import pmap, sample_rng
from .symmetry import JordanIso, StandardFormMap, apply_jordan, trace_constraint_residuals

#: Scales for ``X = exp(scale * H)``; cycled over the sample index.
WITNESS_SCALES = (0.25, 0.5, 1.0, 2.0, 4.0)
#: Scales for sampled density pairs.
DENSITY_SCALES = (0.5, 1.0, 2.0)
#: A trace inequality counts as violated beyond ``1e-9 * max(1, |lhs|, |rhs|)``.
VIOLATION_TOL = 1e-9
#: Stored witness residuals must be reproduced to this accuracy.
REPLAY_TOL = 1e-12
#: Centrality least-squares residual threshold.
LSTSQ_TOL = 1e-10


# derivative formula


@dataclass(frozen=True)
class DerivativeCheck:
    lhs: float
    rhs: float
    abs_error: float
    rel_error: float
    h: float


def _trace_fn(f: hm.ScalarFunction, x: Element) -> float:
    return trace(x.hermitian_part().apply(f)).real


def check_derivative_formula(
    f: hm.ScalarFunction, x: Element, y: Element, t: float = 0.0, h: float = 1e-5
) -> DerivativeCheck:
    """Central difference of ``s -> tau(f(X + sY))`` at ``t`` against ``tau(f'(X + tY) Y)``.

    ``rel_error`` is ``|lhs - rhs| / |rhs|`` (the absolute error when
    ``rhs == 0``).

    Raises
    ------
    DomainError
        ``X + sY`` leaves the domain of ``f`` for some ``s`` in ``[t-h, t+h]``.
    """
    if f.derivative is None:
        raise InvalidInput(f"{f.name} has no derivative")
    if not (x.is_hermitian() and y.is_hermitian()):
        raise InvalidInput("X and Y must be Hermitian")
    lhs = (_trace_fn(f, x + y * (t + h)) - _trace_fn(f, x + y * (t - h))) / (2 * h)
    fprime = hm.ScalarFunction(f"{f.name}'", f.derivative, None, f.domain)
    rhs = trace((x + y * t).hermitian_part().apply(fprime) @ y).real
    err = abs(lhs - rhs)
    return DerivativeCheck(lhs, rhs, err, err / abs(rhs) if rhs else err, h)


def sample_derivative_case(spec: AlgebraSpec, rng) -> tuple[PositiveElement, Element, float]:
    """Random ``(X, Y, t)`` with ``X + sY >= lambda_min(X) / 2`` for ``|s| <= 1``."""
    rng = np.random.default_rng(rng)
    x = random_positive(spec, rng)
    h = random_hermitian(spec, rng)
    y = h * (0.5 * x.lambda_min() / h.norm())
    return x, y, float(rng.uniform(-0.5, 0.5))


# order characterizations


@dataclass(frozen=True)
class Characterization:
    """A trace-inequality characterization of an order relation between A and B.

    ``violation(A, B, X)`` returns ``lhs - rhs`` of the inequality that holds
    for every admissible ``X`` exactly when the relation holds; a positive
    value beyond tolerance is a witness against the relation.
    """

    name: str
    alpha: float | None = None

    def __post_init__(self):
        if self.name not in _CHARACTERIZATIONS:
            raise ParameterError(f"unknown characterization {self.name!r}")
        if self.name in ("power_trace", "max_quantity"):
            if self.alpha is None or not math.isfinite(self.alpha) or self.alpha <= 0:
                raise ParameterError(f"{self.name} needs alpha > 0")
            if self.name == "max_quantity" and self.alpha == 1:
                raise ParameterError("max_quantity needs alpha != 1")
            object.__setattr__(self, "alpha", float(self.alpha))
        else:
            object.__setattr__(self, "alpha", None)

    @property
    def label(self) -> str:
        return self.name if self.alpha is None else f"{self.name}({self.alpha:g})"

    @property
    def asserted(self) -> bool:
        """Whether the equivalence is a theorem; max_quantity with alpha > 2 is not."""
        return not (self.name == "max_quantity" and self.alpha > 2)

    def relation_holds(self, a: Element, b: Element) -> bool:
        if self.name == "umegaki_order":
            return hm_loewner(as_positive(a).log(), as_positive(b).log())
        return hm_loewner(a, b)

    def violation(self, a: Element, b: Element, x: Element) -> tuple[float, float]:
        """``(lhs - rhs, scale)`` for the inequality ``lhs <= rhs``."""
        lhs, rhs = _CHARACTERIZATIONS[self.name](self.alpha, a, b, x)
        return lhs - rhs, max(1.0, abs(lhs), abs(rhs))

    def to_json(self) -> dict:
        return {"name": self.name, "alpha": self.alpha}

    @classmethod
    def from_json(cls, data: dict) -> "Characterization":
        return cls(data["name"], data.get("alpha"))


def PowerTrace(alpha: float) -> Characterization:  # noqa: N802
    """``A <= B`` iff ``tau((XAX)^alpha) <= tau((XBX)^alpha)`` for all ``X > 0``."""
    return Characterization("power_trace", alpha)


def ExpTrace() -> Characterization:  # noqa: N802
    """``T <= S`` iff ``tau(exp(T+X)) <= tau(exp(S+X))`` for all Hermitian ``X``."""
    return Characterization("exp_trace")


def MaxQuantity(alpha: float) -> Characterization:  # noqa: N802
    """Order through the maximal Q-functional.

    ``alpha < 1``: ``A <= B`` iff ``Q(A||X) <= Q(B||X)`` for all ``X > 0``.
    ``alpha > 1``: ``A <= B`` iff ``Q(X||B) <= Q(X||A)``; asserted for
    ``alpha <= 2`` only, reported without assertion beyond.
    """
    return Characterization("max_quantity", alpha)


def UmegakiOrder() -> Characterization:  # noqa: N802
    """``log A <= log B`` iff ``S(X||B) <= S(X||A)`` (Umegaki) for all densities ``X``."""
    return Characterization("umegaki_order")


def BSOrder() -> Characterization:  # noqa: N802
    """``A <= B`` iff ``S_BS(X||B) <= S_BS(X||A)`` for all ``X > 0``."""
    return Characterization("bs_order")


def hm_loewner(a: Element, b: Element, tol: float = 1e-12) -> bool:
    """Blockwise Loewner order ``A <= B``."""
    return all(hm.loewner_leq(x, y, tol) for x, y in zip(a.blocks, b.blocks))


def _power_trace(alpha, a, b, x):
    def side(m):
        return trace((x @ m @ x).hermitian_part().power(alpha)).real

    return side(a), side(b)


def _exp_trace(alpha, a, b, x):
    return trace((a + x).hermitian_part().exp()).real, trace((b + x).hermitian_part().exp()).real


def _max_quantity(alpha, a, b, x):
    kind = DivergenceKind.maximal(alpha)
    if alpha < 1:
        return q_value(kind, a, x), q_value(kind, b, x)
    return q_value(kind, x, b), q_value(kind, x, a)


def _umegaki_order(alpha, a, b, x):
    return umegaki(x, b), umegaki(x, a)


def _bs_order(alpha, a, b, x):
    return belavkin_staszewski(x, b), belavkin_staszewski(x, a)


_CHARACTERIZATIONS = {
    "power_trace": _power_trace,
    "exp_trace": _exp_trace,
    "max_quantity": _max_quantity,
    "umegaki_order": _umegaki_order,
    "bs_order": _bs_order,
}


def _sample_x(spec: AlgebraSpec, seed: int, i: int, hermitian: bool = False) -> Element:
    # sample 0 is the identity (zero in the Hermitian case); the rest are
    # exp(scale * H), or scale * H itself when X only needs to be Hermitian
    if i == 0:
        return spec.zeros() if hermitian else PositiveElement(spec, spec.identity().blocks)
    scale = WITNESS_SCALES[i % len(WITNESS_SCALES)]
    h = random_hermitian(spec, sample_rng(seed, i), scale)
    return h if hermitian else PositiveElement(spec, h.exp().blocks)


def _pair_json(a: Element, b: Element) -> dict:
    return {"algebra": a.spec.to_json(), "A": element_to_json(a), "B": element_to_json(b)}


def _pair_from_json(search: dict) -> tuple[Element, Element]:
    spec = AlgebraSpec.from_json(search["algebra"])
    return element_from_json(spec, search["A"]), element_from_json(spec, search["B"])


def sample_order_pair(
    spec: AlgebraSpec, rng, comparable: bool, characterization: Characterization | None = None,
    margin: float = 0.05, max_tries: int = 10_000,
) -> tuple[PositiveElement, PositiveElement]:
    """A positive definite pair for testing an order characterization.

    Comparable pairs are ``B = A + P`` with ``P`` positive semidefinite of
    random rank (``log B = log A + P`` for the Umegaki order).  Incomparable
    pairs are rejection sampled so that the relevant difference has
    eigenvalues below ``-margin`` and above ``margin``.
    """
    rng = np.random.default_rng(rng)
    log_order = characterization is not None and characterization.name == "umegaki_order"
    if comparable:
        a = random_positive(spec, rng)
        blocks = []
        for n in spec.blocks:
            g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            g[:, rng.integers(1, n + 1):] = 0
            blocks.append(0.5 * g @ g.conj().T)
        p = Element(spec, blocks)
        if log_order:
            return a, PositiveElement(spec, (a.log() + p).hermitian_part().exp().blocks)
        return a, PositiveElement(spec, (a + p).hermitian_part().blocks)
    for _ in range(max_tries):
        a, b = random_positive(spec, rng), random_positive(spec, rng)
        diff = b.log() - a.log() if log_order else b - a
        lam = diff.hermitian_part().spectrum()
        if lam.min() < -margin and lam.max() > margin:
            return a, b
    raise NumericalFailure(f"no incomparable pair found in {max_tries} draws")


def order_witness_search(
    a: Element,
    b: Element,
    characterization: Characterization,
    n_samples: int = 10_000,
    seed: int = 0,
) -> WitnessReport:
    """Sample ``X`` looking for a violation of ``characterization`` on ``(A, B)``.

    When the order relation holds, every sample must satisfy the inequality;
    a violation raises CrossCheckFailure (unless the characterization is not
    asserted, as for max_quantity with alpha > 2, in which case it is simply
    reported).  When the relation fails the search stops at the first
    violating sample.
    """
    if a.spec.blocks != b.spec.blocks:
        raise InvalidInput("A and B live on different algebras")
    if characterization.name != "exp_trace":
        a, b = as_positive(a), as_positive(b)
    elif not (a.is_hermitian() and b.is_hermitian()):
        raise InvalidInput("exp_trace needs Hermitian A and B")
    holds = characterization.relation_holds(a, b)
    spec = a.spec

    hermitian = characterization.name == "exp_trace"

    def one(i):
        x = _sample_x(spec, seed, i, hermitian)
        v, scale = characterization.violation(a, b, x)
        return i, x, v, scale

    witness = None
    worst = -math.inf
    used = 0
    for i, x, v, scale in pmap(one, range(n_samples)):
        used = i + 1
        worst = max(worst, v / scale)
        if v > VIOLATION_TOL * scale:
            if holds and characterization.asserted:
                raise CrossCheckFailure(
                    f"{characterization.label}: A <= B holds but sample {i} violates "
                    f"the trace inequality by {v:.3e}"
                )
            witness = (x, v)
            break
    search = {
        "type": "order",
        "characterization": characterization.to_json(),
        **_pair_json(a, b),
        "n_samples": n_samples,
        "seed": seed,
        "order_holds": holds,
    }
    if witness is None:
        return WitnessReport(NO_WITNESS, [], max(worst, 0.0), used, [], search,
                             f"{characterization.label}: no violation in {used} samples")
    x, v = witness
    report = WitnessReport(WITNESS_FOUND, [x], v, used, [v], search,
                           f"{characterization.label}: violation {v:.3e} at sample {used - 1}")
    _require_verified(report)
    return report


# distinctness


def _pair_sample(spec: AlgebraSpec, seed: int, i: int):
    rng = sample_rng(seed, i)
    scale = DENSITY_SCALES[i % len(DENSITY_SCALES)]
    return random_density(spec, rng, scale), random_density(spec, rng, scale)


def distinctness_search(
    spec: AlgebraSpec,
    kind1: DivergenceKind,
    kind2: DivergenceKind,
    n_samples: int = 1000,
    seed: int = 0,
    threshold: float = 1e-9,
) -> WitnessReport:
    """Largest ``|D1(A||B) - D2(A||B)|`` over sampled density pairs.

    WITNESS_FOUND (with the maximizing pair) when the gap exceeds
    ``threshold``, NO_WITNESS otherwise.
    """
    if kind1 == kind2:
        raise ParameterError(f"kinds must differ, got {kind1.label} twice")

    def one(i):
        a, b = _pair_sample(spec, seed, i)
        d1, d2 = d_value(kind1, a, b), d_value(kind2, a, b)
        return abs(d1 - d2), a, b, d1, d2

    best = None
    for res in pmap(one, range(n_samples)):
        if best is None or res[0] > best[0]:
            best = res
    gap, a, b, d1, d2 = best
    found = gap > threshold
    report = WitnessReport(
        WITNESS_FOUND if found else NO_WITNESS,
        [a, b] if found else [],
        gap,
        n_samples,
        [d1, d2],
        {
            "type": "distinct",
            "algebra": spec.to_json(),
            "kind1": kind1.to_json(),
            "kind2": kind2.to_json(),
            "n_samples": n_samples,
            "seed": seed,
            "threshold": threshold,
        },
        f"{kind1.label} vs {kind2.label}: max gap {gap:.3e}",
    )
    if found:
        _require_verified(report)
    return report


# power order


def _power_gap(a: Element, b: Element, gamma: float) -> tuple[float, float]:
    """``(lambda_min(B - A), lambda_min(B^g - A^g))`` over all blocks."""
    order = (b - a).lambda_min()
    return order, (b.power(gamma) - a.power(gamma)).lambda_min()


def _power_sample(spec: AlgebraSpec, seed: int, i: int):
    rng = sample_rng(seed, i)
    scale = WITNESS_SCALES[i % len(WITNESS_SCALES)]
    a = random_positive(spec, rng, scale)
    blocks = []
    for n in spec.blocks:
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        r = math.exp(rng.standard_normal())
        blocks.append(r * np.outer(v, v.conj()) / np.vdot(v, v).real)
    return a, PositiveElement(spec, (a + Element(spec, blocks)).hermitian_part().blocks)


def power_order_falsifier(
    spec: AlgebraSpec, gamma: float, n_samples: int = 10_000, seed: int = 0, tol: float = 1e-6
) -> WitnessReport:
    """Search for ``A <= B`` with ``A^gamma`` not below ``B^gamma``.

    ``B = A + P`` with ``P`` rank one per block.  A witness needs
    ``lambda_min(B^gamma - A^gamma) < -tol``.
    """
    if not (math.isfinite(gamma) and gamma > 0):
        raise ParameterError(f"gamma must be positive, got {gamma}")

    def one(i):
        a, b = _power_sample(spec, seed, i)
        return (i, a, b) + _power_gap(a, b, gamma)

    witness = None
    worst = math.inf
    used = 0
    for i, a, b, order, gap in pmap(one, range(n_samples)):
        used = i + 1
        worst = min(worst, gap)
        if gap < -tol and order >= -1e-12 * max(1.0, b.norm()):
            witness = (a, b, order, gap)
            break
    search = {"type": "power", "algebra": spec.to_json(), "gamma": gamma,
              "n_samples": n_samples, "seed": seed, "tol": tol}
    if witness is None:
        return WitnessReport(NO_WITNESS, [], max(-worst, 0.0), used, [], search,
                             f"gamma={gamma:g}: no witness in {used} samples")
    a, b, order, gap = witness
    report = WitnessReport(WITNESS_FOUND, [a, b], -gap, used, [order, gap], search,
                           f"gamma={gamma:g}: lambda_min(B^g - A^g) = {gap:.3e}")
    _require_verified(report)
    return report


# centrality


@dataclass(frozen=True)
class CentralitySolution:
    """Solution of ``omega(C J(E)) = tau(E)`` over source matrix units, ``C`` Hermitian."""

    c: Element
    residual: float
    rank: int
    unknowns: int
    central: bool
    expected: tuple[float, ...]
    scalar_error: float

    @property
    def nullity(self) -> int:
        return self.unknowns - self.rank

    @property
    def unique(self) -> bool:
        return self.nullity == 0


def _hermitian_basis(n: int):
    for k in range(n):
        m = np.zeros((n, n), dtype=complex)
        m[k, k] = 1
        yield m
    for k in range(n):
        for l in range(k + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[k, l] = m[l, k] = 1
            yield m
            m = np.zeros((n, n), dtype=complex)
            m[k, l], m[l, k] = 1j, -1j
            yield m


def centrality_solver(jordan: JordanIso) -> CentralitySolution:
    """Solve for every Hermitian ``C`` with ``omega(C J(E)) = tau(E)``.

    The real-linear system is solved by least squares; its rank is read off
    the singular values.  With faithful traces the solution is unique and
    equals ``c_j = w_{pi^-1(j)} / v_j`` on target block ``j``.

    Raises
    ------
    NumericalFailure
        The system is rank deficient or inconsistent beyond ``1e-10``.
    """
    src, tgt = jordan.source, jordan.target
    params = [(j, m) for j, n in enumerate(tgt.blocks) for m in _hermitian_basis(n)]
    units = []
    for i, n in enumerate(src.blocks):
        for k in range(n):
            for l in range(n):
                e = np.zeros((n, n), dtype=complex)
                e[k, l] = 1
                units.append((i, e))
    rows, rhs = [], []
    for i, e in units:
        j = jordan.perm[i]
        u = jordan.unitaries[i]
        image = u @ (e.T if jordan.transpose[i] else e) @ u.conj().T
        coeffs = [tgt.weights[j] * np.trace(m @ image) if jj == j else 0j for jj, m in params]
        target = src.weights[i] * np.trace(e)
        rows.append([c.real for c in coeffs])
        rows.append([c.imag for c in coeffs])
        rhs.extend([target.real, target.imag])
    mat, vec = np.array(rows), np.array(rhs)
    x, *_ = np.linalg.lstsq(mat, vec, rcond=None)
    sv = np.linalg.svd(mat, compute_uv=False)
    rank = int(np.sum(sv > LSTSQ_TOL * sv[0]))
    residual = float(np.max(np.abs(mat @ x - vec)))
    if rank < len(params):
        raise NumericalFailure(f"centrality system is singular (rank {rank} < {len(params)})")
    if residual > LSTSQ_TOL:
        raise NumericalFailure(f"centrality system is inconsistent (residual {residual:.3e})")
    blocks = [np.zeros((n, n), dtype=complex) for n in tgt.blocks]
    for coef, (j, m) in zip(x, params):
        blocks[j] = blocks[j] + coef * m
    c = Element(tgt, blocks)
    expected = [0.0] * len(tgt.blocks)
    for i, j in enumerate(jordan.perm):
        expected[j] = src.weights[i] / tgt.weights[j]
    err = c.distance(central_element(tgt, expected))
    return CentralitySolution(c, residual, rank, len(params), is_central(c), tuple(expected), err)


def _centrality_residual(kind: str, jordan: JordanIso, param: Element, beta, x: Element) -> float:
    if kind == "power_centrality":
        img = apply_jordan(jordan, as_positive(x).power(1.0 / beta))
        lhs = trace((param @ img @ param).hermitian_part().power(beta)).real
        return lhs - trace(x).real
    lhs = trace((apply_jordan(jordan, x) + param).hermitian_part().exp()).real
    return lhs - trace(x.hermitian_part().exp()).real


def _centrality_search(kind, jordan, param, beta, n_samples, seed, tol, scale) -> WitnessReport:
    src = jordan.source

    def one(i):
        rng = sample_rng(seed, i)
        s = scale * WITNESS_SCALES[i % len(WITNESS_SCALES)]
        x = random_positive(src, rng, s) if kind == "power_centrality" else random_hermitian(src, rng, s)
        r = _centrality_residual(kind, jordan, param, beta, x)
        ref = trace(x).real if kind == "power_centrality" else trace(x.hermitian_part().exp()).real
        return i, x, r, max(1.0, abs(ref))

    witness, worst, used = None, 0.0, 0
    for i, x, r, ref in pmap(one, range(n_samples)):
        used = i + 1
        worst = max(worst, abs(r) / ref)
        if abs(r) > tol * ref:
            witness = (x, r)
            break
    search = {
        "type": kind,
        "map": {**jordan.to_json(), "algebra": src.to_json(), "target": jordan.target.to_json()},
        "param": element_to_json(param),
        "beta": beta,
        "n_samples": n_samples,
        "seed": seed,
        "tol": tol,
        "scale": scale,
    }
    if witness is None:
        return WitnessReport(NO_WITNESS, [], worst, used, [], search,
                             f"constraint held on {used} samples (max relative residual {worst:.3e})")
    x, r = witness
    report = WitnessReport(WITNESS_FOUND, [x], abs(r), used, [r], search,
                           f"constraint residual {r:.3e} at sample {used - 1}")
    _require_verified(report)
    return report


def power_centrality_search(
    jordan: JordanIso, c: Element, beta: float, n_samples: int = 1000, seed: int = 0,
    tol: float = 1e-8, scale: float = 1.0,
) -> WitnessReport:
    """Search ``A > 0`` with ``omega((C J(A^{1/beta}) C)^beta) != tau(A)``.

    With ``C`` non-central the constraint fails somewhere; with the trace
    compatible central ``C`` (``v c^{2 beta} = w``) no witness exists.
    """
    if not (math.isfinite(beta) and beta > 0):
        raise ParameterError(f"beta must be positive, got {beta}")
    c = as_positive(c)
    if c.spec.blocks != jordan.target.blocks:
        raise InvalidInput("C must live on the target algebra")
    return _centrality_search("power_centrality", jordan, c, float(beta), n_samples, seed, tol, scale)


def exp_centrality_search(
    jordan: JordanIso, x0: Element, n_samples: int = 1000, seed: int = 0,
    tol: float = 1e-8, scale: float = 1.0,
) -> WitnessReport:
    """Search Hermitian ``T`` with ``omega(exp(J(T) + X0)) != tau(exp(T))``."""
    if x0.spec.blocks != jordan.target.blocks or not x0.is_hermitian():
        raise InvalidInput("X0 must be Hermitian on the target algebra")
    return _centrality_search("exp_centrality", jordan, x0, None, n_samples, seed, tol, scale)


def constraint_residuals(jordan: JordanIso, c: Element) -> list[float]:
    """``|omega(C J(E)) - tau(E)|`` over source matrix units."""
    return trace_constraint_residuals(jordan, c)


# operator identity


def times_t(f: hm.ScalarFunction) -> hm.ScalarFunction:
    """``g(t) = t f(t)``."""
    deriv = None
    if f.derivative is not None:
        deriv = lambda t: f.value(t) + t * f.derivative(t)  # noqa: E731
    domain = "nonnegative" if f.domain == "positive" else f.domain
    return hm.ScalarFunction(f"t*{f.name}", lambda t: t * f.value(t), deriv, domain)


def sandwich_identity_check(f: hm.ScalarFunction, a: Element, b: Element) -> float:
    """Relative max-entry residual of ``A f(A B^2 A) A = B^-1 g(B A^2 B) B^-1``, ``g = t f``."""
    a, b = as_positive(a), as_positive(b)
    if a.spec.blocks != b.spec.blocks:
        raise InvalidInput("A and B live on different algebras")
    g = times_t(f)
    binv = b.inv()
    lhs = a @ (a @ b @ b @ a).hermitian_part().apply(f) @ a
    rhs = binv @ (b @ a @ a @ b).hermitian_part().apply(g) @ binv
    return (lhs - rhs).max_abs() / max(1.0, lhs.max_abs())


# replay and verification


def _map_from_search(search: dict) -> JordanIso:
    data = search["map"]
    src = AlgebraSpec.from_json(data["algebra"])
    tgt = AlgebraSpec.from_json(data["target"])
    return StandardFormMap.from_json({**data, "central": [1.0] * len(tgt.blocks)}, src, tgt).jordan


def _witness_residuals(report: WitnessReport) -> list[float]:
    s = report.search
    t = s["type"]
    w = report.witnesses
    if t == "order":
        a, b = _pair_from_json(s)
        char = Characterization.from_json(s["characterization"])
        x = w[0] if char.name == "exp_trace" else as_positive(w[0])
        v, _ = char.violation(a, b, x)
        return [v]
    if t == "distinct":
        k1, k2 = DivergenceKind.from_json(s["kind1"]), DivergenceKind.from_json(s["kind2"])
        return [d_value(k1, w[0], w[1]), d_value(k2, w[0], w[1])]
    if t == "power":
        return list(_power_gap(as_positive(w[0]), as_positive(w[1]), s["gamma"]))
    if t in ("power_centrality", "exp_centrality"):
        jordan = _map_from_search(s)
        param = element_from_json(jordan.target, s["param"])
        return [_centrality_residual(t, jordan, param, s["beta"], w[0])]
    raise InvalidInput(f"no witness check for report type {t!r}")


def verify_witness(report: WitnessReport, tol: float = REPLAY_TOL) -> bool:
    """Re-evaluate the stored witness and compare with the stored residuals.

    Reports without witnesses verify trivially.
    """
    if not report.witnesses:
        return report.verdict != WITNESS_FOUND
    fresh = _witness_residuals(report)
    if len(fresh) != len(report.residuals):
        return False
    return all(abs(x - y) <= tol * max(1.0, abs(y)) for x, y in zip(fresh, report.residuals))


def _require_verified(report: WitnessReport) -> None:
    if not verify_witness(report):
        raise CrossCheckFailure(f"witness failed re-verification: {report.message}")


def replay(report: WitnessReport) -> WitnessReport:
    """Re-run the search or check described by ``report.search``."""
    s = report.search
    t = s.get("type")
    if t == "order":
        a, b = _pair_from_json(s)
        return order_witness_search(
            a, b, Characterization.from_json(s["characterization"]), s["n_samples"], s["seed"]
        )
    if t == "distinct":
        return distinctness_search(
            AlgebraSpec.from_json(s["algebra"]),
            DivergenceKind.from_json(s["kind1"]),
            DivergenceKind.from_json(s["kind2"]),
            s["n_samples"],
            s["seed"],
            s["threshold"],
        )
    if t == "power":
        return power_order_falsifier(
            AlgebraSpec.from_json(s["algebra"]), s["gamma"], s["n_samples"], s["seed"], s["tol"]
        )
    if t in ("power_centrality", "exp_centrality"):
        jordan = _map_from_search(s)
        param = element_from_json(jordan.target, s["param"])
        return _centrality_search(t, jordan, param, s["beta"], s["n_samples"], s["seed"], s["tol"], s["scale"])
    if t == "invariance":
        from .symmetry import THOMPSON, verify_invariance

        src = AlgebraSpec.from_json(s["algebra"])
        phi = StandardFormMap.from_json(s["map"], src)
        kind = THOMPSON if s["kind"] == THOMPSON else DivergenceKind.from_json(s["kind"])
        return verify_invariance(phi, kind, s["n_samples"], s["seed"], s["tol"], s["scale"])
    raise InvalidInput(f"cannot replay report type {t!r}")
