"""Seeded verification suites run by ``renyi-lab verify-suite``.

Each suite is a function ``(ctx) -> list[CheckResult]``.  A check passes when
its measured value satisfies the stated tolerance.  Random draws come from
``default_rng([seed, crc32(check name)])`` so suites are reproducible and
independent of which other suites run.
"""

from __future__ import annotations

import itertools
import math
import zlib
from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from . import hermitian as hm
from . import oracle
from .algebra import (
    AlgebraSpec,
    Element,
    PositiveElement,
    random_density,
    random_positive,
    random_unitary,
)
from .divergence import (
    FIVE_FAMILIES,
    DivergenceKind,
    alpha_limit,
    classical_d_value,
    d_value,
    q_value,
    same_quantity,
)
from .errors import CrossCheckFailure, InvalidInput
from .report import NO_WITNESS, PASS, WITNESS_FOUND
from .symmetry import THOMPSON, JordanIso, StandardFormMap, verify_invariance

DEFAULT_SPEC = AlgebraSpec((2, 1), (1.0, 1.0))
Z_DEFAULT = 1.7


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    value: float
    tol: float | None = None
    detail: str = ""

    def to_json(self) -> dict:
        v = self.value if math.isfinite(self.value) else repr(self.value)
        return {"suite": self.suite, "check": self.name, "verdict": PASS if self.passed else "FAIL",
                "value": v, "tol": self.tol, "detail": self.detail}


@dataclass
class SuiteContext:
    spec: AlgebraSpec = DEFAULT_SPEC
    seed: int = 0
    samples: int = 50
    search_samples: int = 1000
    phi: StandardFormMap | None = None
    results: list[CheckResult] = field(default_factory=list)

    def rng(self, name: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(name.encode())])

    def le(self, suite: str, name: str, value: float, tol: float, detail: str = "") -> None:
        self.results.append(CheckResult(suite, name, bool(value <= tol), float(value), tol, detail))

    def ge(self, suite: str, name: str, value: float, tol: float, detail: str = "") -> None:
        self.results.append(CheckResult(suite, name, bool(value >= tol), float(value), tol, detail))

    def flag(self, suite: str, name: str, ok: bool, detail: str = "", value: float = 0.0) -> None:
        self.results.append(CheckResult(suite, name, bool(ok), float(value), None, detail))


def _kinds(alpha: float, z: float = Z_DEFAULT) -> list[DivergenceKind]:
    return [DivergenceKind(f, alpha, z) for f in FIVE_FAMILIES]


def suite_reductions(ctx: SuiteContext) -> None:
    name = "reductions"
    rng = ctx.rng(name)
    pairs = [(random_density(ctx.spec, rng), random_density(ctx.spec, rng)) for _ in range(ctx.samples)]
    for alpha in (0.5, 2.0, 3.0):
        gz1 = max(abs(d_value(DivergenceKind.alpha_z(alpha, 1.0), a, b)
                      - d_value(DivergenceKind.conventional(alpha), a, b)) for a, b in pairs)
        gza = max(abs(d_value(DivergenceKind.alpha_z(alpha, alpha), a, b)
                      - d_value(DivergenceKind.minimal(alpha), a, b)) for a, b in pairs)
        ctx.le(name, f"alpha_z(z=1)=conventional alpha={alpha:g}", gz1, 1e-11)
        ctx.le(name, f"alpha_z(z=alpha)=minimal alpha={alpha:g}", gza, 1e-11)
    g2 = max(abs(d_value(DivergenceKind.maximal(2.0), a, b)
                 - d_value(DivergenceKind.conventional(2.0), a, b)) for a, b in pairs)
    ctx.le(name, "maximal(2)=conventional(2)", g2, 1e-11)
    gn = max(abs(d_value(DivergenceKind.normalized_mo(2.0), a, b)
                 - d_value(DivergenceKind.mosonyi_ogawa(2.0), a, b)) for a, b in pairs)
    ctx.le(name, "normalized_mo=mosonyi_ogawa on densities", gn, 1e-11)


def suite_scaling(ctx: SuiteContext) -> None:
    name = "scaling"
    rng = ctx.rng(name)
    for alpha in (0.5, 2.0):
        worst = 0.0
        for _ in range(ctx.samples):
            a, b = random_positive(ctx.spec, rng), random_positive(ctx.spec, rng)
            t, s = rng.uniform(0.5, 2.0, size=2)
            for kind in _kinds(alpha):
                lhs = q_value(kind, a * t, b * s)
                rhs = t**alpha * s ** (1 - alpha) * q_value(kind, a, b)
                worst = max(worst, abs(lhs - rhs) / abs(rhs))
        ctx.le(name, f"Q(tA||sB)=t^a s^(1-a) Q(A||B) alpha={alpha:g}", worst, 1e-10)


def suite_commutative(ctx: SuiteContext) -> None:
    name = "commutative"
    rng = ctx.rng(name)
    spec = AlgebraSpec.commutative(rng.uniform(0.5, 2.0, size=4))
    for alpha in (0.5, 2.0):
        worst = 0.0
        for _ in range(ctx.samples):
            a, b = random_density(spec, rng), random_density(spec, rng)
            ref = classical_d_value(alpha, a, b)
            worst = max(worst, max(abs(d_value(k, a, b) - ref) for k in _kinds(alpha)))
        ctx.le(name, f"five families = classical on C^4 alpha={alpha:g}", worst, 1e-11)


def _weighted_swap() -> StandardFormMap:
    src = AlgebraSpec((2, 2), (1.0, 2.0))
    tgt = AlgebraSpec((2, 2), (1.0, 1.0))
    return StandardFormMap.trace_preserving(JordanIso.block_permutation(src, tgt, (1, 0)))


def _invariance_kinds() -> list:
    kinds = []
    for alpha in (0.5, 2.0):
        kinds += _kinds(alpha) + [DivergenceKind.normalized_mo(alpha)]
    return kinds + [DivergenceKind.umegaki(), DivergenceKind.belavkin_staszewski(), THOMPSON]


def suite_invariance(ctx: SuiteContext) -> None:
    name = "invariance"
    if ctx.phi is not None:
        maps = [("map", ctx.phi)]
    else:
        rng = ctx.rng(name)
        spec = ctx.spec
        unitary = StandardFormMap.trace_preserving(
            JordanIso.conjugation(spec, [random_unitary(n, rng) for n in spec.blocks]))
        transpose = StandardFormMap.trace_preserving(JordanIso.transpose_map(spec))
        maps = [("unitary", unitary), ("transpose", transpose), ("weighted_swap", _weighted_swap())]
    for label, phi in maps:
        for i, kind in enumerate(_invariance_kinds()):
            rep = verify_invariance(phi, kind, ctx.samples, ctx.seed + i, tol=1e-9)
            klabel = THOMPSON if kind == THOMPSON else kind.label
            ctx.le(name, f"{label}: {klabel}", rep.gap, 1e-9)


def suite_limits(ctx: SuiteContext) -> None:
    name = "limits"
    rng = ctx.rng(name)
    n = min(ctx.samples, 20)
    pairs = [(random_density(ctx.spec, rng), random_density(ctx.spec, rng)) for _ in range(n)]
    for family, z in (("conventional", None), ("minimal", None), ("alpha_z", Z_DEFAULT),
                      ("mosonyi_ogawa", None), ("maximal", None)):
        err = max(alpha_limit(family, a, b, z=z).error for a, b in pairs)
        target = "belavkin_staszewski" if family == "maximal" else "umegaki"
        ctx.le(name, f"{family} -> {target}", err, 1e-4)


def suite_lemmas(ctx: SuiteContext) -> None:
    name = "lemmas"
    spec = ctx.spec
    rng = ctx.rng(name + ":derivative")
    for f in (hm.power(2), hm.EXP, hm.LOG, hm.power(1.5)):
        worst = 0.0
        for _ in range(ctx.samples):
            x, y, t = oracle.sample_derivative_case(spec, rng)
            worst = max(worst, oracle.check_derivative_formula(f, x, y, t, 1e-5).rel_error)
        ctx.le(name, f"derivative formula f={f.name}", worst, 1e-6)

    if not spec.is_commutative():
        chars = [oracle.PowerTrace(0.5), oracle.PowerTrace(2), oracle.ExpTrace(),
                 oracle.MaxQuantity(0.5), oracle.MaxQuantity(2), oracle.UmegakiOrder(), oracle.BSOrder()]
        n_pairs = max(1, ctx.samples // 10)
        for ch in chars:
            rng = ctx.rng(f"{name}:order:{ch.label}")
            try:
                found = 0
                for k in range(n_pairs):
                    a, b = oracle.sample_order_pair(spec, rng, comparable=True, characterization=ch)
                    oracle.order_witness_search(a, b, ch, min(ctx.search_samples, 200), ctx.seed + k)
                    a, b = oracle.sample_order_pair(spec, rng, comparable=False, characterization=ch)
                    rep = oracle.order_witness_search(a, b, ch, 10_000, ctx.seed + k)
                    found += rep.verdict == WITNESS_FOUND
                ctx.flag(name, f"order {ch.label}", found == n_pairs,
                         f"witnesses for {found}/{n_pairs} incomparable pairs, no soundness failures")
            except CrossCheckFailure as exc:
                ctx.flag(name, f"order {ch.label}", False, str(exc))
        rng = ctx.rng(f"{name}:order:max3")
        a, b = oracle.sample_order_pair(spec, rng, comparable=True)
        rep = oracle.order_witness_search(a, b, oracle.MaxQuantity(3), ctx.search_samples, ctx.seed)
        ctx.flag(name, "order max_quantity(3) [report only]", True, f"comparable pair: {rep.verdict}")

    sol = oracle.centrality_solver(JordanIso.identity(spec))
    ctx.le(name, "centrality: identity map residual", sol.residual, 1e-10)
    ctx.flag(name, "centrality: unique central solution", sol.unique and sol.central,
             f"nullity {sol.nullity}")
    ctx.le(name, "centrality: scalars match weight ratios", sol.scalar_error, 1e-12)
    src, tgt = AlgebraSpec((2, 3), (2.0, 3.0)), AlgebraSpec((2, 3), (1.0, 1.0))
    sol = oracle.centrality_solver(JordanIso.block_permutation(src, tgt, (0, 1)))
    ctx.le(name, "centrality: weighted blocks (2,3)->(1,1)", sol.scalar_error, 1e-12)

    big = next((i for i, n in enumerate(spec.blocks) if n > 1), None)
    if big is not None:
        ident = JordanIso.identity(spec)
        blocks = [np.eye(n) for n in spec.blocks]
        blocks[big] = np.diag(np.arange(1.0, spec.blocks[big] + 1))
        noncentral = Element(spec, blocks)
        res = max(oracle.constraint_residuals(ident, noncentral))
        ctx.ge(name, "centrality: non-central C violates constraint", res, 0.1)
        rep = oracle.power_centrality_search(ident, noncentral, 0.5, ctx.search_samples, ctx.seed)
        ctx.flag(name, "centrality: power constraint, non-central C", rep.verdict == WITNESS_FOUND, rep.message)
        rep = oracle.power_centrality_search(ident, spec.identity(), 0.5, ctx.search_samples, ctx.seed)
        ctx.flag(name, "centrality: power constraint, C = I", rep.verdict == NO_WITNESS, rep.message)
        x0 = Element(spec, [b * 0.3 - 0.3 * np.eye(len(b)) for b in blocks])
        rep = oracle.exp_centrality_search(ident, x0, ctx.search_samples, ctx.seed)
        ctx.flag(name, "centrality: exp constraint, non-central X0", rep.verdict == WITNESS_FOUND, rep.message)
        rep = oracle.exp_centrality_search(ident, spec.zeros(), ctx.search_samples, ctx.seed)
        ctx.flag(name, "centrality: exp constraint, X0 = 0", rep.verdict == NO_WITNESS, rep.message)

    rng = ctx.rng(name + ":identity")
    for f in (hm.power(0.5), hm.power(1), hm.power(2)):
        worst = max(oracle.sandwich_identity_check(f, random_positive(spec, rng), random_positive(spec, rng))
                    for _ in range(ctx.samples))
        ctx.le(name, f"A f(AB^2A) A = B^-1 g(BA^2B) B^-1, f={f.name}", worst, 1e-9)


def suite_geometry(ctx: SuiteContext) -> None:
    name = "geometry"
    rng = ctx.rng(name)
    spec = ctx.spec
    agree = resid = a1 = a2 = sym = tri = scal = 0.0
    for _ in range(ctx.samples):
        a, b, c = (random_positive(spec, rng) for _ in range(3))
        d = geo.thompson_distance(a, b, crosscheck=False)
        agree = max(agree, abs(d - geo.thompson_distance_log(a, b)) / max(1.0, d))
        x = geo.geometric_mean(a, b)
        resid = max(resid, geo.riccati_residual(x, a, b))
        a1 = max(a1, geo.point_reflection(a, a).distance(a) / max(1.0, a.norm()))
        a2 = max(a2, geo.point_reflection(a, geo.point_reflection(a, b)).distance(b) / max(1.0, b.norm()))
        sym = max(sym, abs(d - geo.thompson_distance(b, a)))
        tri = max(tri, d - geo.thompson_distance(a, c) - geo.thompson_distance(c, b))
        t = float(rng.uniform(0.2, 5.0))
        scal = max(scal, abs(geo.thompson_distance(a, a * t) - abs(math.log(t))))
    ctx.le(name, "Thompson formulas agree", agree, 1e-10)
    ctx.le(name, "geometric mean residual", resid, 1e-9)
    ctx.le(name, "point reflection a1", a1, 1e-10)
    ctx.le(name, "point reflection a2", a2, 1e-10)
    ctx.le(name, "Thompson symmetry", sym, 1e-12)
    ctx.le(name, "Thompson triangle inequality", tri, 1e-9)
    ctx.le(name, "d(A, tA) = |ln t|", scal, 1e-12)
    worst = 0.0
    for _ in range(ctx.samples):
        a = PositiveElement(spec, (random_positive(spec, rng) + 1.0).blocks)
        b = PositiveElement(spec, (random_positive(spec, rng) + 1.0).blocks)
        worst = max(worst, abs(geo.homothety_defect(a, b, 2.0)))
    if spec.is_commutative():
        ctx.le(name, "homothety identity holds (commutative)", worst, 1e-10)
    else:
        ctx.ge(name, "homothety identity fails for gamma=2", worst, 1e-6)


def suite_distinctness(ctx: SuiteContext) -> None:
    name = "distinctness"
    kinds = _kinds(2.0)
    for i, (k1, k2) in enumerate(itertools.combinations(kinds, 2)):
        rep = oracle.distinctness_search(ctx.spec, k1, k2, ctx.search_samples, ctx.seed + i)
        label = f"{k1.label} vs {k2.label}"
        if ctx.spec.is_commutative() or same_quantity(k1, k2):
            ctx.le(name, f"{label} coincide", rep.gap, 1e-11)
        else:
            ctx.ge(name, f"{label} separate", rep.gap, 1e-3)


def suite_power(ctx: SuiteContext) -> None:
    name = "power"
    rep = oracle.power_order_falsifier(ctx.spec, 2.0, 10_000, ctx.seed)
    expected = NO_WITNESS if ctx.spec.is_commutative() else WITNESS_FOUND
    ctx.flag(name, "gamma=2", rep.verdict == expected, rep.message, rep.gap)
    rep = oracle.power_order_falsifier(ctx.spec, 0.5, ctx.search_samples, ctx.seed)
    ctx.flag(name, "gamma=0.5", rep.verdict == NO_WITNESS, rep.message, rep.gap)
    comm = AlgebraSpec.commutative([1.0, 2.0, 0.5])
    rep = oracle.power_order_falsifier(comm, 2.0, ctx.search_samples, ctx.seed)
    ctx.flag(name, "gamma=2 commutative", rep.verdict == NO_WITNESS, rep.message, rep.gap)


SUITES = {
    "reductions": suite_reductions,
    "scaling": suite_scaling,
    "commutative": suite_commutative,
    "invariance": suite_invariance,
    "limits": suite_limits,
    "lemmas": suite_lemmas,
    "geometry": suite_geometry,
    "distinctness": suite_distinctness,
    "power": suite_power,
}


def run_suites(names, ctx: SuiteContext) -> list[CheckResult]:
    """Run the named suites (all when ``names`` is empty) and return the results."""
    names = list(names) or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise InvalidInput(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    for n in names:
        SUITES[n](ctx)
    return ctx.results
