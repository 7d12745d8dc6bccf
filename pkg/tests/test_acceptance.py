"""Acceptance criteria, one test each, at the stated tolerances.

Every test prints a single ``criterion N: PASS|FAIL ...`` line before asserting.
"""
import itertools
import os
import subprocess
import sys
import time

import mpmath as mp
import numpy as np
import pytest

from renyi_lab import geometry as geo
from renyi_lab import hermitian as hm
from renyi_lab import oracle
from renyi_lab.algebra import AlgebraSpec, random_density, random_positive, random_unitary
from renyi_lab.divergence import (
    DivergenceKind,
    alpha_limit,
    classical_d_value,
    d_value,
)
from renyi_lab.report import NO_WITNESS, WITNESS_FOUND
from renyi_lab.symmetry import JordanIso, StandardFormMap, THOMPSON, verify_invariance

from conftest import C2, C3, M2, M3, M2_M1
from oracles import mp_central_difference_error

Z = 1.7


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


def five_kinds(alpha):
    return [DivergenceKind.conventional(alpha), DivergenceKind.minimal(alpha),
            DivergenceKind.alpha_z(alpha, Z), DivergenceKind.maximal(alpha),
            DivergenceKind.mosonyi_ogawa(alpha)]


def test_criterion_01_reduction_identities(capsys):
    t0 = time.perf_counter()
    worst = 0.0
    for s, spec in enumerate((C2, M2, AlgebraSpec((2, 3), (1.0, 1.0)))):
        rng = np.random.default_rng([1, s])
        for _ in range(100):
            a, b = random_density(spec, rng), random_density(spec, rng)
            for alpha in (0.5, 2.0, 3.0):
                worst = max(
                    worst,
                    abs(d_value(DivergenceKind.alpha_z(alpha, 1.0), a, b) - d_value(DivergenceKind.conventional(alpha), a, b)),
                    abs(d_value(DivergenceKind.alpha_z(alpha, alpha), a, b) - d_value(DivergenceKind.minimal(alpha), a, b)),
                )
    elapsed = time.perf_counter() - t0
    report(capsys, 1, worst <= 1e-11 and elapsed < 10, f"max deviation {worst:.2e}, {elapsed:.1f} s")


def test_criterion_02_commutative_coincidence(capsys):
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(100):
        spec = AlgebraSpec.commutative(tuple(rng.uniform(0.2, 3.0, 4)))
        a, b = random_density(spec, rng), random_density(spec, rng)
        for alpha in (0.5, 2.0):
            ref = classical_d_value(alpha, a, b)
            worst = max(worst, max(abs(d_value(k, a, b) - ref) for k in five_kinds(alpha)))
    report(capsys, 2, worst <= 1e-11, f"max deviation from the classical formula {worst:.2e}")


def test_criterion_03_limits(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    pairs = [(random_density(M2, rng), random_density(M2, rng)) for _ in range(20)]
    errs = {}
    for family, z in (("conventional", None), ("minimal", None), ("alpha_z", Z),
                      ("mosonyi_ogawa", None), ("maximal", None)):
        errs[family] = max(alpha_limit(family, a, b, z=z).error for a, b in pairs)
    elapsed = time.perf_counter() - t0
    worst = max(errs.values())
    detail = ", ".join(f"{k} {v:.1e}" for k, v in errs.items())
    report(capsys, 3, worst <= 1e-4 and elapsed < 30, f"{detail}; {elapsed:.1f} s")


def _invariance_maps():
    rng = np.random.default_rng(4)
    spec = AlgebraSpec((2, 3), (1.0, 0.5))
    unitary = StandardFormMap.trace_preserving(
        JordanIso.conjugation(spec, [random_unitary(n, rng) for n in spec.blocks]))
    transpose = StandardFormMap.trace_preserving(JordanIso.transpose_map(spec))
    src, tgt = AlgebraSpec((2, 2), (1.0, 2.0)), AlgebraSpec((2, 2), (1.0, 1.0))
    swap = StandardFormMap.trace_preserving(JordanIso.block_permutation(src, tgt, (1, 0)))
    return {"unitary": unitary, "transpose": transpose, "weighted_swap": swap}


@pytest.mark.parametrize("label", ["unitary", "transpose", "weighted_swap"])
def test_criterion_04_standard_form_invariance(capsys, label):
    phi = _invariance_maps()[label]
    assert phi.trace_compatible
    kinds = []
    for alpha in (0.5, 2.0):
        kinds += five_kinds(alpha)
    kinds += [DivergenceKind.umegaki(), DivergenceKind.belavkin_staszewski(), THOMPSON]
    gaps = {}
    for i, kind in enumerate(kinds):
        rep = verify_invariance(phi, kind, 100, seed=i, tol=1e-9)
        gaps[THOMPSON if kind == THOMPSON else kind.label] = rep.gap
    worst_kind = max(gaps, key=gaps.get)
    report(capsys, 4, gaps[worst_kind] <= 1e-9,
           f"[{label}] {len(kinds)} quantities, worst {worst_kind} gap {gaps[worst_kind]:.2e}")


PAIRS = list(itertools.combinations(five_kinds(2.0), 2))


@pytest.mark.parametrize("k1, k2", PAIRS, ids=[f"{a.family}-{b.family}" for a, b in PAIRS])
def test_criterion_05_distinctness_m2(capsys, k1, k2):
    rep = oracle.distinctness_search(M2, k1, k2, 1000, seed=5)
    report(capsys, 5, rep.gap > 1e-3, f"[M2 {k1.label} vs {k2.label}] {rep.verdict}, gap {rep.gap:.3e}")


@pytest.mark.parametrize("k1, k2", PAIRS, ids=[f"{a.family}-{b.family}" for a, b in PAIRS])
def test_criterion_05_distinctness_c3(capsys, k1, k2):
    rep = oracle.distinctness_search(C3, k1, k2, 1000, seed=5)
    report(capsys, 5, rep.gap <= 1e-11, f"[C3 {k1.label} vs {k2.label}] {rep.verdict}, gap {rep.gap:.3e}")


def test_criterion_06_derivative(capsys):
    fprime = {
        "t^2": lambda t: 2 * t,
        "exp": mp.exp,
        "log": lambda t: 1 / t,
        "t^1.5": lambda t: mp.mpf(1.5) * mp.sqrt(t),
    }
    mpf = {"t^2": lambda t: t * t, "exp": mp.exp, "log": mp.log, "t^1.5": lambda t: t * mp.sqrt(t)}
    funcs = {"t^2": hm.power(2), "exp": hm.EXP, "log": hm.LOG, "t^1.5": hm.power(1.5)}
    rng = np.random.default_rng(6)
    cases = [oracle.sample_derivative_case(M2_M1, rng) for _ in range(50)]
    worst_rel = 0.0
    ratios = []
    exact_err = 0.0
    h = 1e-5
    for name, f in funcs.items():
        for x, y, t in cases:
            worst_rel = max(worst_rel, oracle.check_derivative_formula(f, x, y, t, h).rel_error)
            e1 = mp_central_difference_error(x.blocks, y.blocks, M2_M1.weights, mpf[name], fprime[name], t, h)
            e2 = mp_central_difference_error(x.blocks, y.blocks, M2_M1.weights, mpf[name], fprime[name], t, h / 2)
            if name == "t^2":
                # the central difference of a quadratic is exact
                exact_err = max(exact_err, float(e1), float(e2))
            elif e1 > mp.mpf(10) ** -25:
                ratios.append(float(e1 / e2))
    lo, hi = min(ratios), max(ratios)
    ok = worst_rel < 1e-6 and 3.5 <= lo and hi <= 4.5 and exact_err < 1e-25
    report(capsys, 6, ok, f"max rel error {worst_rel:.2e}, halving ratios in [{lo:.3f}, {hi:.3f}] "
                          f"over {len(ratios)} cases, t^2 exact to {exact_err:.1e}")


CHARACTERIZATIONS = [oracle.PowerTrace(0.5), oracle.PowerTrace(2.0), oracle.ExpTrace(),
                     oracle.MaxQuantity(0.5), oracle.MaxQuantity(2.0)]
COMPARABLE_SAMPLES = 1000


@pytest.mark.slow
def test_criterion_07_order_characterizations(capsys):
    rng = np.random.default_rng(7)
    soundness = missed = 0
    worst_used = 0
    for i in range(50):
        for j, ch in enumerate(CHARACTERIZATIONS):
            a, b = oracle.sample_order_pair(M2, rng, True, ch)
            try:
                rep = oracle.order_witness_search(a, b, ch, COMPARABLE_SAMPLES, seed=100 * i + j)
                soundness += rep.verdict != NO_WITNESS
            except Exception:
                soundness += 1
            a, b = oracle.sample_order_pair(M2, rng, False, ch)
            rep = oracle.order_witness_search(a, b, ch, 10_000, seed=100 * i + j)
            if rep.verdict == WITNESS_FOUND and oracle.verify_witness(rep):
                worst_used = max(worst_used, rep.samples_used)
            else:
                missed += 1
    report(capsys, 7, soundness == 0 and missed == 0,
           f"soundness failures {soundness}, incomparable pairs without witness {missed}, "
           f"max samples to witness {worst_used}")


def test_criterion_08_geometry(capsys):
    rng = np.random.default_rng(8)
    agree = resid = a1 = a2 = 0.0
    for k in range(1000):
        spec = (M2, M3, M2_M1)[k % 3]
        a, b = random_positive(spec, rng), random_positive(spec, rng)
        d = geo.thompson_distance(a, b, crosscheck=False)
        agree = max(agree, abs(d - geo.thompson_distance_log(a, b)))
        resid = max(resid, geo.riccati_residual(geo.geometric_mean(a, b), a, b))
        a1 = max(a1, geo.point_reflection(a, a).distance(a) / max(1.0, a.norm()))
        a2 = max(a2, geo.point_reflection(a, geo.point_reflection(a, b)).distance(b) / max(1.0, b.norm()))
    ok = agree <= 1e-10 and resid <= 1e-9 and a1 <= 1e-10 and a2 <= 1e-10
    report(capsys, 8, ok, f"Thompson agreement {agree:.1e}, Riccati residual {resid:.1e}, "
                          f"a1 {a1:.1e}, a2 {a2:.1e}")


def test_criterion_09_power_falsifier(capsys):
    found = oracle.power_order_falsifier(M2, 2.0, 10_000, seed=9)
    half = oracle.power_order_falsifier(M2, 0.5, 10_000, seed=9)
    comm = oracle.power_order_falsifier(C3, 2.0, 10_000, seed=9)
    ok = (found.verdict == WITNESS_FOUND and oracle.verify_witness(found)
          and half.verdict == NO_WITNESS and comm.verdict == NO_WITNESS)
    report(capsys, 9, ok, f"gamma=2 on M2 {found.verdict} after {found.samples_used}; "
                          f"gamma=0.5 {half.verdict}; C3 {comm.verdict}")


def test_criterion_10_centrality(capsys):
    sol = oracle.centrality_solver(JordanIso.identity(M2))
    unit_ok = sol.unique and sol.residual < 1e-10 and sol.c.distance(M2.identity()) < 1e-10
    scalar_err = 0.0
    for w, v in [((1.0, 2.0), (1.0, 1.0)), ((3.0, 0.5), (2.0, 4.0)), ((1.0, 1.0), (0.25, 5.0))]:
        src, tgt = AlgebraSpec((2, 1), w), AlgebraSpec((2, 1), v)
        s = oracle.centrality_solver(JordanIso.block_permutation(src, tgt, (0, 1)))
        scalar_err = max(scalar_err, s.scalar_error, max(abs(e - wi / vi) for e, wi, vi in zip(s.expected, w, v)))
    report(capsys, 10, unit_ok and scalar_err <= 1e-12,
           f"M2 unique={sol.unique} residual {sol.residual:.1e}; weighted scalar error {scalar_err:.1e}")


def test_criterion_11_operator_identity(capsys):
    rng = np.random.default_rng(11)
    worst = {}
    for f in (hm.power(0.5), hm.IDENTITY, hm.power(2)):
        worst[f.name] = 0.0
        for _ in range(50):
            a, b = random_positive(M3, rng), random_positive(M3, rng)
            worst[f.name] = max(worst[f.name], oracle.sandwich_identity_check(f, a, b))
    top = max(worst.values())
    report(capsys, 11, top < 1e-9, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


@pytest.mark.slow
def test_criterion_12_full_verify_suite(capsys):
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "renyi_lab", "verify-suite", "--seed", "0"],
                          capture_output=True, text=True, timeout=600, env=os.environ.copy())
    elapsed = time.perf_counter() - t0
    report(capsys, 12, proc.returncode == 0 and elapsed < 300,
           f"exit {proc.returncode}, {elapsed:.1f} s")
