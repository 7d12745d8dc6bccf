import json

import numpy as np
import pytest

from renyi_lab import hermitian as hm
from renyi_lab.algebra import (
    AlgebraSpec,
    DensityElement,
    Element,
    PositiveElement,
    random_density,
    random_hermitian,
    random_positive,
    random_unitary,
    trace,
)
from renyi_lab.divergence import DivergenceKind, umegaki
from renyi_lab.errors import InvalidInput
from renyi_lab.oracle import hm_loewner
from renyi_lab.symmetry import (
    THOMPSON,
    JordanIso,
    LogAffineMap,
    StandardFormMap,
    apply_jordan,
    apply_log_affine,
    check_trace_compat,
    extend_to_cone,
    verify_invariance,
)

from conftest import M2, M2_M3

M2M2 = AlgebraSpec((2, 2), (1.0, 2.0))
M2M2_UNIT = AlgebraSpec((2, 2), (1.0, 1.0))


def mixed_jordan(rng):
    return JordanIso(M2M2, M2M2_UNIT, (1, 0), (random_unitary(2, rng), random_unitary(2, rng)), (True, False))


def test_constructor_validation():
    JordanIso.block_permutation(M2_M3, AlgebraSpec((3, 2), (1, 1)), (1, 0))
    with pytest.raises(InvalidInput):
        JordanIso.block_permutation(M2_M3, M2_M3, (1, 0))
    with pytest.raises(InvalidInput):
        JordanIso.block_permutation(M2_M3, M2_M3, (0, 0))
    with pytest.raises(InvalidInput):
        JordanIso.conjugation(M2, [np.array([[1.0, 0.0], [0.0, 1.0 + 1e-9]])])
    with pytest.raises(InvalidInput):
        JordanIso.conjugation(M2, [np.eye(3)])
    with pytest.raises(InvalidInput):
        StandardFormMap(JordanIso.identity(M2), (0.0,))
    with pytest.raises(InvalidInput):
        StandardFormMap(JordanIso.identity(M2), (1.0, 1.0))


def test_identity_map():
    a = random_positive(M2_M3, 1)
    assert apply_jordan(JordanIso.identity(M2_M3), a).distance(a) == 0.0
    phi = StandardFormMap(JordanIso.identity(M2_M3), (1.0, 1.0))
    assert phi(a).distance(a) == 0.0


def test_jordan_algebraic_properties():
    rng = np.random.default_rng(2)
    for _ in range(10):
        j = mixed_jordan(rng)
        x = random_hermitian(M2M2, rng)
        jx = apply_jordan(j, x)
        assert apply_jordan(j, x @ x).distance(jx @ jx) < 1e-12
        # spectrum of each block carried to the image block
        for i, p in enumerate(j.perm):
            np.testing.assert_allclose(hm.eigvalsh(jx.blocks[p]), hm.eigvalsh(x.blocks[i]), atol=1e-12)
        a = random_positive(M2M2, rng)
        ja = apply_jordan(j, a)
        assert apply_jordan(j, a.inv()).distance(ja.inv()) < 1e-10
        for f in (hm.EXP, hm.LOG, hm.power(0.5), hm.power(-1.5)):
            assert apply_jordan(j, a.apply(f)).distance(ja.hermitian_part().apply(f)) < 1e-9
        assert apply_jordan(j.inverse(), ja).distance(a) < 1e-12
        # anticommutator is preserved
        y = random_hermitian(M2M2, rng)
        jy = apply_jordan(j, y)
        assert apply_jordan(j, x @ y + y @ x).distance(jx @ jy + jy @ jx) < 1e-12


def test_transpose_preserves_spectrum():
    a = random_positive(M2, 3)
    t = apply_jordan(JordanIso.transpose_map(M2), a)
    np.testing.assert_allclose(t.spectrum(), a.spectrum(), atol=1e-14)
    np.testing.assert_array_equal(t.blocks[0], a.blocks[0].T)


def test_trace_compat_examples():
    phi = StandardFormMap(JordanIso.identity(M2), (1.0,))
    rep = check_trace_compat(phi)
    assert rep.compatible and rep.max_residual == 0.0
    rep = check_trace_compat(StandardFormMap(JordanIso.identity(M2), (2.0,)))
    assert not rep.compatible and not rep.closed_form and rep.max_residual == pytest.approx(1.0)
    src, tgt = AlgebraSpec((2, 3), (2.0, 3.0)), AlgebraSpec((2, 3), (1.0, 1.0))
    phi = StandardFormMap(JordanIso.block_permutation(src, tgt, (0, 1)), (2.0, 3.0))
    assert check_trace_compat(phi).compatible
    assert phi.trace_compatible


def test_weighted_swap_maps_densities_to_densities():
    rng = np.random.default_rng(4)
    j = JordanIso.block_permutation(M2M2, M2M2_UNIT, (1, 0))
    phi = StandardFormMap.trace_preserving(j)
    assert phi.central == (2.0, 1.0)
    rep = check_trace_compat(phi)
    assert rep.compatible and rep.max_residual < 1e-15
    for _ in range(10):
        d = random_density(M2M2, rng)
        out = phi(d)
        assert isinstance(out, DensityElement)
        assert trace(out) == pytest.approx(1.0, abs=1e-12)
    assert check_trace_compat(StandardFormMap(j, (1.0, 1.0))).compatible is False


def test_extend_to_cone():
    rng = np.random.default_rng(5)
    phi = StandardFormMap.trace_preserving(mixed_jordan(rng))
    d = random_density(M2M2, rng)
    assert extend_to_cone(phi, d).distance(phi(d)) < 1e-14
    a = random_positive(M2M2, rng)
    psi_a = extend_to_cone(phi, a)
    assert extend_to_cone(phi, 3.5 * a).distance(3.5 * psi_a) < 1e-12 * max(1, psi_a.max_abs())
    assert trace(psi_a) == pytest.approx(trace(a), rel=1e-12)
    with pytest.raises(Exception):
        extend_to_cone(phi, Element(M2M2, [np.diag([1.0, 0.0]), np.eye(2)]))


def test_log_affine_identity_and_central_shift():
    rng = np.random.default_rng(6)
    a = random_positive(M2_M3, rng)
    m = LogAffineMap(JordanIso.identity(M2_M3), M2_M3.zeros())
    assert apply_log_affine(m, a).distance(a) < 1e-12 * a.max_abs()
    c = (1.7, 0.4)
    j = JordanIso.conjugation(M2_M3, [random_unitary(n, rng) for n in M2_M3.blocks])
    shift = Element(M2_M3, [np.log(ci) * np.eye(n) for ci, n in zip(c, M2_M3.blocks)])
    out = LogAffineMap(j, shift)(a)
    ref = StandardFormMap(j, c)(a)
    assert out.distance(ref) < 1e-11 * max(1, ref.max_abs())
    with pytest.raises(InvalidInput):
        LogAffineMap(j, Element(M2_M3, [[[0, 1], [0, 0]], np.zeros((3, 3))]))


def test_log_affine_preserves_log_order():
    rng = np.random.default_rng(7)
    j = mixed_jordan(rng)
    m = LogAffineMap(j, random_hermitian(M2M2_UNIT, rng))
    seen = {True: 0, False: 0}
    for k in range(40):
        a = random_positive(M2M2, rng)
        if k % 2:
            b = PositiveElement(M2M2, (a.log() + random_positive(M2M2, rng) * 0.3).hermitian_part().exp().blocks)
        else:
            b = random_positive(M2M2, rng)
        before = hm_loewner(a.log(), b.log(), 1e-10)
        after = hm_loewner(m(a).log(), m(b).log(), 1e-10)
        assert before == after
        seen[before] += 1
    assert seen[True] and seen[False]


@pytest.mark.parametrize("kind", [
    DivergenceKind.conventional(0.5), DivergenceKind.minimal(2.0), DivergenceKind.alpha_z(2.0, 1.7),
    DivergenceKind.maximal(0.5), DivergenceKind.mosonyi_ogawa(2.0), DivergenceKind.normalized_mo(0.5),
    DivergenceKind.umegaki(), DivergenceKind.belavkin_staszewski(), THOMPSON,
], ids=str)
def test_invariance_of_trace_compatible_maps(kind):
    rng = np.random.default_rng(8)
    maps = [
        StandardFormMap(JordanIso.conjugation(M2, [random_unitary(2, rng)]), (1.0,)),
        StandardFormMap(JordanIso.transpose_map(M2), (1.0,)),
        StandardFormMap.trace_preserving(mixed_jordan(rng)),
    ]
    for phi in maps:
        rep = verify_invariance(phi, kind, 30, seed=1, tol=1e-10)
        assert rep.verdict == "PASS", rep.message


def test_incompatible_central_multiplier_fails():
    phi = StandardFormMap(JordanIso.identity(M2), (2.0,))
    gaps = {}
    for kind in (DivergenceKind.conventional(2.0), DivergenceKind.umegaki(), DivergenceKind.normalized_mo(2.0)):
        rep = verify_invariance(phi, kind, 20, seed=2)
        gaps[kind.family] = rep
    assert gaps["conventional"].verdict == "FAIL" and gaps["conventional"].gap > 1e-9
    assert len(gaps["conventional"].witnesses) == 2
    assert gaps["umegaki"].verdict == "FAIL"
    # normalized MO only sees C through omega(C J(.)) / tau(.)
    assert gaps["normalized_mo"].verdict == "PASS"


def test_invariance_report_is_reproducible():
    phi = StandardFormMap(JordanIso.identity(M2), (2.0,))
    r1 = verify_invariance(phi, DivergenceKind.minimal(2.0), 15, seed=3)
    r2 = verify_invariance(phi, DivergenceKind.minimal(2.0), 15, seed=3)
    assert r1.dumps() == r2.dumps()


def test_map_json_round_trip():
    rng = np.random.default_rng(9)
    phi = StandardFormMap.trace_preserving(mixed_jordan(rng))
    data = json.loads(json.dumps(phi.to_json()))
    back = StandardFormMap.from_json(data, M2M2)
    assert back.target == M2M2_UNIT
    a = random_positive(M2M2, rng)
    assert back(a).distance(phi(a)) == 0.0
    plain = {"perm": [0], "unitaries": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]], "transpose": [False], "central": [1.0]}
    assert StandardFormMap.from_json(plain, M2).target == M2
    with pytest.raises(InvalidInput):
        StandardFormMap.from_json({"perm": [0]}, M2)


def test_umegaki_unchanged_by_swap():
    rng = np.random.default_rng(10)
    phi = StandardFormMap.trace_preserving(JordanIso.block_permutation(M2M2, M2M2_UNIT, (1, 0)))
    a, b = random_density(M2M2, rng), random_density(M2M2, rng)
    assert umegaki(phi(a), phi(b)) == pytest.approx(umegaki(a, b), abs=1e-12)
