# Tests for Hilbert-Kunz function counts, primary ideals, bounds and the counting identities.
import random

import pytest

from hk.counting_checks import CountingChecks, verify_counting_identity, verify_smash_multiplicativity
from hk.hilbert_kunz import (
    REFUTED,
    UNVERIFIED,
    VERIFIED,
    HilbertKunzCounter,
    IdealSpec,
    NSetSpec,
    frobenius_sum,
    hkf,
    hkf_table,
    maximal_ideal,
    residue_enumerate,
    samples_to_frame,
    verify_primary,
)
from oracles import residue_count, stanley_reisner_count
from presentation.dsl_parser import parse_presentation
from presentation.presentation import free_binoid, group_binoid, smash
from samples import STANLEY_REISNER_COMPLEXES, random_presentation, random_word
from utils.errors import HypothesisRefuted, UsageError


def _n(p):
    return verify_primary(p, maximal_ideal(p))


def test_frobenius_sum_scales_generators():
    ideal = IdealSpec(((1, 0), (0, 2)))
    assert frobenius_sum(ideal, 3).words == [(3, 0), (0, 6)]
    with pytest.raises(UsageError):
        frobenius_sum(ideal, 0)


def test_ideal_spec_drops_infinity():
    ideal = IdealSpec(((1, 0), None))
    assert ideal.words == [(1, 0)]
    with pytest.raises(UsageError):
        IdealSpec((), 'maybe')


def test_maximal_ideal_skips_units():
    p = smash(free_binoid(1), group_binoid(2))
    assert maximal_ideal(p).words == [(1, 0)]


def test_free_binoid_counts_are_powers():
    p = free_binoid(2)
    counts = [s.count for s in hkf_table(p, _n(p), NSetSpec.whole(), [1, 2, 3, 4, 5])]
    assert counts == [1, 4, 9, 16, 25]


def test_cube_relation_counts(cube_relation):
    counts = [s.count for s in hkf_table(cube_relation, _n(cube_relation), NSetSpec.whole(), range(1, 7))]
    assert counts == [1, 4, 9, 10, 13, 18]


@pytest.mark.parametrize('q', [1, 2, 3, 5])
def test_counts_match_brute_force(cube_relation, q):
    expected = residue_count(2, cube_relation.congruences, q, 2 * q)
    assert hkf(cube_relation, _n(cube_relation), NSetSpec.whole(), q).count == expected


@pytest.mark.parametrize('q', [1, 2, 4])
def test_weighted_counts_match_brute_force(weighted, q):
    expected = residue_count(3, weighted.congruences, q, 3 * q)
    assert hkf(weighted, _n(weighted), NSetSpec.whole(), q).count == expected


def test_path_complex_counts(path_complex):
    counts = [s.count for s in hkf_table(path_complex, _n(path_complex), NSetSpec.whole(), [1, 2, 3])]
    assert counts == [1, 6, 15]
    assert counts == [stanley_reisner_count([['a', 'b'], ['b', 'c']], q) for q in (1, 2, 3)]


def test_unit_factor_doubles_the_count():
    p = smash(free_binoid(1), group_binoid(2))
    assert [s.count for s in hkf_table(p, _n(p), NSetSpec.whole(), [1, 2, 3])] == [2, 4, 6]


def test_ideal_and_quotient_nsets():
    p = free_binoid(2)
    n = _n(p)
    x = IdealSpec(((1, 0),))
    # ⟨x⟩ / ([2]n + ⟨x⟩) = {x, 2x, x+y, 2x+y}
    assert hkf(p, n, NSetSpec.of_ideal(x), 2).count == 4
    # N / ([2]n ∪ ⟨x⟩) = {0, y}
    assert hkf(p, n, NSetSpec.quotient(x), 2).count == 2
    union = NSetSpec.pointed_union([NSetSpec.whole(), NSetSpec.quotient(x)])
    assert hkf(p, n, union, 2).count == 6


def test_residue_enumerate():
    p = free_binoid(2)
    elements = residue_enumerate(p, IdealSpec(((2, 0), (0, 1))))
    assert sorted(e.vector for e in elements) == [(0, 0), (1, 0)]


def test_verify_primary():
    p = free_binoid(2)
    assert _n(p).primary_status == VERIFIED
    assert verify_primary(p, IdealSpec(((1, 0),))).primary_status == REFUTED
    assert verify_primary(p, IdealSpec(((0, 0),))).primary_status == REFUTED
    assert verify_primary(p, IdealSpec(((2, 0), (0, 3)))).primary_status == VERIFIED


def test_primary_check_respects_cap():
    counter = HilbertKunzCounter()
    counter.cap = 3
    p = free_binoid(2)
    assert counter.verify_primary(p, IdealSpec(((4, 0), (0, 4)))).primary_status == UNVERIFIED


def test_refuted_ideal_is_rejected():
    p = free_binoid(2)
    n = IdealSpec(((1, 0),), REFUTED)
    with pytest.raises(HypothesisRefuted):
        hkf(p, n, NSetSpec.whole(), 2)


def test_failed_rows_keep_their_exit_code():
    counter = HilbertKunzCounter()
    counter.cap = 10
    p = free_binoid(2)
    samples = counter.hkf_table(p, _n(p), NSetSpec.whole(), [2, 5])
    assert samples[0].count == 4
    assert samples[1].count is None and samples[1].exit_code == 3
    frame = samples_to_frame(samples)
    assert list(frame.columns) == ['q', 'count', 'error']
    assert frame['count'].isna().tolist() == [False, True]


def test_hkf_upper_bound_holds_with_units():
    p = smash(free_binoid(1), group_binoid(2))
    counter = HilbertKunzCounter()
    n = counter.verify_primary(p, counter.maximal_ideal(p))
    for q in (1, 2, 5):
        assert counter.hkf(p, n, NSetSpec.whole(), q).count == 2 * q
        assert counter.hkf_upper_bound(p, n, NSetSpec.whole(), q) == 2 + 2 * q


def test_counting_identity_counts():
    p = free_binoid(2)
    checks = CountingChecks()
    n = _n(p)
    i = IdealSpec(((1, 0),))
    j = checks.counter.frobenius_sum(n, 2)
    assert checks.counting_identity_counts(p, i, j) == (4, 2, 4, 2)
    assert verify_counting_identity(p, i, j)


def test_counting_identity_needs_primary_j():
    p = free_binoid(2)
    with pytest.raises(HypothesisRefuted):
        verify_counting_identity(p, IdealSpec(((1, 0),)), IdealSpec(((0, 1),)))


def test_smash_multiplicativity(cube_relation):
    assert verify_smash_multiplicativity(cube_relation, group_binoid(3), 2)


@pytest.mark.parametrize('text', [
    "free 2",
    "binoid x,y | 3x = 3y",
    "sr a,b,c; facet a,b; facet b,c",
    "smash {free 1} {group 2}",
])
def test_all_checks_pass(text):
    results = CountingChecks().run_all(parse_presentation(text), 2)
    assert results and all(r.passed for r in results), [r for r in results if not r.passed]


@pytest.mark.parametrize('n', [1, 2, 3, pytest.param(4, marks=pytest.mark.slow)])
def test_free_binoid_counts_up_to_twenty(n):
    p = free_binoid(n)
    qs = list(range(1, 21))
    assert [s.count for s in hkf_table(p, _n(p), NSetSpec.whole(), qs)] == [q ** n for q in qs]


@pytest.mark.parametrize('text, facets, _top', STANLEY_REISNER_COMPLEXES)
def test_face_binoid_counts_match_faces(text, facets, _top):
    p = parse_presentation(text)
    qs = list(range(1, 11))
    counts = [s.count for s in hkf_table(p, _n(p), NSetSpec.whole(), qs)]
    assert counts == [stanley_reisner_count(facets, q) for q in qs]


@pytest.mark.slow
@pytest.mark.parametrize('seed', range(20))
def test_smash_multiplicativity_on_random_pairs(seed):
    rng = random.Random(seed)
    a, b = random_presentation(rng), random_presentation(rng)
    checks = CountingChecks()
    for q in (2, 3, 5, 8):
        assert checks.verify_smash_multiplicativity(a, b, q), (a, b, q)


@pytest.mark.parametrize('seed', range(20))
def test_counting_identity_on_random_triples(seed):
    rng = random.Random(1000 + seed)
    p = random_presentation(rng, max_rank=3, units=False)
    checks = CountingChecks()
    n = checks.counter.maximal_ideal(p)
    if rng.random() < 0.5:
        j = checks.counter.frobenius_sum(n, rng.randint(1, 3))
    else:
        j = IdealSpec(tuple(tuple(rng.randint(1, 3) * e for e in w) for w in n.words))
    i = IdealSpec(tuple(random_word(rng, p.rank, rng.randint(1, 2)) for _ in range(rng.randint(1, 2))))
    assert checks.verify_counting_identity(p, i, j), (p, i, j)
