# Tests for Spec N, reducedness, units and the integral quotients of minimal primes.
import itertools
import random

import pytest

from config import HKConfig
from presentation.dsl_parser import parse_presentation
from presentation.presentation import free_binoid, group_binoid, quotient_by_ideal, smash
from rewrite.rewrite_system import complete, normal_form
from samples import random_presentation
from spectrum.spectrum_analyzer import (
    SpectrumAnalyzer,
    cancellativity_witness,
    candidate_ideal_closure,
    integral_quotient,
    is_integral_quotient,
    is_reduced,
    spectrum,
    unit_group_order,
)
from utils.errors import SubsetCapExceeded


def test_free_binoid_spectrum():
    report = spectrum(free_binoid(3))
    assert len(report.primes) == 8
    assert report.dimension == 3
    assert [sorted(q.closure) for q in report.minimal_primes] == [[]]


def test_path_complex_minimal_primes(path_complex):
    report = spectrum(path_complex)
    assert report.dimension == 2
    assert sorted(q.names(path_complex.generators) for q in report.minimal_primes) == [['a'], ['c']]
    assert report.quotient_dimensions == [2, 2]


def test_cube_relation_dimension(cube_relation):
    report = spectrum(cube_relation)
    assert report.dimension == 1
    assert [q.names(cube_relation.generators) for q in report.primes] == [[], ['x', 'y']]


def test_zero_binoid_has_empty_spectrum():
    report = spectrum(parse_presentation("binoid x | 0 = inf"))
    assert report.is_zero
    assert report.dimension == -1


def test_report_to_dict(path_complex):
    data = spectrum(path_complex).to_dict()
    assert data['generators'] == ['a', 'b', 'c']
    assert data['dimension'] == 2
    assert ['a', 'b', 'c'] in data['primes']


def test_subset_cap():
    config = HKConfig(subset_cap=2)
    with pytest.raises(SubsetCapExceeded):
        SpectrumAnalyzer(config).spectrum(free_binoid(3))


def test_candidate_ideal_closure():
    rs = complete(parse_presentation("binoid x,y | x = 2y"))
    assert candidate_ideal_closure(rs, [1]) == frozenset({0, 1})
    assert candidate_ideal_closure(rs, [0]) == frozenset({0})


def test_integrality():
    assert is_integral_quotient(complete(free_binoid(2)))
    assert not is_integral_quotient(complete(parse_presentation("binoid x,y | x + y = inf")))
    assert is_integral_quotient(complete(parse_presentation("binoid x,y | x = inf")))


def test_reducedness():
    assert is_reduced(free_binoid(2))
    assert is_reduced(parse_presentation("binoid x,y | x + y = inf"))
    assert is_reduced(parse_presentation("sr a,b,c; facet a,b; facet b,c"))
    assert is_reduced(parse_presentation("binoid x | 2x = inf")) is False
    assert is_reduced(parse_presentation("binoid x,y | 2x + y = inf")) is False


def test_bounded_reducedness_fallback():
    analyzer = SpectrumAnalyzer(HKConfig(subset_cap=1))
    assert analyzer.is_reduced(parse_presentation("binoid x,y | x + y = inf")) is True
    assert analyzer.is_reduced(parse_presentation("binoid x,y | 3x = inf")) is False


def test_unit_group_order():
    assert unit_group_order(free_binoid(2)) == 1
    assert unit_group_order(group_binoid(3)) == 3
    assert unit_group_order(smash(free_binoid(1), group_binoid(2))) == 2
    assert unit_group_order(parse_presentation("binoid x | 0 = inf")) == 1


def test_unit_group_unknown_when_infinite():
    analyzer = SpectrumAnalyzer(HKConfig(unit_search_cap=50))
    assert analyzer.unit_group_order(parse_presentation("binoid x,y | x + y = 0")) is None


def test_unit_generators():
    p = smash(free_binoid(1), group_binoid(2))
    assert SpectrumAnalyzer().unit_generators(complete(p)) == [1]


def test_cancellativity_witness():
    rs = complete(parse_presentation("binoid x,y | x + y = 2y"))
    assert cancellativity_witness(rs) == ((0, 1), (1, 0), (0, 1))
    assert cancellativity_witness(complete(parse_presentation("binoid x,y | 3x = 3y"))) is None


def test_integral_quotient_of_path(path_complex):
    report = spectrum(path_complex)
    quotients = [integral_quotient(path_complex, q) for q in report.minimal_primes]
    assert sorted(q.generators for q in quotients) == [('a', 'b'), ('b', 'c')]
    assert all(q.congruences == () and q.infinity_relations == () for q in quotients)


def test_integral_quotient_keeps_surviving_relations(cube_relation):
    prime = spectrum(cube_relation).minimal_primes[0]
    q = integral_quotient(cube_relation, prime)
    assert q.generators == ('x', 'y')
    assert q.congruences == (((0, 3), (3, 0)),)


def test_integral_quotient_keeps_unit_factor():
    p = smash(parse_presentation("binoid x,y | x + y = inf"), group_binoid(2))
    report = spectrum(p)
    assert report.dimension == 1
    q = integral_quotient(p, report.minimal_primes[0])
    assert q.unit_group_declared_order == 2


@pytest.mark.parametrize('seed', range(10))
def test_dimension_adds_under_smash(seed):
    rng = random.Random(500 + seed)
    a, b = random_presentation(rng), random_presentation(rng)
    assert spectrum(smash(a, b)).dimension == spectrum(a).dimension + spectrum(b).dimension


@pytest.mark.parametrize('text, ideal', [
    ("free 2", [(1, 0)]),
    ("free 3", [(1, 1, 0)]),
    ("binoid x,y | 3x = 3y", [(0, 2)]),
    ("binoid a,b | 6a = 4b", [(1, 0)]),
    ("binoid X,Y,Z | 4X + 12Y = 16Z", [(0, 0, 1)]),
])
def test_proper_quotient_of_integral_binoid_loses_dimension(text, ideal):
    p = parse_presentation(text)
    assert is_integral_quotient(complete(p))
    assert spectrum(quotient_by_ideal(p, ideal)).dimension < spectrum(p).dimension


@pytest.mark.parametrize('text', [
    "free 2",
    "binoid x,y | x + y = inf",
    "sr a,b,c; facet a,b; facet b,c",
    "sr a,b,c; facet a,b; facet b,c; facet a,c",
    "sr a,b,c,d; facet a,b,c; facet b,c,d",
])
def test_reduced_binoid_has_trivial_nilradical(text):
    p = parse_presentation(text)
    rs = complete(p)
    minimal = spectrum(p).minimal_primes
    assert is_reduced(p)
    for word in itertools.product(range(3), repeat=p.rank):
        if all(prime.contains_word(word) for prime in minimal):
            assert normal_form(rs, word).is_infinity, word


def test_nilpotent_lies_in_every_minimal_prime():
    p = parse_presentation("binoid x,y | 2x = inf")
    assert all(prime.contains_word((1, 0)) for prime in spectrum(p).minimal_primes)
    assert not normal_form(complete(p), (1, 0)).is_infinity
    assert is_reduced(p) is False
