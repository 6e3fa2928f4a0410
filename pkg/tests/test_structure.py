# Tests for Smith normal form, difference groups, toric volumes and the e_HK pipeline.
from fractions import Fraction

import pytest

from config import HKConfig
from hk.hilbert_kunz import HilbertKunzCounter, IdealSpec, NSetSpec
from presentation.dsl_parser import parse_presentation
from presentation.presentation import free_binoid, group_binoid, smash
from samples import STANLEY_REISNER_COMPLEXES
from structure.ehk_pipeline import EHKPipeline, EHKResult, ehk, ehk_estimate, ehk_of_smash
from structure.lattice import difference_group, lattice_index, torsion_freefication
from structure.smith_normal_form import SmithNormalForm, smith_normal_form
from structure.toric_volume import ToricVolumeCalculator, toric_ehk
from utils.errors import HypothesisRefuted, HypothesisUnmet, ModeMismatchError, UsageError


def test_smith_normal_form_classic():
    snf = SmithNormalForm([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    snf.compute()
    assert snf.invariants == [2, 6, 12]
    assert snf.verify()


def test_smith_normal_form_transforms():
    a = [[4, 12, -16], [0, 2, 0]]
    u, d, v = smith_normal_form(a)
    assert (u * SmithNormalForm(a).original * v) == d
    assert abs(u.det()) == 1 and abs(v.det()) == 1


def test_smith_normal_form_of_empty_matrix():
    snf = SmithNormalForm([], columns=3)
    snf.compute()
    assert snf.invariants == []
    assert snf.v.rows == 3


def test_difference_group_with_torsion(weighted):
    lattice = difference_group(weighted)
    assert lattice.rank == 2
    assert lattice.torsion_invariants == [4]
    assert lattice.describe() == "Z^2 x Z/4"
    assert lattice.to_dict()['group'] == "Z^2 x Z/4"


def test_difference_group_of_numerical_semigroup_presentation():
    lattice = difference_group(parse_presentation("binoid a,b | 6a = 4b"))
    assert lattice.describe() == "Z^1 x Z/2"
    free, torsion = torsion_freefication(parse_presentation("binoid a,b | 6a = 4b"))
    assert sorted(abs(v[0]) for v in free) == [2, 3]
    assert torsion == 2


def test_difference_group_images_respect_relations(weighted):
    lattice = difference_group(weighted)
    assert lattice.image((4, 12, 0), weighted.generators) == lattice.image((0, 0, 16), weighted.generators)
    assert lattice.image((1, 0, 0), weighted.generators) != lattice.image((0, 0, 1), weighted.generators)


def test_difference_group_needs_integral_presentation():
    with pytest.raises(HypothesisUnmet):
        difference_group(parse_presentation("binoid x | 2x = inf"))


def test_lattice_index():
    assert lattice_index([(2, 0), (0, 3)]) == 6
    assert lattice_index([(1, 0), (1, 1), (0, 1)]) == 1
    with pytest.raises(UsageError):
        lattice_index([(1, 1), (2, 2)])


def test_facet_normals():
    normals = ToricVolumeCalculator().facet_normals([(4, 1), (0, 1), (1, 1)])
    assert normals == [(-1, 4), (1, 0)]


def test_toric_volumes():
    assert toric_ehk([(4, 1), (0, 1), (1, 1)], [(4, 1), (0, 1), (1, 1)]) == Fraction(13, 4)
    assert toric_ehk([(2,), (3,)], [(2,), (3,)]) == 2
    assert toric_ehk([(1, 0), (0, 1)], [(1, 0), (0, 1)]) == 1
    assert toric_ehk([(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(1, 0, 0), (0, 1, 0), (0, 0, 1)]) == 1


def test_toric_volume_of_frobenius_ideal():
    # [2]N_+ of N^2 leaves 4 residues: volume 4
    assert toric_ehk([(1, 0), (0, 1)], [(2, 0), (0, 2)]) == 4


def test_toric_degenerate_inputs():
    assert toric_ehk([], []) == 1
    assert toric_ehk([(1, 0), (0, 1)], [(0, 0)]) == 0
    with pytest.raises(HypothesisRefuted):
        toric_ehk([(1, 0), (0, 1)], [])
    with pytest.raises(HypothesisRefuted):
        toric_ehk([(1, 0), (0, 1)], [(1, 0)])
    with pytest.raises(UsageError):
        toric_ehk([(1,), (-1,)], [(1,)])


def test_toric_dimension_cap():
    with pytest.raises(HypothesisUnmet):
        toric_ehk([(1, 0), (0, 1)], [(1, 0), (0, 1)], config=HKConfig(exact_dimension_cap=1))


@pytest.mark.parametrize('text, expected', [
    ("free 3", Fraction(1)),
    ("binoid x,y | 3x = 3y", Fraction(3)),
    ("binoid a,b | 6a = 4b", Fraction(4)),
    ("sr a,b,c; facet a,b; facet b,c", Fraction(2)),
    ("smash {free 1} {group 2}", Fraction(2)),
    ("group 5", Fraction(5)),
    ("binoid x,y | 2x = 2y", Fraction(2)),
    ("binoid x,y | 5x = 5y", Fraction(5)),
    ("binoid x | 0 = inf", Fraction(0)),
])
def test_exact_ehk(text, expected):
    result = ehk(parse_presentation(text))
    assert result.is_exact
    assert result.value == expected


@pytest.mark.slow
def test_weighted_ehk(weighted):
    result = ehk(weighted)
    assert result.value == 13
    assert result.dimension == 2
    steps = [step['step'] for step in result.trace]
    assert 'torsion factor' in steps and 'toric volume' in steps
    torsion = next(step for step in result.trace if step['step'] == 'torsion factor')
    assert torsion['difference_group'] == "Z^2 x Z/4"


def test_ehk_with_given_ideal():
    p = free_binoid(2)
    assert ehk(p, IdealSpec(((2, 0), (0, 2)))).value == 4


def test_ehk_render_and_dict():
    result = ehk(parse_presentation("binoid x,y | 3x = 3y"))
    assert result.render() == "3/1"
    data = result.to_dict()
    assert data['ehk'] == {'num': 3, 'den': 1}
    assert data['dimension'] == 1


def test_non_reduced_needs_estimate():
    with pytest.raises(HypothesisUnmet):
        ehk(parse_presentation("binoid x | 2x = inf"))


def test_non_cancellative_is_refuted():
    with pytest.raises(HypothesisRefuted):
        ehk(parse_presentation("binoid x,y | x + y = 2y"))


def test_unknown_units_are_unmet():
    config = HKConfig(unit_search_cap=20)
    with pytest.raises(HypothesisUnmet):
        EHKPipeline(config).ehk(parse_presentation("binoid x,y | x + y = 0"))


def test_estimate_of_free_binoid():
    result = ehk_estimate(free_binoid(2), qs=[4, 8, 16])
    assert not result.is_exact
    assert result.estimate == pytest.approx(1.0, abs=1e-9)
    assert result.error < 1e-6
    assert result.to_dict()['ehk']['partial'] is False


def test_estimate_of_non_reduced_binoid():
    # N/[q]N_+ of <x | 2x = inf> has 2 elements for every q >= 2
    result = ehk_estimate(parse_presentation("binoid x | 2x = inf"), qs=[2, 4, 8])
    assert result.dimension == 0
    assert result.estimate == pytest.approx(2.0)


def test_estimate_marks_partial_rows():
    config = HKConfig(enumeration_cap=100)
    result = EHKPipeline(config).ehk_estimate(free_binoid(2), qs=[2, 4, 8, 16])
    assert result.partial
    assert result.estimate == pytest.approx(1.0, abs=1e-9)


def test_smash_of_results():
    a = EHKResult(Fraction(3), dimension=1)
    b = EHKResult(Fraction(2), dimension=0)
    assert ehk_of_smash(a, b).value == 6
    estimate = EHKResult(estimate=2.0, error=0.1, dimension=1)
    with pytest.raises(ModeMismatchError):
        ehk_of_smash(a, estimate)
    product = ehk_of_smash(estimate, EHKResult(estimate=3.0, error=0.0, dimension=0))
    assert product.estimate == pytest.approx(6.0)
    assert product.error == pytest.approx(0.3)


def test_smash_factorization_multiplies(cube_relation):
    p = smash(cube_relation, group_binoid(3))
    result = ehk(p)
    assert result.value == 9
    assert result.trace[0]['step'] == 'smash factorization'


@pytest.mark.parametrize('text, _facets, top', STANLEY_REISNER_COMPLEXES)
def test_face_binoid_ehk_counts_top_facets(text, _facets, top):
    assert ehk(parse_presentation(text)).value == top


def test_numerical_semigroup_trace():
    result = ehk(parse_presentation("binoid a,b | 6a = 4b"))
    torsion = next(step for step in result.trace if step['step'] == 'torsion factor')
    toric = next(step for step in result.trace if step['step'] == 'toric volume')
    assert torsion['torsion_order'] == 2
    assert torsion['difference_group'] == "Z^1 x Z/2"
    assert toric['value'] == '2'


@pytest.mark.parametrize('text', ["free 2", "binoid x,y | 3x = 3y", "sr a,b,c; facet a,b; facet b,c"])
def test_normalized_counts_approach_ehk(text):
    p = parse_presentation(text)
    exact = ehk(p)
    counter = HilbertKunzCounter()
    n = counter.maximal_ideal(p)
    target = float(exact.value)
    errors = [abs(counter.hkf(p, n, NSetSpec.whole(), q).count / q ** exact.dimension - target)
              for q in (8, 16, 32, 64)]
    assert errors[-1] <= errors[0]
    assert errors[-1] < 0.1 * target


@pytest.mark.parametrize('text, qs', [
    ("free 3", [8, 12, 16, 24, 32]),
    ("binoid x,y | 3x = 3y", [16, 24, 32, 48, 64]),
    ("binoid a,b | 6a = 4b", [16, 24, 32, 48, 64]),
    ("sr a,b,c; facet a,b; facet b,c", [8, 12, 16, 24, 32]),
    ("smash {free 1} {group 2}", [16, 24, 32, 48, 64]),
    ("group 5", [8, 16]),
])
def test_estimate_agrees_with_exact_value(text, qs):
    p = parse_presentation(text)
    exact = float(ehk(p).value)
    assert ehk_estimate(p, qs=qs).estimate == pytest.approx(exact, rel=0.05)
