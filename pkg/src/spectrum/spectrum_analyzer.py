# Computes Spec N over generator subsets plus the structural predicates the reduction theorems need.
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from presentation.presentation import Presentation, UnitFactor, Word
from rewrite.rewrite_system import (
    CompletionEngine,
    RewriteSystem,
    complete,
    standard_monomials,
)
from utils.errors import EnumerationCapExceeded, SubsetCapExceeded

DEFAULT_SUBSET_CAP = 20
DEFAULT_REDUCED_CAP = 64
DEFAULT_UNIT_CAP = 100_000


@dataclass(frozen=True)
class PrimeIdeal:
    """Prime ideal generated by a generator subset; closure lists every generator it contains"""
    generator_subset: FrozenSet[int]
    closure: FrozenSet[int]
    quotient_dimension: int = 0

    def contains_word(self, word: Sequence[int]) -> bool:
        return any(word[i] for i in self.closure)

    def names(self, generators: Sequence[str]) -> List[str]:
        return [generators[i] for i in sorted(self.closure)]


@dataclass
class SpectrumReport:
    generators: Tuple[str, ...]
    primes: List[PrimeIdeal] = field(default_factory=list)
    minimal_primes: List[PrimeIdeal] = field(default_factory=list)
    dimension: int = -1

    @property
    def quotient_dimensions(self) -> List[int]:
        return [p.quotient_dimension for p in self.minimal_primes]

    @property
    def is_zero(self) -> bool:
        return not self.primes

    def to_dict(self) -> Dict:
        return {
            'generators': list(self.generators),
            'dimension': self.dimension,
            'primes': [p.names(self.generators) for p in self.primes],
            'minimal_primes': [p.names(self.generators) for p in self.minimal_primes],
            'quotient_dimensions': self.quotient_dimensions,
        }


def is_integral_quotient(rs: RewriteSystem) -> bool:
    """True iff no two non-∞ elements sum to ∞: every ∞-generator is a single generator"""
    if rs.zero:
        return False
    return all(sum(lhs) == 1 for lhs in rs.infinity_generators)


def _unit_word(rank: int, indices) -> Word:
    return tuple(1 if i in indices else 0 for i in range(rank))


def _test_subset(rs: RewriteSystem, subset: FrozenSet[int]) -> Optional[PrimeIdeal]:
    quotient = CompletionEngine(budget=rs.budget).extend(
        rs, [_unit_word(rs.rank, {i}) for i in subset]
    )
    if quotient.zero:
        return None
    closure = frozenset(i for i in range(rs.rank) if quotient.reduce(_unit_word(rs.rank, {i})).is_infinity)
    if closure != subset or not is_integral_quotient(quotient):
        return None
    return PrimeIdeal(subset, closure)


def _test_subset_batch(args: Tuple[RewriteSystem, List[FrozenSet[int]]]) -> List[PrimeIdeal]:
    rs, subsets = args
    return [prime for prime in (_test_subset(rs, s) for s in subsets) if prime is not None]


class SpectrumAnalyzer:
    """Prime spectrum, dimension, reducedness and unit group of a presented binoid"""

    def __init__(self, config=None):
        self.config = config
        self.logger = logging.getLogger(__name__)
        self.subset_cap = config.subset_cap if config is not None else DEFAULT_SUBSET_CAP
        self.reduced_cap = config.reduced_multiple_cap if config is not None else DEFAULT_REDUCED_CAP
        self.unit_cap = config.unit_search_cap if config is not None else DEFAULT_UNIT_CAP
        self.threads = config.threads if config is not None else 1

    def system(self, p: Presentation) -> RewriteSystem:
        return complete(p, config=self.config)

    def candidate_ideal_closure(self, rs: RewriteSystem, s: Sequence[int]) -> FrozenSet[int]:
        """Generators lying in the ideal generated by the generator subset s"""
        quotient = CompletionEngine(budget=rs.budget).extend(rs, [_unit_word(rs.rank, {i}) for i in s])
        return frozenset(i for i in range(rs.rank) if quotient.reduce(_unit_word(rs.rank, {i})).is_infinity)

    def spectrum(self, p: Presentation, rs: Optional[RewriteSystem] = None) -> SpectrumReport:
        if p.rank > self.subset_cap:
            raise SubsetCapExceeded(
                f"{p.rank} generators exceed the subset cap of {self.subset_cap}; Spec N not enumerated"
            )
        rs = rs or self.system(p)
        report = SpectrumReport(p.generators)
        if rs.zero:
            return report

        subsets = [
            frozenset(c) for size in range(p.rank + 1) for c in itertools.combinations(range(p.rank), size)
        ]
        if self.threads > 1 and len(subsets) > 64:
            chunks = [subsets[i::self.threads] for i in range(self.threads)]
            with ProcessPoolExecutor(max_workers=self.threads) as pool:
                primes = [prime for batch in pool.map(_test_subset_batch, [(rs, c) for c in chunks]) for prime in batch]
        else:
            primes = _test_subset_batch((rs, subsets))

        primes.sort(key=lambda prime: (len(prime.closure), sorted(prime.closure)))
        heights: Dict[FrozenSet[int], int] = {}
        for prime in reversed(primes):
            above = [heights[q.closure] for q in primes if prime.closure < q.closure]
            heights[prime.closure] = 1 + max(above) if above else 0

        report.primes = [PrimeIdeal(q.generator_subset, q.closure, heights[q.closure]) for q in primes]
        report.minimal_primes = [
            q for q in report.primes if not any(other.closure < q.closure for other in report.primes)
        ]
        report.dimension = max(q.quotient_dimension for q in report.minimal_primes)
        self.logger.debug(
            f"Spec N: {len(report.primes)} primes, {len(report.minimal_primes)} minimal, dim {report.dimension}"
        )
        return report

    def is_reduced(self, p: Presentation, rs: Optional[RewriteSystem] = None) -> Optional[bool]:
        """True/False when decided, None when the bounded fallback test is inconclusive"""
        rs = rs or self.system(p)
        if rs.zero or is_integral_quotient(rs):
            return True
        if p.rank > self.subset_cap:
            return self._is_reduced_bounded(rs)

        closures = [q.closure for q in self.spectrum(p, rs).minimal_primes]
        # nil(N) is the intersection of the minimal primes: a word lies in it iff its support meets every closure
        transversals: List[FrozenSet[int]] = []
        for size in range(1, p.rank + 1):
            for combo in itertools.combinations(range(p.rank), size):
                hitting = frozenset(combo)
                if any(t <= hitting for t in transversals):
                    continue
                if all(hitting & c for c in closures):
                    transversals.append(hitting)
                    if not rs.reduce(_unit_word(rs.rank, hitting)).is_infinity:
                        self.logger.debug(f"Nilpotent non-∞ element on generators {sorted(hitting)}")
                        return False
        return True

    def _is_reduced_bounded(self, rs: RewriteSystem) -> Optional[bool]:
        for i in range(rs.rank):
            e = _unit_word(rs.rank, {i})
            if rs.reduce(e).is_infinity:
                continue
            for k in range(2, self.reduced_cap + 1):
                if rs.reduce(tuple(k * x for x in e)).is_infinity:
                    return False
        for lhs in rs.infinity_generators:
            for k in range(2, max(lhs) + 1):
                if all(x % k == 0 for x in lhs) and not rs.reduce(tuple(x // k for x in lhs)).is_infinity:
                    return False
        if not rs.vector_rules and all(max(lhs) == 1 for lhs in rs.infinity_generators):
            return True
        return None

    def unit_generators(self, rs: RewriteSystem) -> List[int]:
        """Generator g is a unit iff N/⟨g⟩ is the zero binoid"""
        engine = CompletionEngine(budget=rs.budget)
        return [i for i in range(rs.rank) if engine.extend(rs, [_unit_word(rs.rank, {i})]).zero]

    def unit_group_order(self, p: Presentation, rs: Optional[RewriteSystem] = None) -> Optional[int]:
        """|N^×|, or None when the unit group exceeds the search cap"""
        rs = rs or self.system(p)
        if rs.zero:
            return 1
        units = self.unit_generators(rs)
        try:
            return len(standard_monomials(rs, self.unit_cap, support=units))
        except EnumerationCapExceeded:
            self.logger.warning(f"Unit group exceeds {self.unit_cap} elements; order reported unknown")
            return None

    def prime_quotient_system(self, rs: RewriteSystem, prime: PrimeIdeal) -> RewriteSystem:
        return CompletionEngine(budget=rs.budget).extend(rs, [_unit_word(rs.rank, {i}) for i in prime.closure])

    def integral_quotient(self, p: Presentation, prime: PrimeIdeal, rs: Optional[RewriteSystem] = None) -> Presentation:
        """Presentation of N/𝔭 on the generators outside 𝔭"""
        rs = rs or self.system(p)
        quotient = self.prime_quotient_system(rs, prime)
        keep = [i for i in range(p.rank) if i not in prime.closure]

        def restrict(word: Word) -> Word:
            return tuple(word[i] for i in keep)

        congruences = tuple((restrict(r.lhs), restrict(r.rhs.vector)) for r in quotient.vector_rules)
        names = tuple(p.generators[i] for i in keep)
        unit_factors = []
        for factor in p.unit_factors:
            if factor.generator not in names:
                continue
            pos = names.index(factor.generator)
            implied = (tuple(factor.order if j == pos else 0 for j in range(len(keep))), (0,) * len(keep))
            if implied in congruences:
                unit_factors.append(UnitFactor(factor.generator, factor.order))
        return Presentation(names, congruences, (), tuple(unit_factors), p.cancellative)


def cancellativity_witness(rs: RewriteSystem) -> Optional[Tuple[Word, Word, Word]]:
    """A rule c+a -> c+b with a != b in N refutes cancellativity; returns (a, b, c)"""
    if rs.zero:
        return None
    for rule in rs.vector_rules:
        common = tuple(min(x, y) for x, y in zip(rule.lhs, rule.rhs.vector))
        if not any(common):
            continue
        a = tuple(x - c for x, c in zip(rule.lhs, common))
        b = tuple(y - c for y, c in zip(rule.rhs.vector, common))
        if rs.reduce(a) != rs.reduce(b):
            return a, b, common
    return None


def candidate_ideal_closure(rs: RewriteSystem, s: Sequence[int]) -> FrozenSet[int]:
    return SpectrumAnalyzer().candidate_ideal_closure(rs, s)


def spectrum(p: Presentation, config=None) -> SpectrumReport:
    return SpectrumAnalyzer(config).spectrum(p)


def is_reduced(p: Presentation, cap: Optional[int] = None, config=None) -> Optional[bool]:
    analyzer = SpectrumAnalyzer(config)
    if cap is not None:
        analyzer.reduced_cap = cap
    return analyzer.is_reduced(p)


def unit_group_order(p: Presentation, config=None) -> Optional[int]:
    return SpectrumAnalyzer(config).unit_group_order(p)


def integral_quotient(p: Presentation, prime: PrimeIdeal, config=None) -> Presentation:
    return SpectrumAnalyzer(config).integral_quotient(p, prime)
