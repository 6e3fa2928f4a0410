# Frobenius sums, residue class enumeration and Hilbert-Kunz function values over the supported N-set kinds.
import logging
import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Deque, Dict, Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from presentation.presentation import Presentation, Word, WordLike
from rewrite.rewrite_system import (
    CompletionEngine,
    Element,
    RewriteSystem,
    as_element,
    complete,
    standard_monomials,
)
from spectrum.spectrum_analyzer import SpectrumAnalyzer
from utils.errors import BinoidError, EnumerationCapExceeded, HypothesisRefuted, HypothesisUnmet, UsageError

VERIFIED = 'verified'
UNVERIFIED = 'unverified'
REFUTED = 'refuted'
PRIMARY_STATUSES = (VERIFIED, UNVERIFIED, REFUTED)

WHOLE = 'whole'
IDEAL = 'ideal'
QUOTIENT = 'quotient'
POINTED_UNION = 'pointed-union'

DEFAULT_ENUMERATION_CAP = 10_000_000


@dataclass(frozen=True)
class IdealSpec:
    """Finitely generated ideal; ∞ generators are dropped"""
    generators: Tuple[Element, ...] = ()
    primary_status: str = UNVERIFIED

    def __post_init__(self):
        elements = tuple(as_element(g) for g in self.generators)
        object.__setattr__(self, 'generators', tuple(g for g in elements if not g.is_infinity))
        if self.primary_status not in PRIMARY_STATUSES:
            raise UsageError(f"unknown primary status '{self.primary_status}'")

    @classmethod
    def from_words(cls, p: Presentation, words: Iterable[WordLike], status: str = UNVERIFIED) -> 'IdealSpec':
        return cls(tuple(Element(p.as_word(w)) for w in words), status)

    @property
    def words(self) -> List[Word]:
        return [g.vector for g in self.generators]

    def with_status(self, status: str) -> 'IdealSpec':
        return replace(self, primary_status=status)


@dataclass(frozen=True)
class NSetSpec:
    """The N-sets hkf accepts: N itself, an ideal, a residue quotient, or a pointed union of these"""
    kind: str = WHOLE
    ideal: Optional[IdealSpec] = None
    parts: Tuple['NSetSpec', ...] = ()

    def __post_init__(self):
        if self.kind not in (WHOLE, IDEAL, QUOTIENT, POINTED_UNION):
            raise UsageError(f"unknown N-set kind '{self.kind}'")
        if self.kind in (IDEAL, QUOTIENT) and self.ideal is None:
            raise UsageError(f"N-set kind '{self.kind}' needs an ideal")
        object.__setattr__(self, 'parts', tuple(self.parts))

    @classmethod
    def whole(cls) -> 'NSetSpec':
        return cls(WHOLE)

    @classmethod
    def of_ideal(cls, ideal: IdealSpec) -> 'NSetSpec':
        return cls(IDEAL, ideal)

    @classmethod
    def quotient(cls, ideal: IdealSpec) -> 'NSetSpec':
        return cls(QUOTIENT, ideal)

    @classmethod
    def pointed_union(cls, parts: Sequence['NSetSpec']) -> 'NSetSpec':
        return cls(POINTED_UNION, None, tuple(parts))

    @property
    def generator_count(self) -> int:
        if self.kind == IDEAL:
            return len(self.ideal.generators)
        if self.kind == POINTED_UNION:
            return sum(part.generator_count for part in self.parts)
        return 1


@dataclass
class HKSample:
    """One value hkf(n, T, q); count is None when the row failed"""
    q: int
    count: Optional[int]
    enumerated: int = 0
    error: Optional[str] = None
    exit_code: int = 0


def _unit(rank: int, i: int) -> Word:
    return tuple(1 if j == i else 0 for j in range(rank))


def _has_finitely_many_standard_words(rs: RewriteSystem) -> bool:
    """Every generator needs a pure power among the rule left sides"""
    return all(any(r.lhs[i] and r.lhs[i] == sum(r.lhs) for r in rs.rules) for i in range(rs.rank))


class HilbertKunzCounter:
    """Counts residue sets T/([q]n+T) by enumerating normal forms"""

    def __init__(self, config=None):
        self.config = config
        self.logger = logging.getLogger(__name__)
        self.cap = config.enumeration_cap if config is not None else DEFAULT_ENUMERATION_CAP
        self.analyzer = SpectrumAnalyzer(config)
        self.assume_semipositive = config.assume_semipositive if config is not None else False
        self._systems: Dict[Presentation, RewriteSystem] = {}

    def system(self, p: Presentation) -> RewriteSystem:
        if p not in self._systems:
            self._systems[p] = complete(p, config=self.config)
        return self._systems[p]

    def quotient_system(self, p: Presentation, words: Iterable[Sequence[int]]) -> RewriteSystem:
        rs = self.system(p)
        return CompletionEngine(budget=rs.budget).extend(rs, list(words))

    def frobenius_sum(self, i: IdealSpec, q: int) -> IdealSpec:
        """[q]I is generated by the q-fold multiples of the generators of I"""
        if q < 1:
            raise UsageError(f"q must be >= 1, got {q}")
        return replace(i, generators=tuple(Element(tuple(q * x for x in g)) for g in i.words))

    def maximal_ideal(self, p: Presentation) -> IdealSpec:
        rs = self.system(p)
        if not self.assume_semipositive and self.analyzer.unit_group_order(p, rs) is None:
            raise HypothesisUnmet("unit group could not be determined; N_+ is unknown")
        if rs.zero:
            return IdealSpec((), VERIFIED)
        units = set(self.analyzer.unit_generators(rs))
        words = [_unit(p.rank, i) for i in range(p.rank) if i not in units]
        return IdealSpec(tuple(rs.reduce(w) for w in words))

    def residue_enumerate(self, p: Presentation, j: IdealSpec, cap: Optional[int] = None) -> List[Element]:
        """All non-∞ elements of N/j"""
        cap = cap or self.cap
        try:
            words = standard_monomials(self.quotient_system(p, j.words), cap)
        except EnumerationCapExceeded as e:
            self.logger.error(f"Residue enumeration exceeded {cap} elements (primary status {j.primary_status})")
            raise EnumerationCapExceeded(cap, e.partial_count, j.primary_status) from None
        return [Element(w) for w in words]

    def ideal_residue(self, rs: RewriteSystem, ideal_words: Sequence[Sequence[int]],
                      killed_words: Sequence[Sequence[int]], cap: Optional[int] = None) -> List[Word]:
        """Elements of the ideal generated by ideal_words that avoid the ideal generated by killed_words"""
        cap = cap or self.cap
        quotient = CompletionEngine(budget=rs.budget).extend(rs, list(killed_words))
        if quotient.zero:
            return []
        seen = set()
        found: List[Word] = []
        queue: Deque[Word] = deque()

        def visit(word: Sequence[int]) -> None:
            element = quotient.reduce(word)
            if element.is_infinity or element.vector in seen:
                return
            seen.add(element.vector)
            found.append(element.vector)
            if len(found) > cap:
                raise EnumerationCapExceeded(cap, len(found))
            queue.append(element.vector)

        for word in ideal_words:
            visit(word)
        while queue:
            word = queue.popleft()
            for i in range(rs.rank):
                visit(word[:i] + (word[i] + 1,) + word[i + 1:])
        return found

    def primary_witnesses(self, p: Presentation, n: IdealSpec) -> List[int]:
        """Smallest d_g with d_g·g in n, for every non-unit generator g"""
        rs = self.system(p)
        if rs.zero:
            return []
        quotient = self.quotient_system(p, n.words)
        size = len(standard_monomials(quotient, self.cap))
        units = set(self.analyzer.unit_generators(rs))
        witnesses = []
        for i in range(p.rank):
            if i in units:
                continue
            e = _unit(p.rank, i)
            for d in range(1, size + 2):
                if quotient.reduce(tuple(d * x for x in e)).is_infinity:
                    witnesses.append(d)
                    break
            else:
                raise HypothesisRefuted(f"generator {p.generators[i]} is not nilpotent modulo the ideal")
        return witnesses

    def verify_primary(self, p: Presentation, n: IdealSpec) -> IdealSpec:
        """Return n with its primary status decided by enumeration of N/n"""
        rs = self.system(p)
        if rs.zero:
            return n.with_status(VERIFIED)
        quotient = self.quotient_system(p, n.words)
        if quotient.zero:
            return n.with_status(REFUTED)
        if not _has_finitely_many_standard_words(quotient):
            self.logger.info("Ideal is not N_+-primary: N/n is infinite")
            return n.with_status(REFUTED)
        try:
            self.primary_witnesses(p, n)
        except EnumerationCapExceeded:
            return n.with_status(UNVERIFIED)
        except HypothesisRefuted as e:
            self.logger.info(f"Ideal is not N_+-primary: {e.message}")
            return n.with_status(REFUTED)
        return n.with_status(VERIFIED)

    def hkf(self, p: Presentation, n: IdealSpec, t: NSetSpec, q: int) -> HKSample:
        if q < 1:
            raise UsageError(f"q must be >= 1, got {q}")
        if n.primary_status == REFUTED:
            raise HypothesisRefuted("hkf needs an N_+-primary ideal; the given ideal is not primary")
        count = self._count(p, n, t, q)
        return HKSample(q=q, count=count, enumerated=count)

    def _count(self, p: Presentation, n: IdealSpec, t: NSetSpec, q: int) -> int:
        frobenius = self.frobenius_sum(n, q)
        if t.kind == WHOLE:
            return len(self.residue_enumerate(p, frobenius))
        if t.kind == QUOTIENT:
            # (N/I)/([q]n + N/I) = N/([q]n ∪ I)
            killed = IdealSpec(frobenius.generators + t.ideal.generators, n.primary_status)
            return len(self.residue_enumerate(p, killed))
        if t.kind == IDEAL:
            sums = [tuple(a + b for a, b in zip(g, f)) for g in frobenius.words for f in t.ideal.words]
            try:
                return len(self.ideal_residue(self.system(p), t.ideal.words, sums))
            except EnumerationCapExceeded as e:
                raise EnumerationCapExceeded(e.cap, e.partial_count, n.primary_status) from None
        return sum(self._count(p, n, part, q) for part in t.parts)

    def hkf_table(self, p: Presentation, n: IdealSpec, t: NSetSpec, qs: Sequence[int]) -> List[HKSample]:
        threads = self.config.threads if self.config is not None else 1
        rows = [(self.config, p, n, t, q) for q in qs]
        if threads > 1 and len(rows) > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                return list(pool.map(_hkf_row, rows))
        return [self._row(p, n, t, q) for q in qs]

    def _row(self, p: Presentation, n: IdealSpec, t: NSetSpec, q: int) -> HKSample:
        try:
            return self.hkf(p, n, t, q)
        except BinoidError as e:
            self.logger.error(f"hkf row q={q} failed: {e.message}")
            return HKSample(q=q, count=None, error=e.message, exit_code=e.exit_code)

    def hkf_upper_bound(self, p: Presentation, n: IdealSpec, t: NSetSpec, q: int) -> int:
        """r|N^×| + r|N^×|·q^s·∏d_i with r generators of T, s non-unit generators, d_i primary witnesses"""
        units = self.analyzer.unit_group_order(p, self.system(p))
        if units is None:
            raise HypothesisUnmet("unit group could not be determined; no explicit bound")
        witnesses = self.primary_witnesses(p, n)
        r = t.generator_count
        return r * units + r * units * q ** len(witnesses) * math.prod(witnesses)


def _hkf_row(args) -> HKSample:
    config, p, n, t, q = args
    return HilbertKunzCounter(config)._row(p, n, t, q)


def samples_to_frame(samples: Sequence[HKSample]) -> pd.DataFrame:
    frame = pd.DataFrame(
        [{'q': s.q, 'count': s.count, 'error': s.error} for s in samples],
        columns=['q', 'count', 'error'],
    )
    return frame.astype({'count': 'Int64'})


def frobenius_sum(i: IdealSpec, q: int) -> IdealSpec:
    return HilbertKunzCounter().frobenius_sum(i, q)


def maximal_ideal(p: Presentation, config=None) -> IdealSpec:
    return HilbertKunzCounter(config).maximal_ideal(p)


def residue_enumerate(p: Presentation, j: IdealSpec, cap: Optional[int] = None, config=None) -> List[Element]:
    return HilbertKunzCounter(config).residue_enumerate(p, j, cap)


def verify_primary(p: Presentation, n: IdealSpec, config=None) -> IdealSpec:
    return HilbertKunzCounter(config).verify_primary(p, n)


def hkf(p: Presentation, n: IdealSpec, t: NSetSpec, q: int, config=None) -> HKSample:
    return HilbertKunzCounter(config).hkf(p, n, t, q)


def hkf_table(p: Presentation, n: IdealSpec, t: NSetSpec, qs: Sequence[int], config=None) -> List[HKSample]:
    return HilbertKunzCounter(config).hkf_table(p, n, t, qs)


def hkf_upper_bound(p: Presentation, n: IdealSpec, t: NSetSpec, q: int, config=None) -> int:
    return HilbertKunzCounter(config).hkf_upper_bound(p, n, t, q)
