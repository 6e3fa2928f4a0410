# Completes binoid presentations into confluent rewriting systems on exponent vectors and decides the word problem.
import logging
from collections import deque
from dataclasses import dataclass
from typing import Deque, Iterable, List, Optional, Sequence, Tuple, Union

from presentation.presentation import Presentation, Word
from utils.errors import CompletionBudgetExceeded, EnumerationCapExceeded, InvalidPresentationError

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 100_000


def order_key(word: Word) -> Tuple[int, Word]:
    """Admissible order: total degree, then the exponent vector read from the last generator backwards"""
    return sum(word), word[::-1]


def divides(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def overlaps(a: Sequence[int], b: Sequence[int]) -> bool:
    return any(x and y for x, y in zip(a, b))


@dataclass(frozen=True)
class Element:
    """Normal form exponent vector of a binoid element; vector None is ∞"""
    vector: Optional[Word] = None

    @property
    def is_infinity(self) -> bool:
        return self.vector is None

    def __str__(self) -> str:
        return 'inf' if self.vector is None else str(list(self.vector))


INFINITY = Element(None)
ElementLike = Union[Element, Sequence[int], None]


def as_element(value: ElementLike) -> Element:
    if isinstance(value, Element):
        return value
    if value is None:
        return INFINITY
    return Element(tuple(int(e) for e in value))


@dataclass(frozen=True)
class RewriteRule:
    lhs: Word
    rhs: Element

    def __post_init__(self):
        if not any(self.lhs):
            raise InvalidPresentationError("rewrite rule with empty left side")
        if not self.rhs.is_infinity and order_key(self.lhs) <= order_key(self.rhs.vector):
            raise InvalidPresentationError(f"rule {self.lhs} -> {self.rhs} does not decrease the order")

    def apply(self, word: Sequence[int]) -> Element:
        """Rewrite one occurrence of lhs inside word (caller checks divisibility)"""
        if self.rhs.is_infinity:
            return INFINITY
        return Element(tuple(w - l + r for w, l, r in zip(word, self.lhs, self.rhs.vector)))

    def __str__(self) -> str:
        return f"{list(self.lhs)} -> {self.rhs}"


def _reduce(rules: Sequence[RewriteRule], word: Sequence[int]) -> Element:
    current = tuple(word)
    while True:
        for rule in rules:
            if divides(rule.lhs, current):
                result = rule.apply(current)
                if result.is_infinity:
                    return INFINITY
                current = result.vector
                break
        else:
            return Element(current)


@dataclass(frozen=True)
class RewriteSystem:
    """Reduced confluent terminating rule set; zero marks the zero binoid (0 = ∞)"""
    generators: Tuple[str, ...]
    rules: Tuple[RewriteRule, ...] = ()
    zero: bool = False
    iterations: int = 0
    budget: int = DEFAULT_BUDGET

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def infinity_generators(self) -> List[Word]:
        """Minimal generators of the ∞-ideal in normal-form coordinates"""
        if self.zero:
            return [(0,) * self.rank]
        return [r.lhs for r in self.rules if r.rhs.is_infinity]

    @property
    def vector_rules(self) -> List[RewriteRule]:
        return [r for r in self.rules if not r.rhs.is_infinity]

    def reduce(self, word: Sequence[int]) -> Element:
        if len(word) != self.rank:
            raise InvalidPresentationError(f"word {tuple(word)} has {len(word)} entries, expected {self.rank}")
        if self.zero:
            return INFINITY
        return _reduce(self.rules, word)

    def is_standard(self, word: Sequence[int]) -> bool:
        return not self.zero and not any(divides(r.lhs, word) for r in self.rules)

    def summary(self) -> List[str]:
        if self.zero:
            return ["0 -> inf"]
        return [str(r) for r in self.rules]


class CompletionEngine:
    """Knuth-Bendix completion of commutative congruences with an absorbing element"""

    def __init__(self, config=None, budget: Optional[int] = None):
        self.config = config
        if budget is None:
            budget = config.completion_budget if config is not None else DEFAULT_BUDGET
        self.budget = budget
        self.logger = logging.getLogger(__name__)

    def complete(self, p: Presentation) -> RewriteSystem:
        if p.zero_word in p.infinity_relations:
            return RewriteSystem(p.generators, zero=True, budget=self.budget)
        equations = [(Element(l), Element(r)) for l, r in p.congruences]
        equations += [(Element(w), INFINITY) for w in p.infinity_relations]
        return self._run(p.generators, [], equations)

    def extend(self, rs: RewriteSystem, infinity_words: Iterable[Sequence[int]]) -> RewriteSystem:
        """Recomplete rs with the given words sent to ∞"""
        if rs.zero:
            return rs
        equations = [(as_element(w), INFINITY) for w in infinity_words]
        if not equations:
            return rs
        return self._run(rs.generators, list(rs.rules), equations)

    def _orient(self, rules: List[RewriteRule], a: Element, b: Element) -> Optional[RewriteRule]:
        a = INFINITY if a.is_infinity else _reduce(rules, a.vector)
        b = INFINITY if b.is_infinity else _reduce(rules, b.vector)
        if a == b:
            return None
        if a.is_infinity or b.is_infinity:
            finite = b if a.is_infinity else a
            if not any(finite.vector):
                raise _ZeroBinoid()
            return RewriteRule(finite.vector, INFINITY)
        if order_key(a.vector) > order_key(b.vector):
            return RewriteRule(a.vector, b)
        return RewriteRule(b.vector, a)

    def _run(self, generators: Tuple[str, ...], settled: List[RewriteRule],
             equations: List[Tuple[Element, Element]]) -> RewriteSystem:
        rules: List[RewriteRule] = list(settled)
        pairs: Deque[Tuple[int, int]] = deque()

        def add_rule(rule: RewriteRule) -> None:
            rules.append(rule)
            new = len(rules) - 1
            for i in range(new):
                if overlaps(rules[i].lhs, rule.lhs):
                    pairs.append((i, new))

        iterations = 0
        try:
            for a, b in equations:
                rule = self._orient(rules, a, b)
                if rule is not None:
                    add_rule(rule)

            while pairs:
                i, j = pairs.popleft()
                if iterations >= self.budget:
                    unresolved = (rules[i].lhs, rules[j].lhs)
                    self.logger.error(f"Completion budget {self.budget} exhausted at pair {unresolved}")
                    raise CompletionBudgetExceeded(self.budget, unresolved)
                iterations += 1

                overlap = tuple(max(x, y) for x, y in zip(rules[i].lhs, rules[j].lhs))
                rule = self._orient(rules, rules[i].apply(overlap), rules[j].apply(overlap))
                if rule is not None:
                    add_rule(rule)
        except _ZeroBinoid:
            self.logger.debug("Completion derived 0 = inf: zero binoid")
            return RewriteSystem(generators, zero=True, iterations=iterations, budget=self.budget)

        reduced = _interreduce(rules)
        self.logger.debug(f"Completion finished after {iterations} pair resolutions with {len(reduced)} rules")
        return RewriteSystem(generators, tuple(reduced), iterations=iterations, budget=self.budget)


class _ZeroBinoid(Exception):
    """Raised inside completion once 0 = ∞ is derived"""


def _interreduce(rules: List[RewriteRule]) -> List[RewriteRule]:
    ordered = sorted(rules, key=lambda r: (order_key(r.lhs), 0 if r.rhs.is_infinity else 1))
    minimal: List[RewriteRule] = []
    for rule in ordered:
        if not any(divides(k.lhs, rule.lhs) for k in minimal):
            minimal.append(rule)

    reduced = []
    for rule in minimal:
        if rule.rhs.is_infinity:
            reduced.append(rule)
            continue
        rhs = _reduce(minimal, rule.rhs.vector)
        reduced.append(RewriteRule(rule.lhs, rhs))
    return reduced


def complete(p: Presentation, budget: Optional[int] = None, config=None) -> RewriteSystem:
    """Confluent terminating system for the congruence of p"""
    return CompletionEngine(config, budget).complete(p)


def normal_form(rs: RewriteSystem, w: ElementLike) -> Element:
    element = as_element(w)
    if element.is_infinity:
        return INFINITY
    return rs.reduce(element.vector)


def add(rs: RewriteSystem, a: ElementLike, b: ElementLike) -> Element:
    a, b = as_element(a), as_element(b)
    if a.is_infinity or b.is_infinity:
        return INFINITY
    return rs.reduce(tuple(x + y for x, y in zip(a.vector, b.vector)))


def scale(rs: RewriteSystem, a: ElementLike, k: int) -> Element:
    a = as_element(a)
    if a.is_infinity:
        return INFINITY
    return rs.reduce(tuple(k * x for x in a.vector))


def extend_with_infinity(rs: RewriteSystem, words: Iterable[ElementLike]) -> RewriteSystem:
    """System of the residue binoid N/⟨words⟩"""
    finite = [as_element(w).vector for w in words if not as_element(w).is_infinity]
    return CompletionEngine(budget=rs.budget).extend(rs, finite)


def ideal_membership(rs: RewriteSystem, gens: Iterable[ElementLike], x: ElementLike) -> bool:
    """True iff x lies in the ideal generated by gens"""
    x = as_element(x)
    if x.is_infinity:
        return True
    return extend_with_infinity(rs, gens).reduce(x.vector).is_infinity


def standard_monomials(rs: RewriteSystem, cap: int, support: Optional[Sequence[int]] = None) -> List[Word]:
    """BFS over the non-∞ normal forms, optionally restricted to the given generator indices"""
    if rs.zero:
        return []
    indices = range(rs.rank) if support is None else list(support)
    start = (0,) * rs.rank
    seen = {start}
    found = [start]
    queue: Deque[Word] = deque([start])
    while queue:
        word = queue.popleft()
        for i in indices:
            step = word[:i] + (word[i] + 1,) + word[i + 1:]
            if step in seen or not rs.is_standard(step):
                continue
            seen.add(step)
            found.append(step)
            if len(found) > cap:
                raise EnumerationCapExceeded(cap, len(found))
            queue.append(step)
    return found
