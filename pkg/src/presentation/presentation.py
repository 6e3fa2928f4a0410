# Binoid presentations and the constructions that build them: free, group, smash, quotient, Stanley-Reisner.
import itertools
import logging
import re
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from utils.errors import InvalidPresentationError, UndeclaredGeneratorError

logger = logging.getLogger(__name__)

# An exponent vector over the generators; commutativity lives in the data model.
Word = Tuple[int, ...]
WordLike = Union[Sequence[int], Mapping[str, int]]

GENERATOR_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


@dataclass(frozen=True)
class UnitFactor:
    """Declared cyclic unit factor: generator with order*generator = 0"""
    generator: str
    order: int


@dataclass(frozen=True)
class Presentation:
    """Generators, congruences and ∞-relations of a finitely generated commutative binoid"""
    generators: Tuple[str, ...]
    congruences: Tuple[Tuple[Word, Word], ...] = ()
    infinity_relations: Tuple[Word, ...] = ()
    unit_factors: Tuple[UnitFactor, ...] = ()
    cancellative: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'generators', tuple(self.generators))
        # relations are stored sorted, so equality ignores declaration order
        object.__setattr__(self, 'congruences', tuple(sorted((tuple(l), tuple(r)) for l, r in self.congruences)))
        object.__setattr__(self, 'infinity_relations', tuple(sorted(tuple(w) for w in self.infinity_relations)))
        object.__setattr__(self, 'unit_factors', tuple(self.unit_factors))
        self._validate()

    def _validate(self) -> None:
        if len(set(self.generators)) != len(self.generators):
            raise InvalidPresentationError(f"duplicate generator names in {self.generators}")
        for name in self.generators:
            if not GENERATOR_NAME.match(name) or name in RESERVED_WORDS:
                raise InvalidPresentationError(f"invalid generator name '{name}'")

        words = [w for pair in self.congruences for w in pair] + list(self.infinity_relations)
        for word in words:
            if len(word) != self.rank:
                raise InvalidPresentationError(
                    f"word {word} has {len(word)} entries, expected {self.rank}"
                )
            if any(not isinstance(e, int) or e < 0 for e in word):
                raise InvalidPresentationError(f"negative or non-integer exponent in {word}")

        for factor in self.unit_factors:
            if factor.generator not in self.generators:
                raise UndeclaredGeneratorError(f"unit factor on undeclared generator '{factor.generator}'")
            if factor.order < 2:
                raise InvalidPresentationError(f"unit factor order must be >= 2, got {factor.order}")
            relation = (self.scaled_unit(factor.generator, factor.order), self.zero_word)
            if relation not in self.congruences:
                raise InvalidPresentationError(
                    f"unit factor {factor.generator}:{factor.order} lacks its congruence"
                )

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def zero_word(self) -> Word:
        return (0,) * self.rank

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise UndeclaredGeneratorError(f"undeclared generator '{name}'") from None

    def scaled_unit(self, name: str, k: int) -> Word:
        i = self.index(name)
        return tuple(k if j == i else 0 for j in range(self.rank))

    def as_word(self, word: WordLike) -> Word:
        """Coerce an exponent sequence or a {generator: exponent} mapping into a Word"""
        if isinstance(word, Mapping):
            vector = [0] * self.rank
            for name, exponent in word.items():
                vector[self.index(name)] += exponent
            word = vector
        word = tuple(int(e) for e in word)
        if len(word) != self.rank:
            raise InvalidPresentationError(f"word {word} has {len(word)} entries, expected {self.rank}")
        if any(e < 0 for e in word):
            raise InvalidPresentationError(f"negative exponent in {word}")
        return word

    def with_cancellative(self, flag: bool = True) -> 'Presentation':
        return replace(self, cancellative=flag)

    @property
    def unit_group_declared_order(self) -> int:
        order = 1
        for factor in self.unit_factors:
            order *= factor.order
        return order


RESERVED_WORDS = frozenset({'inf', 'free', 'group', 'binoid', 'smash', 'sr', 'facet', 'cancellative'})


@dataclass(frozen=True)
class SimplicialComplex:
    """Simplicial complex given by its facets"""
    vertices: Tuple[str, ...]
    facets: Tuple[frozenset, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, 'vertices', tuple(self.vertices))
        object.__setattr__(self, 'facets', tuple(frozenset(f) for f in self.facets))
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidPresentationError(f"duplicate vertices in {self.vertices}")
        known = set(self.vertices)
        for facet in self.facets:
            unknown = facet - known
            if unknown:
                raise UndeclaredGeneratorError(f"facet mentions undeclared vertices {sorted(unknown)}")
        for a, b in itertools.permutations(range(len(self.facets)), 2):
            if self.facets[a] <= self.facets[b]:
                raise InvalidPresentationError(
                    f"facet {sorted(self.facets[a])} is contained in facet {sorted(self.facets[b])}"
                )
        covered = set().union(*self.facets) if self.facets else set()
        missing = known - covered
        if missing:
            raise InvalidPresentationError(f"vertices {sorted(missing)} lie in no facet")

    def is_face(self, subset: Iterable[str]) -> bool:
        subset = frozenset(subset)
        return any(subset <= facet for facet in self.facets)

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def minimal_nonfaces(self) -> List[Tuple[str, ...]]:
        """Subsets that are not faces while every proper subset is"""
        result = []
        limit = self.dimension + 2
        for size in range(1, limit + 1):
            for subset in itertools.combinations(self.vertices, size):
                if self.is_face(subset):
                    continue
                if all(self.is_face(subset[:i] + subset[i + 1:]) for i in range(size)):
                    result.append(subset)
        return result


def free_binoid(n: int) -> Presentation:
    """(ℕ^n)^∞ on generators x1..xn"""
    if n < 0:
        raise InvalidPresentationError(f"free binoid needs n >= 0, got {n}")
    return Presentation(generators=tuple(f"x{i + 1}" for i in range(n)), cancellative=True)


def trivial_binoid() -> Presentation:
    return free_binoid(0)


def group_binoid(k: int, name: str = 't') -> Presentation:
    """(ℤ/k)^∞ on one generator t with k·t = 0"""
    if k < 2:
        raise InvalidPresentationError(f"group binoid order must be >= 2, got {k}")
    return Presentation(
        generators=(name,),
        congruences=(((k,), (0,)),),
        unit_factors=(UnitFactor(name, k),),
        cancellative=True,
    )


def _fresh_name(name: str, taken: set) -> str:
    if name not in taken:
        return name
    suffix = 2
    while f"{name}_{suffix}" in taken:
        suffix += 1
    return f"{name}_{suffix}"


def smash(a: Presentation, b: Presentation) -> Presentation:
    """Smash product over the trivial binoid: disjoint union of generators and relations"""
    taken = set(a.generators)
    renamed = []
    for name in b.generators:
        fresh = _fresh_name(name, taken)
        taken.add(fresh)
        renamed.append(fresh)
    rename = dict(zip(b.generators, renamed))

    pad_a = (0,) * b.rank
    pad_b = (0,) * a.rank
    congruences = [(l + pad_a, r + pad_a) for l, r in a.congruences]
    congruences += [(pad_b + l, pad_b + r) for l, r in b.congruences]
    infinity_relations = [w + pad_a for w in a.infinity_relations]
    infinity_relations += [pad_b + w for w in b.infinity_relations]
    unit_factors = list(a.unit_factors) + [UnitFactor(rename[f.generator], f.order) for f in b.unit_factors]

    return Presentation(
        generators=a.generators + tuple(renamed),
        congruences=tuple(congruences),
        infinity_relations=tuple(infinity_relations),
        unit_factors=tuple(unit_factors),
        cancellative=a.cancellative and b.cancellative,
    )


def quotient_by_ideal(p: Presentation, gens: Iterable[WordLike]) -> Presentation:
    """Residue class binoid p/⟨gens⟩: the ideal generators become ∞-relations"""
    extra = tuple(p.as_word(w) for w in gens)
    if not extra:
        return p
    return replace(p, infinity_relations=p.infinity_relations + extra)


def stanley_reisner(c: SimplicialComplex) -> Presentation:
    """Free binoid on the vertices modulo one squarefree ∞-relation per minimal nonface"""
    index = {v: i for i, v in enumerate(c.vertices)}
    relations = []
    for nonface in c.minimal_nonfaces():
        word = [0] * len(c.vertices)
        for vertex in nonface:
            word[index[vertex]] = 1
        relations.append(tuple(word))
    logger.debug(f"Stanley-Reisner binoid on {len(c.vertices)} vertices with {len(relations)} minimal nonfaces")
    return Presentation(generators=c.vertices, infinity_relations=tuple(relations), cancellative=True)


def split_smash_factors(p: Presentation) -> List[Presentation]:
    """Split p into smash factors along connected components of the relation incidence graph"""
    pairs = [(l, r) for l, r in p.congruences] + [(w, w) for w in p.infinity_relations]
    if p.zero_word in p.infinity_relations:
        # 0 = ∞ collapses every factor at once
        return [p]

    parent = list(range(p.rank))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for l, r in pairs:
        support = [i for i in range(p.rank) if l[i] or r[i]]
        for i in support[1:]:
            parent[find(i)] = find(support[0])

    components: Dict[int, List[int]] = {}
    for i in range(p.rank):
        components.setdefault(find(i), []).append(i)
    if len(components) <= 1:
        return [p]

    factors = []
    for members in sorted(components.values()):
        def restrict(word: Word) -> Word:
            return tuple(word[i] for i in members)

        member_set = set(members)
        congruences = tuple(
            (restrict(l), restrict(r)) for l, r in p.congruences
            if any(l[i] or r[i] for i in member_set)
        )
        infinity_relations = tuple(
            restrict(w) for w in p.infinity_relations if any(w[i] for i in member_set)
        )
        names = tuple(p.generators[i] for i in members)
        unit_factors = tuple(f for f in p.unit_factors if f.generator in names)
        factors.append(Presentation(names, congruences, infinity_relations, unit_factors, p.cancellative))
    return factors


def canonical_key(p: Presentation) -> Tuple:
    """Renaming-invariant key; brute force over generator permutations, small presentations only"""
    best = None
    for perm in itertools.permutations(range(p.rank)):
        def apply(word: Word) -> Word:
            return tuple(word[i] for i in perm)

        congruences = tuple(sorted(tuple(sorted((apply(l), apply(r)))) for l, r in p.congruences))
        infinity_relations = tuple(sorted(apply(w) for w in p.infinity_relations))
        orders = tuple(sorted(f.order for f in p.unit_factors))
        key = (p.rank, congruences, infinity_relations, orders)
        if best is None or key < best:
            best = key
    return best
