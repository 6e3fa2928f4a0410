# Difference groups of cancellative integral binoids and their torsion-freefication via Smith normal form.
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from presentation.presentation import Presentation
from structure.smith_normal_form import SmithNormalForm
from utils.errors import HypothesisUnmet, UsageError

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


@dataclass
class LatticeData:
    """diff N ≅ ℤ^rank × ⊕ ℤ/k_j with the image of every generator"""
    rank: int
    torsion_invariants: List[int] = field(default_factory=list)
    embedding: Dict[str, Tuple[Vector, Vector]] = field(default_factory=dict)
    relation_matrix: List[List[int]] = field(default_factory=list)

    @property
    def torsion_order(self) -> int:
        return math.prod(self.torsion_invariants)

    def free_part(self, name: str) -> Vector:
        return self.embedding[name][0]

    def image(self, word: Sequence[int], generators: Sequence[str]) -> Tuple[Vector, Vector]:
        """Image of an exponent vector in ℤ^rank × T"""
        free = [0] * self.rank
        torsion = [0] * len(self.torsion_invariants)
        for name, exponent in zip(generators, word):
            f, t = self.embedding[name]
            free = [a + exponent * b for a, b in zip(free, f)]
            torsion = [a + exponent * b for a, b in zip(torsion, t)]
        torsion = [x % k for x, k in zip(torsion, self.torsion_invariants)]
        return tuple(free), tuple(torsion)

    def describe(self) -> str:
        parts = [f"Z^{self.rank}"] if self.rank else []
        parts += [f"Z/{k}" for k in self.torsion_invariants]
        return " x ".join(parts) if parts else "0"

    def to_dict(self) -> Dict:
        return {
            'rank': self.rank,
            'torsion_invariants': list(self.torsion_invariants),
            'group': self.describe(),
            'embedding': {name: {'free': list(f), 'torsion': list(t)} for name, (f, t) in self.embedding.items()},
        }


def difference_group(p: Presentation) -> LatticeData:
    """Cokernel of the relation matrix; generator j maps to row j of V in U·A·V = D"""
    if p.infinity_relations:
        raise HypothesisUnmet("difference group needs an integral presentation without ∞-relations")
    matrix = [[l - r for l, r in zip(lhs, rhs)] for lhs, rhs in p.congruences]
    matrix = [row for row in matrix if any(row)]
    snf = SmithNormalForm(matrix, columns=p.rank)
    _, d, v = snf.compute()

    diagonal = [int(d[i, i]) for i in range(min(d.rows, d.cols))]
    nonzero = len([x for x in diagonal if x != 0])
    torsion_positions = [i for i in range(nonzero) if abs(diagonal[i]) > 1]
    torsion_invariants = [abs(diagonal[i]) for i in torsion_positions]

    embedding = {}
    for j, name in enumerate(p.generators):
        row = [int(v[j, c]) for c in range(p.rank)]
        free = tuple(row[nonzero:])
        torsion = tuple(row[i] % diagonal[i] for i in torsion_positions)
        embedding[name] = (free, torsion)

    data = LatticeData(p.rank - nonzero, torsion_invariants, embedding, matrix)
    logger.debug(f"diff N = {data.describe()}")
    return data


def torsion_freefication(p: Presentation) -> Tuple[List[Vector], int]:
    """Generators of the torsion-free image F in ℤ^m, and the torsion order |T|"""
    data = difference_group(p)
    return [data.free_part(name) for name in p.generators], data.torsion_order


def lattice_index(gens: Sequence[Sequence[int]]) -> int:
    """Covolume of the full-rank lattice spanned by gens"""
    gens = [list(g) for g in gens]
    if not gens:
        return 1
    dimension = len(gens[0])
    snf = SmithNormalForm(gens, columns=dimension)
    snf.compute()
    invariants = snf.invariants
    if len(invariants) != dimension:
        raise UsageError(f"vectors span a rank {len(invariants)} lattice in dimension {dimension}")
    return math.prod(abs(k) for k in invariants)
