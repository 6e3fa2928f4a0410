# Executable counting identities and inequalities used to cross-check Hilbert-Kunz values.
import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Dict, List, Optional, Tuple

from hk.hilbert_kunz import VERIFIED, HilbertKunzCounter, IdealSpec, NSetSpec
from presentation.presentation import Presentation, quotient_by_ideal, smash, split_smash_factors
from utils.errors import HypothesisRefuted


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: Dict[str, Any] = field(default_factory=dict)


class CountingChecks:
    """Counting identities of binoid N-sets evaluated by enumeration"""

    def __init__(self, config=None, counter: Optional[HilbertKunzCounter] = None):
        self.config = config
        self.counter = counter or HilbertKunzCounter(config)
        self.logger = logging.getLogger(__name__)

    def counting_identity_counts(self, p: Presentation, i: IdealSpec, j: IdealSpec) -> Tuple[int, int, int, int]:
        """(#N/J, #(I∩J)/(I+J), #I/(I+J), #(N/I)/(J+N/I)) with I+J the set of sums i+j"""
        rs = self.counter.system(p)
        sums = [tuple(a + b for a, b in zip(x, y)) for x in i.words for y in j.words]

        n_mod_j = len(self.counter.residue_enumerate(p, j))
        i_mod_sum = self.counter.ideal_residue(rs, i.words, sums)
        in_j = self.counter.quotient_system(p, j.words)
        meet_mod_sum = [w for w in i_mod_sum if in_j.reduce(w).is_infinity]
        quotient_mod_j = len(self.counter.residue_enumerate(p, IdealSpec(i.generators + j.generators)))
        return n_mod_j, len(meet_mod_sum), len(i_mod_sum), quotient_mod_j

    def verify_counting_identity(self, p: Presentation, i: IdealSpec, j: IdealSpec) -> bool:
        if j.primary_status != VERIFIED:
            j = self.counter.verify_primary(p, j)
            if j.primary_status != VERIFIED:
                raise HypothesisRefuted(f"counting identity needs a primary J (status {j.primary_status})")
        a, b, c, d = self.counting_identity_counts(p, i, j)
        self.logger.debug(f"Counting identity: {a} + {b} vs {c} + {d}")
        return a + b == c + d

    def verify_smash_multiplicativity(self, a: Presentation, b: Presentation, q: int) -> bool:
        product = smash(a, b)
        values = []
        for binoid in (product, a, b):
            n = self.counter.maximal_ideal(binoid)
            values.append(self.counter.hkf(binoid, n, NSetSpec.whole(), q).count)
        self.logger.debug(f"Smash multiplicativity at q={q}: {values[0]} vs {values[1]}·{values[2]}")
        return values[0] == values[1] * values[2]

    def verify_surjection_monotonicity(self, p: Presentation, n: IdealSpec, i: IdealSpec, q: int) -> bool:
        whole = self.counter.hkf(p, n, NSetSpec.whole(), q).count
        quotient = self.counter.hkf(p, n, NSetSpec.quotient(i), q).count
        return whole >= quotient

    def verify_annihilator_transfer(self, p: Presentation, n: IdealSpec, a: IdealSpec, q: int) -> bool:
        """hkf over N on T = N/a equals hkf over N/a on T"""
        over_n = self.counter.hkf(p, n, NSetSpec.quotient(a), q).count
        reduced = quotient_by_ideal(p, a.words)
        over_quotient = self.counter.hkf(reduced, n, NSetSpec.whole(), q).count
        return over_n == over_quotient

    def verify_frobenius_extension(self, p: Presentation, n: IdealSpec, i: IdealSpec, q: int) -> bool:
        """Extending [q]n to N/I gives the same ideal as [q] of the extension of n"""
        target = quotient_by_ideal(p, i.words)
        rs = self.counter.system(target)
        extended_first = [rs.reduce(w) for w in n.words]
        frobenius_after = IdealSpec(
            tuple(tuple(q * x for x in e.vector) for e in extended_first if not e.is_infinity)
        )
        frobenius_first = self.counter.frobenius_sum(n, q)
        left = sorted(e.vector for e in self.counter.residue_enumerate(target, frobenius_first))
        right = sorted(e.vector for e in self.counter.residue_enumerate(target, frobenius_after))
        return left == right

    def verify_hkf_bound(self, p: Presentation, n: IdealSpec, t: NSetSpec, q: int) -> bool:
        count = self.counter.hkf(p, n, t, q).count
        return count <= self.counter.hkf_upper_bound(p, n, t, q)

    def run_all(self, p: Presentation, q: int, i: Optional[IdealSpec] = None) -> List[CheckResult]:
        """Run every check on p with n = N_+ and J = [q]N_+"""
        n = self.counter.verify_primary(p, self.counter.maximal_ideal(p))
        if n.primary_status != VERIFIED:
            raise HypothesisRefuted(f"N_+ could not be verified primary (status {n.primary_status})")
        if i is None:
            i = IdealSpec(n.generators[:1])
        j = self.counter.frobenius_sum(n, q)

        results = []
        counts = self.counting_identity_counts(p, i, j)
        results.append(CheckResult(
            'counting_identity', counts[0] + counts[1] == counts[2] + counts[3], {'counts': list(counts)}
        ))
        results.append(CheckResult('surjection_monotonicity', self.verify_surjection_monotonicity(p, n, i, q)))
        results.append(CheckResult('annihilator_transfer', self.verify_annihilator_transfer(p, n, i, q)))
        results.append(CheckResult('frobenius_extension', self.verify_frobenius_extension(p, n, i, q)))
        results.append(CheckResult('hkf_bound', self.verify_hkf_bound(p, n, NSetSpec.whole(), q), {
            'hkf': self.counter.hkf(p, n, NSetSpec.whole(), q).count,
            'bound': self.counter.hkf_upper_bound(p, n, NSetSpec.whole(), q),
        }))

        factors = split_smash_factors(p)
        if len(factors) > 1:
            rest = reduce(smash, factors[1:])
            results.append(CheckResult(
                'smash_multiplicativity', self.verify_smash_multiplicativity(factors[0], rest, q),
                {'factors': len(factors)},
            ))

        for result in results:
            self.logger.info(f"Check {result.name}: {'passed' if result.passed else 'FAILED'}")
        return results


def verify_counting_identity(p: Presentation, i: IdealSpec, j: IdealSpec, config=None) -> bool:
    return CountingChecks(config).verify_counting_identity(p, i, j)


def verify_smash_multiplicativity(a: Presentation, b: Presentation, q: int, config=None) -> bool:
    return CountingChecks(config).verify_smash_multiplicativity(a, b, q)
