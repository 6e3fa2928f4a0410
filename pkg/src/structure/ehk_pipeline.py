# Assembles exact Hilbert-Kunz multiplicities from the reduction theorems, with a numerical estimate fallback.
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config import DEFAULT_SCHEDULE
from hk.hilbert_kunz import REFUTED, VERIFIED, HilbertKunzCounter, IdealSpec, NSetSpec
from presentation.presentation import Presentation, split_smash_factors
from spectrum.spectrum_analyzer import cancellativity_witness
from structure.lattice import difference_group
from structure.toric_volume import ToricVolumeCalculator
from utils.errors import EnumerationCapExceeded, HypothesisRefuted, HypothesisUnmet, ModeMismatchError


@dataclass
class EHKResult:
    """Exact rational e_HK, or a numerical estimate with error bound, plus the derivation trace"""
    value: Optional[Fraction] = None
    estimate: Optional[float] = None
    error: Optional[float] = None
    dimension: int = 0
    trace: List[Dict[str, Any]] = field(default_factory=list)
    partial: bool = False

    @property
    def is_exact(self) -> bool:
        return self.value is not None

    def render(self) -> str:
        if self.is_exact:
            return f"{self.value.numerator}/{self.value.denominator}"
        return f"{self.estimate:.6f} +/- {self.error:.2e}"

    def to_dict(self) -> Dict[str, Any]:
        if self.is_exact:
            ehk = {'num': self.value.numerator, 'den': self.value.denominator}
        else:
            ehk = {'estimate': self.estimate, 'error': self.error, 'partial': self.partial}
        return {'ehk': ehk, 'dimension': self.dimension, 'trace': list(self.trace)}


class EHKPipeline:
    """Minimal primes, torsion-freefication and toric volume, glued by the reduction theorems"""

    def __init__(self, config=None):
        self.config = config
        self.logger = logging.getLogger(__name__)
        self.counter = HilbertKunzCounter(config)
        self.analyzer = self.counter.analyzer
        self.volumes = ToricVolumeCalculator(config)
        self.schedule = list(config.estimate_schedule) if config is not None else list(DEFAULT_SCHEDULE)
        self.assume_cancellative = config.assume_cancellative if config is not None else False
        self.assume_semipositive = config.assume_semipositive if config is not None else False

    def ehk(self, p: Presentation, n: Optional[IdealSpec] = None) -> EHKResult:
        if self.assume_cancellative:
            p = p.with_cancellative(True)
        rs = self.counter.system(p)
        if rs.zero:
            return EHKResult(Fraction(0), dimension=-1, trace=[{'step': 'zero binoid', 'value': '0'}])

        if n is None:
            factors = split_smash_factors(p)
            if len(factors) > 1:
                return self._smash_factorization(factors)

        witness = cancellativity_witness(rs)
        if witness is not None:
            a, b, c = witness
            raise HypothesisRefuted(f"not cancellative: {list(a)} + {list(c)} = {list(b)} + {list(c)} with {list(a)} != {list(b)}")

        trace: List[Dict[str, Any]] = []
        if not p.cancellative:
            self.logger.warning("Cancellativity not asserted; no obstruction found in the completed rules")
            trace.append({'step': 'cancellativity', 'status': 'assumed, no witness against it'})

        if self.analyzer.unit_group_order(p, rs) is None and not self.assume_semipositive:
            raise HypothesisUnmet("N is not known to be semipositive: unit group search inconclusive")

        n = n or self.counter.maximal_ideal(p)
        if n.primary_status != VERIFIED:
            n = self.counter.verify_primary(p, n)
        if n.primary_status == REFUTED:
            raise HypothesisRefuted("ideal is not N_+-primary")

        reduced = self.analyzer.is_reduced(p, rs)
        if reduced is not True:
            status = 'not reduced' if reduced is False else 'reducedness undecided'
            raise HypothesisUnmet(f"exact e_HK needs a reduced binoid ({status}); use the estimate mode")

        report = self.analyzer.spectrum(p, rs)
        d = report.dimension
        top = [prime for prime in report.minimal_primes if prime.quotient_dimension == d]
        trace.append({
            'step': 'minimal-prime split',
            'theorem': 'e_HK(N) = sum of e_HK(N/p_i) over minimal primes of maximal dimension',
            'dimension': d,
            'primes': [prime.names(p.generators) for prime in top],
        })

        if d > self.volumes.dimension_cap:
            self.logger.info(f"Dimension {d} exceeds the exact cap {self.volumes.dimension_cap}; estimating")
            result = self.ehk_estimate(p, n, dimension=d)
            result.trace = trace + [{'step': 'fallback', 'reason': f'dimension {d} above exact cap'}] + result.trace
            return result

        total = Fraction(0)
        for prime in top:
            quotient = self.analyzer.integral_quotient(p, prime, rs)
            lattice = difference_group(quotient)
            free = [lattice.free_part(name) for name in quotient.generators]
            keep = [i for i in range(p.rank) if i not in prime.closure]
            images = []
            for word in n.words:
                if prime.contains_word(word):
                    continue
                restricted = [word[i] for i in keep]
                images.append(lattice.image(restricted, quotient.generators)[0])
            toric = self.volumes.toric_ehk(free, images) if lattice.rank else Fraction(1)
            part = lattice.torsion_order * toric
            trace.append({
                'step': 'torsion factor',
                'theorem': 'e_HK(N/p) = |T| * e_HK(F) for diff(N/p) = Z^m x T',
                'prime': prime.names(p.generators),
                'difference_group': lattice.describe(),
                'torsion_order': lattice.torsion_order,
                'toric_generators': [list(v) for v in free if any(v)],
            })
            trace.append({
                'step': 'toric volume',
                'theorem': 'e_HK(F) = normalized volume of C minus the union of f_i + C',
                'prime': prime.names(p.generators),
                'value': str(toric),
            })
            total += part

        result = EHKResult(total, dimension=d, trace=trace)
        self.logger.info(f"e_HK = {result.render()}")
        return result

    def _smash_factorization(self, factors: List[Presentation]) -> EHKResult:
        results = [self.ehk(factor) for factor in factors]
        if not all(r.is_exact for r in results):
            results = [_as_estimate(r) for r in results]
        combined = results[0]
        for other in results[1:]:
            combined = ehk_of_smash(combined, other)
        combined.trace = [{
            'step': 'smash factorization',
            'theorem': 'e_HK(M smash N) = e_HK(M) * e_HK(N)',
            'factors': [list(f.generators) for f in factors],
        }] + combined.trace
        return combined

    def ehk_estimate(self, p: Presentation, n: Optional[IdealSpec] = None,
                     qs: Optional[Sequence[int]] = None, dimension: Optional[int] = None) -> EHKResult:
        """Least-squares fit hkf(q) = c·q^d + c'·q^(d-1) over the sample schedule"""
        qs = list(qs or self.schedule)
        if dimension is None:
            dimension = self.analyzer.spectrum(p).dimension
        if dimension < 0:
            return EHKResult(Fraction(0), dimension=dimension, trace=[{'step': 'zero binoid', 'value': '0'}])
        n = n or self.counter.maximal_ideal(p)

        samples = self.counter.hkf_table(p, n, NSetSpec.whole(), qs)
        good = [s for s in samples if s.count is not None]
        partial = len(good) < len(samples)
        if len(good) < 2:
            raise EnumerationCapExceeded(self.counter.cap, len(good), n.primary_status)

        q = np.array([s.q for s in good], dtype=float)
        counts = np.array([s.count for s in good], dtype=float)
        c, residual = _fit(q, counts, dimension)
        error = residual
        if len(good) >= 3:
            c_dropped, _ = _fit(q[:-1], counts[:-1], dimension)
            error = max(error, abs(c - c_dropped))

        trace = [{
            'step': 'estimate',
            'theorem': 'e_HK = lim hkf(q) / q^d',
            'samples': [[s.q, s.count] for s in good],
            'fit': f"c*q^{dimension} + c'*q^{dimension - 1}" if dimension else 'c',
        }]
        if partial:
            trace.append({'step': 'partial fit', 'failed': [s.q for s in samples if s.count is None]})
        return EHKResult(estimate=float(c), error=float(error), dimension=dimension, trace=trace, partial=partial)


def _fit(q: np.ndarray, counts: np.ndarray, dimension: int):
    columns = [q ** dimension] + ([q ** (dimension - 1)] if dimension > 0 else [])
    design = np.column_stack(columns)
    coefficients, _, _, _ = np.linalg.lstsq(design, counts, rcond=None)
    fitted = design @ coefficients
    scale = q ** dimension
    residual = float(np.max(np.abs(counts - fitted) / scale)) if len(q) else 0.0
    return float(coefficients[0]), residual


def ehk(p: Presentation, n: Optional[IdealSpec] = None, config=None) -> EHKResult:
    return EHKPipeline(config).ehk(p, n)


def ehk_estimate(p: Presentation, n: Optional[IdealSpec] = None, qs: Optional[Sequence[int]] = None,
                 config=None) -> EHKResult:
    return EHKPipeline(config).ehk_estimate(p, n, qs)


def ehk_of_smash(a: EHKResult, b: EHKResult) -> EHKResult:
    """e_HK(M smash N) = e_HK(M)·e_HK(N); exact and estimated values do not mix"""
    if a.is_exact != b.is_exact:
        raise ModeMismatchError("cannot multiply an exact e_HK with an estimate")
    trace = a.trace + b.trace
    dimension = a.dimension + b.dimension
    if a.is_exact:
        return EHKResult(a.value * b.value, dimension=dimension, trace=trace)
    error = a.error * abs(b.estimate) + b.error * abs(a.estimate) + a.error * b.error
    return EHKResult(
        estimate=a.estimate * b.estimate, error=error, dimension=dimension,
        trace=trace, partial=a.partial or b.partial,
    )


def _as_estimate(result: EHKResult) -> EHKResult:
    if not result.is_exact:
        return result
    return EHKResult(estimate=float(result.value), error=0.0, dimension=result.dimension, trace=result.trace)
