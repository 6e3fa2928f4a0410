# Command handlers behind the binoid-hk CLI: each turns a RunConfig into a payload and renders it as json, csv or text.
import dataclasses
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import pandas as pd

from config import HKConfig
from hk.counting_checks import CountingChecks
from hk.hilbert_kunz import (
    IDEAL,
    QUOTIENT,
    REFUTED,
    WHOLE,
    HilbertKunzCounter,
    IdealSpec,
    NSetSpec,
    samples_to_frame,
)
from presentation.dsl_parser import format_word, parse_presentation, parse_word, parse_word_list
from presentation.presentation import Presentation, Word
from rewrite.rewrite_system import ideal_membership, normal_form
from spectrum.spectrum_analyzer import SpectrumAnalyzer, cancellativity_witness, is_integral_quotient
from structure.ehk_pipeline import EHKPipeline
from utils.errors import HypothesisRefuted, PresentationSyntaxError, UsageError

logger = logging.getLogger(__name__)

FORMATS = ('json', 'csv', 'text')
SUBCOMMANDS = ('info', 'nf', 'member', 'hkf', 'ehk', 'verify', 'export-ring')
NSET_KINDS = (WHOLE, IDEAL, QUOTIENT)


def parse_q_list(text: str) -> List[int]:
    """'1..5', '8', '2,4,8' or mixtures such as '1..3,8'"""
    values: List[int] = []
    for part in text.split(','):
        part = part.strip()
        if not part:
            continue
        try:
            if '..' in part:
                low, high = (int(x) for x in part.split('..', 1))
                if high < low:
                    raise UsageError(f"empty q range '{part}'")
                values.extend(range(low, high + 1))
            else:
                values.append(int(part))
        except ValueError:
            raise UsageError(f"cannot read q value '{part}'") from None
    if not values:
        raise UsageError("no q values given")
    bad = [q for q in values if q < 1]
    if bad:
        raise UsageError(f"q must be >= 1, got {bad[0]}")
    return values


@dataclass
class RunConfig:
    """Everything one CLI invocation needs"""
    subcommand: str
    spec: Optional[str] = None
    input_path: Optional[str] = None
    free: Optional[int] = None
    qs: List[int] = field(default_factory=list)
    words: List[str] = field(default_factory=list)
    ideal: Optional[str] = None
    nset: str = WHOLE
    nset_ideal: Optional[str] = None
    enumeration_cap: Optional[int] = None
    completion_budget: Optional[int] = None
    subset_cap: Optional[int] = None
    output_format: str = 'json'
    assume_cancellative: bool = False
    assume_semipositive: bool = False
    estimate: bool = False

    def validate(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand '{self.subcommand}'")
        if self.output_format not in FORMATS:
            raise UsageError(f"unknown output format '{self.output_format}'")
        sources = [x for x in (self.spec, self.input_path, self.free) if x is not None]
        if len(sources) != 1:
            raise UsageError("give exactly one of --spec, --file or --free")
        if self.free is not None and self.free < 0:
            raise UsageError(f"--free needs a non-negative count, got {self.free}")
        for name in ('enumeration_cap', 'completion_budget', 'subset_cap'):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise UsageError(f"{name.replace('_', '-')} must be positive, got {value}")
        if any(q < 1 for q in self.qs):
            raise UsageError("q values must be >= 1")
        if self.nset not in NSET_KINDS:
            raise UsageError(f"unknown N-set kind '{self.nset}'")
        if self.nset != WHOLE and not self.nset_ideal:
            raise UsageError(f"--nset {self.nset} needs --nset-ideal")
        if self.subcommand in ('nf', 'member') and not self.words:
            raise UsageError(f"{self.subcommand} needs at least one --word")
        if self.subcommand == 'member' and not self.ideal:
            raise UsageError("member needs --ideal")
        if self.subcommand == 'hkf' and not self.qs:
            raise UsageError("hkf needs --q")

    @property
    def input_label(self) -> str:
        if self.input_path is not None:
            return self.input_path
        if self.free is not None:
            return f"free {self.free}"
        return self.spec.strip()

    def source_text(self) -> str:
        if self.free is not None:
            return f"free {self.free}"
        if self.input_path is not None:
            if not os.path.isfile(self.input_path):
                raise UsageError(f"input file not found: {self.input_path}")
            with open(self.input_path) as f:
                return f.read()
        return self.spec

    def hk_config(self, base: Optional[HKConfig] = None) -> HKConfig:
        """base with the caps and assertions of this run applied"""
        overrides: Dict[str, Any] = {}
        if self.enumeration_cap is not None:
            overrides['enumeration_cap'] = self.enumeration_cap
        if self.completion_budget is not None:
            overrides['completion_budget'] = self.completion_budget
        if self.subset_cap is not None:
            overrides['subset_cap'] = self.subset_cap
        if self.assume_cancellative:
            overrides['assume_cancellative'] = True
        if self.assume_semipositive:
            overrides['assume_semipositive'] = True
        return dataclasses.replace(base or HKConfig(), **overrides)


@dataclass
class CommandResult:
    """Payload for json, an optional table for csv and lines for text output"""
    payload: Dict[str, Any]
    table: Optional[pd.DataFrame] = None
    lines: List[str] = field(default_factory=list)
    exit_code: int = 0


def _base_payload(run: RunConfig, p: Presentation) -> Dict[str, Any]:
    return {'input': run.input_label, 'generators': list(p.generators)}


def _render_element(p: Presentation, vector: Optional[Word]) -> str:
    return 'inf' if vector is None else format_word(p, vector)


def _ideal_from_text(p: Presentation, text: str) -> IdealSpec:
    words = parse_word_list(p, text)
    return IdealSpec.from_words(p, [w for w in words if w is not None])


def cmd_info(run: RunConfig, config: HKConfig, p: Presentation) -> CommandResult:
    analyzer = SpectrumAnalyzer(config)
    rs = analyzer.system(p)
    report = analyzer.spectrum(p, rs)
    reduced = analyzer.is_reduced(p, rs)
    witness = cancellativity_witness(rs)

    payload = _base_payload(run, p)
    payload.update(report.to_dict())
    payload.update({
        'zero': rs.zero,
        'integral': is_integral_quotient(rs),
        'reduced': 'unknown' if reduced is None else reduced,
        'unit_group_order': analyzer.unit_group_order(p, rs),
        'cancellative_witness': None if witness is None else {
            'a': _render_element(p, witness[0]),
            'b': _render_element(p, witness[1]),
            'c': _render_element(p, witness[2]),
        },
        'rules': rs.summary(),
    })

    lines = [
        f"generators: {', '.join(p.generators) or '(none)'}",
        f"dimension: {report.dimension}",
        f"primes: {len(report.primes)}",
        "minimal primes: " + '; '.join('{' + ', '.join(m) + '}' for m in payload['minimal_primes']),
        f"integral: {payload['integral']}",
        f"reduced: {payload['reduced']}",
        f"unit group order: {payload['unit_group_order'] if payload['unit_group_order'] is not None else 'unknown'}",
    ]
    return CommandResult(payload, lines=lines)


def cmd_nf(run: RunConfig, config: HKConfig, p: Presentation) -> CommandResult:
    rs = HilbertKunzCounter(config).system(p)
    rows = []
    for text in run.words:
        element = normal_form(rs, parse_word(p, text))
        rows.append({'word': text, 'normal_form': _render_element(p, element.vector)})
    payload = _base_payload(run, p)
    payload['normal_forms'] = rows
    return CommandResult(payload, pd.DataFrame(rows, columns=['word', 'normal_form']),
                         [f"{r['word']} -> {r['normal_form']}" for r in rows])


def cmd_member(run: RunConfig, config: HKConfig, p: Presentation) -> CommandResult:
    rs = HilbertKunzCounter(config).system(p)
    gens = parse_word_list(p, run.ideal)
    rows = [{'word': text, 'member': ideal_membership(rs, gens, parse_word(p, text))} for text in run.words]
    payload = _base_payload(run, p)
    payload.update({'ideal': run.ideal, 'membership': rows})
    return CommandResult(payload, pd.DataFrame(rows, columns=['word', 'member']),
                         [f"{r['word']}: {'in' if r['member'] else 'not in'} ideal" for r in rows])


def _resolve_n(counter: HilbertKunzCounter, run: RunConfig, p: Presentation) -> IdealSpec:
    n = _ideal_from_text(p, run.ideal) if run.ideal else counter.maximal_ideal(p)
    n = counter.verify_primary(p, n)
    if n.primary_status == REFUTED:
        raise HypothesisRefuted("the ideal is not N_+-primary")
    return n


def _nset(run: RunConfig, p: Presentation) -> NSetSpec:
    if run.nset == IDEAL:
        return NSetSpec.of_ideal(_ideal_from_text(p, run.nset_ideal))
    if run.nset == QUOTIENT:
        return NSetSpec.quotient(_ideal_from_text(p, run.nset_ideal))
    return NSetSpec.whole()


def cmd_hkf(run: RunConfig, config: HKConfig, p: Presentation) -> CommandResult:
    counter = HilbertKunzCounter(config)
    n = _resolve_n(counter, run, p)
    samples = counter.hkf_table(p, n, _nset(run, p), run.qs)
    frame = samples_to_frame(samples)

    payload = _base_payload(run, p)
    payload.update({
        'nset': run.nset,
        'primary_status': n.primary_status,
        'hkf': [
            {'q': s.q, 'count': s.count} if s.count is not None else {'q': s.q, 'count': None, 'error': s.error}
            for s in samples
        ],
    })
    failed = [s for s in samples if s.count is None]
    lines = [f"hkf({s.q}) = {s.count if s.count is not None else 'failed: ' + str(s.error)}" for s in samples]
    return CommandResult(payload, frame[['q', 'count']], lines, failed[0].exit_code if failed else 0)


def _trace_lines(step: Dict[str, Any]) -> List[str]:
    details = [f"{key}={value}" for key, value in step.items() if key not in ('step', 'theorem')]
    head = f"  {step['step']}"
    lines = [f"{head}: {', '.join(details)}" if details else head]
    if 'theorem' in step:
        lines.append(f"    {step['theorem']}")
    return lines


def cmd_ehk(run: RunConfig, config: HKConfig, p: Presentation) -> CommandResult:
    pipeline = EHKPipeline(config)
    n = _ideal_from_text(p, run.ideal) if run.ideal else None
    if run.estimate:
        result = pipeline.ehk_estimate(p, n, run.qs or None)
    else:
        result = pipeline.ehk(p, n)

    payload = _base_payload(run, p)
    payload.update(result.to_dict())
    lines = [f"e_HK = {result.render()}", f"dimension: {result.dimension}"]
    for step in result.trace:
        lines += _trace_lines(step)
    table = pd.DataFrame([{'ehk': result.render(), 'dimension': result.dimension}])
    return CommandResult(payload, table, lines)


def cmd_verify(run: RunConfig, config: HKConfig, p: Presentation) -> CommandResult:
    checks = CountingChecks(config)
    rows = []
    for q in run.qs or [2]:
        for check in checks.run_all(p, q):
            rows.append({'q': q, 'check': check.name, 'passed': check.passed, 'detail': check.detail})

    payload = _base_payload(run, p)
    payload['checks'] = rows
    failed = [r for r in rows if not r['passed']]
    lines = [f"q={r['q']} {r['check']}: {'ok' if r['passed'] else 'FAILED'}" for r in rows]
    table = pd.DataFrame(rows, columns=['q', 'check', 'passed'])
    return CommandResult(payload, table, lines, HypothesisRefuted.exit_code if failed else 0)


def _monomial(p: Presentation, word: Word) -> str:
    factors = []
    for name, exponent in zip(p.generators, word):
        if exponent == 1:
            factors.append(name)
        elif exponent > 1:
            factors.append(f"{name}^{exponent}")
    return '*'.join(factors) if factors else '1'


def cmd_export_ring(run: RunConfig, config: HKConfig, p: Presentation) -> CommandResult:
    """Polynomial-ideal description of K[N]: one binomial per congruence, one monomial per ∞-relation"""
    binomials = [f"{_monomial(p, lhs)} - {_monomial(p, rhs)}" for lhs, rhs in p.congruences]
    monomials = [_monomial(p, w) for w in p.infinity_relations]
    payload = _base_payload(run, p)
    payload.update({'variables': list(p.generators), 'binomials': binomials, 'monomials': monomials})

    lines = [f"variables: {', '.join(p.generators)}"]
    lines += [f"binomial: {b}" for b in binomials]
    lines += [f"monomial: {m}" for m in monomials]
    table = pd.DataFrame(
        [{'kind': 'binomial', 'generator': b} for b in binomials]
        + [{'kind': 'monomial', 'generator': m} for m in monomials],
        columns=['kind', 'generator'],
    )
    return CommandResult(payload, table, lines)


HANDLERS: Dict[str, Callable[[RunConfig, HKConfig, Presentation], CommandResult]] = {
    'info': cmd_info,
    'nf': cmd_nf,
    'member': cmd_member,
    'hkf': cmd_hkf,
    'ehk': cmd_ehk,
    'verify': cmd_verify,
    'export-ring': cmd_export_ring,
}


def render(result: CommandResult, output_format: str) -> str:
    if output_format == 'json':
        return json.dumps(result.payload, indent=2, sort_keys=True, default=str)
    if output_format == 'csv':
        if result.table is None:
            raise UsageError("this subcommand has no csv output")
        return result.table.to_csv(index=False).rstrip('\n')
    return '\n'.join(result.lines)


def run_command(run: RunConfig, base: Optional[HKConfig] = None) -> CommandResult:
    """Validate, parse the input and dispatch; errors propagate as BinoidError"""
    run.validate()
    config = run.hk_config(base)
    text = run.source_text()
    if not text.strip():
        raise PresentationSyntaxError("empty presentation", 1, 1)
    p = parse_presentation(text)
    logger.info(f"Running {run.subcommand} on {p.rank} generators")
    return HANDLERS[run.subcommand](run, config, p)
