# Main entry point for binoid-hk: Hilbert-Kunz functions and multiplicities of binoid presentations.

import argparse
import os
import sys
from typing import List, Optional

# Add src and config directories to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'config'))

from config import HKConfig
from cli.commands import FORMATS, NSET_KINDS, RunConfig, parse_q_list, render, run_command
from utils.computation_logger import ComputationLogger
from utils.errors import BinoidError, PresentationSyntaxError, UsageError


class _ArgumentParser(argparse.ArgumentParser):
    """argparse that reports usage problems as UsageError"""

    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument('--spec', help="inline presentation, e.g. 'binoid x,y | 2x = 2y'")
    source.add_argument('--file', dest='input_path', help='file holding a presentation')
    source.add_argument('--free', type=int, help='the free binoid on n generators')
    common.add_argument('--enumeration-cap', type=int)
    common.add_argument('--completion-budget', type=int)
    common.add_argument('--subset-cap', type=int)
    common.add_argument('--format', dest='output_format', choices=FORMATS, default='json')
    common.add_argument('--assume-cancellative', action='store_true')
    common.add_argument('--assume-semipositive', action='store_true')

    parser = _ArgumentParser(
        prog='binoid-hk',
        description='Hilbert-Kunz functions and multiplicities of finitely generated binoids',
    )
    sub = parser.add_subparsers(dest='subcommand', required=True, parser_class=_ArgumentParser)

    sub.add_parser('info', parents=[common], help='spectrum, dimension and structural predicates')

    nf = sub.add_parser('nf', parents=[common], help='normal forms of words')
    nf.add_argument('--word', dest='words', action='append', default=[])

    member = sub.add_parser('member', parents=[common], help='ideal membership')
    member.add_argument('--ideal', help="ideal generators separated by ';'")
    member.add_argument('--word', dest='words', action='append', default=[])

    hkf = sub.add_parser('hkf', parents=[common], help='Hilbert-Kunz function values')
    hkf.add_argument('--q', dest='q_text', help="q values: '1..5', '8' or '2,4,8'")
    hkf.add_argument('--ideal', help='generators of the N_+-primary ideal (default N_+)')
    hkf.add_argument('--nset', choices=NSET_KINDS, default='whole')
    hkf.add_argument('--nset-ideal', help='ideal defining the ideal or quotient N-set')

    ehk = sub.add_parser('ehk', parents=[common], help='Hilbert-Kunz multiplicity')
    ehk.add_argument('--ideal', help='generators of the N_+-primary ideal (default N_+)')
    ehk.add_argument('--estimate', action='store_true', help='numerical estimate from sampled hkf values')
    ehk.add_argument('--q', dest='q_text', help='sample schedule for --estimate')

    verify = sub.add_parser('verify', parents=[common], help='run the counting identity checks')
    verify.add_argument('--q', dest='q_text', help='q values to check at (default 2)')

    sub.add_parser('export-ring', parents=[common], help='binomial ideal of the binoid algebra')
    return parser


def parse_run_config(argv: Optional[List[str]] = None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    q_text = args.pop('q_text', None)
    args['qs'] = parse_q_list(q_text) if q_text is not None else []
    return RunConfig(**args)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    config = HKConfig()
    problems = config.validate()
    if problems:
        print(f"Invalid configuration: {'; '.join(problems)}", file=sys.stderr)
        return UsageError.exit_code

    computation_logger = ComputationLogger(config)
    try:
        run = parse_run_config(argv)
        result = run_command(run, config)
        computation_logger.log_result(run.subcommand, result.payload)
        if 'trace' in result.payload:
            computation_logger.log_trace(result.payload['trace'])
        print(render(result, run.output_format))
        return result.exit_code
    except BinoidError as e:
        computation_logger.log_error(e, "binoid-hk")
        message = e.render() if isinstance(e, PresentationSyntaxError) else e.message
        print(f"error: {message}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
