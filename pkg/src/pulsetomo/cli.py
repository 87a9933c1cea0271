"""
Command-line interface for pulsetomo.
"""
import argparse
import json
import sys
from typing import Any, Optional, Sequence

from pydantic import ValidationError

from .core import PulseTomography
from .experiments.acceptance import format_audit
from .global_config import GlobalConfig
from .helpers import file_manager as filem
from .helpers.errors import ContractViolation
from .helpers.protocol import coefficient_audit
from .run_config import ExperimentConfig


EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_INCONSISTENT = 3

with open(GlobalConfig.APP_STRINGS_FILE, 'r', encoding='utf-8') as _in_file:
    APP_TEXT = json.load(_in_file)


class CustomHelpFormatter(argparse.HelpFormatter):
    """
    Custom formatter for argparse that shows each option once with its metavar.
    """
    def _format_action_invocation(self, action: Any) -> str:
        if not action.option_strings or action.nargs == 0:
            return super()._format_action_invocation(action)

        default = self._get_default_metavar_for_optional(action)
        args_string = self._format_args(action, default)
        return f"{', '.join(action.option_strings)} {args_string}"


class CustomArgumentParser(argparse.ArgumentParser):
    """
    Custom argument parser that reports errors with the bad-input exit code.
    """
    def error(self, message: str) -> None:
        """Print usage and the error, then exit with code 2."""
        self.print_usage(sys.stderr)
        print(f'\nError: {message}', file=sys.stderr)
        sys.exit(EXIT_BAD_INPUT)


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    flags = APP_TEXT['flags']
    parser.add_argument('--config', help=flags['config'])
    parser.add_argument('--out', help=flags['out'])
    parser.add_argument('--seed', type=int, help=flags['seed'])
    parser.add_argument('--shots', type=int, help=flags['shots'])
    parser.add_argument('--exact', action='store_true', help=flags['exact'])
    parser.add_argument('--strict', action='store_true', help=flags['strict'])


def build_parser() -> CustomArgumentParser:
    """
    Build the argument parser with one subcommand per run mode.
    """
    parser = CustomArgumentParser(description=APP_TEXT['description'], formatter_class=CustomHelpFormatter)
    subparsers = parser.add_subparsers(dest='command')

    for command, help_text in APP_TEXT['commands'].items():
        sub = subparsers.add_parser(command, help=help_text, formatter_class=CustomHelpFormatter)
        _add_common_flags(sub)
        if command == 'analyze':
            sub.add_argument('--signals', help=APP_TEXT['flags']['signals'])

    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Merge the config file (if any) with command-line overrides.

    Raises:
        pydantic.ValidationError: If the merged configuration is invalid.
    """
    raw: dict = filem.read_raw_config(args.config) if args.config else {}
    raw['mode'] = args.command
    if args.out:
        raw['output_path'] = args.out
    if args.strict:
        raw['strict'] = True
    if getattr(args, 'signals', None):
        raw['signals_path'] = args.signals
    if args.seed is not None:
        raw['seed'] = args.seed

    if args.exact:
        raw.pop('shots', None)
    elif args.shots is not None:
        shots = dict(raw.get('shots') or {})
        shots['shots_per_sequence'] = args.shots
        raw['shots'] = shots

    return ExperimentConfig.model_validate(raw)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    The main function for the CLI.

    Returns:
        int: The exit code.
    """
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)

    # If no arguments are provided, show help and exit
    if len(argv) == 0:
        parser.print_help()
        return EXIT_OK

    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_OK

    messages = APP_TEXT['messages']
    try:
        config = resolve_config(args)
        runner = PulseTomography(config)
        result = runner.run()
    except ValidationError as ex:
        print(messages['invalid_config'].format(error=ex), file=sys.stderr)
        return EXIT_BAD_INPUT
    except (ContractViolation, ValueError, OSError) as ex:
        print(messages['bad_input'].format(error=ex), file=sys.stderr)
        return EXIT_BAD_INPUT

    if config.output_path:
        print(messages['written'].format(path=config.output_path))

    if args.command == 'verify':
        print(format_audit(*coefficient_audit()))
        failed = [c['title'] for c in result['criteria'] if not c['passed']]
        if failed:
            print(messages['verify_failed'].format(failed='; '.join(failed)), file=sys.stderr)
            return EXIT_FAILED
        print(messages['verify_passed'])
        return EXIT_OK

    if args.command == 'analyze' and not config.output_path:
        print(json.dumps(filem.to_builtin(result.to_dict()), indent=2, sort_keys=True))

    if runner.inconsistent:
        print(messages['inconsistent'], file=sys.stderr)
        if config.strict:
            return EXIT_INCONSISTENT

    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
