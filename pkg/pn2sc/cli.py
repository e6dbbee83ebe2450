"""Command line entry point: ``pn2sc {transform,validate,generate,bench}``.

Exit codes: 0 ok, 1 validation failed, 2 irreducible net, 64 usage error,
65 unreadable or malformed input.
"""
import argparse
import json
import logging
import os
import statistics
import sys
import time
from dataclasses import dataclass, fields
from fractions import Fraction

from pn2sc import commands
from pn2sc.commands import DEFAULT_BENCH_REPS, DEFAULT_BENCH_SIZES
from pn2sc.errors import DocumentError, IrreducibleError, Pn2ScError, UsageError
from pn2sc.fileio import dump_document, read_petri_net, read_statechart, write_statechart
from pn2sc.generate import (DEFAULT_BRANCH_FACTOR_MAX, DEFAULT_PARALLEL_PROB, GenSpec, GenSpecError,
                            default_file_name, generate_sp_net)
from pn2sc.init import initialize_statechart
from pn2sc.instruction_text import instruct_text
from pn2sc.reduce import create_statechart, irreducible_message, reduce_statechart
from pn2sc.utils import get_model_list, get_version, time_fmt
from pn2sc.validate import validate_counts, validate_full, validate_structure

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_IRREDUCIBLE = 2
EXIT_USAGE = 64
EXIT_DATA = 65

COMMANDS = ('transform', 'validate', 'generate', 'bench')
BENCH_KEYS = ('size', 'seed', 'init_ms', 'reduce_ms', 'total_ms')


@dataclass
class CliConfig:
    """Parsed and checked command line."""
    command: str = None
    input: str = None
    output: str = None
    expected: str = None
    counts_only: bool = False
    places: int = None
    seed: int = 0
    branch_factor_max: int = DEFAULT_BRANCH_FACTOR_MAX
    parallel_prob: Fraction = DEFAULT_PARALLEL_PROB
    sizes: tuple = DEFAULT_BENCH_SIZES
    reps: int = DEFAULT_BENCH_REPS

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f'expected one subcommand of {", ".join(COMMANDS)}')
        if self.command in ('transform', 'validate') and not self.input:
            raise UsageError(f'{self.command}: input path is empty')
        if self.command == 'transform' and not self.output:
            raise UsageError('transform: output path is empty')
        if self.command == 'validate' and self.counts_only and self.expected is None:
            raise UsageError('validate: --counts-only needs an EXPECTED statechart')
        if self.command == 'generate' and self.places is None:
            raise UsageError('generate: --places is required')
        if self.command == 'bench':
            if self.reps < 1:
                raise UsageError(f'bench: --reps must be >= 1, got {self.reps}')
            if not self.sizes or min(self.sizes) < 1:
                raise UsageError(f'bench: sizes must be >= 1, got {self.sizes}')

    @classmethod
    def from_args(cls, args):
        return cls(**{f.name: getattr(args, f.name) for f in fields(cls) if getattr(args, f.name, None) is not None})


class ArgumentParser(argparse.ArgumentParser):
    """Raises UsageError instead of exiting, so main() owns the exit code."""

    def error(self, message):
        raise UsageError(message)


def _read(path):
    with open(path, 'rb') as f:
        return f.read()


def _write(path, data):
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(path, 'wb') as f:
        f.write(data)


class Pn2Sc():
    """Subcommand handlers. Each takes a CliConfig and returns an exit code."""

    # ---------------------------------------
    # transform
    # ---------------------------------------

    def transform(self, config):
        if os.path.isdir(config.input):
            model_list = get_model_list(config.input)
            logger.info('transforming %d nets from %s', len(model_list), config.input)
            codes = [EXIT_OK]
            for path in model_list:
                out_path = os.path.join(config.output, os.path.basename(path))
                codes.append(self._transform_file(path, out_path, batch=True))
            return max(codes)
        return self._transform_file(config.input, config.output)

    def _transform_file(self, in_path, out_path, batch=False):
        try:
            pn = read_petri_net(_read(in_path))
            sc, result = create_statechart(pn)
            _write(out_path, write_statechart(sc, result))
        except IrreducibleError as error:
            print(f'{in_path}: {error}', file=sys.stderr)
            return EXIT_IRREDUCIBLE
        except (DocumentError, OSError) as error:
            if not batch:
                raise
            print(f'{in_path}: {error}', file=sys.stderr)
            return EXIT_DATA
        logger.info('%s -> %s', in_path, out_path)
        return EXIT_OK

    # ---------------------------------------
    # validate
    # ---------------------------------------

    def validate(self, config):
        actual = read_statechart(_read(config.input))
        if config.expected is None:
            report = validate_structure(actual)
        else:
            expected = read_statechart(_read(config.expected))
            report = validate_counts(actual, expected) if config.counts_only else validate_full(actual, expected)
        for discrepancy in report.discrepancies:
            print(discrepancy)
        if report.passed:
            print(f'{report.level.value} validation passed')
            return EXIT_OK
        print(f'{report.level.value} validation failed: {len(report.discrepancies)} discrepancies')
        return EXIT_FAILED

    # ---------------------------------------
    # generate
    # ---------------------------------------

    def generate(self, config):
        spec = GenSpec(config.places, config.seed, config.branch_factor_max, config.parallel_prob)
        out_path = config.output
        if out_path is None:
            out_path = default_file_name(spec)
        elif os.path.isdir(out_path):
            out_path = os.path.join(out_path, default_file_name(spec))
        _write(out_path, dump_document(generate_sp_net(spec)))
        logger.info('wrote %s', out_path)
        return EXIT_OK

    # ---------------------------------------
    # bench
    # ---------------------------------------

    def bench(self, config):
        rows = []
        for size in config.sizes:
            data = dump_document(generate_sp_net(GenSpec(size, config.seed)))
            init_times, reduce_times = [], []
            for rep in range(config.reps):
                pn = read_petri_net(data)
                start = time.perf_counter()
                sc, trace = initialize_statechart(pn)
                initialized = time.perf_counter()
                result = reduce_statechart(pn, sc, trace)
                finished = time.perf_counter()
                if not result.success:
                    logger.warning('size %d: %s', size, irreducible_message(result))
                init_times.append(initialized - start)
                reduce_times.append(finished - initialized)
                logger.info('size %d rep %d: init %s, reduce %s', size, rep, time_fmt(init_times[-1]),
                            time_fmt(reduce_times[-1]))
            init_s = statistics.median(init_times)
            reduce_s = statistics.median(reduce_times)
            totals = [i + r for i, r in zip(init_times, reduce_times)]
            rows.append(
                dict(
                    zip(BENCH_KEYS, (size, config.seed, round(init_s * 1e3, 3), round(reduce_s * 1e3, 3),
                                     round(statistics.median(totals) * 1e3, 3)))))

        print(f'{"size":>8}  {"init":>10}  {"reduce":>10}  {"total":>10}', file=sys.stderr)
        for row in rows:
            print(
                f'{row["size"]:>8}  {time_fmt(row["init_ms"] / 1e3):>10}  {time_fmt(row["reduce_ms"] / 1e3):>10}  '
                f'{time_fmt(row["total_ms"] / 1e3):>10}',
                file=sys.stderr)
        print(json.dumps(rows, indent=2))
        return EXIT_OK


def build_arg_parser(app):
    parser = ArgumentParser(prog='pn2sc', description='Petri nets to hierarchical statecharts')
    parser.add_argument('--version', action='store_true', help='print the version and exit')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='log debug messages')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='only log errors')
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.transform(subparsers, app)
    commands.validate(subparsers, app)
    commands.generate(subparsers, app)
    commands.bench(subparsers, app)
    return parser


def setup_logging(verbose=False, quiet=False):
    level = logging.DEBUG if verbose else logging.ERROR if quiet else logging.WARNING
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    logging.getLogger('pn2sc').setLevel(level)


def main(argv=None):
    """Run the command line.

    Args:
        argv (list[str]): Arguments without the program name. Default: None,
            which reads ``sys.argv[1:]``.

    Returns:
        int: Exit code.
    """
    app = Pn2Sc()
    parser = build_arg_parser(app)
    try:
        args = parser.parse_args(argv)
        if args.version:
            print(f'pn2sc {get_version()}')
            return EXIT_OK
        setup_logging(args.verbose, args.quiet)
        config = CliConfig.from_args(args)
        return args.slot(config)
    except (UsageError, GenSpecError) as error:
        print(f'pn2sc: error: {error}', file=sys.stderr)
        print(instruct_text, file=sys.stderr)
        return EXIT_USAGE
    except (DocumentError, OSError) as error:
        print(f'pn2sc: {error}', file=sys.stderr)
        return EXIT_DATA
    except Pn2ScError as error:
        print(f'pn2sc: {error}', file=sys.stderr)
        return EXIT_DATA
    except SystemExit as error:
        # -h / --help
        return error.code or EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
