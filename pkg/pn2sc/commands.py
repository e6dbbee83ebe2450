import argparse
from fractions import Fraction

from pn2sc.generate import DEFAULT_BRANCH_FACTOR_MAX, DEFAULT_PARALLEL_PROB

DEFAULT_BENCH_SIZES = (5000, 10000, 40000)
DEFAULT_BENCH_REPS = 3


def new_command(subparsers, name, help_text, slot, arguments=()):
    """Factory producing different subcommands.

    Args:
        subparsers (argparse._SubParsersAction): Where the subcommand is added.
        name (str): Subcommand name.
        help_text (str): One-line description.
        slot (func): Handler called with the CliConfig. Stored as ``slot``
            in the parsed namespace.
        arguments (list[tuple]): (flags, kwargs) pairs for add_argument.
            Default: ().
    """
    parser = subparsers.add_parser(name, help=help_text, description=help_text)
    for flags, kwargs in arguments:
        parser.add_argument(*flags, **kwargs)
    parser.set_defaults(slot=slot)
    return parser


def size_list(text):
    """'5000,10000,40000' -> (5000, 10000, 40000)."""
    try:
        sizes = tuple(int(item) for item in text.split(',') if item.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f'not a comma separated list of integers: {text!r}') from None
    if not sizes:
        raise argparse.ArgumentTypeError('empty size list')
    return sizes


# ---------------------------------------
# transform and validate
# ---------------------------------------


def transform(subparsers, parent):
    """Petri net document (or a folder of them) -> statechart document(s)."""
    return new_command(subparsers, 'transform', 'Transform Petri nets into statecharts', parent.transform, [
        (('input', ), dict(metavar='IN', help='Petri net file, or a folder of *.json nets')),
        (('-o', '--output'), dict(required=True, help='output file, or a folder when IN is a folder')),
    ])


def validate(subparsers, parent):
    """Compare a statechart with an expected one, or check its structure."""
    return new_command(subparsers, 'validate', 'Validate a statechart', parent.validate, [
        (('input', ), dict(metavar='ACTUAL', help='produced statechart')),
        (('expected', ), dict(metavar='EXPECTED', nargs='?', default=None, help='expected statechart')),
        (('--counts-only', ), dict(action='store_true', help='only compare per-kind counts')),
    ])


# ---------------------------------------
# generate and bench
# ---------------------------------------


def generate(subparsers, parent):
    """Write a synthetic series-parallel net."""
    return new_command(subparsers, 'generate', 'Generate a series-parallel Petri net', parent.generate, [
        (('--places', ), dict(type=int, required=True, help='exact number of places')),
        (('--seed', ), dict(type=int, default=0, help='unsigned 64-bit seed. Default: 0')),
        (('-o', '--output'), dict(default=None, help='output file or folder. Default: sp<places>_<seed>.json')),
        (('--branch-factor-max', ), dict(type=int, default=DEFAULT_BRANCH_FACTOR_MAX,
                                         help=f'widest parallel block. Default: {DEFAULT_BRANCH_FACTOR_MAX}')),
        (('--parallel-prob', ), dict(type=Fraction, default=DEFAULT_PARALLEL_PROB,
                                     help=f'chance of a parallel block. Default: {DEFAULT_PARALLEL_PROB}')),
    ])


def bench(subparsers, parent):
    """Time init and reduction on generated nets of several sizes."""
    default_sizes = ','.join(map(str, DEFAULT_BENCH_SIZES))
    return new_command(subparsers, 'bench', 'Benchmark the transformation', parent.bench, [
        (('--sizes', ), dict(type=size_list, default=DEFAULT_BENCH_SIZES,
                             help=f'comma separated place counts. Default: {default_sizes}')),
        (('--reps', ), dict(type=int, default=DEFAULT_BENCH_REPS,
                            help=f'repetitions per size, the median is reported. Default: {DEFAULT_BENCH_REPS}')),
        (('--seed', ), dict(type=int, default=0, help='generator seed. Default: 0')),
    ])
