"""Synthetic benchmark nets and the hand-traced fixture corpus.

Generated nets are series-parallel: starting from one place, a randomly
chosen place is repeatedly expanded either into a sequence

    p  =>  p -> t -> p'

or into a parallel block

    p  =>  p -> fork -> {q1 .. qk} -> join -> p'

where ``p'`` takes over the former post-transitions of ``p``. The AND rule
collapses exactly such blocks and the OR rule exactly such sequences, so every
generated net reduces to a single top OR.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

from pn2sc.fileio import COUNT_KEYS, petri_net_document
from pn2sc.model import ElementKind, ModelStore

logger = logging.getLogger(__name__)

DEFAULT_BRANCH_FACTOR_MAX = 4
DEFAULT_PARALLEL_PROB = Fraction(1, 2)

MASK64 = (1 << 64) - 1
# SplitMix64 constants
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_MULT_1 = 0xBF58476D1CE4E5B9
MIX_MULT_2 = 0x94D049BB133111EB


class GenSpecError(ValueError):
    """Invalid generator parameters."""


class SplitMix64():
    """SplitMix64 pseudo random generator with a 64-bit state.

    Each step adds GOLDEN_GAMMA to the state (mod 2**64) and mixes it::

        z = (s ^ (s >> 30)) * MIX_MULT_1
        z = (z ^ (z >> 27)) * MIX_MULT_2
        out = z ^ (z >> 31)

    all products taken mod 2**64. Any language can reproduce the sequence.
    """

    def __init__(self, seed):
        self.state = seed & MASK64

    def next_u64(self):
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX_MULT_1) & MASK64
        z = ((z ^ (z >> 27)) * MIX_MULT_2) & MASK64
        return z ^ (z >> 31)

    def below(self, n):
        """Integer in [0, n). Plain modulo, the bias is below 2**-40 for our n."""
        return self.next_u64() % n

    def chance(self, prob):
        """True with probability ``prob`` (a Fraction), decided exactly."""
        return self.next_u64() * prob.denominator < (prob.numerator << 64)


@dataclass(frozen=True)
class GenSpec:
    """Generator parameters.

    Args:
        target_places (int): Exact number of places of the generated net.
        seed (int): Unsigned 64-bit seed. Default: 0.
        branch_factor_max (int): Largest number of parallel branches. Default: 4.
        parallel_prob (Fraction | float | str): Probability that an expansion
            is a parallel block when enough places are left. Default: 1/2.
    """
    target_places: int
    seed: int = 0
    branch_factor_max: int = DEFAULT_BRANCH_FACTOR_MAX
    parallel_prob: Fraction = DEFAULT_PARALLEL_PROB

    def __post_init__(self):
        if not isinstance(self.target_places, int) or self.target_places < 1:
            raise GenSpecError(f'target_places must be a positive integer, got {self.target_places!r}')
        if not isinstance(self.seed, int) or not 0 <= self.seed <= MASK64:
            raise GenSpecError(f'seed must be an unsigned 64-bit integer, got {self.seed!r}')
        if not isinstance(self.branch_factor_max, int) or self.branch_factor_max < 2:
            raise GenSpecError(f'branch_factor_max must be >= 2, got {self.branch_factor_max!r}')
        try:
            prob = Fraction(self.parallel_prob)
        except (TypeError, ValueError):
            raise GenSpecError(f'parallel_prob must be a number, got {self.parallel_prob!r}') from None
        if not 0 <= prob <= 1:
            raise GenSpecError(f'parallel_prob must lie in [0, 1], got {prob}')
        object.__setattr__(self, 'parallel_prob', prob)


def default_file_name(spec):
    return f'sp{spec.target_places}_{spec.seed}.json'


class _NetBuilder():

    def __init__(self):
        self.pn = ModelStore('generated')
        self.places = []
        self.num_transitions = 0

    def new_place(self):
        place = self.pn.create(ElementKind.PLACE, f'P{len(self.places) + 1}')
        self.places.append(place)
        return place

    def new_transition(self):
        self.num_transitions += 1
        return self.pn.create(ElementKind.TRANSITION, f'T{self.num_transitions}')

    def split_off(self, place):
        """New place that takes over the post-transitions of ``place``."""
        successor = self.new_place()
        for transition in self.pn.refs(place, 'postt'):
            self.pn.remove_ref(transition, 'prep', place)
            self.pn.add_ref(transition, 'prep', successor)
        return successor

    def expand_sequence(self, place):
        successor = self.split_off(place)
        transition = self.new_transition()
        self.pn.add_ref(transition, 'prep', place)
        self.pn.add_ref(transition, 'postp', successor)

    def expand_parallel(self, place, branches):
        successor = self.split_off(place)
        fork, join = self.new_transition(), self.new_transition()
        self.pn.add_ref(fork, 'prep', place)
        for _ in range(branches):
            branch = self.new_place()
            self.pn.add_ref(fork, 'postp', branch)
            self.pn.add_ref(join, 'prep', branch)
        self.pn.add_ref(join, 'postp', successor)


def generate_sp_net(spec):
    """Generate a reducible series-parallel net with exactly ``target_places`` places.

    Returns:
        dict: PetriNetDocument.
    """
    rng = SplitMix64(spec.seed)
    builder = _NetBuilder()
    builder.new_place()
    while len(builder.places) < spec.target_places:
        remaining = spec.target_places - len(builder.places)
        place = builder.places[rng.below(len(builder.places))]
        # a parallel block adds branches + 1 places
        if remaining >= 3 and rng.chance(spec.parallel_prob):
            widest = min(spec.branch_factor_max, remaining - 1)
            builder.expand_parallel(place, 2 + rng.below(widest - 1))
        else:
            builder.expand_sequence(place)
    logger.info('generated %s: %d places, %d transitions', default_file_name(spec), len(builder.places),
                builder.num_transitions)
    return petri_net_document(builder.pn)


# ---------------------------------------
# fixture corpus
# ---------------------------------------


@dataclass(frozen=True)
class Fixture:
    """A hand-traced net with its expected statechart (None: must be irreducible)."""
    name: str
    net: dict
    expected: dict = None


def _net(places, transitions):
    return {
        'places': [{'id': p, 'name': p} for p in places],
        'transitions': [{'id': t, 'name': t, 'pre': list(pre), 'post': list(post)} for t, pre, post in transitions],
    }


def _expected_chart(*top_children):
    """Expected document from a compact tree below the top AND.

    Nodes are ``('OR', [...])``, ``('AND', [...])``, ``('Basic', name)`` and
    ``('HyperEdge', name, [successor names], [predecessor names])``,
    listed in canonical child order (kind, name, creation order).
    """
    counts = dict.fromkeys(COUNT_KEYS, 0)
    basic_uids = {}
    pending = []

    def build(spec):
        kind = spec[0]
        entry = {'uid': sum(counts.values()), 'kind': kind, 'name': '', 'children': []}
        counts[kind.lower()] += 1
        if kind == 'Basic':
            entry['name'] = spec[1]
            basic_uids[spec[1]] = entry['uid']
        elif kind == 'HyperEdge':
            entry['name'] = spec[1]
            pending.append((entry, spec[2], spec[3]))
        else:
            entry['children'] = [build(child) for child in spec[1]]
        return entry

    root = build(('Statechart', [('AND', list(top_children))]))
    for entry, successors, predecessors in pending:
        entry['next'] = sorted(basic_uids[name] for name in successors)
        entry['rnext'] = sorted(basic_uids[name] for name in predecessors)
    return {'counts': counts, 'root': root}


def generate_known_corpus():
    """Hand-traced fixtures used by the golden and mutation tests.

    Returns:
        list[Fixture]: chain, self_loop, fork_join, double_arc and
            two_isolated_places (the irreducible one).
    """
    return [
        Fixture(
            'chain', _net(['P1', 'P2'], [('T1', ['P1'], ['P2'])]),
            _expected_chart(('OR', [('Basic', 'P1'), ('Basic', 'P2'), ('HyperEdge', 'T1', ['P2'], ['P1'])]))),
        Fixture(
            'self_loop', _net(['P'], [('T', ['P'], ['P'])]),
            _expected_chart(('OR', [('Basic', 'P'), ('HyperEdge', 'T', ['P'], ['P'])]))),
        Fixture(
            'fork_join',
            _net(['P0', 'P1', 'P2', 'P3'], [('T1', ['P0'], ['P1', 'P2']), ('T2', ['P1', 'P2'], ['P3'])]),
            _expected_chart(('OR', [
                ('AND', [('OR', [('Basic', 'P1')]), ('OR', [('Basic', 'P2')])]),
                ('Basic', 'P0'),
                ('Basic', 'P3'),
                ('HyperEdge', 'T1', ['P1', 'P2'], ['P0']),
                ('HyperEdge', 'T2', ['P3'], ['P1', 'P2']),
            ]))),
        # the OR rule fires on T1 (P2 is no sibling of P1 in any fork or join),
        # which turns T2 into a self-loop removed in the same pass
        Fixture(
            'double_arc', _net(['P1', 'P2'], [('T1', ['P1'], ['P2']), ('T2', ['P1'], ['P2'])]),
            _expected_chart(('OR', [
                ('Basic', 'P1'),
                ('Basic', 'P2'),
                ('HyperEdge', 'T1', ['P2'], ['P1']),
                ('HyperEdge', 'T2', ['P2'], ['P1']),
            ]))),
        Fixture('two_isolated_places', _net(['P1', 'P2'], [])),
    ]
