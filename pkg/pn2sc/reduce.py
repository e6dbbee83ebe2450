"""Reduction transformation: fold the flat statechart into a hierarchy.

The AND rule collapses places with identical pre- and post-transition sets
into one place and records the parallelism as an AND of their ORs. The OR rule
collapses a ``q -> t -> r`` chain into ``q`` and merges the ORs. Both rules
are applied as long as possible, then the top state is created and every
hyperedge is moved into the nearest compound containing all its Basics.

The Petri net passed in is consumed: places and transitions are deleted as
the rules fire.
"""
import logging
from dataclasses import dataclass
from enum import Enum

from pn2sc.errors import ModelError, StateError
from pn2sc.init import initialize_statechart
from pn2sc.model import ElementKind

logger = logging.getLogger(__name__)


class Side(Enum):
    PRE = 'prep'
    POST = 'postp'


class ReductionStatus(Enum):
    SUCCESS = 'Success'
    IRREDUCIBLE = 'Irreducible'


@dataclass(frozen=True)
class RuleOutcome:
    applied: bool
    firings: int = 0

    def __bool__(self):
        return self.applied


@dataclass(frozen=True)
class Firing:
    """One rule application, reported to ``on_firing`` callbacks.

    rule is 'and' or 'or'. ``kept`` is the place that survives; ``removed``
    lists the deleted places (empty for an OR firing on a self-loop).
    """
    rule: str
    transition: int
    kept: int
    removed: tuple


@dataclass(frozen=True)
class ReductionResult:
    status: ReductionStatus
    statechart_root: int = None
    remaining_places: int = 0
    remaining_transitions: int = 0
    top_or_count: int = 0

    @property
    def success(self):
        return self.status is ReductionStatus.SUCCESS


# ---------------------------------------
# helpers
# ---------------------------------------


def pret(pn, place):
    return pn.refs_as_set(place, 'pret')


def postt(pn, place):
    return pn.refs_as_set(place, 'postt')


def prep(pn, transition):
    return pn.refs_as_set(transition, 'prep')


def postp(pn, transition):
    return pn.refs_as_set(transition, 'postp')


def _adjacent_to(pn, place, first_slot, second_slot, target):
    """Whether ``target`` is reachable from ``place`` over ``first_slot`` then ``second_slot``."""
    return any(pn.has_ref(t, second_slot, target) for t in pn.refs(place, first_slot))


# ---------------------------------------
# rules
# ---------------------------------------


def and_rule(pn, sc, side, trace, on_firing=None):
    """One pass of the AND rule over all transitions.

    For each transition with more than one pre- (``Side.PRE``) or post-place
    (``Side.POST``) whose places share identical pre- and post-transition sets,
    the ORs of those places go into a new AND under a new OR. The lowest-id
    place is kept and now maps to the new OR; the others are deleted.

    Returns:
        RuleOutcome: applied is True iff at least one transition matched.
    """
    firings = 0
    for t in pn.all_of_kind(ElementKind.TRANSITION):
        if not pn.is_alive(t):
            continue
        places = sorted(pn.refs(t, side.value))
        if len(places) < 2:
            continue
        p, rest = places[0], places[1:]
        prets, postts = pret(pn, p), postt(pn, p)
        if not all(pret(pn, q) == prets and postt(pn, q) == postts for q in rest):
            continue

        new_or = sc.create(ElementKind.OR)
        new_and = sc.create(ElementKind.AND)
        sc.set_refs(new_and, 'contains', [trace.or_of(s) for s in places])
        sc.add_ref(new_or, 'contains', new_and)
        trace.place_to_or[p] = new_or
        for q in rest:
            pn.delete(q)

        firings += 1
        logger.debug('AND rule (%s) at transition %d: kept place %d, removed %s', side.value, t, p, rest)
        if on_firing is not None:
            on_firing(Firing('and', t, p, tuple(rest)))
    return RuleOutcome(firings > 0, firings)


def or_rule(pn, sc, trace, on_firing=None):
    """One pass of the OR rule over all transitions.

    A transition ``q -> t -> r`` matches if ``q`` is ``r`` or if ``r`` is
    neither a post-place of a pre-transition of ``q`` nor a pre-place of a
    post-transition of ``q``. On a match ``r`` is merged into ``q`` (arcs and
    OR content) and ``t`` is deleted.

    Returns:
        RuleOutcome: applied is True iff at least one transition matched.
    """
    firings = 0
    for t in pn.all_of_kind(ElementKind.TRANSITION):
        if not pn.is_alive(t):
            continue
        preps, postps = pn.refs(t, 'prep'), pn.refs(t, 'postp')
        if len(preps) != 1 or len(postps) != 1:
            continue
        q, r = preps[0], postps[0]
        if q != r and (_adjacent_to(pn, q, 'pret', 'postp', r) or _adjacent_to(pn, q, 'postt', 'prep', r)):
            continue

        removed = ()
        if q != r:
            merger, mergee = trace.or_of(q), trace.or_of(r)
            pn.add_refs(q, 'pret', pn.refs(r, 'pret'))
            pn.add_refs(q, 'postt', pn.refs(r, 'postt'))
            pn.delete(r)
            sc.add_refs(merger, 'contains', sc.refs(mergee, 'contains'))
            sc.delete(mergee)
            removed = (r, )
        pn.delete(t)

        firings += 1
        logger.debug('OR rule at transition %d: kept place %d, removed %s', t, q, removed)
        if on_firing is not None:
            on_firing(Firing('or', t, q, removed))
    return RuleOutcome(firings > 0, firings)


def fixpoint(pn, sc, trace, on_firing=None):
    """Apply AND(pre), AND(post) and OR rounds until a round changes nothing.

    Returns:
        int: Number of rounds that fired at least one rule.
    """
    rounds = 0
    firings = 0
    while True:
        outcomes = (
            and_rule(pn, sc, Side.PRE, trace, on_firing),
            and_rule(pn, sc, Side.POST, trace, on_firing),
            or_rule(pn, sc, trace, on_firing),
        )
        if not any(outcomes):
            break
        rounds += 1
        firings += sum(outcome.firings for outcome in outcomes)
    logger.info('fixpoint after %d rounds and %d firings: %d places, %d transitions left', rounds, firings,
                pn.count(ElementKind.PLACE), pn.count(ElementKind.TRANSITION))
    return rounds


def create_top(sc, pn=None):
    """Wrap the single container-less OR in an AND top state of a new Statechart.

    Args:
        sc (ModelStore): Reduced statechart.
        pn (ModelStore): Reduced net, only used to report remaining counts.
            Default: None.

    Returns:
        ReductionResult: Success with the Statechart id, or Irreducible when
            zero or several container-less ORs are left (``sc`` untouched).
    """
    top_ors = [o for o in sc.all_of_kind(ElementKind.OR) if sc.container(o) is None]
    remaining = {}
    if pn is not None:
        remaining = dict(
            remaining_places=pn.count(ElementKind.PLACE), remaining_transitions=pn.count(ElementKind.TRANSITION))
    if len(top_ors) != 1:
        logger.warning('net is irreducible: %d top-level OR states', len(top_ors))
        return ReductionResult(ReductionStatus.IRREDUCIBLE, top_or_count=len(top_ors), **remaining)

    statechart = sc.create(ElementKind.STATECHART)
    top = sc.create(ElementKind.AND)
    sc.set_ref(statechart, 'topState', top)
    sc.set_refs(top, 'contains', top_ors)
    return ReductionResult(ReductionStatus.SUCCESS, statechart, top_or_count=1, **remaining)


def top_state(sc):
    """The top AND of the statechart in ``sc``.

    Raises:
        StateError: ``sc`` has no Statechart with a top state yet.
    """
    for statechart in sc.all_of_kind(ElementKind.STATECHART):
        top = sc.ref(statechart, 'topState')
        if top is not None:
            return top
    raise StateError('statechart has no top state; run create_top first')


def connected_basics(sc, hyperedge):
    """Basics a hyperedge connects (successors and predecessors), ascending id."""
    return sorted(sc.refs_as_set(hyperedge, 'next') | sc.refs_as_set(hyperedge, 'rnext'))


def nearest_common_ancestor(sc, basics):
    """Deepest compound containing every Basic of ``basics``.

    The nearest-first ancestor chain of the lowest-id Basic is walked and the
    first entry that is an ancestor of all the others wins.
    """
    first, others = basics[0], basics[1:]
    other_ancestors = [set(sc.ancestors(b)) for b in others]
    for candidate in sc.ancestors(first):
        if all(candidate in ancestors for ancestors in other_ancestors):
            return candidate
    raise ModelError(f'basics {basics} have no common ancestor')


def assign_hyperedges(sc):
    """Move every hyperedge into the nearest compound containing all its Basics.

    Hyperedges without any Basic go to the top AND.
    """
    top = top_state(sc)
    hyperedges = sc.all_of_kind(ElementKind.HYPEREDGE)
    for hyperedge in hyperedges:
        basics = connected_basics(sc, hyperedge)
        container = nearest_common_ancestor(sc, basics) if basics else top
        sc.set_ref(hyperedge, 'rcontains', container)
    logger.info('assigned %d hyperedges', len(hyperedges))


def reduce_statechart(pn, sc, trace, on_firing=None):
    """Reduce an initialized (pn, sc, trace) triple into the final statechart.

    Returns:
        ReductionResult: Outcome of the top-state creation.
    """
    fixpoint(pn, sc, trace, on_firing)
    result = create_top(sc, pn)
    if result.success:
        assign_hyperedges(sc)
    return result


def create_statechart(pn, on_firing=None):
    """Full pipeline: init, fixpoint, top state, hyperedge assignment.

    Args:
        pn (ModelStore): Petri net; consumed by the reduction.
        on_firing (callable): Called with a ``Firing`` after every rule
            application. Default: None.

    Returns:
        tuple: (sc, ReductionResult).
    """
    sc, trace = initialize_statechart(pn)
    result = reduce_statechart(pn, sc, trace, on_firing)
    return sc, result


def irreducible_message(result):
    return (f'irreducible: {result.top_or_count} top ORs, {result.remaining_places} places and '
            f'{result.remaining_transitions} transitions remain')
