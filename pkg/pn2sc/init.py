"""Initialization transformation: Petri net -> flat statechart.

Every place becomes an OR holding one Basic of the same name, every transition
becomes a HyperEdge, and the Basic's ``rnext``/``next`` mirror the place's
pre-/post-transitions. Rules are memoized through the trace map: calling a
rule again for the same source element returns the first result.
"""
import logging
from dataclasses import dataclass, field

from pn2sc.errors import KindError, TraceError
from pn2sc.model import ElementKind, ModelStore

logger = logging.getLogger(__name__)


@dataclass
class TraceMap:
    """Source -> target correspondence built at init.

    ``place_to_or`` is rewritten by the AND rule while the net is reduced;
    entries of deleted places are left behind.
    """
    place_to_or: dict = field(default_factory=dict)
    place_to_basic: dict = field(default_factory=dict)
    transition_to_hyperedge: dict = field(default_factory=dict)

    def or_of(self, place):
        try:
            return self.place_to_or[place]
        except KeyError:
            raise TraceError(f'no OR state recorded for place {place}') from None


def _check_kind(pn, eid, kind):
    if pn.kind_of(eid) is not kind:
        raise KindError(f'expected a {kind.value}, got {pn.kind_of(eid).value} {eid}')


def rule_transition2hyperedge(pn, sc, trace, transition):
    """Create the HyperEdge of a transition (memoized).

    Returns:
        int: HyperEdge id in ``sc``.
    """
    _check_kind(pn, transition, ElementKind.TRANSITION)
    hyperedge = trace.transition_to_hyperedge.get(transition)
    if hyperedge is None:
        hyperedge = sc.create(ElementKind.HYPEREDGE, pn.name_of(transition))
        trace.transition_to_hyperedge[transition] = hyperedge
    return hyperedge


def rule_place2basic_and_or(pn, sc, trace, place):
    """Create the OR and Basic of a place and wire the Basic to its hyperedges.

    Returns:
        tuple[int]: (or_id, basic_id) in ``sc``.
    """
    _check_kind(pn, place, ElementKind.PLACE)
    basic = trace.place_to_basic.get(place)
    if basic is not None:
        return trace.place_to_or[place], basic

    or_state = sc.create(ElementKind.OR)
    basic = sc.create(ElementKind.BASIC, pn.name_of(place))
    sc.set_ref(basic, 'rcontains', or_state)
    trace.place_to_or[place] = or_state
    trace.place_to_basic[place] = basic
    sc.set_refs(basic, 'rnext', [rule_transition2hyperedge(pn, sc, trace, t) for t in pn.refs(place, 'pret')])
    sc.set_refs(basic, 'next', [rule_transition2hyperedge(pn, sc, trace, t) for t in pn.refs(place, 'postt')])
    return or_state, basic


def initialize_statechart(pn):
    """Run the initialization over every place of ``pn`` in ascending id order.

    Transitions without any arc are not reached from a place; they are
    mapped afterwards so every transition owns exactly one hyperedge.

    Args:
        pn (ModelStore): Petri net holding only Place and Transition elements.

    Returns:
        tuple: (sc, trace) with the new statechart store and its TraceMap.
    """
    sc = ModelStore('statechart')
    trace = TraceMap()
    for place in pn.all_of_kind(ElementKind.PLACE):
        rule_place2basic_and_or(pn, sc, trace, place)
    for transition in pn.all_of_kind(ElementKind.TRANSITION):
        rule_transition2hyperedge(pn, sc, trace, transition)
    logger.info('init: %d places -> %d OR/Basic pairs, %d transitions -> %d hyperedges', pn.count(ElementKind.PLACE),
                sc.count(ElementKind.OR), pn.count(ElementKind.TRANSITION), sc.count(ElementKind.HYPEREDGE))
    return sc, trace
