import pytest

from pn2sc.errors import StateError
from pn2sc.fileio import dump_document, read_petri_net, write_statechart
from pn2sc.generate import GenSpec, generate_sp_net
from pn2sc.init import initialize_statechart
from pn2sc.model import ElementKind, ModelStore
from pn2sc.reduce import (Firing, ReductionStatus, Side, and_rule, assign_hyperedges, connected_basics, create_statechart,
                          create_top, fixpoint, or_rule, postp, prep, reduce_statechart, top_state)
from pn2sc.validate import containment_graph, nca_oracle


def _ids(pn):
    return {pn.name_of(eid): eid for eid in pn}


def _counts(pn, sc):
    return (sc.count(ElementKind.OR), sc.count(ElementKind.AND), pn.count(ElementKind.PLACE),
            pn.count(ElementKind.TRANSITION))


def _generated(places, seed=0):
    return read_petri_net(dump_document(generate_sp_net(GenSpec(places, seed=seed))))


# ---------------------------------------
# AND rule
# ---------------------------------------


def test_and_rule_post_side_on_fork_join(load_net):
    pn = load_net('fork_join')
    ids = _ids(pn)
    sc, trace = initialize_statechart(pn)
    or_p1, or_p2 = trace.or_of(ids['P1']), trace.or_of(ids['P2'])

    outcome = and_rule(pn, sc, Side.POST, trace)
    assert outcome and outcome.firings == 1
    assert not pn.is_alive(ids['P2'])
    assert postp(pn, ids['T1']) == {ids['P1']}
    assert prep(pn, ids['T2']) == {ids['P1']}

    new_or = trace.or_of(ids['P1'])
    (new_and, ) = sc.refs(new_or, 'contains')
    assert sc.kind_of(new_and) is ElementKind.AND
    assert sc.refs(new_and, 'contains') == [or_p1, or_p2]
    assert sc.container(new_or) is None


def test_and_rule_pre_side_skips_single_pre_place(load_net):
    pn = load_net('fork_join')
    ids = _ids(pn)
    sc, trace = initialize_statechart(pn)
    firings = []
    and_rule(pn, sc, Side.PRE, trace, firings.append)
    # T1 has the single pre-place P0, only the join T2 matches
    assert firings == [Firing('and', ids['T2'], ids['P1'], (ids['P2'], ))]


def test_and_rule_requires_equal_transition_sets():
    pn = read_petri_net(b'''{
        "places": [{"id": "A"}, {"id": "B"}, {"id": "P1"}, {"id": "P2"}],
        "transitions": [
            {"id": "Ta", "pre": ["A"], "post": ["P1"]},
            {"id": "Tb", "pre": ["B"], "post": ["P2"]},
            {"id": "T", "pre": ["P1", "P2"], "post": []}
        ]}''')
    sc, trace = initialize_statechart(pn)
    before = (len(pn), len(sc))
    assert not and_rule(pn, sc, Side.PRE, trace)
    assert not and_rule(pn, sc, Side.POST, trace)
    assert (len(pn), len(sc)) == before


# ---------------------------------------
# OR rule
# ---------------------------------------


def test_or_rule_on_chain(load_net):
    pn = load_net('chain')
    ids = _ids(pn)
    sc, trace = initialize_statechart(pn)
    basics = trace.place_to_basic[ids['P1']], trace.place_to_basic[ids['P2']]

    assert or_rule(pn, sc, trace)
    assert pn.all_of_kind(ElementKind.PLACE) == [ids['P1']]
    assert pn.count(ElementKind.TRANSITION) == 0
    assert pn.refs(ids['P1'], 'pret') == [] and pn.refs(ids['P1'], 'postt') == []
    assert sc.refs(trace.or_of(ids['P1']), 'contains') == list(basics)
    assert sc.count(ElementKind.OR) == 1


def test_or_rule_on_self_loop(load_net):
    pn = load_net('self_loop')
    sc, trace = initialize_statechart(pn)
    firings = []
    assert or_rule(pn, sc, trace, firings.append)
    assert len(firings) == 1 and firings[0].removed == ()
    assert _counts(pn, sc) == (1, 0, 1, 0)


def test_or_rule_on_double_arc(load_net):
    pn = load_net('double_arc')
    ids = _ids(pn)
    sc, trace = initialize_statechart(pn)
    firings = []
    outcome = or_rule(pn, sc, trace, firings.append)
    # T1 merges P2 into P1, which turns T2 into a self-loop removed in the same pass
    assert outcome.firings == 2
    assert firings[0] == Firing('or', ids['T1'], ids['P1'], (ids['P2'], ))
    assert firings[1] == Firing('or', ids['T2'], ids['P1'], ())
    assert _counts(pn, sc) == (1, 0, 1, 0)


def test_or_rule_keeps_connected_places_apart():
    # P2 is a sibling of P1 behind the fork F, so T does not match
    pn = read_petri_net(b'''{
        "places": [{"id": "P0"}, {"id": "P1"}, {"id": "P2"}],
        "transitions": [
            {"id": "F", "pre": ["P0"], "post": ["P1", "P2"]},
            {"id": "T", "pre": ["P1"], "post": ["P2"]}
        ]}''')
    sc, trace = initialize_statechart(pn)
    assert not or_rule(pn, sc, trace)
    assert _counts(pn, sc) == (3, 0, 3, 2)


# ---------------------------------------
# fixpoint and top state
# ---------------------------------------


def test_fixpoint_on_reduced_net():
    pn = ModelStore()
    pn.create(ElementKind.PLACE, 'P')
    sc, trace = initialize_statechart(pn)
    assert fixpoint(pn, sc, trace) == 0


@pytest.mark.parametrize('length', [2, 5, 30])
def test_fixpoint_on_chains(length):
    places = ', '.join(f'{{"id": "P{i}"}}' for i in range(length))
    transitions = ', '.join(f'{{"id": "T{i}", "pre": ["P{i}"], "post": ["P{i + 1}"]}}' for i in range(length - 1))
    pn = read_petri_net(f'{{"places": [{places}], "transitions": [{transitions}]}}')
    sc, trace = initialize_statechart(pn)
    fixpoint(pn, sc, trace)
    assert (pn.count(ElementKind.PLACE), pn.count(ElementKind.TRANSITION)) == (1, 0)
    (or_state, ) = sc.all_of_kind(ElementKind.OR)
    assert len(sc.refs(or_state, 'contains')) == length


def test_fixpoint_on_fork_join(load_net):
    pn = load_net('fork_join')
    sc, trace = initialize_statechart(pn)
    fixpoint(pn, sc, trace)
    assert _counts(pn, sc) == (3, 1, 1, 0)


def test_create_top_on_chain(load_net):
    pn = load_net('chain')
    sc, trace = initialize_statechart(pn)
    fixpoint(pn, sc, trace)
    result = create_top(sc, pn)
    assert result.status is ReductionStatus.SUCCESS
    top = sc.ref(result.statechart_root, 'topState')
    assert top == top_state(sc)
    (or_state, ) = sc.refs(top, 'contains')
    assert [sc.name_of(b) for b in sc.refs(or_state, 'contains')] == ['P1', 'P2']


def test_create_top_irreducible(load_net):
    pn = load_net('two_isolated_places')
    sc, trace = initialize_statechart(pn)
    fixpoint(pn, sc, trace)
    size = len(sc)
    result = create_top(sc, pn)
    assert result.status is ReductionStatus.IRREDUCIBLE
    assert (result.top_or_count, result.remaining_places, result.remaining_transitions) == (2, 2, 0)
    assert len(sc) == size
    assert sc.count(ElementKind.STATECHART) == 0


def test_create_top_on_empty_statechart():
    result = create_top(ModelStore())
    assert not result.success
    assert result.top_or_count == 0


def test_top_state_needs_create_top():
    with pytest.raises(StateError):
        top_state(ModelStore())
    with pytest.raises(StateError):
        assign_hyperedges(ModelStore())


# ---------------------------------------
# hyperedge assignment
# ---------------------------------------


def _container_names(sc):
    return {sc.name_of(h): sc.container(h) for h in sc.all_of_kind(ElementKind.HYPEREDGE)}


def test_assign_on_chain(load_net):
    sc, result = create_statechart(load_net('chain'))
    (or_state, ) = sc.all_of_kind(ElementKind.OR)
    assert _container_names(sc) == {'T1': or_state}


def test_assign_on_fork_join(load_net):
    sc, result = create_statechart(load_net('fork_join'))
    top = top_state(sc)
    (outer, ) = sc.refs(top, 'contains')
    assert _container_names(sc) == {'T1': outer, 'T2': outer}


def test_assign_single_basic_and_no_basic():
    pn = read_petri_net(b'{"places": [{"id": "P"}], "transitions": [{"id": "T"}, {"id": "L", "pre": ["P"]}]}')
    sc, result = create_statechart(pn)
    assert result.success
    (basic, ) = sc.all_of_kind(ElementKind.BASIC)
    containers = _container_names(sc)
    assert containers['L'] == sc.container(basic)
    assert containers['T'] == top_state(sc)


# ---------------------------------------
# pipeline
# ---------------------------------------


def test_empty_net_is_irreducible():
    sc, result = create_statechart(ModelStore())
    assert result.status is ReductionStatus.IRREDUCIBLE
    assert result.statechart_root is None


def test_chain_counts(load_net):
    sc, result = create_statechart(load_net('chain'))
    assert result.success
    counts = tuple(
        sc.count(kind) for kind in (ElementKind.STATECHART, ElementKind.AND, ElementKind.OR, ElementKind.BASIC,
                                    ElementKind.HYPEREDGE))
    assert counts == (1, 1, 1, 2, 1)


def test_per_firing_deltas():
    pn = _generated(1000, seed=11)
    sc, trace = initialize_statechart(pn)
    initial = pn.count(ElementKind.PLACE) + pn.count(ElementKind.TRANSITION)
    state = {'counts': _counts(pn, sc), 'firings': 0}

    def check(firing):
        counts = _counts(pn, sc)
        delta = tuple(after - before for after, before in zip(counts, state['counts']))
        if firing.rule == 'and':
            assert len(firing.removed) >= 1
            assert delta == (1, 1, -len(firing.removed), 0)
        elif firing.removed:
            assert delta == (-1, 0, -1, -1)
        else:
            assert delta == (0, 0, 0, -1)
        state['counts'] = counts
        state['firings'] += 1

    basics = set(sc.all_of_kind(ElementKind.BASIC))
    hyperedges = set(sc.all_of_kind(ElementKind.HYPEREDGE))
    result = reduce_statechart(pn, sc, trace, check)
    assert result.success
    assert 0 < state['firings'] <= initial
    # conservation of Basics and hyperedges
    assert set(sc.all_of_kind(ElementKind.BASIC)) == basics
    assert set(sc.all_of_kind(ElementKind.HYPEREDGE)) == hyperedges
    assert sc.consistency_errors() == []
    assert pn.consistency_errors() == []


@pytest.mark.parametrize('name', ['chain', 'self_loop', 'fork_join', 'double_arc'])
def test_assignment_matches_oracle_on_corpus(net_of, name):
    _assert_nca_oracle(*create_statechart(net_of(name)))


@pytest.mark.parametrize('seed', range(5))
def test_assignment_matches_oracle_on_generated_nets(seed):
    _assert_nca_oracle(*create_statechart(_generated(400, seed)))


def _assert_nca_oracle(sc, result):
    assert result.success
    graph = containment_graph(sc)
    depth = {node: len(sc.ancestors(node)) for node in graph.nodes if node != result.statechart_root}
    for hyperedge in sc.all_of_kind(ElementKind.HYPEREDGE):
        basics = connected_basics(sc, hyperedge)
        expected = nca_oracle(graph, basics, depth) if basics else top_state(sc)
        assert sc.container(hyperedge) == expected


def test_transform_is_deterministic(load_net):
    outputs = [write_statechart(*create_statechart(load_net('fork_join'))) for _ in range(2)]
    assert outputs[0] == outputs[1]
