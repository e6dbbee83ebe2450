import json
import pytest

from pn2sc.fileio import dump_document, read_petri_net, read_statechart, write_statechart
from pn2sc.generate import GenSpec, generate_sp_net
from pn2sc.model import ElementKind
from pn2sc.reduce import create_statechart
from pn2sc.validate import (MUTATIONS, DiscrepancyKind, ValidationLevel, add_extra_element, drop_next_link,
                            move_to_wrong_container, validate_counts, validate_full, validate_structure)

GOLDEN_NAMES = ('chain', 'self_loop', 'fork_join')


def _engine_chart(data):
    sc, result = create_statechart(read_petri_net(data))
    return read_statechart(write_statechart(sc, result))


def test_counts_identical(load_golden):
    report = validate_counts(load_golden('fork_join'), load_golden('fork_join'))
    assert report.passed
    assert report.level is ValidationLevel.COUNTS


def test_counts_missing_or(load_golden):
    actual = load_golden('fork_join')
    actual.delete(actual.all_of_kind(ElementKind.OR)[-1])
    report = validate_counts(actual, load_golden('fork_join'))
    assert report.kinds() == [DiscrepancyKind.COUNT_MISMATCH]
    assert str(report.discrepancies[0]) == 'count-mismatch: OR: 2 found, 3 expected'


def test_counts_of_engine_chain(net_bytes, load_golden):
    assert validate_counts(_engine_chart(net_bytes('chain')), load_golden('chain')).passed


@pytest.mark.parametrize('name', ['chain', 'self_loop', 'fork_join', 'double_arc'])
def test_full_is_reflexive_on_corpus(corpus, name):
    expected = read_statechart(dump_document(corpus[name].expected))
    assert validate_full(expected, read_statechart(dump_document(corpus[name].expected))).passed
    actual = _engine_chart(dump_document(corpus[name].net))
    report = validate_full(actual, expected)
    assert report.passed, report.discrepancies
    assert report.level is ValidationLevel.FULL


@pytest.mark.parametrize('seed', range(3))
def test_full_is_reflexive_on_generated_nets(seed):
    net = dump_document(generate_sp_net(GenSpec(300, seed)))
    assert validate_full(_engine_chart(net), _engine_chart(net)).passed


def test_full_accepts_other_internal_ids(net_bytes, load_golden):
    # engine output has other internal ids than the parsed golden file
    sc, result = create_statechart(read_petri_net(net_bytes('fork_join')))
    assert validate_full(sc, load_golden('fork_join')).passed


def test_missing_next_link(load_golden):
    actual = load_golden('chain')
    drop_next_link(actual)
    report = validate_full(actual, load_golden('chain'))
    assert report.kinds() == [DiscrepancyKind.NEXT_SET_MISMATCH]
    assert validate_counts(actual, load_golden('chain')).passed


def test_basic_moved_to_another_or(load_golden):
    actual = load_golden('fork_join')
    description = move_to_wrong_container(actual)
    assert 'P1' in description
    report = validate_full(actual, load_golden('fork_join'))
    assert DiscrepancyKind.WRONG_CONTAINER in report.kinds()
    assert not report.passed


def test_additional_element(load_golden):
    actual = load_golden('self_loop')
    add_extra_element(actual)
    report = validate_full(actual, load_golden('self_loop'))
    assert DiscrepancyKind.COUNT_MISMATCH in report.kinds()
    assert DiscrepancyKind.EXTRA_NODE in report.kinds()


def test_missing_element(load_golden):
    expected = load_golden('chain')
    add_extra_element(expected)
    report = validate_full(load_golden('chain'), expected)
    assert DiscrepancyKind.MISSING_NODE in report.kinds()


@pytest.mark.parametrize('mutation', sorted(MUTATIONS))
@pytest.mark.parametrize('name', GOLDEN_NAMES)
def test_every_mutation_is_detected(load_golden, name, mutation):
    actual = load_golden(name)
    MUTATIONS[mutation](actual)
    assert not validate_full(actual, load_golden(name)).passed


@pytest.mark.parametrize('mutation', sorted(MUTATIONS))
@pytest.mark.parametrize('name', GOLDEN_NAMES)
def test_full_pass_implies_counts_pass(load_golden, name, mutation):
    for actual in (load_golden(name), _mutated(load_golden(name), mutation)):
        if validate_full(actual, load_golden(name)).passed:
            assert validate_counts(actual, load_golden(name)).passed


def _mutated(sc, mutation):
    MUTATIONS[mutation](sc)
    return sc


# ---------------------------------------
# structure
# ---------------------------------------


@pytest.mark.parametrize('name', GOLDEN_NAMES)
def test_structure_of_golden_files(load_golden, name):
    report = validate_structure(load_golden(name))
    assert report.passed, report.discrepancies
    assert report.level is ValidationLevel.STRUCTURE


@pytest.mark.parametrize('seed', range(3))
def test_structure_of_generated_charts(seed):
    sc, result = create_statechart(read_petri_net(dump_document(generate_sp_net(GenSpec(500, seed)))))
    assert validate_structure(sc).passed


def test_structure_flags_wrong_container(load_golden):
    sc = load_golden('chain')
    move_to_wrong_container(sc)
    report = validate_structure(sc)
    assert DiscrepancyKind.WRONG_CONTAINER in report.kinds()


def test_structure_flags_misplaced_hyperedge(load_golden):
    sc = load_golden('fork_join')
    (hyperedge, ) = [h for h in sc.all_of_kind(ElementKind.HYPEREDGE) if sc.name_of(h) == 'T2']
    top = sc.ref(sc.all_of_kind(ElementKind.STATECHART)[0], 'topState')
    sc.set_ref(hyperedge, 'rcontains', top)
    assert validate_structure(sc).kinds() == [DiscrepancyKind.WRONG_CONTAINER]


def test_structure_flags_detached_element(load_golden):
    sc = load_golden('chain')
    sc.create(ElementKind.OR)
    assert validate_structure(sc).kinds() == [DiscrepancyKind.EXTRA_NODE]


def test_structure_without_top_state(load_golden):
    sc = load_golden('chain')
    sc.delete(sc.all_of_kind(ElementKind.AND)[0])
    assert validate_structure(sc).kinds() == [DiscrepancyKind.MISSING_NODE]


# ---------------------------------------
# expected files without rnext
# ---------------------------------------


def _without_rnext(data):
    doc = json.loads(data)
    stack = [doc['root']]
    while stack:
        node = stack.pop()
        node.pop('rnext', None)
        stack.extend(node['children'])
    return read_statechart(json.dumps(doc))


@pytest.mark.parametrize('name', GOLDEN_NAMES)
def test_full_against_expected_without_rnext(net_bytes, golden_bytes, name):
    expected = _without_rnext(golden_bytes(name))
    assert validate_full(_engine_chart(net_bytes(name)), expected).passed
    assert validate_full(expected, _engine_chart(net_bytes(name))).passed


def test_next_still_compared_without_rnext(golden_bytes):
    actual = _without_rnext(golden_bytes('fork_join'))
    drop_next_link(actual)
    report = validate_full(actual, _without_rnext(golden_bytes('fork_join')))
    assert report.kinds() == [DiscrepancyKind.NEXT_SET_MISMATCH]


@pytest.mark.parametrize('name', GOLDEN_NAMES)
def test_structure_without_rnext(golden_bytes, name):
    assert validate_structure(_without_rnext(golden_bytes(name))).passed


def test_structure_without_rnext_flags_foreign_container(golden_bytes):
    sc = _without_rnext(golden_bytes('fork_join'))
    (hyperedge, ) = [h for h in sc.all_of_kind(ElementKind.HYPEREDGE) if sc.name_of(h) == 'T1']
    basic = sc.refs(hyperedge, 'next')[0]
    sc.set_ref(hyperedge, 'rcontains', sc.container(basic))
    assert validate_structure(sc).kinds() == [DiscrepancyKind.WRONG_CONTAINER]
