"""Compare produced statecharts against expected ones.

Three levels:

- Counts: number of instances of every statechart class.
- Full: counts, plus a containment-tree isomorphism matching kind and name at
  every node, plus equal ``next``/``rnext`` sets of every hyperedge under that
  isomorphism.
- Structure: a single statechart checked on its own (one containment tree,
  ANDs hold ORs, Basics sit in ORs, hyperedges sit at the nearest common
  ancestor of their Basics).

The module also carries the three corruptions used to show that the checks
catch wrong models: a missing ``next`` link, an additional element and an
element in the wrong compound.
"""
import hashlib
import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum

import networkx as nx

from pn2sc.fileio import LINK_SLOTS, link_slots, tree_children
from pn2sc.model import COMPOUND_KINDS, STATECHART_KINDS, ElementKind

logger = logging.getLogger(__name__)


class ValidationLevel(Enum):
    COUNTS = 'Counts'
    FULL = 'Full'
    STRUCTURE = 'Structure'


class DiscrepancyKind(Enum):
    COUNT_MISMATCH = 'count-mismatch'
    MISSING_NODE = 'missing-node'
    EXTRA_NODE = 'extra-node'
    WRONG_CONTAINER = 'wrong-container'
    NEXT_SET_MISMATCH = 'next-set-mismatch'


@dataclass(frozen=True)
class Discrepancy:
    kind: DiscrepancyKind
    detail: str

    def __str__(self):
        return f'{self.kind.value}: {self.detail}'


@dataclass
class ValidationReport:
    level: ValidationLevel
    discrepancies: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.discrepancies

    def add(self, kind, detail):
        self.discrepancies.append(Discrepancy(kind, detail))

    def kinds(self):
        return [d.kind for d in self.discrepancies]


def _label(sc, eid):
    name = sc.name_of(eid)
    kind = sc.kind_of(eid).value
    return f'{kind}[{name}]' if name else kind


def _root(sc):
    statecharts = sc.all_of_kind(ElementKind.STATECHART)
    return statecharts[0] if statecharts else None


# ---------------------------------------
# counts
# ---------------------------------------


def validate_counts(actual, expected):
    """Compare per-kind element totals."""
    report = ValidationReport(ValidationLevel.COUNTS)
    for kind in STATECHART_KINDS:
        if actual.count(kind) != expected.count(kind):
            report.add(DiscrepancyKind.COUNT_MISMATCH,
                       f'{kind.value}: {actual.count(kind)} found, {expected.count(kind)} expected')
    return report


# ---------------------------------------
# full
# ---------------------------------------


def canonical_hashes(sc, root, slots=LINK_SLOTS):
    """md5 fingerprint of every subtree below ``root``.

    A fingerprint covers kind, name and the sorted child fingerprints; for
    hyperedges also the sorted names of their Basics in each of ``slots``.
    """
    hashes = {}
    stack = [(root, False)]
    while stack:
        eid, expanded = stack.pop()
        children = tree_children(sc, eid)
        if not expanded:
            stack.append((eid, True))
            stack.extend((child, False) for child in children)
            continue
        parts = [sc.kind_of(eid).value, sc.name_of(eid), sorted(hashes[child] for child in children)]
        if sc.kind_of(eid) is ElementKind.HYPEREDGE:
            parts.extend(sorted(sc.name_of(b) for b in sc.refs(eid, slot)) for slot in slots)
        hashes[eid] = hashlib.md5(json.dumps(parts).encode('utf-8')).hexdigest()
    return hashes


class _TreeMatcher():
    """Pairs the nodes of two statechart trees and collects divergences."""

    def __init__(self, actual, expected):
        self.actual = actual
        self.expected = expected
        # rnext is only compared when both documents carry it
        self.slots = tuple(slot for slot in link_slots(expected) if slot in link_slots(actual))
        self.a_hash = canonical_hashes(actual, _root(actual), self.slots)
        self.e_hash = canonical_hashes(expected, _root(expected), self.slots)
        self.mapping = {}  # actual id -> expected id
        self.missing = []  # (expected id, parent path)
        self.extra = []  # (actual id, parent path)

    def _similarity(self, a, e):
        a_children = Counter(self.a_hash[c] for c in tree_children(self.actual, a))
        e_children = Counter(self.e_hash[c] for c in tree_children(self.expected, e))
        return sum((a_children & e_children).values())

    def _pair_group(self, a_nodes, e_nodes):
        pairs = []
        by_hash = defaultdict(list)
        for e in e_nodes:
            by_hash[self.e_hash[e]].append(e)
        a_rest = []
        for a in sorted(a_nodes, key=lambda n: (self.a_hash[n], n)):
            candidates = by_hash.get(self.a_hash[a])
            if candidates:
                pairs.append((a, candidates.pop(0)))
            else:
                a_rest.append(a)
        e_rest = [e for bucket in by_hash.values() for e in bucket]
        e_rest.sort(key=lambda n: (self.e_hash[n], n))
        # leftovers pair with the most similar counterpart
        while a_rest and e_rest:
            a = a_rest.pop(0)
            best = max(e_rest, key=lambda e: self._similarity(a, e))
            e_rest.remove(best)
            pairs.append((a, best))
        return pairs, a_rest, e_rest

    def match(self, a_root, e_root):
        stack = [(a_root, e_root, _label(self.actual, a_root))]
        while stack:
            a, e, path = stack.pop()
            self.mapping[a] = e
            a_groups, e_groups = defaultdict(list), defaultdict(list)
            for child in tree_children(self.actual, a):
                a_groups[self.actual.kind_of(child).value, self.actual.name_of(child)].append(child)
            for child in tree_children(self.expected, e):
                e_groups[self.expected.kind_of(child).value, self.expected.name_of(child)].append(child)
            for key in sorted(set(a_groups) | set(e_groups)):
                pairs, extra, missing = self._pair_group(a_groups.get(key, []), e_groups.get(key, []))
                self.extra.extend((x, path) for x in extra)
                self.missing.extend((m, path) for m in missing)
                stack.extend((pa, pe, f'{path}/{_label(self.actual, pa)}') for pa, pe in reversed(pairs))

    def report_into(self, report):
        # a missing node showing up as an extra node elsewhere is in the wrong container
        extras = list(self.extra)
        for e, e_path in self.missing:
            moved = next((item for item in extras if self.a_hash[item[0]] == self.e_hash[e]), None)
            if moved is None:
                report.add(DiscrepancyKind.MISSING_NODE, f'{_label(self.expected, e)} missing under {e_path}')
                continue
            extras.remove(moved)
            a, a_path = moved
            self._map_subtree(a, e)
            report.add(DiscrepancyKind.WRONG_CONTAINER,
                       f'{_label(self.expected, e)} expected under {e_path} but found under {a_path}')
        for a, a_path in extras:
            report.add(DiscrepancyKind.EXTRA_NODE, f'unexpected {_label(self.actual, a)} under {a_path}')
        self._check_links(report)

    def _map_subtree(self, a_root, e_root):
        stack = [(a_root, e_root)]
        while stack:
            a, e = stack.pop()
            self.mapping[a] = e
            a_children = sorted(tree_children(self.actual, a), key=lambda n: (self.a_hash[n], n))
            e_children = sorted(tree_children(self.expected, e), key=lambda n: (self.e_hash[n], n))
            stack.extend(zip(a_children, e_children))

    def _check_links(self, report):
        for a, e in self.mapping.items():
            if self.actual.kind_of(a) is not ElementKind.HYPEREDGE:
                continue
            for slot in self.slots:
                found = {self.mapping.get(b) for b in self.actual.refs(a, slot)}
                wanted = set(self.expected.refs(e, slot))
                if found != wanted:
                    found_names = sorted(self.actual.name_of(b) for b in self.actual.refs(a, slot))
                    wanted_names = sorted(self.expected.name_of(b) for b in wanted)
                    report.add(DiscrepancyKind.NEXT_SET_MISMATCH,
                               f'{_label(self.actual, a)}.{slot} is {found_names}, expected {wanted_names}')


def validate_full(actual, expected):
    """Counts plus containment hierarchy and hyperedge links."""
    report = validate_counts(actual, expected)
    report.level = ValidationLevel.FULL
    a_root, e_root = _root(actual), _root(expected)
    if a_root is None or e_root is None:
        if e_root is not None:
            report.add(DiscrepancyKind.MISSING_NODE, 'no Statechart element')
        elif a_root is not None:
            report.add(DiscrepancyKind.EXTRA_NODE, 'unexpected Statechart element')
        return report
    matcher = _TreeMatcher(actual, expected)
    matcher.match(a_root, e_root)
    matcher.report_into(report)
    logger.debug('full validation: %d nodes matched, %d discrepancies', len(matcher.mapping),
                 len(report.discrepancies))
    return report


# ---------------------------------------
# structure
# ---------------------------------------


def containment_graph(sc):
    """DiGraph with an edge from every container to its children (Statechart -> top AND included)."""
    graph = nx.DiGraph()
    for kind in STATECHART_KINDS:
        for eid in sc.all_of_kind(kind):
            graph.add_node(eid, kind=kind)
    for statechart in sc.all_of_kind(ElementKind.STATECHART):
        top = sc.ref(statechart, 'topState')
        if top is not None:
            graph.add_edge(statechart, top)
    for kind in COMPOUND_KINDS:
        for compound in sc.all_of_kind(kind):
            for child in sc.refs(compound, 'contains'):
                graph.add_edge(compound, child)
    return graph


def nca_oracle(graph, basics, depth):
    """Brute-force nearest common ancestor: intersect full ancestor sets, keep the deepest compound.

    Args:
        graph (nx.DiGraph): Containment graph.
        basics (list[int]): Non-empty list of Basic ids.
        depth (dict): Node depth from the root.

    Returns:
        int | None: The compound, or None if there is no common one.
    """
    common = set.intersection(*(nx.ancestors(graph, b) for b in basics))
    compounds = [n for n in common if graph.nodes[n]['kind'] in COMPOUND_KINDS]
    if not compounds:
        return None
    return max(compounds, key=lambda n: depth.get(n, -1))


def validate_structure(sc):
    """Check one produced statechart without an expected model."""
    report = ValidationReport(ValidationLevel.STRUCTURE)
    root = _root(sc)
    top = sc.ref(root, 'topState') if root is not None else None
    if top is None:
        report.add(DiscrepancyKind.MISSING_NODE, 'no Statechart with a top state')
        return report

    graph = containment_graph(sc)
    depth = nx.single_source_shortest_path_length(graph, root)
    knows_rnext = 'rnext' in link_slots(sc)
    for eid in graph.nodes:
        if eid not in depth:
            report.add(DiscrepancyKind.EXTRA_NODE, f'{_label(sc, eid)} ({eid}) is outside the statechart')

    for eid in sorted(depth):
        kind = sc.kind_of(eid)
        parent = next(graph.predecessors(eid), None)
        parent_kind = graph.nodes[parent]['kind'] if parent is not None else None
        if kind is ElementKind.BASIC and parent_kind is not ElementKind.OR:
            report.add(DiscrepancyKind.WRONG_CONTAINER, f'{_label(sc, eid)} ({eid}) is not inside an OR')
        elif kind in COMPOUND_KINDS and parent_kind is ElementKind.AND and kind is not ElementKind.OR:
            report.add(DiscrepancyKind.WRONG_CONTAINER, f'AND {parent} holds {_label(sc, eid)} ({eid})')
        elif kind is ElementKind.HYPEREDGE:
            basics = sorted(set(sc.refs(eid, 'next')) | set(sc.refs(eid, 'rnext')))
            if not knows_rnext:
                # predecessors unknown: any common ancestor of the successors will do
                if basics and parent not in set.intersection(*(nx.ancestors(graph, b) for b in basics)):
                    report.add(DiscrepancyKind.WRONG_CONTAINER,
                               f'{_label(sc, eid)} ({eid}) is in {parent}, which does not hold all its Basics')
                continue
            wanted = nca_oracle(graph, basics, depth) if basics else top
            if parent != wanted:
                report.add(DiscrepancyKind.WRONG_CONTAINER,
                           f'{_label(sc, eid)} ({eid}) is in {parent}, nearest common ancestor is {wanted}')
    return report


# ---------------------------------------
# corruptions
# ---------------------------------------


def drop_next_link(sc):
    """Remove the first ``next`` link of the first hyperedge that has one."""
    for hyperedge in sc.all_of_kind(ElementKind.HYPEREDGE):
        successors = sc.refs(hyperedge, 'next')
        if successors:
            sc.remove_ref(hyperedge, 'next', successors[0])
            return f'removed {_label(sc, hyperedge)}.next -> {_label(sc, successors[0])}'
    raise ValueError('no hyperedge with a next link')


def add_extra_element(sc):
    """Add a Basic named 'extra' to the first OR."""
    ors = sc.all_of_kind(ElementKind.OR)
    if not ors:
        raise ValueError('no OR state to extend')
    basic = sc.create(ElementKind.BASIC, 'extra')
    sc.add_ref(ors[0], 'contains', basic)
    return f'added Basic[extra] to OR {ors[0]}'


def move_to_wrong_container(sc):
    """Move the first Basic into another compound, preferring another OR."""
    basics = sc.all_of_kind(ElementKind.BASIC)
    if not basics:
        raise ValueError('no Basic state to move')
    basic = basics[0]
    current = sc.container(basic)
    candidates = sc.all_of_kind(ElementKind.OR) + sc.all_of_kind(ElementKind.AND)
    target = next((c for c in candidates if c != current), None)
    if target is None:
        raise ValueError('no other compound state')
    sc.set_ref(basic, 'rcontains', target)
    return f'moved {_label(sc, basic)} from {current} to {target}'


MUTATIONS = {
    'missing-next-link': drop_next_link,
    'additional-element': add_extra_element,
    'wrong-container': move_to_wrong_container,
}
