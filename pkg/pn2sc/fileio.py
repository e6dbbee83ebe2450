"""JSON documents for Petri nets and statecharts.

Petri net document::

    {"places": [{"id": "P1", "name": "P1"}, ...],
     "transitions": [{"id": "T1", "name": "T1", "pre": ["P1"], "post": ["P2"]}, ...]}

Statechart document::

    {"counts": {"statechart": 1, "and": 1, "or": 1, "basic": 2, "hyperedge": 1},
     "root": {"uid": 0, "kind": "Statechart", "name": "", "children": [...]}}

Every node has uid, kind, name and children; hyperedge nodes also carry
``next`` and ``rnext``, the sorted uids of their successor and predecessor
Basics.
"""
import json
import logging

from pn2sc.errors import DocumentError, DuplicateIdError, IrreducibleError, ModelError, UnresolvedIdError
from pn2sc.model import STATECHART_KINDS, ElementKind, ModelStore
from pn2sc.reduce import irreducible_message

logger = logging.getLogger(__name__)

PLACE_KEYS = frozenset({'id', 'name'})
TRANSITION_KEYS = frozenset({'id', 'name', 'pre', 'post'})
NODE_KEYS = frozenset({'uid', 'kind', 'name', 'children', 'next', 'rnext'})
LINK_SLOTS = ('next', 'rnext')
COUNT_KEYS = tuple(kind.value.lower() for kind in STATECHART_KINDS)
STATECHART_KIND_NAMES = {kind.value: kind for kind in STATECHART_KINDS}


def dump_document(doc):
    """Serialize a document to canonical UTF-8 JSON bytes."""
    return (json.dumps(doc, indent=2) + '\n').encode('utf-8')


def _load(data):
    if isinstance(data, bytes):
        try:
            data = data.decode('utf-8')
        except UnicodeDecodeError as error:
            raise DocumentError(f'input is not valid UTF-8: {error.reason} at byte {error.start}') from None
    try:
        return json.loads(data)
    except json.JSONDecodeError as error:
        raise DocumentError(f'invalid JSON: {error.msg}', error.lineno, error.colno) from None
    except RecursionError:
        raise DocumentError('invalid JSON: nested too deeply') from None


def _check_object(obj, allowed, required, what):
    if not isinstance(obj, dict):
        raise DocumentError(f'{what} must be a JSON object')
    unknown = set(obj) - allowed
    if unknown:
        raise DocumentError(f'unknown field(s) {", ".join(sorted(unknown))} in {what}')
    missing = [key for key in required if key not in obj]
    if missing:
        raise DocumentError(f'missing field(s) {", ".join(missing)} in {what}')


def _check_list(value, what):
    if not isinstance(value, list):
        raise DocumentError(f'{what} must be a JSON array')
    return value


def _check_str(value, what):
    if not isinstance(value, str):
        raise DocumentError(f'{what} must be a string')
    return value


# ---------------------------------------
# Petri nets
# ---------------------------------------


def read_petri_net(data):
    """Parse a Petri net document.

    Places are created first, then transitions, both in document order.

    Args:
        data (bytes | str): Document content.

    Returns:
        ModelStore: The Petri net.
    """
    doc = _load(data)
    _check_object(doc, {'places', 'transitions'}, ('places', 'transitions'), 'petri net document')
    pn = ModelStore('petri net')
    ids = {}

    def declare(entry, kind, keys, what):
        _check_object(entry, keys, ('id', ), what)
        doc_id = _check_str(entry['id'], f'id of {what}')
        if doc_id in ids:
            raise DuplicateIdError(doc_id)
        name = _check_str(entry.get('name', doc_id), f'name of {doc_id!r}')
        ids[doc_id] = pn.create(kind, name)
        return doc_id

    for entry in _check_list(doc['places'], 'places'):
        declare(entry, ElementKind.PLACE, PLACE_KEYS, 'place')
    for entry in _check_list(doc['transitions'], 'transitions'):
        doc_id = declare(entry, ElementKind.TRANSITION, TRANSITION_KEYS, 'transition')
        transition = ids[doc_id]
        for key, slot in (('pre', 'prep'), ('post', 'postp')):
            refs = _check_list(entry.get(key, []), f'{key} of transition {doc_id!r}')
            if len(set(map(str, refs))) != len(refs):
                raise DocumentError(f'duplicate entries in {key} of transition {doc_id!r}')
            for ref in refs:
                place = ids.get(ref) if isinstance(ref, str) else None
                if place is None or pn.kind_of(place) is not ElementKind.PLACE:
                    raise UnresolvedIdError(ref, f' in {key} of transition {doc_id!r}')
                pn.add_ref(transition, slot, place)
    logger.debug('read petri net: %d places, %d transitions', pn.count(ElementKind.PLACE),
                 pn.count(ElementKind.TRANSITION))
    return pn


def petri_net_document(pn):
    """Build the document of a Petri net; ids are P1.. and T1.. in id order."""
    place_ids = {place: f'P{i}' for i, place in enumerate(pn.all_of_kind(ElementKind.PLACE), 1)}
    places = [{'id': place_ids[place], 'name': pn.name_of(place)} for place in place_ids]
    transitions = []
    for i, transition in enumerate(pn.all_of_kind(ElementKind.TRANSITION), 1):
        transitions.append({
            'id': f'T{i}',
            'name': pn.name_of(transition),
            'pre': [place_ids[p] for p in pn.refs(transition, 'prep')],
            'post': [place_ids[p] for p in pn.refs(transition, 'postp')],
        })
    return {'places': places, 'transitions': transitions}


# ---------------------------------------
# statecharts
# ---------------------------------------


def _sort_key(sc, eid):
    return (sc.kind_of(eid).value, sc.name_of(eid), eid)


def link_slots(sc):
    """Hyperedge link slots known for ``sc``.

    A statechart read from a document without ``rnext`` only knows ``next``;
    stores built in memory know both.
    """
    return sc.meta.get('link_slots', LINK_SLOTS)


def tree_children(sc, eid):
    """Children of a node in canonical order; a Statechart's only child is its top state."""
    kind = sc.kind_of(eid)
    if kind is ElementKind.STATECHART:
        top = sc.ref(eid, 'topState')
        return [] if top is None else [top]
    if kind.is_compound:
        return sorted(sc.refs(eid, 'contains'), key=lambda child: _sort_key(sc, child))
    return []


def statechart_document(sc, root):
    """Canonical document of the statechart rooted at ``root``.

    Children are sorted by (kind, name, id) and uids are handed out in
    pre-order, so the document only depends on the model structure.
    """
    uids = {}
    nodes = {}
    counts = dict.fromkeys(COUNT_KEYS, 0)
    stack = [(root, None)]
    while stack:
        eid, parent = stack.pop()
        kind = sc.kind_of(eid)
        uids[eid] = len(uids)
        node = {'uid': uids[eid], 'kind': kind.value, 'name': sc.name_of(eid), 'children': []}
        nodes[eid] = node
        counts[kind.value.lower()] += 1
        if parent is not None:
            nodes[parent]['children'].append(node)
        stack.extend((child, eid) for child in reversed(tree_children(sc, eid)))

    for hyperedge, node in nodes.items():
        if sc.kind_of(hyperedge) is not ElementKind.HYPEREDGE:
            continue
        for slot in LINK_SLOTS:
            try:
                node[slot] = sorted(uids[b] for b in sc.refs(hyperedge, slot))
            except KeyError as error:
                raise ModelError(f'hyperedge {node["name"]!r} points outside the statechart: {error}') from None
    return {'counts': counts, 'root': nodes[root]}


def write_statechart(sc, result):
    """Serialize a successfully reduced statechart.

    Raises:
        IrreducibleError: ``result`` is not a success.
    """
    if not result.success:
        raise IrreducibleError(irreducible_message(result))
    return dump_document(statechart_document(sc, result.statechart_root))


def read_statechart(data):
    """Parse a statechart document into a ModelStore.

    Any child order is accepted. The ``counts`` object is optional but has to
    match the tree when present. A document whose hyperedges carry no
    ``rnext`` is recorded in ``sc.meta``, see link_slots().
    """
    doc = _load(data)
    _check_object(doc, {'root', 'counts'}, ('root', ), 'statechart document')
    sc = ModelStore('statechart')
    by_uid = {}
    pending_links = []
    carried = set()

    stack = [(doc['root'], None)]
    while stack:
        node, parent = stack.pop()
        _check_object(node, NODE_KEYS, ('uid', 'kind'), 'statechart node')
        uid = node['uid']
        if not isinstance(uid, int) or isinstance(uid, bool):
            raise DocumentError(f'uid {uid!r} is not an integer')
        if uid in by_uid:
            raise DuplicateIdError(uid)
        kind = STATECHART_KIND_NAMES.get(node['kind'])
        if kind is None:
            raise DocumentError(f'unknown kind {node["kind"]!r} for uid {uid}')
        children = _check_list(node.get('children', []), f'children of uid {uid}')
        if kind is not ElementKind.HYPEREDGE and any(slot in node for slot in LINK_SLOTS):
            raise DocumentError(f'only hyperedges have next/rnext links (uid {uid})')

        eid = sc.create(kind, _check_str(node.get('name', ''), f'name of uid {uid}'))
        by_uid[uid] = eid
        if parent is None:
            if kind is not ElementKind.STATECHART:
                raise DocumentError(f'root must be a Statechart, got {kind.value}')
            if len(children) != 1:
                raise DocumentError('a Statechart has exactly one top state')
        elif sc.kind_of(parent) is ElementKind.STATECHART:
            if kind is not ElementKind.AND:
                raise DocumentError(f'top state must be an AND, got {kind.value} (uid {uid})')
            sc.set_ref(parent, 'topState', eid)
        elif sc.kind_of(parent).is_compound and kind is not ElementKind.STATECHART:
            sc.add_ref(parent, 'contains', eid)
        else:
            raise DocumentError(f'{sc.kind_of(parent).value} cannot contain {kind.value} (uid {uid})')

        if kind is ElementKind.HYPEREDGE:
            for slot in LINK_SLOTS:
                if slot in node:
                    carried.add(slot)
                pending_links.append((eid, uid, slot, _check_list(node.get(slot, []), f'{slot} of uid {uid}')))
        stack.extend((child, eid) for child in reversed(children))

    for hyperedge, uid, slot, targets in pending_links:
        for target in targets:
            basic = by_uid.get(target) if isinstance(target, int) else None
            if basic is None or sc.kind_of(basic) is not ElementKind.BASIC:
                raise UnresolvedIdError(target, f' in {slot} of hyperedge uid {uid}')
            sc.add_ref(hyperedge, slot, basic)
    if pending_links and 'rnext' not in carried:
        sc.meta['link_slots'] = ('next', )

    if 'counts' in doc:
        counts = doc['counts']
        _check_object(counts, set(COUNT_KEYS), COUNT_KEYS, 'counts')
        for key, kind in zip(COUNT_KEYS, STATECHART_KINDS):
            if counts[key] != sc.count(kind):
                raise DocumentError(f'counts.{key} is {counts[key]} but the tree holds {sc.count(kind)}')
    return sc
