"""In-memory typed graph store shared by Petri nets and statecharts.

Elements get integer ids in creation order and ids are never reused, so
``all_of_kind`` (ascending id) is the canonical iteration order used by every
rule. Every reference slot is an insertion-ordered, duplicate-free list and
opposite slots are kept in sync:

    prep <-> postt      postp <-> pret      contains <-> rcontains      next <-> rnext

``rcontains`` and ``topState`` are single-valued, ``topState`` has no opposite.
"""
from enum import Enum

from pn2sc.errors import KindError, LivenessError, ModelError


class ElementKind(Enum):
    PLACE = 'Place'
    TRANSITION = 'Transition'
    BASIC = 'Basic'
    OR = 'OR'
    AND = 'AND'
    HYPEREDGE = 'HyperEdge'
    STATECHART = 'Statechart'

    @property
    def is_compound(self):
        return self in COMPOUND_KINDS

    @property
    def is_state(self):
        return self in STATE_KINDS


COMPOUND_KINDS = frozenset({ElementKind.OR, ElementKind.AND})
STATE_KINDS = frozenset({ElementKind.BASIC, ElementKind.OR, ElementKind.AND})
PETRI_NET_KINDS = (ElementKind.PLACE, ElementKind.TRANSITION)
# order used for counts in reports and documents
STATECHART_KINDS = (ElementKind.STATECHART, ElementKind.AND, ElementKind.OR, ElementKind.BASIC,
                    ElementKind.HYPEREDGE)

OPPOSITES = {
    'prep': 'postt',
    'postt': 'prep',
    'postp': 'pret',
    'pret': 'postp',
    'contains': 'rcontains',
    'rcontains': 'contains',
    'next': 'rnext',
    'rnext': 'next',
    'topState': None,
}
SINGLE_VALUED = frozenset({'rcontains', 'topState'})

_CONTAINABLE = frozenset({ElementKind.BASIC, ElementKind.OR, ElementKind.AND, ElementKind.HYPEREDGE})

# owner kind -> slot -> allowed target kinds
SLOT_TARGETS = {
    ElementKind.PLACE: {
        'pret': frozenset({ElementKind.TRANSITION}),
        'postt': frozenset({ElementKind.TRANSITION}),
    },
    ElementKind.TRANSITION: {
        'prep': frozenset({ElementKind.PLACE}),
        'postp': frozenset({ElementKind.PLACE}),
    },
    ElementKind.BASIC: {
        'rcontains': COMPOUND_KINDS,
        'next': frozenset({ElementKind.HYPEREDGE}),
        'rnext': frozenset({ElementKind.HYPEREDGE}),
    },
    ElementKind.OR: {
        'contains': _CONTAINABLE,
        'rcontains': COMPOUND_KINDS,
    },
    ElementKind.AND: {
        'contains': _CONTAINABLE,
        'rcontains': COMPOUND_KINDS,
    },
    ElementKind.HYPEREDGE: {
        'rcontains': COMPOUND_KINDS,
        'next': frozenset({ElementKind.BASIC}),
        'rnext': frozenset({ElementKind.BASIC}),
    },
    ElementKind.STATECHART: {
        'topState': frozenset({ElementKind.AND}),
    },
}


class _Element():
    __slots__ = ('kind', 'name', 'slots')

    def __init__(self, kind, name):
        self.kind = kind
        self.name = name
        # dicts used as ordered sets
        self.slots = {slot: {} for slot in SLOT_TARGETS[kind]}


class ModelStore():
    """Typed element graph with stable ids and opposite-maintained references.

    Args:
        name (str): Label used in log messages. Default: ''.

    Attributes:
        meta (dict): Document-level facts recorded by the readers, e.g.
            which hyperedge link slots a statechart document carried.
    """

    def __init__(self, name=''):
        self.name = name
        self.meta = {}
        self._elements = {}
        self._by_kind = {kind: {} for kind in ElementKind}
        self._next_id = 0

    def __len__(self):
        return len(self._elements)

    def __contains__(self, eid):
        return eid in self._elements

    def __iter__(self):
        # ids are inserted in ascending order and never re-inserted
        return iter(list(self._elements))

    # ---------------------------------------
    # elements
    # ---------------------------------------

    def create(self, kind, name=''):
        """Create a live element with empty slots and return its id."""
        if not isinstance(kind, ElementKind):
            raise KindError(f'invalid element kind {kind!r}')
        eid = self._next_id
        self._next_id += 1
        self._elements[eid] = _Element(kind, name)
        self._by_kind[kind][eid] = None
        return eid

    def delete(self, eid):
        """Delete an element and every reference to it.

        The element's own slots are cleared first, which detaches it from the
        opposite slots of everything it referenced. Contained children are not
        deleted; they just lose their container.
        """
        element = self._get(eid)
        for slot, values in element.slots.items():
            for target in list(values):
                self._unlink(eid, slot, target)
        if element.kind is ElementKind.AND:
            for chart in self._by_kind[ElementKind.STATECHART]:
                self._elements[chart].slots['topState'].pop(eid, None)
        del self._elements[eid]
        del self._by_kind[element.kind][eid]

    def is_alive(self, eid):
        return eid in self._elements

    def kind_of(self, eid):
        return self._get(eid).kind

    def name_of(self, eid):
        return self._get(eid).name

    def set_name(self, eid, name):
        self._get(eid).name = name

    def all_of_kind(self, kind):
        """All live elements of ``kind`` in ascending id order (a fresh list)."""
        return list(self._by_kind[kind])

    def count(self, kind):
        return len(self._by_kind[kind])

    # ---------------------------------------
    # references
    # ---------------------------------------

    def refs(self, eid, slot):
        """Values of a slot as an ordered list."""
        return list(self._slot(eid, slot)[1])

    def ref(self, eid, slot):
        """First value of a slot, or None. Meant for single-valued slots."""
        return next(iter(self._slot(eid, slot)[1]), None)

    def refs_as_set(self, eid, slot):
        return frozenset(self._slot(eid, slot)[1])

    def has_ref(self, eid, slot, target):
        return target in self._slot(eid, slot)[1]

    def add_ref(self, owner, slot, target):
        """Append ``target`` to ``owner.slot`` unless present, updating the opposite.

        On a single-valued slot the old value is replaced. Adding a child to a
        compound's ``contains`` moves it out of its previous container.
        """
        element, _ = self._slot(owner, slot)
        self._check_target(element, slot, target)
        self._check_containment(owner, slot, target)
        self._link(owner, slot, target)

    def add_refs(self, owner, slot, targets):
        # copy first: targets is often another element's slot that shrinks while we link
        for target in list(targets):
            self.add_ref(owner, slot, target)

    def set_ref(self, owner, slot, target):
        """Set a single-valued slot; ``None`` clears it."""
        _, values = self._slot(owner, slot)
        if slot not in SINGLE_VALUED:
            raise ModelError(f'{slot!r} is multi-valued, use set_refs')
        if target is None:
            for old in list(values):
                self._unlink(owner, slot, old)
        else:
            self.add_ref(owner, slot, target)

    def set_refs(self, owner, slot, targets):
        """Replace the whole content of a multi-valued slot, keeping the given order."""
        element, values = self._slot(owner, slot)
        if slot in SINGLE_VALUED:
            raise ModelError(f'{slot!r} is single-valued, use set_ref')
        targets = list(dict.fromkeys(targets))
        for target in targets:
            self._check_target(element, slot, target)
            self._check_containment(owner, slot, target)
        for old in list(values):
            self._unlink(owner, slot, old)
        for target in targets:
            self._link(owner, slot, target)

    def remove_ref(self, owner, slot, target):
        element, _ = self._slot(owner, slot)
        self._check_target(element, slot, target)
        self._unlink(owner, slot, target)

    # ---------------------------------------
    # containment
    # ---------------------------------------

    def container(self, eid):
        return self.ref(eid, 'rcontains')

    def ancestors(self, eid):
        """Containers of ``eid``, nearest first."""
        chain = []
        node = self.container(eid)
        while node is not None:
            chain.append(node)
            node = self._first(node, 'rcontains')
        return chain

    # ---------------------------------------
    # checks
    # ---------------------------------------

    def consistency_errors(self):
        """Full scan of the store invariants.

        Returns:
            list[str]: One message per opposite-slot inconsistency, dangling
                reference, illegal target or containment cycle. Empty if the
                store is consistent.
        """
        errors = []
        for eid, element in self._elements.items():
            for slot, values in element.slots.items():
                if slot in SINGLE_VALUED and len(values) > 1:
                    errors.append(f'{eid}.{slot} holds {len(values)} values')
                opposite = OPPOSITES[slot]
                for target in values:
                    other = self._elements.get(target)
                    if other is None:
                        errors.append(f'{eid}.{slot} references dead element {target}')
                        continue
                    if other.kind not in SLOT_TARGETS[element.kind][slot]:
                        errors.append(f'{eid}.{slot} references {other.kind.value} {target}')
                    if opposite is not None and eid not in other.slots.get(opposite, ()):
                        errors.append(f'{eid}.{slot} -> {target} without {target}.{opposite} -> {eid}')

        # containment must be a forest
        state = {}  # eid -> 1 visiting, 2 done
        for start in self._elements:
            path = []
            node = start
            while node is not None and state.get(node) is None:
                state[node] = 1
                path.append(node)
                node = self._first(node, 'rcontains') if 'rcontains' in self._elements[node].slots else None
                if node is not None and node not in self._elements:
                    node = None
            if node is not None and state.get(node) == 1:
                errors.append(f'containment cycle through {node}')
            for visited in path:
                state[visited] = 2
        return errors

    # ---------------------------------------
    # internals
    # ---------------------------------------

    def _get(self, eid):
        try:
            return self._elements[eid]
        except (KeyError, TypeError):
            if isinstance(eid, int) and 0 <= eid < self._next_id:
                raise LivenessError(f'element {eid} has been deleted') from None
            raise LivenessError(f'unknown element {eid!r}') from None

    def _slot(self, eid, slot):
        element = self._get(eid)
        try:
            return element, element.slots[slot]
        except KeyError:
            raise KindError(f'{element.kind.value} {eid} has no slot {slot!r}') from None

    def _first(self, eid, slot):
        return next(iter(self._elements[eid].slots[slot]), None)

    def _check_target(self, element, slot, target):
        kind = self._get(target).kind
        if kind not in SLOT_TARGETS[element.kind][slot]:
            raise KindError(f'{element.kind.value}.{slot} cannot reference {kind.value} {target}')

    def _check_containment(self, owner, slot, target):
        if slot == 'contains':
            parent, child = owner, target
        elif slot == 'rcontains':
            parent, child = target, owner
        else:
            return
        node = parent
        while node is not None:
            if node == child:
                raise ModelError(f'containing {child} in {parent} would create a cycle')
            node = self._first(node, 'rcontains')

    def _link(self, owner, slot, target):
        values = self._elements[owner].slots[slot]
        if target in values:
            return
        if slot in SINGLE_VALUED:
            for old in list(values):
                self._unlink(owner, slot, old)
        opposite = OPPOSITES[slot]
        if opposite is not None:
            target_values = self._elements[target].slots[opposite]
            if opposite in SINGLE_VALUED:
                for old in list(target_values):
                    self._unlink(target, opposite, old)
            target_values[owner] = None
        values[target] = None

    def _unlink(self, owner, slot, target):
        self._elements[owner].slots[slot].pop(target, None)
        opposite = OPPOSITES[slot]
        if opposite is not None and target in self._elements:
            self._elements[target].slots[opposite].pop(owner, None)
