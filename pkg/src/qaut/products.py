"""Synchronized products and partial resolvers operating on one component.

The product of two automata over the same alphabet synchronizes on input
letters; weights come from the side selected at construction time.  A
component resolver fixes the successor of one side only, leaving the other
side's successor ranging over its transition relation; two component
resolvers on opposite sides always intersect to a single successor and so
combine into a full resolver of the product.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import itertools

from .automata import Transition, WeightedAutomaton
from .errors import QautError
from .resolvers import FiniteMemoryResolver, PositionalResolver


@dataclass(frozen=True)
class ProductAutomaton:
    left: WeightedAutomaton
    right: WeightedAutomaton
    weight_side: int
    automaton: WeightedAutomaton  # over (left state, right state) pairs

    def sides(self, state):
        return state


def product(left: WeightedAutomaton, right: WeightedAutomaton, weight_side: int,
            full: bool = False) -> ProductAutomaton:
    """Input-synchronized product carrying side ``weight_side`` weights.

    The state set is restricted to pairs reachable from the initial pair
    unless ``full`` is set.
    """
    if tuple(left.alphabet) != tuple(right.alphabet):
        raise QautError("alphabet mismatch between product factors")
    if weight_side not in (1, 2):
        raise QautError("weight side must be 1 or 2")

    init = (left.initial, right.initial)
    if full:
        states = [(p, q) for p in left.states for q in right.states]
    else:
        seen = {init}
        queue = [init]
        states = []
        while queue:
            node = queue.pop(0)
            states.append(node)
            p, q = node
            for a in left.alphabet:
                for tl in left.successors(p, a):
                    for tr in right.successors(q, a):
                        nxt = (tl.target, tr.target)
                        if nxt not in seen:
                            seen.add(nxt)
                            queue.append(nxt)

    trans = []
    for (p, q) in states:
        for a in left.alphabet:
            for tl in left.successors(p, a):
                for tr in right.successors(q, a):
                    nxt = (tl.target, tr.target)
                    if full or nxt in set(states):
                        w = tl.weight if weight_side == 1 else tr.weight
                        trans.append(((p, q), a, w, nxt))
    value_fn = left.value_fn if weight_side == 1 else right.value_fn
    name = f"{left.name or 'L'}x{weight_side}{right.name or 'R'}"
    aut = WeightedAutomaton(left.alphabet, tuple(states), init, tuple(trans), value_fn, name)
    return ProductAutomaton(left, right, weight_side, aut)


@dataclass(frozen=True)
class ComponentResolver:
    """Partial resolver fixing side ``side`` of a product.

    ``choice`` maps (product state, letter) to a successor of that side's
    component; memory fields mirror :class:`FiniteMemoryResolver` and may be
    trivial for positional behavior.
    """

    prod: ProductAutomaton
    side: int
    choice: dict  # (memory, product state, letter) -> side successor
    memory: tuple = (0,)
    initial_memory: object = 0
    update: dict = None  # (memory, product state, letter, side successor) -> memory

    def __post_init__(self):
        if self.side not in (1, 2):
            raise QautError("component side must be 1 or 2")
        if self.update is None:
            object.__setattr__(
                self, "update",
                {(m, s, a, t): m for (m, s, a), t in self.choice.items()},
            )

    def factor(self):
        return self.prod.left if self.side == 1 else self.prod.right

    def own_state(self, state):
        return state[self.side - 1]

    def other_state(self, state):
        return state[2 - self.side]

    def output_set(self, mem, state, letter):
        """Set of product successors compatible with this side's choice."""
        chosen = self.choice[(mem, state, letter)]
        other = self.prod.right if self.side == 1 else self.prod.left
        out = set()
        for t in other.successors(self.other_state(state), letter):
            pair = (chosen, t.target) if self.side == 1 else (t.target, chosen)
            out.add(pair)
        return out


def positional_component(prod: ProductAutomaton, side: int, table: dict) -> ComponentResolver:
    """Component resolver from a (product state, letter) -> side successor table."""
    choice = {(0, s, a): t for (s, a), t in table.items()}
    return ComponentResolver(prod, side, choice)


def enumerate_component_positional(prod: ProductAutomaton, side: int) -> Iterator[ComponentResolver]:
    """All positional side-``side`` component resolvers of the product."""
    factor = prod.left if side == 1 else prod.right
    slots = [(s, a) for s in prod.automaton.states for a in prod.automaton.alphabet]
    options = []
    for (s, a) in slots:
        own = s[side - 1]
        succ = [t.target for t in factor.successors(own, a)]
        options.append(succ)
    for combo in itertools.product(*options):
        yield positional_component(prod, side, dict(zip(slots, combo)))


def combine(f: ComponentResolver, g: ComponentResolver):
    """Full product resolver from two opposite-side component resolvers.

    The pointwise intersection of their output sets is a singleton at every
    history, so the pair acts as an ordinary resolver of the product.
    """
    if f.prod != g.prod:
        raise QautError("component resolvers belong to different products")
    if f.side == g.side:
        raise QautError(
            "component resolvers on the same side are not necessarily conclusive"
        )
    one, two = (f, g) if f.side == 1 else (g, f)
    aut = f.prod.automaton

    positional = set(one.memory) == {0} and set(two.memory) == {0} and \
        all(m == 0 for m in [one.initial_memory, two.initial_memory])
    if positional and all(v == 0 for v in one.update.values()) and \
            all(v == 0 for v in two.update.values()):
        table = {}
        for s in aut.states:
            for a in aut.alphabet:
                table[(s, a)] = (one.choice[(0, s, a)], two.choice[(0, s, a)])
        return PositionalResolver(aut, table)

    memory = tuple(itertools.product(one.memory, two.memory))
    choice = {}
    update = {}
    for (m1, m2) in memory:
        for s in aut.states:
            for a in aut.alphabet:
                t1 = one.choice.get((m1, s, a))
                t2 = two.choice.get((m2, s, a))
                if t1 is None or t2 is None:
                    continue
                target = (t1, t2)
                choice[((m1, m2), s, a)] = target
                update[((m1, m2), s, a, target)] = (
                    one.update[(m1, s, a, t1)],
                    two.update[(m2, s, a, t2)],
                )
    return FiniteMemoryResolver(aut, memory, (one.initial_memory, two.initial_memory),
                                choice, update)
