"""Resolvers: executable strategies that fix an automaton's nondeterminism.

A positional resolver chooses a successor from (state, letter) alone; a
finite-memory resolver consults a Mealy-style memory updated on every
consumed (state, letter, chosen target).  Applying a resolver yields a
deterministic automaton computing the resolved quantitative language.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .automata import LassoWord, Run, Transition, WeightedAutomaton, run_value
from .errors import QautError
from .graphs import reachable


@dataclass(frozen=True)
class PositionalResolver:
    automaton: WeightedAutomaton
    choice: dict  # (state, letter) -> target

    def __post_init__(self):
        object.__setattr__(self, "choice", dict(self.choice))
        for q in self.automaton.states:
            for a in self.automaton.alphabet:
                target = self.choice.get((q, a))
                if target is None:
                    raise QautError(f"resolver choice missing for ({q!r}, {a!r})")
                self.automaton.transition_for(q, a, target)

    def table(self):
        return {
            (q, a): self.choice[(q, a)]
            for q in self.automaton.states
            for a in self.automaton.alphabet
        }


@dataclass(frozen=True)
class FiniteMemoryResolver:
    automaton: WeightedAutomaton
    memory: tuple
    initial_memory: object
    choice: dict  # (memory, state, letter) -> target
    update: dict  # (memory, state, letter, target) -> memory

    def __post_init__(self):
        object.__setattr__(self, "memory", tuple(self.memory))
        object.__setattr__(self, "choice", dict(self.choice))
        object.__setattr__(self, "update", dict(self.update))
        if self.initial_memory not in self.memory:
            raise QautError("initial memory element unknown")

    def choose(self, mem, state, letter):
        target = self.choice.get((mem, state, letter))
        if target is None:
            raise QautError(f"resolver choice missing for ({mem!r}, {state!r}, {letter!r})")
        self.automaton.transition_for(state, letter, target)
        nxt = self.update.get((mem, state, letter, target))
        if nxt is None:
            raise QautError(f"resolver update missing for ({mem!r}, {state!r}, {letter!r})")
        return target, nxt


@dataclass(frozen=True)
class ResolvedAutomaton:
    """Deterministic automaton computing the resolved language.

    States are (source state, memory) pairs; ``projection`` maps them back to
    source states so runs can be replayed on the original automaton.
    """

    automaton: WeightedAutomaton
    source: WeightedAutomaton
    projection: dict

    def project_run(self, run: Run) -> Run:
        return Run(
            self.source,
            tuple(
                Transition(self.projection[t.source], t.letter, t.weight, self.projection[t.target])
                for t in run.stem
            ),
            tuple(
                Transition(self.projection[t.source], t.letter, t.weight, self.projection[t.target])
                for t in run.cycle
            ),
        )


def is_deterministic(automaton: WeightedAutomaton) -> bool:
    return automaton.is_deterministic()


def apply(automaton: WeightedAutomaton, resolver) -> ResolvedAutomaton:
    """Deterministic automaton for the language of ``automaton`` under ``resolver``."""
    if resolver.automaton is not automaton and resolver.automaton != automaton:
        raise QautError("resolver does not belong to this automaton")

    if isinstance(resolver, PositionalResolver):
        def step(node, letter):
            q = node
            target = resolver.choice[(q, letter)]
            t = automaton.transition_for(q, letter, target)
            return target, t.weight
        init = automaton.initial
        project = lambda node: node
    elif isinstance(resolver, FiniteMemoryResolver):
        def step(node, letter):
            q, mem = node
            target, mem2 = resolver.choose(mem, q, letter)
            t = automaton.transition_for(q, letter, target)
            return (target, mem2), t.weight
        init = (automaton.initial, resolver.initial_memory)
        project = lambda node: node[0]
    else:
        raise QautError(f"unknown resolver type {type(resolver).__name__}")

    states = []
    trans = []
    seen = {init}
    queue = [init]
    while queue:
        node = queue.pop(0)
        states.append(node)
        for a in automaton.alphabet:
            nxt, w = step(node, a)
            trans.append((node, a, w, nxt))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    resolved = WeightedAutomaton(
        automaton.alphabet, tuple(states), init, tuple(trans), automaton.value_fn,
        name=automaton.name + "^resolved" if automaton.name else "",
    )
    return ResolvedAutomaton(resolved, automaton, {node: project(node) for node in states})


class ResolverValue(NamedTuple):
    value: int
    run: Run


def resolver_value(resolver, word: LassoWord) -> ResolverValue:
    """Value of the unique resolved run on ``word``, with that run as witness."""
    automaton = resolver.automaton
    resolved = apply(automaton, resolver)
    det = resolved.automaton
    for letter in word.letters():
        if letter not in automaton.alphabet:
            raise QautError(f"letter {letter!r} outside alphabet")

    trail = []
    seen = {}
    node, pos = det.initial, 0
    while (node, pos) not in seen:
        seen[(node, pos)] = len(trail)
        t = det.successors(node, word.letter_at(pos))[0]
        trail.append(t)
        node, pos = t.target, word.next_position(pos)
    split = seen[(node, pos)]
    run = Run(det, tuple(trail[:split]), tuple(trail[split:]))
    return ResolverValue(run_value(run), resolved.project_run(run))


def enumerate_positional(automaton: WeightedAutomaton) -> Iterator[PositionalResolver]:
    """All positional resolvers, lexicographic in (state, letter, target) order."""
    slots = [(q, a) for q in automaton.states for a in automaton.alphabet]
    options = []
    for q, a in slots:
        succ = automaton.successors(q, a)
        if not succ:
            raise QautError(f"state {q!r} not total on {a!r}")
        options.append([t.target for t in succ])
    for combo in itertools.product(*options):
        yield PositionalResolver(automaton, dict(zip(slots, combo)))


def count_positional(automaton: WeightedAutomaton) -> int:
    n = 1
    for q in automaton.states:
        for a in automaton.alphabet:
            n *= len(automaton.successors(q, a))
    return n


def enumerate_finite_memory(automaton: WeightedAutomaton, k: int) -> Iterator[FiniteMemoryResolver]:
    """Finite-memory resolvers with at most ``k`` memory elements.

    Enumerates reachable (memory, state, letter) slots depth-first in
    discovery order; memory elements are numbered in order of first use,
    which prunes renamings of the same machine.  Unreachable slots are
    completed canonically (first successor, memory unchanged).
    """
    if k < 1:
        raise QautError("memory bound must be >= 1")
    letters = automaton.alphabet

    def expand(pending, choice, update, used):
        if not pending:
            yield dict(choice), dict(update), used
            return
        (mem, q), rest = pending[0], pending[1:]
        slot_opts = []
        for a in letters:
            targets = [t.target for t in automaton.successors(q, a)]
            slot_opts.append([(a, tgt) for tgt in targets])
        for combo in itertools.product(*slot_opts):
            for mem_next in _memory_assignments(combo, used, k):
                new_pending = list(rest)
                seen_conf = set(cfg for cfg in new_pending)
                new_used = used
                for (a, tgt), m2 in zip(combo, mem_next):
                    choice[(mem, q, a)] = tgt
                    update[(mem, q, a, tgt)] = m2
                    new_used = max(new_used, m2 + 1)
                    cfg = (m2, tgt)
                    if cfg not in visited and cfg not in seen_conf:
                        new_pending.append(cfg)
                        seen_conf.add(cfg)
                marked = [cfg for cfg in new_pending if cfg not in visited]
                for cfg in marked:
                    visited.add(cfg)
                yield from expand(new_pending, choice, update, new_used)
                for cfg in marked:
                    visited.discard(cfg)
                for (a, tgt), m2 in zip(combo, mem_next):
                    del choice[(mem, q, a)]
                    del update[(mem, q, a, tgt)]

    visited = {(0, automaton.initial)}
    for choice, update, used in expand([(0, automaton.initial)], {}, {}, 1):
        memory = tuple(range(used))
        full_choice = dict(choice)
        full_update = dict(update)
        for mem in memory:
            for q in automaton.states:
                for a in letters:
                    if (mem, q, a) not in full_choice:
                        tgt = automaton.successors(q, a)[0].target
                        full_choice[(mem, q, a)] = tgt
                        full_update[(mem, q, a, tgt)] = mem
        yield FiniteMemoryResolver(automaton, memory, 0, full_choice, full_update)


def _memory_assignments(combo, used, k):
    """Successor-memory tuples for one slot, new values introduced in order."""
    def rec(i, used_now, acc):
        if i == len(combo):
            yield tuple(acc)
            return
        limit = min(used_now, k - 1)
        for m2 in range(limit + 1):
            acc.append(m2)
            yield from rec(i + 1, max(used_now, m2 + 1), acc)
            acc.pop()
    yield from rec(0, used, [])


def unique_resolver(automaton: WeightedAutomaton) -> PositionalResolver:
    """The only resolver of a deterministic automaton."""
    if not automaton.is_deterministic():
        raise QautError("automaton is not deterministic")
    return next(enumerate_positional(automaton))


def resolver_space_is_positional(automaton: WeightedAutomaton) -> bool:
    """True when every resolver is forced to behave positionally.

    Holds when each state carrying a nondeterministic (state, letter) slot is
    reached by exactly one history, so a resolver has a single opportunity to
    choose there and its behavior collapses to a per-slot choice.
    """
    nondet_states = {
        q
        for q in automaton.states
        for a in automaton.alphabet
        if len(automaton.successors(q, a)) > 1
    }
    if not nondet_states:
        return True

    succ = lambda q: (
        t.target for a in automaton.alphabet for t in automaton.successors(q, a)
    )
    reach = reachable(automaton.initial, succ)
    nondet_states &= reach

    on_cycle = set()
    for q in reach:
        if q in reachable(q, succ) and any(t == q for t in succ(q)):
            on_cycle.add(q)
        else:
            for t in set(succ(q)):
                if q in reachable(t, succ):
                    on_cycle.add(q)
                    break

    # number of histories reaching q: infinite if any cycle state reaches q
    for q in nondet_states:
        for c in on_cycle:
            if q in reachable(c, succ):
                return False

    # acyclic ancestry: count paths with small cap
    counts = {}

    def count_paths(q):
        if q == automaton.initial:
            base = 1
        else:
            base = 0
        if q in counts:
            return counts[q]
        preds = [
            (p, t)
            for p in reach
            for a in automaton.alphabet
            for t in automaton.successors(p, a)
            if t.target == q
        ]
        total = base
        for p, _ in preds:
            total += count_paths(p)
            if total > 1:
                break
        counts[q] = min(total, 2)
        return counts[q]

    return all(count_paths(q) == 1 for q in nondet_states)
