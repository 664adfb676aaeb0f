"""Core automaton model: weighted transitions over infinite words.

An automaton carries natural-number weights on transitions and one of four
value functions (Inf, Sup, LimInf, LimSup) mapping the weight sequence of an
infinite run to a value.  Infinite words are handled exclusively through
their ultimately periodic presentations (:class:`LassoWord`); every decision
procedure in this package admits lasso witnesses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple

from .errors import QautError
from .graphs import bfs_path, reachable, strongly_connected_components

VALUE_FUNCTIONS = ("Inf", "Sup", "LimInf", "LimSup")
MAX_WEIGHT = 2**31 - 1


class Transition(NamedTuple):
    source: object
    letter: str
    weight: int
    target: object


@dataclass(frozen=True)
class WeightedAutomaton:
    """Finite-state transition system with weighted transitions.

    ``alphabet`` and ``states`` are ordered; all enumeration orders in this
    package derive from them, which keeps witnesses reproducible.
    """

    alphabet: tuple
    states: tuple
    initial: object
    transitions: tuple
    value_fn: str
    name: str = ""

    def __post_init__(self):
        if self.value_fn not in VALUE_FUNCTIONS:
            raise ValueError(f"unknown value function {self.value_fn!r}")
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "states", tuple(self.states))
        trans = []
        seen = {}
        for t in self.transitions:
            t = Transition(*t)
            if not isinstance(t.weight, int) or isinstance(t.weight, bool):
                raise ValueError(
                    f"weight {t.weight!r} is not a natural number; "
                    "pre-scale rational weights to naturals"
                )
            if t.weight < 0 or t.weight > MAX_WEIGHT:
                raise ValueError(f"weight {t.weight} outside [0, 2^31-1]")
            key = (t.source, t.letter, t.target)
            if key in seen:
                if seen[key] != t.weight:
                    raise ValueError(
                        f"conflicting weights for transition {key}: "
                        f"{seen[key]} vs {t.weight}"
                    )
                continue
            seen[key] = t.weight
            trans.append(t)
        sidx = {q: i for i, q in enumerate(self.states)}
        lidx = {a: i for i, a in enumerate(self.alphabet)}
        trans.sort(
            key=lambda t: (
                sidx.get(t.source, len(sidx)),
                lidx.get(t.letter, len(lidx)),
                sidx.get(t.target, len(sidx)),
            )
        )
        object.__setattr__(self, "transitions", tuple(trans))

    @cached_property
    def _succ(self):
        table = {(q, a): [] for q in self.states for a in self.alphabet}
        for t in self.transitions:
            if (t.source, t.letter) in table:
                table[(t.source, t.letter)].append(t)
        return table

    def successors(self, state, letter):
        """Transitions from ``state`` on ``letter``, in canonical order."""
        return self._succ.get((state, letter), [])

    def transition_for(self, state, letter, target):
        for t in self.successors(state, letter):
            if t.target == target:
                return t
        raise QautError(f"no transition ({state!r}, {letter!r}, {target!r})")

    @cached_property
    def weight_set(self):
        return tuple(sorted({t.weight for t in self.transitions}))

    def max_weight(self):
        return max(self.weight_set) if self.weight_set else 0

    def is_total(self):
        return all(self.successors(q, a) for q in self.states for a in self.alphabet)

    def is_deterministic(self):
        return all(
            len(self.successors(q, a)) == 1 for q in self.states for a in self.alphabet
        )

    def state_index(self, state):
        return self.states.index(state)

    def with_value_fn(self, value_fn):
        return WeightedAutomaton(
            self.alphabet, self.states, self.initial, self.transitions, value_fn, self.name
        )


def validate(automaton: WeightedAutomaton) -> list:
    """Invariant violations as human-readable strings; valid iff empty."""
    issues = []
    if not automaton.alphabet:
        issues.append("empty alphabet")
    if not automaton.states:
        issues.append("empty state set")
    state_set = set(automaton.states)
    if automaton.initial not in state_set:
        issues.append(f"initial state {automaton.initial!r} unknown")
    for t in automaton.transitions:
        if t.source not in state_set:
            issues.append(f"unknown state {t.source!r} in transition {tuple(t)}")
        if t.target not in state_set:
            issues.append(f"unknown state {t.target!r} in transition {tuple(t)}")
        if t.letter not in automaton.alphabet:
            issues.append(f"unknown letter {t.letter!r} in transition {tuple(t)}")
    for q in automaton.states:
        for a in automaton.alphabet:
            if not automaton.successors(q, a):
                issues.append(f"state {q!r} not total on {a!r}")
    return issues


@dataclass(frozen=True)
class LassoWord:
    """Ultimately periodic infinite word ``stem . cycle^omega``."""

    stem: tuple
    cycle: tuple

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise ValueError("lasso cycle must be nonempty")

    def letters(self):
        return self.stem + self.cycle

    def letter_at(self, i):
        if i < len(self.stem):
            return self.stem[i]
        return self.cycle[(i - len(self.stem)) % len(self.cycle)]

    def period_length(self):
        return len(self.stem) + len(self.cycle)

    def next_position(self, pos):
        nxt = pos + 1
        return len(self.stem) if nxt >= self.period_length() else nxt

    def sort_key(self):
        return (len(self.stem), len(self.cycle), self.stem + self.cycle)

    def __str__(self):
        return "".join(self.stem) + "(" + "".join(self.cycle) + ")"


def enumerate_lassos(alphabet, max_stem, max_cycle) -> Iterator[LassoWord]:
    """All lassos within the bounds, ordered by (stem length, cycle length, letters)."""
    alphabet = tuple(alphabet)
    for stem_len in range(max_stem + 1):
        for cycle_len in range(1, max_cycle + 1):
            for stem in itertools.product(alphabet, repeat=stem_len):
                for cycle in itertools.product(alphabet, repeat=cycle_len):
                    yield LassoWord(stem, cycle)


@dataclass(frozen=True)
class Run:
    """Lasso-shaped run: a chain of stem transitions followed by a closed cycle."""

    automaton: WeightedAutomaton
    stem: tuple
    cycle: tuple

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(Transition(*t) for t in self.stem))
        object.__setattr__(self, "cycle", tuple(Transition(*t) for t in self.cycle))
        if not self.cycle:
            raise ValueError("run cycle must be nonempty")
        chain = self.stem + self.cycle
        if chain[0].source != self.automaton.initial:
            raise ValueError("run does not start at the initial state")
        known = set(self.automaton.transitions)
        for t in chain:
            if t not in known:
                raise ValueError(f"{tuple(t)} is not a transition of the automaton")
        for prev, nxt in zip(chain, chain[1:]):
            if prev.target != nxt.source:
                raise ValueError("run transitions do not chain")
        if self.cycle[-1].target != self.cycle[0].source:
            raise ValueError("run cycle does not close")

    def stem_weights(self):
        return [t.weight for t in self.stem]

    def cycle_weights(self):
        return [t.weight for t in self.cycle]

    def word(self) -> LassoWord:
        return LassoWord(
            tuple(t.letter for t in self.stem), tuple(t.letter for t in self.cycle)
        )


def run_value(run: Run) -> int:
    """Value of the run under its automaton's value function."""
    fn = run.automaton.value_fn
    stem = run.stem_weights()
    cycle = run.cycle_weights()
    if fn == "Inf":
        return min(stem + cycle)
    if fn == "Sup":
        return max(stem + cycle)
    if fn == "LimInf":
        return min(cycle)
    if fn == "LimSup":
        return max(cycle)
    raise AssertionError(fn)


class ValueWitness(NamedTuple):
    value: int
    run: Run


class TopWitness(NamedTuple):
    value: int
    word: LassoWord
    run: Run


def _limit_kind(value_fn):
    return "LimSup" if value_fn in ("Sup", "LimSup") else "LimInf"


def _tracked(value_fn, acc, weight):
    """Running min/max normalization: Inf/Sup become LimInf/LimSup."""
    if value_fn == "Inf":
        acc = weight if acc is None else min(acc, weight)
        return acc, acc
    if value_fn == "Sup":
        acc = weight if acc is None else max(acc, weight)
        return acc, acc
    return None, weight


def _best_limit_value(init, succ, kind):
    """Max over infinite paths from ``init`` of the limit value of edge weights.

    ``succ(node) -> iterable of (next, weight, payload)``.  Returns
    ``(value, stem_edges, cycle_edges)`` where edges are ``(src, dst, payload)``
    triples forming a witness lasso.  Assumes every node has a successor.
    """
    nodes = reachable(init, lambda n: (e[0] for e in succ(n)))
    edges = {n: list(succ(n)) for n in nodes}

    def adjacency(restrict=None):
        if restrict is None:
            return lambda n: (e[0] for e in edges[n])
        return lambda n: (e[0] for e in edges[n] if e[1] >= restrict)

    weights = sorted({w for es in edges.values() for (_, w, _) in es}, reverse=True)

    if kind == "LimSup":
        sccs = strongly_connected_components(sorted(nodes, key=repr), adjacency())
        comp = {n: i for i, c in enumerate(sccs) for n in c}
        best = None
        for n in nodes:
            for dst, w, payload in edges[n]:
                if comp[dst] == comp[n] and (best is None or w > best[1]):
                    best = (n, w, dst, payload)
        if best is None:  # cannot happen on total automata
            raise QautError("graph has no reachable cycle")
        src, value, dst, payload = best
        stem_nodes = bfs_path([init], [src], adjacency())
        members = set(sccs[comp[src]])
        close = bfs_path([dst], [src], lambda n: (e[0] for e in edges[n] if e[0] in members))
        stem = _edges_along(stem_nodes, edges)
        cycle = [(src, dst, payload)] + _edges_along(close, edges)
        return value, stem, cycle

    assert kind == "LimInf"
    for v in weights:
        sub = adjacency(restrict=v)
        restricted_nodes = [n for n in sorted(nodes, key=repr)]
        sccs = strongly_connected_components(restricted_nodes, sub)
        for scc in sccs:
            members = set(scc)
            has_cycle = any(
                e[0] in members and e[1] >= v for n in scc for e in edges[n]
            )
            if not has_cycle:
                continue
            anchor = min(scc, key=repr)
            stem_nodes = bfs_path([init], [anchor], adjacency())
            inner = lambda n: (e[0] for e in edges[n] if e[0] in members and e[1] >= v)
            first = None
            for dst, w, payload in edges[anchor]:
                if dst in members and w >= v:
                    first = (anchor, dst, payload)
                    break
            close = bfs_path([first[1]], [anchor], inner)
            stem = _edges_along(stem_nodes, edges)
            cycle = [first] + _edges_along(close, edges, restrict=v, members=members)
            return v, stem, cycle
    raise QautError("graph has no reachable cycle")


def _edges_along(nodes, edges, restrict=None, members=None):
    out = []
    for a, b in zip(nodes, nodes[1:]):
        for dst, w, payload in edges[a]:
            if dst != b:
                continue
            if restrict is not None and w < restrict:
                continue
            if members is not None and dst not in members:
                continue
            out.append((a, b, payload))
            break
    return out


def sup_value(automaton: WeightedAutomaton, word: LassoWord) -> ValueWitness:
    """Max over all runs on ``word`` of the run value, with an attaining run.

    Computed on the synchronized product of the automaton with the lasso
    structure; Inf/Sup go through a running-min/max tracker first.
    """
    for letter in word.letters():
        if letter not in automaton.alphabet:
            raise QautError(f"letter {letter!r} outside alphabet")
    fn = automaton.value_fn

    def succ(node):
        q, pos, acc = node
        letter = word.letter_at(pos)
        nxt_pos = word.next_position(pos)
        for t in automaton.successors(q, letter):
            acc2, eff = _tracked(fn, acc, t.weight)
            yield (t.target, nxt_pos, acc2), eff, t

    value, stem, cycle = _best_limit_value(
        (automaton.initial, 0, None), succ, _limit_kind(fn)
    )
    run = Run(
        automaton,
        tuple(p for (_, _, p) in stem),
        tuple(p for (_, _, p) in cycle),
    )
    return ValueWitness(value, run)


def top_value(automaton: WeightedAutomaton, witness_budget: int = 50000) -> TopWitness:
    """Highest value achievable by any run on any word, with a witness lasso.

    The witness is the first lasso in canonical (stem length, cycle length,
    letters) order whose sup-value attains the top, searched within a budget;
    past the budget the graph-derived witness is returned instead.
    """
    fn = automaton.value_fn

    def succ(node):
        q, acc = node
        for a in automaton.alphabet:
            for t in automaton.successors(q, a):
                acc2, eff = _tracked(fn, acc, t.weight)
                yield (t.target, acc2), eff, t

    value, stem, cycle = _best_limit_value((automaton.initial, None), succ, _limit_kind(fn))

    bound = len(automaton.states)
    if fn in ("Inf", "Sup"):
        bound *= max(1, len(automaton.weight_set))
    spent = 0
    for cand in enumerate_lassos(automaton.alphabet, bound, bound):
        spent += 1
        if spent > witness_budget:
            break
        if sup_value(automaton, cand).value >= value:
            return TopWitness(value, cand, sup_value(automaton, cand).run)
    run = Run(
        automaton,
        tuple(p for (_, _, p) in stem),
        tuple(p for (_, _, p) in cycle),
    )
    return TopWitness(value, run.word(), run)
