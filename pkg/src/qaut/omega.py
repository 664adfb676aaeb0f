"""Threshold omega-languages of quantitative automata and boolean operations.

A threshold slice {w : sup-value(w) >= v} of a quantitative automaton is a
Buchi or coBuchi language, represented here as a weight-{0,1} automaton whose
value function marks the acceptance kind (LimSup = Buchi, weight-1
transitions accepting; LimInf = coBuchi, weight-0 transitions rejecting).
Inclusion and universality between quantitative automata reduce to emptiness
checks over these slices.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

from .automata import (
    LassoWord,
    WeightedAutomaton,
    enumerate_lassos,
    sup_value,
)
from .errors import QautError, SizeGuardExceeded
from .graphs import bfs_path, reachable, strongly_connected_components

DEFAULT_COMPLEMENT_GUARD = 10


def threshold(automaton: WeightedAutomaton, v: int) -> WeightedAutomaton:
    """Boolean automaton recognizing {w : sup-value(automaton, w) >= v}."""
    if v > automaton.max_weight():
        raise QautError(f"threshold {v} above maximal weight {automaton.max_weight()}")
    fn = automaton.value_fn
    name = f"{automaton.name or 'A'}>={v}"

    if fn == "LimSup":
        trans = [
            (t.source, t.letter, 1 if t.weight >= v else 0, t.target)
            for t in automaton.transitions
        ]
        return WeightedAutomaton(
            automaton.alphabet, automaton.states, automaton.initial, trans, "LimSup", name
        )

    if fn == "LimInf":
        trans = [
            (t.source, t.letter, 1 if t.weight >= v else 0, t.target)
            for t in automaton.transitions
        ]
        return WeightedAutomaton(
            automaton.alphabet, automaton.states, automaton.initial, trans, "LimInf", name
        )

    if fn == "Inf":
        # running flag: once a light transition is taken the run is out
        states = [(q, ok) for q in automaton.states for ok in (1, 0)]
        trans = []
        for (q, ok) in states:
            for a in automaton.alphabet:
                for t in automaton.successors(q, a):
                    ok2 = ok and (1 if t.weight >= v else 0)
                    trans.append(((q, ok), a, ok2, (t.target, ok2)))
        return WeightedAutomaton(
            automaton.alphabet, tuple(states), (automaton.initial, 1), trans, "LimInf", name
        )

    assert fn == "Sup"
    # sticky flag: reaching a heavy transition settles acceptance
    states = [(q, hit) for q in automaton.states for hit in (0, 1)]
    trans = []
    for (q, hit) in states:
        for a in automaton.alphabet:
            for t in automaton.successors(q, a):
                hit2 = hit or (1 if t.weight >= v else 0)
                trans.append(((q, hit), a, hit2, (t.target, hit2)))
    return WeightedAutomaton(
        automaton.alphabet, tuple(states), (automaton.initial, 0), trans, "LimSup", name
    )


def accepts(boolean_automaton: WeightedAutomaton, word: LassoWord) -> bool:
    """Membership of a lasso word in a boolean (weight-{0,1}) language."""
    return sup_value(boolean_automaton, word).value == 1


def determinize_cobuchi(ncw: WeightedAutomaton) -> WeightedAutomaton:
    """Breakpoint determinization of a nondeterministic coBuchi automaton.

    States are (reachable set, safe-since-last-breakpoint subset); a
    transition has weight 0 exactly when the safe subset empties and resets.
    """
    if ncw.value_fn != "LimInf":
        raise QautError("breakpoint determinization expects a coBuchi automaton")

    def step(node, letter):
        S, O = node
        S2 = frozenset(t.target for q in S for t in ncw.successors(q, letter))
        O2 = frozenset(
            t.target for q in O for t in ncw.successors(q, letter) if t.weight == 1
        )
        if O2:
            return (S2, O2), 1
        return (S2, S2), 0

    init = (frozenset([ncw.initial]), frozenset([ncw.initial]))
    states = [init]
    seen = {init}
    trans = []
    i = 0
    while i < len(states):
        node = states[i]
        i += 1
        for a in ncw.alphabet:
            nxt, w = step(node, a)
            trans.append((node, a, w, nxt))
            if nxt not in seen:
                seen.add(nxt)
                states.append(nxt)
    return WeightedAutomaton(
        ncw.alphabet, tuple(states), init, trans, "LimInf",
        name=(ncw.name + ".det") if ncw.name else "det",
    )


def _flip_deterministic(boolean_automaton: WeightedAutomaton) -> WeightedAutomaton:
    """Complement of a deterministic boolean automaton by dualizing acceptance."""
    if not boolean_automaton.is_deterministic():
        raise QautError("acceptance flip requires a deterministic automaton")
    flipped = [
        (t.source, t.letter, 1 - t.weight, t.target)
        for t in boolean_automaton.transitions
    ]
    dual = "LimInf" if boolean_automaton.value_fn == "LimSup" else "LimSup"
    return WeightedAutomaton(
        boolean_automaton.alphabet, boolean_automaton.states,
        boolean_automaton.initial, flipped, dual,
        name=(boolean_automaton.name + ".comp") if boolean_automaton.name else "",
    )


def _cobuchi_to_buchi(ncw: WeightedAutomaton) -> WeightedAutomaton:
    """Buchi automaton for a coBuchi language: guess the all-safe suffix."""
    if ncw.value_fn != "LimInf":
        raise QautError("expected a coBuchi automaton")
    states = [("w", q) for q in ncw.states] + [("s", q) for q in ncw.states] + [("dead", None)]
    trans = []
    for q in ncw.states:
        for a in ncw.alphabet:
            succ = ncw.successors(q, a)
            for t in succ:
                trans.append((("w", q), a, 0, ("w", t.target)))
                if t.weight == 1:
                    trans.append((("w", q), a, 1, ("s", t.target)))
                    trans.append((("s", q), a, 1, ("s", t.target)))
            if not any(t.weight == 1 for t in succ):
                trans.append((("s", q), a, 0, ("dead", None)))
    for a in ncw.alphabet:
        trans.append((("dead", None), a, 0, ("dead", None)))
    return WeightedAutomaton(
        ncw.alphabet, tuple(states), ("w", ncw.initial), trans, "LimSup",
        name=(ncw.name + ".asbuchi") if ncw.name else "",
    )


def _profile_algebra(nbw):
    """Finite-word path profiles: 0 no path, 1 path, 2 path over an accepting edge."""
    live = sorted(
        reachable(
            nbw.initial,
            lambda q: (t.target for a in nbw.alphabet for t in nbw.successors(q, a)),
        ),
        key=repr,
    )
    index = {q: i for i, q in enumerate(live)}
    n = len(live)

    def letter_profile(a):
        mat = [[0] * n for _ in range(n)]
        for q in live:
            for t in nbw.successors(q, a):
                if t.target in index:
                    i, j = index[q], index[t.target]
                    mat[i][j] = max(mat[i][j], 2 if t.weight == 1 else 1)
        return tuple(tuple(row) for row in mat)

    def compose(m1, m2):
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                best = 0
                for k in range(n):
                    x, y = m1[i][k], m2[k][j]
                    if x and y:
                        best = max(best, 2 if (x == 2 or y == 2) else 1)
                        if best == 2:
                            break
                row.append(best)
            out.append(tuple(row))
        return tuple(out)

    identity = tuple(
        tuple(1 if i == j else 0 for j in range(n)) for i in range(n)
    )
    letters = {a: letter_profile(a) for a in nbw.alphabet}
    return live, index, identity, letters, compose


def complement_buchi(
    nbw: WeightedAutomaton,
    guard: int = DEFAULT_COMPLEMENT_GUARD,
    monoid_guard: int = 5000,
) -> WeightedAutomaton:
    """Buchi automaton for the complement language.

    Deterministic inputs are complemented by dualizing to coBuchi and
    re-expressing as Buchi.  Nondeterministic inputs go through path
    profiles: the automaton tracks the profile of the prefix, guesses a
    rejecting (prefix, idempotent block) pair, and then checks the word
    factorizes into blocks of the guessed profile, accepting on each
    completed block.  ``guard`` bounds the input state count and
    ``monoid_guard`` the generated profile monoid.
    """
    if nbw.value_fn != "LimSup":
        raise QautError("complement_buchi expects a Buchi automaton")
    if nbw.is_deterministic():
        return _cobuchi_to_buchi(_flip_deterministic(nbw))

    live, index, identity, letters, compose = _profile_algebra(nbw)
    if len(live) > guard:
        raise SizeGuardExceeded(
            f"Buchi complementation guard: {len(live)} states > {guard}"
        )

    # the semigroup generated by letter profiles, plus the identity
    monoid = {identity}
    frontier = [identity]
    while frontier:
        m = frontier.pop()
        for a in nbw.alphabet:
            m2 = compose(m, letters[a])
            if m2 not in monoid:
                monoid.add(m2)
                frontier.append(m2)
                if len(monoid) > monoid_guard:
                    raise SizeGuardExceeded("profile monoid exceeded guard")

    init_idx = index[nbw.initial]
    idempotents = [g for g in monoid if g != identity and compose(g, g) == g]

    def rejecting(p, g):
        return not any(
            p[init_idx][q] >= 1 and g[q][q] == 2 for q in range(len(live))
        )

    cut_options = {}
    for p in monoid:
        cut_options[p] = [
            g for g in idempotents if compose(p, g) == p and rejecting(p, g)
        ]

    states = [("p", identity)]
    seen = {("p", identity)}
    trans = []
    i = 0
    while i < len(states):
        node = states[i]
        i += 1
        outs = []
        if node[0] == "p":
            _, p = node
            for a in nbw.alphabet:
                outs.append((a, 0, ("p", compose(p, letters[a]))))
                for g in cut_options[p]:
                    s0 = letters[a]
                    if s0 == g:
                        outs.append((a, 1, ("s", g, identity)))
                    outs.append((a, 0, ("s", g, s0)))
        else:
            _, g, s = node
            for a in nbw.alphabet:
                s2 = compose(s, letters[a])
                outs.append((a, 0, ("s", g, s2)))
                if s2 == g:
                    outs.append((a, 1, ("s", g, identity)))
        for a, w, nxt in outs:
            trans.append((node, a, w, nxt))
            if nxt not in seen:
                seen.add(nxt)
                states.append(nxt)
    return WeightedAutomaton(
        nbw.alphabet, tuple(states), ("p", identity), trans, "LimSup",
        name=(nbw.name + ".comp") if nbw.name else "",
    )


def deterministic_threshold(automaton: WeightedAutomaton, v: int) -> WeightedAutomaton:
    """Deterministic boolean automaton for {w : sup-value >= v}.

    Available for Inf, Sup and LimInf value functions; LimSup thresholds are
    genuine Buchi languages with no deterministic Buchi form in general.
    """
    from .errors import UnsupportedMode

    fn = automaton.value_fn
    if fn in ("Inf", "LimInf"):
        return determinize_cobuchi(threshold(automaton, v))
    if fn == "Sup":
        # subset construction over (state, seen-heavy-transition) pairs
        init = frozenset([(automaton.initial, 0)])
        states = [init]
        seen = {init}
        trans = []
        i = 0
        while i < len(states):
            node = states[i]
            i += 1
            for a in automaton.alphabet:
                nxt = frozenset(
                    (t.target, hit or (1 if t.weight >= v else 0))
                    for (q, hit) in node
                    for t in automaton.successors(q, a)
                )
                w = 1 if any(hit for (_, hit) in nxt) else 0
                trans.append((node, a, w, nxt))
                if nxt not in seen:
                    seen.add(nxt)
                    states.append(nxt)
        return WeightedAutomaton(
            automaton.alphabet, tuple(states), init, trans, "LimSup",
            name=f"{automaton.name or 'A'}>={v}.det",
        )
    raise UnsupportedMode(
        "LimSup thresholds cannot be determinized here; "
        "use positional or bounded-memory search instead"
    )


def complement_of_threshold(automaton: WeightedAutomaton, v: int,
                            guard: int = DEFAULT_COMPLEMENT_GUARD) -> WeightedAutomaton:
    """Boolean automaton for {w : sup-value(automaton, w) < v}."""
    if automaton.value_fn != "LimSup":
        return _flip_deterministic(deterministic_threshold(automaton, v))
    sliced = threshold(automaton, v)
    if sliced.is_deterministic():
        return _flip_deterministic(sliced)
    return complement_buchi(sliced, guard=guard)


def product_emptiness(tracks) -> Optional[LassoWord]:
    """Witness word accepted by every boolean track, or None when none exists.

    A track accepts when its value is 1: LimSup tracks need a weight-1
    transition infinitely often, LimInf tracks need weight-0 transitions to
    stop.  The witness cycle lives in a strongly connected subgraph of the
    LimInf-clean edges covering one accepting edge per LimSup track.
    """
    tracks = list(tracks)
    if not tracks:
        raise QautError("no tracks")
    alphabet = tracks[0].alphabet
    for t in tracks:
        if tuple(t.alphabet) != tuple(alphabet):
            raise QautError("alphabet mismatch across tracks")

    init = tuple(t.initial for t in tracks)

    def moves(node):
        def rec(i, acc, weights):
            if i == len(tracks):
                yield tuple(acc), tuple(weights)
                return
            for t in tracks[i].successors(node[i], letter):
                acc.append(t.target)
                weights.append(t.weight)
                yield from rec(i + 1, acc, weights)
                acc.pop()
                weights.pop()
        for letter in alphabet:
            for nxt, weights in rec(0, [], []):
                yield letter, nxt, weights

    nodes = []
    edges = {}
    seen = {init}
    queue = [init]
    while queue:
        node = queue.pop(0)
        nodes.append(node)
        out = list(moves(node))
        edges[node] = out
        for _, nxt, _ in out:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)

    liminf = [i for i, t in enumerate(tracks) if t.value_fn == "LimInf"]
    limsup = [i for i, t in enumerate(tracks) if t.value_fn == "LimSup"]

    def clean(edge_weights):
        return all(edge_weights[i] == 1 for i in liminf)

    clean_succ = lambda n: (nxt for (_, nxt, ws) in edges[n] if clean(ws))
    sccs = strongly_connected_components(nodes, clean_succ)
    comp = {n: i for i, c in enumerate(sccs) for n in c}

    for scc in sccs:
        members = set(scc)
        internal = [
            (n, letter, nxt, ws)
            for n in scc
            for (letter, nxt, ws) in edges[n]
            if nxt in members and clean(ws)
        ]
        if not internal:
            continue
        needed = []
        ok = True
        for i in limsup:
            cand = [e for e in internal if e[3][i] == 1]
            if not cand:
                ok = False
                break
            needed.append(cand[0])
        if not ok:
            continue
        if not needed:
            needed = [internal[0]]

        # stitch a cycle through every needed edge, inside the clean subgraph
        anchor = needed[0][0]
        inner = lambda n: (
            nxt for (_, nxt, ws) in edges[n] if nxt in members and clean(ws)
        )
        cycle_letters = []
        pos = anchor
        for (src, letter, dst, _) in needed:
            if pos != src:
                path = bfs_path([pos], [src], inner)
                cycle_letters.extend(_letters_along(path, edges, members, clean))
            cycle_letters.append(letter)
            pos = dst
        if pos != anchor:
            path = bfs_path([pos], [anchor], inner)
            cycle_letters.extend(_letters_along(path, edges, members, clean))

        stem_path = bfs_path([init], [anchor], lambda n: (nxt for (_, nxt, _) in edges[n]))
        stem_letters = _letters_along(stem_path, edges, None, None)
        return LassoWord(tuple(stem_letters), tuple(cycle_letters))
    return None


def _letters_along(path, edges, members, clean):
    out = []
    for a, b in zip(path, path[1:]):
        for (letter, nxt, ws) in edges[a]:
            if nxt != b:
                continue
            if members is not None and nxt not in members:
                continue
            if clean is not None and not clean(ws):
                continue
            out.append(letter)
            break
    return out


class IncludeResult(NamedTuple):
    holds: bool
    counterexample: Optional[LassoWord]


def includes(A: WeightedAutomaton, B: WeightedAutomaton,
             guard: int = DEFAULT_COMPLEMENT_GUARD,
             minimize_budget: int = 20000) -> IncludeResult:
    """Pointwise sup-value dominance: every word's value in A is <= in B.

    Decided threshold by threshold over A's weight set; a failure yields the
    shortest lasso counterexample found within the minimization budget.
    """
    if tuple(A.alphabet) != tuple(B.alphabet):
        raise QautError("alphabet mismatch")
    found = None
    for v in sorted({w for w in A.weight_set if w > 0}, reverse=True):
        slice_a = threshold(A, v)
        if v > B.max_weight():
            # B can never reach v: any word valued >= v in A is a witness
            tracks = [slice_a]
        else:
            tracks = [slice_a, complement_of_threshold(B, v, guard=guard)]
        witness = product_emptiness(tracks)
        if witness is not None:
            found = witness
            break
    if found is None:
        return IncludeResult(True, None)

    # minimize: shortest (stem, cycle) by total length, then lexicographic
    limit = len(found.stem) + len(found.cycle)
    spent = 0
    for cand in _lassos_by_total_length(A.alphabet, limit):
        spent += 1
        if spent > minimize_budget:
            break
        if sup_value(A, cand).value > sup_value(B, cand).value:
            return IncludeResult(False, cand)
    return IncludeResult(False, found)


def _lassos_by_total_length(alphabet, limit):
    import itertools

    alphabet = tuple(alphabet)
    for total in range(1, limit + 1):
        for stem_len in range(total):
            cycle_len = total - stem_len
            for stem in itertools.product(alphabet, repeat=stem_len):
                for cycle in itertools.product(alphabet, repeat=cycle_len):
                    yield LassoWord(stem, cycle)


def universal_at(A: WeightedAutomaton, v: int,
                 guard: int = DEFAULT_COMPLEMENT_GUARD,
                 minimize_budget: int = 20000):
    """True iff every word has sup-value >= v; else a witness word below v."""
    if v <= 0:
        return True, None
    if v > A.max_weight():
        return False, LassoWord((), (A.alphabet[0],))
    comp = complement_of_threshold(A, v, guard=guard)
    witness = product_emptiness([comp])
    if witness is None:
        return True, None
    limit = len(witness.stem) + len(witness.cycle)
    spent = 0
    for cand in _lassos_by_total_length(A.alphabet, limit):
        spent += 1
        if spent > minimize_budget:
            break
        if sup_value(A, cand).value < v:
            return False, cand
    return False, witness
