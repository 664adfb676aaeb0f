"""Deterministic parity monitors for comparing two value-function streams.

A monitor reads an infinite stream of weight pairs (a, b) and decides
``nu1(a-stream) op nu2(b-stream)`` through its parity condition: the verdict
is true iff the maximal transition priority occurring infinitely often is
even.  Every game in this package gets its winning condition from here, so
correctness is anchored to an exhaustive oracle test against direct value
comparison rather than to any one construction argument.

Construction outline: Inf and Sup sides are first normalized by a
running-min/running-max tracker into LimInf/LimSup form.  Homogeneous
comparisons are stateless priority maps over the combined weight order;
mixed comparisons use two-state alternation gadgets that fire exactly when
both of their trigger weights recur; equality combines both directions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .automata import LassoWord
from .errors import QautError

COMPARATORS = ("<=", "<", ">=", ">", "==")


def compare(x, y, op):
    if op == "<=":
        return x <= y
    if op == "<":
        return x < y
    if op == ">=":
        return x >= y
    if op == ">":
        return x > y
    if op == "==":
        return x == y
    raise QautError(f"unknown comparator {op!r}")


@dataclass
class ParityMonitor:
    """Deterministic transducer: (state, weight pair) -> (state, priority)."""

    initial: object
    step_fn: object
    weights_left: frozenset
    weights_right: frozenset
    description: str = ""
    _memo: dict = field(default_factory=dict, repr=False)

    def step(self, state, pair):
        key = (state, pair)
        hit = self._memo.get(key)
        if hit is None:
            a, b = pair
            if a not in self.weights_left or b not in self.weights_right:
                raise QautError(f"weight pair {pair} outside monitor alphabet")
            hit = self.step_fn(state, pair)
            self._memo[key] = hit
        return hit

    def state_count(self):
        seen = {self.initial}
        queue = [self.initial]
        while queue:
            s = queue.pop()
            for a in self.weights_left:
                for b in self.weights_right:
                    nxt, _ = self.step(s, (a, b))
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
        return len(seen)


def _normalized_kind(value_fn):
    return "LimInf" if value_fn in ("Inf", "LimInf") else "LimSup"


def _tracker_step(value_fn, acc, w):
    if value_fn == "Inf":
        acc = w if acc is None else min(acc, w)
        return acc, acc
    if value_fn == "Sup":
        acc = w if acc is None else max(acc, w)
        return acc, acc
    return None, w


def _stateless(priority_of):
    def step(state, pair):
        return state, priority_of(*pair)
    return step


def _le_core(kind1, kind2, combined):
    """Stage-2 monitor for ``kind1(a) <= kind2(b)`` over normalized streams."""
    idx = {w: i for i, w in enumerate(combined)}
    m = len(combined)

    if kind1 == "LimSup" and kind2 == "LimSup":
        return (), _stateless(lambda a, b: max(2 * idx[b] + 2, 2 * idx[a] + 1))

    if kind1 == "LimInf" and kind2 == "LimInf":
        ridx = {w: m - 1 - i for w, i in idx.items()}
        return (), _stateless(lambda a, b: max(2 * ridx[a] + 2, 2 * ridx[b] + 1))

    if kind1 == "LimSup" and kind2 == "LimInf":
        # Fails iff some a-weight va recurs together with some b-weight vb < va.
        gadgets = tuple(
            (va, vb) for va in combined for vb in combined if vb < va
        )

        def step(state, pair):
            a, b = pair
            fired = False
            nxt = []
            for armed, (va, vb) in zip(state, gadgets):
                if not armed and a == va:
                    armed = True
                if armed and b == vb:
                    fired = True
                    armed = False
                nxt.append(armed)
            return tuple(nxt), (1 if fired else 0)

        return tuple(False for _ in gadgets), step

    if kind1 == "LimInf" and kind2 == "LimSup":
        # Holds iff for some v both "a <= v" and "b >= v" recur.
        levels = tuple(combined)

        def step(state, pair):
            a, b = pair
            fired = False
            nxt = []
            for armed, v in zip(state, levels):
                if not armed and a <= v:
                    armed = True
                if armed and b >= v:
                    fired = True
                    armed = False
                nxt.append(armed)
            return tuple(nxt), (2 if fired else 1)

        return tuple(False for _ in levels), step

    raise AssertionError((kind1, kind2))


def _equality_core(kind, combined):
    """Homogeneous equality: max-recurring (or min-recurring) indices agree.

    One alternation gadget per weight level confirms that both streams keep
    revisiting the level; a step emits the odd penalty of the highest level
    touched and the even reward of the highest level confirmed.
    """
    idx = {w: i for i, w in enumerate(combined)}
    m = len(combined)
    if kind == "LimInf":
        level = {w: m - 1 - idx[w] for w in combined}
    else:
        level = dict(idx)
    levels = tuple(range(m))

    def step(state, pair):
        a, b = pair
        la, lb = level[a], level[b]
        touch = max(la, lb)
        best_confirm = -1
        nxt = []
        for st, lv in zip(state, levels):
            if st == 0 and la == lv:
                st = 1
            if st == 1 and lb == lv:
                best_confirm = max(best_confirm, lv)
                st = 0
            nxt.append(st)
        prio = 2 * touch + 1
        if best_confirm >= 0:
            prio = max(prio, 2 * best_confirm + 2)
        return tuple(nxt), prio

    return tuple(0 for _ in levels), step


def _with_trackers(nu1, nu2, inner_initial, inner_step):
    def step(state, pair):
        t1, t2, inner = state
        a, b = pair
        t1, ea = _tracker_step(nu1, t1, a)
        t2, eb = _tracker_step(nu2, t2, b)
        inner, prio = inner_step(inner, (ea, eb))
        return (t1, t2, inner), prio
    return (None, None, inner_initial), step


def _swapped(initial, step):
    def swapped_step(state, pair):
        a, b = pair
        return step(state, (b, a))
    return initial, swapped_step


def _shifted(initial, step):
    def shifted_step(state, pair):
        nxt, prio = step(state, pair)
        return nxt, prio + 1
    return initial, shifted_step


def _conjunction(co_init, co_step, bu_init, bu_step):
    """Parity monitor for (co-Buchi condition) and (Buchi condition).

    The co-Buchi component emits odd iff its bad event fires; the Buchi
    component emits 2 iff its good event fires.  Merged priorities {1,2,3}.
    """
    def step(state, pair):
        s1, s2 = state
        s1, p1 = co_step(s1, pair)
        s2, p2 = bu_step(s2, pair)
        if p1 % 2 == 1:
            prio = 3
        elif p2 == 2:
            prio = 2
        else:
            prio = 1
        return (s1, s2), prio
    return (co_init, bu_init), step


def compile(nu1, nu2, op, weights_left, weights_right) -> ParityMonitor:
    """Monitor deciding ``nu1(a-stream) op nu2(b-stream)`` over the weight sets."""
    weights_left = frozenset(weights_left)
    weights_right = frozenset(weights_right)
    if not weights_left or not weights_right:
        raise QautError("weight sets must be nonempty")
    if op not in COMPARATORS:
        raise QautError(f"unknown comparator {op!r}")

    combined = tuple(sorted(weights_left | weights_right))
    k1, k2 = _normalized_kind(nu1), _normalized_kind(nu2)

    if op == "<=":
        init, step = _le_core(k1, k2, combined)
        init, step = _with_trackers(nu1, nu2, init, step)
    elif op == ">=":
        init, step = _le_core(k2, k1, combined)
        init, step = _with_trackers(nu2, nu1, init, step)
        init, step = _swapped(init, step)
    elif op == ">":
        init, step = _le_core(k1, k2, combined)
        init, step = _with_trackers(nu1, nu2, init, step)
        init, step = _shifted(init, step)
    elif op == "<":
        init, step = _le_core(k2, k1, combined)
        init, step = _with_trackers(nu2, nu1, init, step)
        init, step = _swapped(init, step)
        init, step = _shifted(init, step)
    else:  # ==
        if k1 == k2:
            init, step = _equality_core(k1, combined)
            init, step = _with_trackers(nu1, nu2, init, step)
        else:
            le_init, le_step = _le_core(k1, k2, combined)
            ge_init, ge_step = _le_core(k2, k1, combined)
            ge_init, ge_step = _swapped(ge_init, ge_step)
            if k1 == "LimSup":
                # a<=b is the co-Buchi side, a>=b the Buchi side
                init, step = _conjunction(le_init, le_step, ge_init, ge_step)
            else:
                init, step = _conjunction(ge_init, ge_step, le_init, le_step)
            init, step = _with_trackers(nu1, nu2, init, step)

    return ParityMonitor(
        init, step, weights_left, weights_right,
        description=f"{nu1}(a) {op} {nu2}(b)",
    )


def verdict(monitor: ParityMonitor, stem_pairs, cycle_pairs) -> bool:
    """Run the monitor on an ultimately periodic pair stream.

    The verdict is the parity of the maximal priority on the eventual loop of
    the deterministic run.
    """
    stem_pairs = list(stem_pairs)
    cycle_pairs = list(cycle_pairs)
    if not cycle_pairs:
        raise QautError("pair stream cycle must be nonempty")
    state = monitor.initial
    for p in stem_pairs:
        state, _ = monitor.step(state, tuple(p))
    seen = {}
    trace = []
    pos = 0
    while (state, pos) not in seen:
        seen[(state, pos)] = len(trace)
        state, prio = monitor.step(state, tuple(cycle_pairs[pos]))
        trace.append(prio)
        pos = (pos + 1) % len(cycle_pairs)
    loop = trace[seen[(state, pos)]:]
    return max(loop) % 2 == 0


def stream_value(value_fn, stem, cycle):
    """Direct value of a weight stream, for oracle comparisons."""
    stem, cycle = list(stem), list(cycle)
    if value_fn == "Inf":
        return min(stem + cycle)
    if value_fn == "Sup":
        return max(stem + cycle)
    if value_fn == "LimInf":
        return min(cycle)
    if value_fn == "LimSup":
        return max(cycle)
    raise QautError(value_fn)


class StreettRecord:
    """Index appearance record turning a Streett condition into parity.

    Pairs are (request, grant) obligations: accept iff every index whose
    request fires infinitely often is also granted infinitely often.  The
    record keeps indices ordered by most recent grant; requests are penalized
    at their current position with an odd priority, grants rewarded with the
    even priority just above, so a starving index eventually out-prioritizes
    every recurring grant.
    """

    def __init__(self, count):
        self.count = count
        self.initial = tuple(range(count))

    def step(self, perm, requests, grants):
        penalty = 0
        reward = 0
        for i in requests:
            penalty = max(penalty, 2 * (perm.index(i) + 1) + 1)
        for i in grants:
            reward = max(reward, 2 * (perm.index(i) + 1) + 2)
        granted = [i for i in perm if i in grants]
        rest = [i for i in perm if i not in grants]
        return tuple(granted + rest), max(penalty, reward)
