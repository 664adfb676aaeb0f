"""Monitor correctness is anchored to direct value comparison on pair streams."""

import random

import pytest

from qaut.automata import VALUE_FUNCTIONS
from qaut.monitors import COMPARATORS, StreettRecord, compile, stream_value, verdict


def random_stream(rng, weights, max_len=8):
    stem = [
        (rng.choice(weights), rng.choice(weights))
        for _ in range(rng.randrange(0, max_len + 1))
    ]
    cycle = [
        (rng.choice(weights), rng.choice(weights))
        for _ in range(rng.randrange(1, max_len + 1))
    ]
    return stem, cycle


def direct(nu1, nu2, op, stem, cycle):
    left = stream_value(nu1, [a for a, _ in stem], [a for a, _ in cycle])
    right = stream_value(nu2, [b for _, b in stem], [b for _, b in cycle])
    if op == "<=":
        return left <= right
    if op == "<":
        return left < right
    if op == ">=":
        return left >= right
    if op == ">":
        return left > right
    return left == right


@pytest.mark.parametrize("nu1", VALUE_FUNCTIONS)
@pytest.mark.parametrize("nu2", VALUE_FUNCTIONS)
def test_oracle_equivalence(nu1, nu2):
    # exhaustive-ish: every comparator, shared weight pool of size <= 4
    rng = random.Random(f"{nu1}|{nu2}")
    weights = [0, 1, 2, 3]
    monitors = {
        op: compile(nu1, nu2, op, weights, weights) for op in COMPARATORS
    }
    for _ in range(150):
        stem, cycle = random_stream(rng, weights)
        for op, mon in monitors.items():
            got = verdict(mon, stem, cycle)
            want = direct(nu1, nu2, op, stem, cycle)
            assert got == want, (nu1, nu2, op, stem, cycle, got, want)


def test_constant_equal_stream_holds():
    mon = compile("LimSup", "LimSup", "<=", {0, 1, 2}, {0, 1, 2})
    for v in (0, 1, 2):
        assert verdict(mon, [], [(v, v)])


def test_constant_two_zero_fails():
    # priorities max(2*idx(0)+2, 2*idx(2)+1) = max(2, 5) = 5, odd
    mon = compile("LimSup", "LimSup", "<=", {0, 1, 2}, {0, 1, 2})
    assert not verdict(mon, [], [(2, 0)])


def test_liminf_constant_zero_two_holds():
    mon = compile("LimInf", "LimInf", "<=", {0, 1, 2}, {0, 1, 2})
    assert verdict(mon, [], [(0, 2)])


def test_homogeneous_monitors_are_stateless():
    for nu in ("LimSup", "LimInf"):
        mon = compile(nu, nu, "<=", {0, 1, 2}, {0, 1, 2})
        assert mon.state_count() == 1


def test_shift_complements():
    rng = random.Random(7)
    weights = [0, 1, 2]
    le = compile("LimSup", "LimInf", "<=", weights, weights)
    gt = compile("LimSup", "LimInf", ">", weights, weights)
    for _ in range(100):
        stem, cycle = random_stream(rng, weights)
        assert verdict(le, stem, cycle) != verdict(gt, stem, cycle)


def test_unknown_pair_rejected():
    mon = compile("LimSup", "LimSup", "<=", {0, 1}, {0, 1})
    with pytest.raises(Exception):
        verdict(mon, [], [(5, 0)])


def test_streett_record_single_pair():
    rec = StreettRecord(1)
    # request every step, grant never: odd recurs
    perm = rec.initial
    prios = []
    for _ in range(5):
        perm, p = rec.step(perm, {0}, set())
        prios.append(p)
    assert max(prios) % 2 == 1
    # grant every other step: even dominates
    perm = rec.initial
    prios = []
    for i in range(10):
        perm, p = rec.step(perm, {0}, {0} if i % 2 else set())
        prios.append(p)
    assert max(prios[-4:]) % 2 == 0
