import random

import pytest

from mlcmp.exact import EnumerationCapError, fix_left_end, greedy_right_ends
from mlcmp.model import (
    BOTTOM,
    TOP,
    Instance,
    InstanceError,
    PairType,
    count_forced_crossings,
    layout_crossings,
    pair_crosses,
)
from mlcmp.oracle import brute_force_assignments
from mlcmp.pa_solver import solve_pa

from suites import I_A, I_TRI, random_instances


def test_greedy_examples():
    av, total = greedy_right_ends(I_A, [TOP, TOP])
    assert [str(a) for a in av] == ["UD", "UU"] and total == 0
    single = Instance.from_intervals(3, [(1, 3)])
    av, total = greedy_right_ends(single, [BOTTOM])
    assert av[0].right is TOP and total == 0
    _, total = greedy_right_ends(I_TRI, [BOTTOM] * 3)
    assert total == 0


def test_greedy_incomplete():
    with pytest.raises(InstanceError):
        greedy_right_ends(I_TRI, [TOP])


@pytest.mark.parametrize("inst", random_instances(31, 100, 9, 9))
def test_greedy_order_independent(inst):
    rng = random.Random(len(inst.lines))
    for _ in range(4):
        lefts = [rng.choice((TOP, BOTTOM)) for _ in inst.lines]
        ids = list(range(len(inst.lines)))
        assert greedy_right_ends(inst, lefts)[1] == greedy_right_ends(inst, lefts, order=ids[::-1])[1]


def test_examples():
    assert fix_left_end(I_A).crossings == 0
    assert fix_left_end(I_TRI).crossings == 0
    assert fix_left_end(Instance.from_intervals(2, [(1, 2)])).crossings == 0
    assert fix_left_end(Instance(5)).crossings == 0


def test_cap():
    inst = Instance.from_intervals(40, [(i, i + 1) for i in range(1, 32)])
    with pytest.raises(EnumerationCapError, match="30"):
        fix_left_end(inst)
    with pytest.raises(EnumerationCapError, match="5"):
        fix_left_end(Instance.from_intervals(9, [(i, i + 1) for i in range(1, 7)]), cap=5)


@pytest.mark.parametrize("inst", random_instances(32, 150, 9, 9))
def test_matches_brute_force_and_witness(inst):
    res = fix_left_end(inst)
    assert res.crossings == brute_force_assignments(inst).min_crossings
    assert res.layout == solve_pa(inst, res.assignment).layout
    assert layout_crossings(inst, res.layout) == res.crossings == count_forced_crossings(inst, res.assignment)
    for a, b, t in inst.pairs:
        if t is PairType.CR:
            assert not pair_crosses(t, res.assignment[a], res.assignment[b])


def test_tie_break_smallest_code():
    from itertools import product

    from mlcmp.model import assignment_code

    for inst in random_instances(33, 60, 7, 6):
        best = min(
            (total, assignment_code(av))
            for lefts in product((TOP, BOTTOM), repeat=len(inst.lines))
            for av, total in [greedy_right_ends(inst, list(lefts))]
        )
        res = fix_left_end(inst)
        assert (res.crossings, assignment_code(res.assignment)) == best


@pytest.mark.parametrize("inst", random_instances(34, 40, 10, 10))
def test_removing_a_line_never_hurts(inst):
    if not inst.lines:
        return
    full = fix_left_end(inst).crossings
    for drop in range(len(inst.lines)):
        rest = Instance.from_intervals(inst.n, [iv for k, iv in enumerate(inst.intervals) if k != drop])
        assert fix_left_end(rest).crossings <= full


def test_threads_deterministic():
    for inst in random_instances(35, 5, 12, 12, min_n=8):
        assert fix_left_end(inst, threads=3) == fix_left_end(inst)
