import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlcmp.model import (
    ALL_END_ASSIGNMENTS,
    BOTTOM,
    TOP,
    EndAssignment,
    Instance,
    InstanceError,
    Layout,
    LayoutError,
    Line,
    PairType,
    assignment_of,
    check_admissible,
    check_periphery,
    classify_pair,
    count_forced_crossings,
    flip_assignment,
    inversions,
    layout_crossings,
    multiplicity,
    pair_crosses,
    side_is_peripheral,
    station_profile,
)
from mlcmp.pa_solver import solve_pa

from suites import I_A, I_TRI, random_instances

UU = EndAssignment(TOP, TOP)
UD = EndAssignment(TOP, BOTTOM)
DU = EndAssignment(BOTTOM, TOP)
DD = EndAssignment(BOTTOM, BOTTOM)


@st.composite
def instances(draw, max_n=7, max_lines=6):
    n = draw(st.integers(2, max_n))
    ivs = [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(ivs), unique=True, max_size=min(max_lines, len(ivs))))
    return Instance.from_intervals(n, chosen)


class TestInstance:
    def test_canonical_order(self):
        inst = Instance.from_intervals(5, [(2, 5), (1, 3), (2, 3)])
        assert inst.intervals == [(1, 3), (2, 3), (2, 5)]
        assert [ln.id for ln in inst.lines] == [0, 1, 2]

    @pytest.mark.parametrize("n, ivs", [(1, []), (3, [(2, 2)]), (3, [(0, 2)]), (3, [(1, 4)]), (3, [(1, 2), (1, 2)])])
    def test_rejects_bad_input(self, n, ivs):
        with pytest.raises(InstanceError):
            Instance.from_intervals(n, ivs)

    def test_rejects_non_canonical_ids(self):
        with pytest.raises(InstanceError):
            Instance(4, (Line(0, 2, 4), Line(1, 1, 3)))

    def test_station_profiles_of_I_A(self):
        p = station_profile(I_A, 2)
        assert (p.left, p.right, p.term_left, p.term_right) == ({0}, {0, 1}, set(), {1})
        p = station_profile(I_A, 1)
        assert (p.left, p.right, p.term_left, p.term_right) == (set(), {0}, set(), {0})
        p = station_profile(I_A, 3)
        assert (p.left, p.right, p.term_left, p.term_right) == ({0, 1}, {1}, {0}, set())

    def test_station_out_of_range(self):
        with pytest.raises(InstanceError):
            station_profile(I_A, 5)

    def test_multiplicity(self):
        assert multiplicity(I_A) == 2
        assert multiplicity(I_TRI) == 3
        assert multiplicity(Instance(2)) == 0


class TestPairs:
    @pytest.mark.parametrize(
        "a, b, first, t",
        [
            ((1, 3), (2, 4), (1, 3), PairType.A),
            ((2, 3), (1, 4), (2, 3), PairType.I),
            ((1, 2), (3, 4), (1, 2), PairType.D),
            ((1, 3), (1, 4), (1, 3), PairType.CL),
            ((1, 4), (2, 4), (2, 4), PairType.CR),
            ((1, 2), (2, 3), (1, 2), PairType.D),
        ],
    )
    def test_classify(self, a, b, first, t):
        la, lb = Line(0, *a), Line(1, *b)
        for x, y in ((la, lb), (lb, la)):
            f, _, got = classify_pair(x, y)
            assert (f.i, f.j) == first and got is t

    def test_classify_identical_rejected(self):
        with pytest.raises(InstanceError):
            classify_pair(Line(0, 1, 3), Line(1, 1, 3))

    def test_classify_total_and_exclusive(self):
        lines = [Line(k, i, j) for k, (i, j) in enumerate((i, j) for i in range(1, 6) for j in range(i + 1, 7))]
        for a, b in itertools.combinations(lines, 2):
            _, _, t = classify_pair(a, b)
            assert isinstance(t, PairType)

    def test_fact1_examples(self):
        assert pair_crosses(PairType.A, UU, UD)
        assert not pair_crosses(PairType.I, UU, DU)
        assert pair_crosses(PairType.CR, DU, UD)

    def test_type_d_never_crosses(self):
        assert not any(pair_crosses(PairType.D, a, b) for a in ALL_END_ASSIGNMENTS for b in ALL_END_ASSIGNMENTS)

    def test_type_a_half_cross(self):
        assert sum(pair_crosses(PairType.A, a, b) for a in ALL_END_ASSIGNMENTS for b in ALL_END_ASSIGNMENTS) == 8

    @pytest.mark.parametrize("t", list(PairType))
    def test_flip_symmetry(self, t):
        for a, b in itertools.product(ALL_END_ASSIGNMENTS, repeat=2):
            fa, fb = flip_assignment((a, b))
            assert pair_crosses(t, a, b) == pair_crosses(t, fa, fb)


class TestCounting:
    def test_forced_examples(self):
        assert count_forced_crossings(I_TRI, [UU] * 3) == 3
        assert count_forced_crossings(I_TRI, [DU] * 3) == 0
        assert count_forced_crossings(Instance.from_intervals(2, [(1, 2)]), [DU]) == 0

    def test_incomplete_assignment(self):
        with pytest.raises(InstanceError):
            count_forced_crossings(I_TRI, [UU])

    def test_inversions(self):
        assert inversions((0, 1), (1, 0)) == 1
        assert inversions((0, 1, 2), (0, 1, 2)) == 0
        assert inversions((0, 1, 2), (2, 1, 0)) == 3
        with pytest.raises(LayoutError):
            inversions((0, 1), (0, 2))

    def test_layout_crossings_single_edge(self):
        inst = Instance.from_intervals(2, [(1, 2)])
        assert layout_crossings(inst, Layout.from_edges([(0,)], [(0,)])) == 0
        two = Instance.from_intervals(3, [(1, 3), (2, 3)])
        lay = Layout.from_edges([(0,), (0, 1)], [(0,), (1, 0)])
        assert layout_crossings(two, lay) == 1

    def test_mismatched_layout(self):
        with pytest.raises(LayoutError):
            layout_crossings(I_A, Layout.from_edges([(0,), (0, 1), (1,)], [(0,), (0, 1), (0,)]))

    @given(instances())
    @settings(max_examples=150, deadline=None)
    def test_global_flip_invariance(self, inst):
        for av in itertools.islice(itertools.product(ALL_END_ASSIGNMENTS, repeat=len(inst.lines)), 64):
            assert count_forced_crossings(inst, av) == count_forced_crossings(inst, flip_assignment(av))


class TestValidators:
    def test_admissible(self):
        inst = Instance.from_intervals(4, [(1, 4), (1, 3)])  # 0=[1,3], 1=[1,4]
        ok = Layout.from_edges([(0, 1), (0, 1), (1,)], [(0, 1), (0, 1), (1,)])
        swapped = Layout.from_edges([(0, 1), (1, 0), (1,)], [(0, 1), (1, 0), (1,)])
        assert check_admissible(inst, ok)
        assert not check_admissible(inst, swapped)
        assert check_admissible(Instance(3), Layout.from_edges([(), ()], [(), ()]))

    def test_periphery_side(self):
        assert side_is_peripheral(("t", "p1", "p2"), {"t"})
        assert not side_is_peripheral(("p1", "t", "p2"), {"t"})
        assert side_is_peripheral(("t1", "p", "t2"), {"t1", "t2"})

    def test_periphery_layout(self):
        assert check_periphery(I_A, solve_pa(I_A, [UU, DD]).layout)
        wide = Instance.from_intervals(4, [(1, 4), (1, 2), (1, 3)])  # 0=[1,2], 1=[1,3], 2=[1,4]
        # line 0 ends at station 2 between the two passing lines
        bad = Layout.from_edges([(1, 0, 2), (1, 2), (2,)], [(1, 0, 2), (1, 2), (2,)])
        assert check_admissible(wide, bad)
        assert not check_periphery(wide, bad)

    def test_assignment_of_single_line(self):
        inst = Instance.from_intervals(3, [(1, 3)])
        lay = Layout.from_edges([(0,), (0,)], [(0,), (0,)])
        assert assignment_of(inst, lay) == (UU,)

    def test_assignment_of_bottom_start(self):
        inst = Instance.from_intervals(3, [(1, 3), (2, 3)])  # 0=[1,3], 1=[2,3]
        # line 1 starts below the passing line 0
        lay = Layout.from_edges([(0,), (0, 1)], [(0,), (0, 1)])
        av = assignment_of(inst, lay)
        assert av[1].left is BOTTOM and av[0].left is TOP

    def test_assignment_of_rejects_non_peripheral(self):
        wide = Instance.from_intervals(4, [(1, 4), (1, 2), (1, 3)])
        bad = Layout.from_edges([(1, 0, 2), (1, 2), (2,)], [(1, 0, 2), (1, 2), (2,)])
        with pytest.raises(LayoutError):
            assignment_of(wide, bad)

    @pytest.mark.parametrize("inst", random_instances(21, 60, 7, 6))
    def test_forced_at_most_layout(self, inst):
        for av in itertools.islice(itertools.product(ALL_END_ASSIGNMENTS, repeat=len(inst.lines)), 32):
            lay = solve_pa(inst, av).layout
            assert count_forced_crossings(inst, assignment_of(inst, lay)) <= layout_crossings(inst, lay)
