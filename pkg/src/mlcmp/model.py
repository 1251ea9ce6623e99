"""Instances, end assignments, layouts and the forced-crossing table.

Stations are numbered ``1..n`` along a horizontal path. A line ``[i, j]``
occupies every edge between its two end stations. Each station has a left
side (towards ``s - 1``) and a right side (towards ``s + 1``); a layout fixes
a top-to-bottom permutation of the lines present on every side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence


class InstanceError(ValueError):
    """Raised for malformed instances or arguments that do not fit one."""


class LayoutError(ValueError):
    """Raised when a layout does not match the structure of its instance."""


class Side(Enum):
    TOP = "U"
    BOTTOM = "D"

    def flip(self) -> Side:
        return Side.BOTTOM if self is Side.TOP else Side.TOP

    @property
    def bit(self) -> int:
        return 0 if self is Side.TOP else 1


TOP = Side.TOP
BOTTOM = Side.BOTTOM


class EndAssignment(NamedTuple):
    left: Side
    right: Side

    def __str__(self) -> str:
        return self.left.value + self.right.value

    @classmethod
    def parse(cls, text: str) -> EndAssignment:
        if len(text) != 2:
            raise ValueError(f"assignment must be two letters, got {text!r}")
        return cls(Side(text[0].upper()), Side(text[1].upper()))


# The four (left, right) choices, Top-first, in canonical encoding order.
ALL_END_ASSIGNMENTS = tuple(EndAssignment(a, b) for a in Side for b in Side)

AssignmentVector = tuple  # tuple[EndAssignment, ...] indexed by line id
Perm = tuple  # tuple[int, ...] of line ids, top to bottom


class PairType(Enum):
    A = "A"
    CL = "Cl"
    CR = "Cr"
    I = "I"  # noqa: E741
    D = "D"


@dataclass(frozen=True, order=True)
class Line:
    id: int
    i: int
    j: int

    def __post_init__(self):
        if not self.i < self.j:
            raise InstanceError(f"line [{self.i}, {self.j}] needs i < j")

    def __str__(self) -> str:
        return f"l{self.id}=[{self.i},{self.j}]"


class StationProfile(NamedTuple):
    left: frozenset
    right: frozenset
    term_left: frozenset
    term_right: frozenset

    @property
    def passing(self) -> frozenset:
        return self.left - self.term_left


@dataclass(frozen=True)
class Instance:
    """A path with ``n`` stations and a set of distinct lines.

    Lines are stored in canonical order (ascending right end, then left
    end) and their ids are their ranks in that order.
    """

    n: int
    lines: tuple[Line, ...] = field(default=())

    def __post_init__(self):
        if self.n < 2:
            raise InstanceError(f"need at least 2 stations, got {self.n}")
        seen = set()
        for idx, ln in enumerate(self.lines):
            if ln.id != idx:
                raise InstanceError("line ids must be canonical ranks; use Instance.from_intervals")
            if not (1 <= ln.i < ln.j <= self.n):
                raise InstanceError(f"line [{ln.i}, {ln.j}] outside stations 1..{self.n}")
            if (ln.i, ln.j) in seen:
                raise InstanceError(f"duplicate line [{ln.i}, {ln.j}]")
            seen.add((ln.i, ln.j))
        keys = [(ln.j, ln.i) for ln in self.lines]
        if keys != sorted(keys):
            raise InstanceError("lines not in canonical (j, i) order; use Instance.from_intervals")

    @classmethod
    def from_intervals(cls, n: int, intervals: Iterable[Sequence[int]]) -> Instance:
        pairs = [(int(a), int(b)) for a, b in intervals]
        for a, b in pairs:
            if not a < b:
                raise InstanceError(f"line [{a}, {b}] needs i < j")
        if len(set(pairs)) != len(pairs):
            dup = next(p for p in pairs if pairs.count(p) > 1)
            raise InstanceError(f"duplicate line [{dup[0]}, {dup[1]}]")
        pairs.sort(key=lambda p: (p[1], p[0]))
        return cls(n, tuple(Line(k, a, b) for k, (a, b) in enumerate(pairs)))

    @property
    def intervals(self) -> list[tuple[int, int]]:
        return [(ln.i, ln.j) for ln in self.lines]

    def __len__(self) -> int:
        return len(self.lines)

    @cached_property
    def profiles(self) -> tuple[StationProfile, ...]:
        # index 0 unused so that profiles[s] is station s
        left = [set() for _ in range(self.n + 1)]
        right = [set() for _ in range(self.n + 1)]
        ends = [set() for _ in range(self.n + 1)]
        starts = [set() for _ in range(self.n + 1)]
        for ln in self.lines:
            starts[ln.i].add(ln.id)
            ends[ln.j].add(ln.id)
            for s in range(ln.i, ln.j):
                right[s].add(ln.id)
                left[s + 1].add(ln.id)
        return tuple(
            StationProfile(frozenset(left[s]), frozenset(right[s]), frozenset(ends[s]), frozenset(starts[s]))
            for s in range(self.n + 1)
        )

    @cached_property
    def pairs(self) -> tuple[tuple[int, int, PairType], ...]:
        """Every unordered line pair as ``(first, second, type)`` in canonical order."""
        out = []
        for a in range(len(self.lines)):
            for b in range(a + 1, len(self.lines)):
                first, second, t = classify_pair(self.lines[a], self.lines[b])
                out.append((first.id, second.id, t))
        return tuple(out)


def station_profile(inst: Instance, s: int) -> StationProfile:
    """Line sets on the left/right side of station ``s`` and its terminators.

    ``term_left`` holds lines whose right end is ``s``; ``term_right`` lines
    whose left end is ``s``.
    """
    if not 1 <= s <= inst.n:
        raise InstanceError(f"station {s} outside 1..{inst.n}")
    return inst.profiles[s]


def multiplicity(inst: Instance) -> int:
    """Maximum number of lines sharing one edge of the path."""
    return max((len(inst.profiles[s].right) for s in range(1, inst.n)), default=0)


def classify_pair(a: Line, b: Line) -> tuple[Line, Line, PairType]:
    """Order two lines so that ``j < j'`` (or ``j == j'`` and ``i > i'``) and type them."""
    if (a.i, a.j) == (b.i, b.j):
        raise InstanceError(f"identical lines [{a.i}, {a.j}]")
    if (b.j, -b.i) < (a.j, -a.i):
        a, b = b, a
    if a.j == b.j:
        t = PairType.CR
    elif a.j <= b.i:
        t = PairType.D
    elif a.i == b.i:
        t = PairType.CL
    elif a.i < b.i:
        t = PairType.A
    else:
        t = PairType.I
    return a, b, t


def pair_crosses(t: PairType, a: EndAssignment, b: EndAssignment) -> bool:
    """Whether a canonically ordered pair must cross under the given end sides."""
    if t is PairType.A:
        return a.right == b.left
    if t is PairType.CL:
        return a.left != a.right and b.left == a.right
    if t is PairType.CR:
        # mirror image of the C_l rule
        return a.left != a.right and b.right == a.left
    if t is PairType.I:
        return a.left != a.right
    return False


def _check_assignment(inst: Instance, av: Sequence[EndAssignment]) -> None:
    if len(av) != len(inst.lines):
        raise InstanceError(f"assignment covers {len(av)} lines, instance has {len(inst.lines)}")


def count_forced_crossings(inst: Instance, av: Sequence[EndAssignment]) -> int:
    _check_assignment(inst, av)
    return sum(pair_crosses(t, av[a], av[b]) for a, b, t in inst.pairs)


def inversions(p: Sequence[int], q: Sequence[int]) -> int:
    """Number of element pairs ordered differently in ``p`` and ``q``."""
    pos = {x: k for k, x in enumerate(q)}
    if len(pos) != len(p) or any(x not in pos for x in p):
        raise LayoutError(f"permutations {tuple(p)} and {tuple(q)} hold different lines")
    seq = [pos[x] for x in p]
    return sum(1 for u in range(len(seq)) for v in range(u + 1, len(seq)) if seq[u] > seq[v])


def restrict(perm: Sequence[int], keep) -> tuple[int, ...]:
    return tuple(x for x in perm if x in keep)


@dataclass(frozen=True)
class Layout:
    """Per-station side permutations.

    ``left[s - 1]`` is the permutation on the left side of station ``s``
    (``None`` for station 1); ``right[s - 1]`` the right side (``None`` for
    station ``n``).
    """

    left: tuple
    right: tuple

    @property
    def n(self) -> int:
        return len(self.left)

    def left_perm(self, s: int) -> tuple[int, ...]:
        return self.left[s - 1]

    def right_perm(self, s: int) -> tuple[int, ...]:
        return self.right[s - 1]

    @classmethod
    def from_edges(cls, rights: Sequence[Sequence[int]], lefts: Sequence[Sequence[int]]) -> Layout:
        """Build from ``rights[e]`` / ``lefts[e]`` = the two ends of edge ``(e+1, e+2)``."""
        return cls(
            left=(None,) + tuple(tuple(p) for p in lefts),
            right=tuple(tuple(p) for p in rights) + (None,),
        )

    def edges(self) -> Iterator[tuple[int, tuple[int, ...], tuple[int, ...]]]:
        for s in range(1, self.n):
            yield s, self.right[s - 1], self.left[s]


def validate_structure(inst: Instance, lay: Layout) -> None:
    if lay.n != inst.n or len(lay.right) != inst.n:
        raise LayoutError(f"layout has {lay.n} stations, instance has {inst.n}")
    if lay.left[0] is not None or lay.right[-1] is not None:
        raise LayoutError("station 1 has no left side and station n no right side")
    for s in range(1, inst.n + 1):
        prof = inst.profiles[s]
        if s > 1:
            p = lay.left[s - 1]
            if len(p) != len(prof.left) or set(p) != prof.left:
                raise LayoutError(f"left side of station {s} should hold {sorted(prof.left)}, got {p}")
        if s < inst.n:
            p = lay.right[s - 1]
            if len(p) != len(prof.right) or set(p) != prof.right:
                raise LayoutError(f"right side of station {s} should hold {sorted(prof.right)}, got {p}")


def layout_crossings(inst: Instance, lay: Layout) -> int:
    validate_structure(inst, lay)
    return sum(inversions(r, l) for _, r, l in lay.edges())


def check_admissible(inst: Instance, lay: Layout) -> bool:
    """Lines passing through a station keep the same relative order on both sides."""
    validate_structure(inst, lay)
    for s in range(2, inst.n):
        passing = inst.profiles[s].passing
        if restrict(lay.left[s - 1], passing) != restrict(lay.right[s - 1], passing):
            return False
    return True


def _peel(perm: Sequence[int], ends) -> tuple[list[int], list[int], list[int]]:
    """Split ``perm`` into its top run of ``ends`` lines, the middle, and its bottom run."""
    lo, hi = 0, len(perm)
    while lo < hi and perm[lo] in ends:
        lo += 1
    while hi > lo and perm[hi - 1] in ends:
        hi -= 1
    return list(perm[:lo]), list(perm[lo:hi]), list(perm[hi:])


def side_is_peripheral(perm: Sequence[int], ends) -> bool:
    """All ``ends`` lines sit in the extreme blocks of ``perm``."""
    _, mid, _ = _peel(perm, ends)
    return not any(x in ends for x in mid)


def check_periphery(inst: Instance, lay: Layout) -> bool:
    validate_structure(inst, lay)
    for s in range(1, inst.n + 1):
        prof = inst.profiles[s]
        if s > 1 and not side_is_peripheral(lay.left[s - 1], prof.term_left):
            return False
        if s < inst.n and not side_is_peripheral(lay.right[s - 1], prof.term_right):
            return False
    return True


def side_labels(perm: Sequence[int], ends) -> dict[int, Side]:
    """Read Top/Bottom for each end on one side; an all-ends side reads as Top."""
    top, mid, bottom = _peel(perm, ends)
    if any(x in ends for x in mid):
        raise LayoutError(f"side {tuple(perm)} violates the periphery condition")
    if not mid:
        return {x: TOP for x in perm}
    out = {x: TOP for x in top}
    out.update({x: BOTTOM for x in bottom})
    return out


def consistent_side_labels(perm: Sequence[int], ends) -> list[dict[int, Side]]:
    """Every Top/Bottom reading of ``ends`` that ``perm`` realizes.

    When non-ending lines are present the reading is unique; otherwise each
    split of ``perm`` into a top run and a bottom run counts.
    """
    top, mid, bottom = _peel(perm, ends)
    if any(x in ends for x in mid):
        return []
    if mid:
        out = {x: TOP for x in top}
        out.update({x: BOTTOM for x in bottom})
        return [out]
    return [
        {x: (TOP if k < cut else BOTTOM) for k, x in enumerate(perm)}
        for cut in range(len(perm) + 1)
    ]


def assignment_of(inst: Instance, lay: Layout) -> AssignmentVector:
    """Recover the end sides realized by a periphery-respecting layout."""
    validate_structure(inst, lay)
    lefts: dict[int, Side] = {}
    rights: dict[int, Side] = {}
    for s in range(1, inst.n + 1):
        prof = inst.profiles[s]
        if s < inst.n and prof.term_right:
            lefts.update(side_labels(lay.right[s - 1], prof.term_right))
        if s > 1 and prof.term_left:
            rights.update(side_labels(lay.left[s - 1], prof.term_left))
    return tuple(EndAssignment(lefts[ln.id], rights[ln.id]) for ln in inst.lines)


def flip_assignment(av: Sequence[EndAssignment]) -> AssignmentVector:
    return tuple(EndAssignment(a.left.flip(), a.right.flip()) for a in av)


def assignment_code(av: Sequence[EndAssignment]) -> int:
    """Integer whose binary digits (Top=0, line id order, left before right) encode ``av``."""
    code = 0
    for a in av:
        code = (code << 2) | (a.left.bit << 1) | a.right.bit
    return code


def crossing_edges(inst: Instance, lay: Layout) -> list[tuple[int, int, int]]:
    """Every crossing as ``(s, a, b)``: lines ``a < b`` swap on edge ``(s, s+1)``."""
    out = []
    for s, r, l in lay.edges():
        pos = {x: k for k, x in enumerate(l)}
        for u in range(len(r)):
            for v in range(u + 1, len(r)):
                if pos[r[u]] > pos[r[v]]:
                    out.append((s, min(r[u], r[v]), max(r[u], r[v])))
    return out
