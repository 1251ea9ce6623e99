"""Slow reference solvers.

Nothing here is clever on purpose. ``brute_force_assignments`` scores every
one of the ``4^|L|`` end assignments with the forced-crossing table;
``enumerate_layouts`` never looks at that table and instead ranges over every
permutation of every station side, which makes it the ground truth the table
itself is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import permutations, product
from typing import Iterator, Sequence

import numpy as np

from .model import (
    ALL_END_ASSIGNMENTS,
    BOTTOM,
    TOP,
    EndAssignment,
    Instance,
    InstanceError,
    Layout,
    assignment_code,
    check_admissible,
    check_periphery,
    consistent_side_labels,
    inversions,
    multiplicity,
    pair_crosses,
    restrict,
    side_is_peripheral,
)

MAX_BRUTE_LINES = 12
MAX_LAYOUT_LINES = 4
MAX_LAYOUT_STATIONS = 6
MAX_NAIVE_K = 4

_SIDES = (TOP, BOTTOM)
INF = np.iinfo(np.int32).max // 4


class OracleGuardError(InstanceError):
    """The instance is too large for an exhaustive reference."""


def decode_assignment(code: int, nlines: int) -> tuple[EndAssignment, ...]:
    out = []
    for x in range(nlines):
        shift = 2 * (nlines - 1 - x)
        out.append(ALL_END_ASSIGNMENTS[(code >> shift) & 3])
    return tuple(out)


@dataclass(frozen=True)
class OracleResult:
    min_crossings: int
    nlines: int
    codes: tuple[int, ...]

    @cached_property
    def argmin(self) -> list[tuple[EndAssignment, ...]]:
        """All optimal assignments, ascending by canonical code."""
        return [decode_assignment(c, self.nlines) for c in self.codes]


def _pair_table(t) -> np.ndarray:
    tab = np.zeros((2, 2, 2, 2), dtype=np.int8)
    for la, ra, lb, rb in product(range(2), repeat=4):
        a = EndAssignment(_SIDES[la], _SIDES[ra])
        b = EndAssignment(_SIDES[lb], _SIDES[rb])
        tab[la, ra, lb, rb] = pair_crosses(t, a, b)
    return tab


def assignment_scores(inst: Instance) -> np.ndarray:
    """Forced-crossing count of every assignment, indexed by canonical code."""
    nl = len(inst.lines)
    total = np.zeros((2,) * (2 * nl), dtype=np.int16)
    for a, b, t in inst.pairs:
        tab = _pair_table(t)
        if not tab.any():
            continue
        if a > b:
            # broadcasting needs the axes in ascending line order
            a, b, tab = b, a, tab.transpose(2, 3, 0, 1)
        shape = [1] * (2 * nl)
        for axis in (2 * a, 2 * a + 1, 2 * b, 2 * b + 1):
            shape[axis] = 2
        total += tab.reshape(shape)
    return total.reshape(-1)


def brute_force_assignments(inst: Instance) -> OracleResult:
    if len(inst.lines) > MAX_BRUTE_LINES:
        raise OracleGuardError(
            f"brute force is limited to {MAX_BRUTE_LINES} lines, instance has {len(inst.lines)}"
        )
    scores = assignment_scores(inst)
    best = int(scores.min())
    codes = tuple(int(c) for c in np.flatnonzero(scores == best))
    return OracleResult(best, len(inst.lines), codes)


def _guard_layouts(inst: Instance) -> None:
    if len(inst.lines) > MAX_LAYOUT_LINES or inst.n > MAX_LAYOUT_STATIONS:
        raise OracleGuardError(
            f"layout enumeration is limited to {MAX_LAYOUT_LINES} lines and "
            f"{MAX_LAYOUT_STATIONS} stations, instance has {len(inst.lines)} and {inst.n}"
        )


@lru_cache(maxsize=None)
def _perm_index_inversions(m: int) -> np.ndarray:
    perms = list(permutations(range(m)))
    inv = np.zeros((len(perms), len(perms)), dtype=np.int32)
    for u, p in enumerate(perms):
        for v, q in enumerate(perms):
            inv[u, v] = inversions(p, q)
    return inv


def _end_mask(bits: dict[tuple[int, int], np.ndarray], labels: dict, which: int) -> np.ndarray:
    mask = None
    for x, side in labels.items():
        m = bits[(x, which)] == side.bit
        mask = m if mask is None else (mask & m)
    return mask


def layout_table(inst: Instance) -> np.ndarray:
    """Minimum layout crossings for every assignment, indexed by canonical code.

    Each side of each station ranges over all permutations of its lines;
    only admissible, periphery-respecting combinations count, and a layout
    counts for every assignment it realizes. The minimum is accumulated edge
    by edge (an exact min-plus sweep over the full product of sides), so no
    crossing rule is assumed anywhere.
    """
    _guard_layouts(inst)
    nl = len(inst.lines)
    size = 4 ** nl
    codes = np.arange(size)
    bits = {}
    for x in range(nl):
        shift = 2 * (nl - 1 - x)
        bits[(x, 0)] = (codes >> (shift + 1)) & 1
        bits[(x, 1)] = (codes >> shift) & 1

    def labelled_mask(perm, ends, which):
        mask = np.zeros(size, dtype=bool)
        for labels in consistent_side_labels(perm, ends):
            m = _end_mask(bits, labels, which)
            mask |= True if m is None else m
        return mask

    prof = inst.profiles[1]
    right_perms = list(permutations(sorted(prof.right)))
    state = np.full((len(right_perms), size), INF, dtype=np.int64)
    for r, perm in enumerate(right_perms):
        state[r, labelled_mask(perm, prof.term_right, 0)] = 0

    for s in range(2, inst.n + 1):
        prof = inst.profiles[s]
        # right_perms enumerate the same sorted line set as the left side of s
        left_perms = right_perms
        inv = _perm_index_inversions(len(prof.left))
        arrived = (state[:, None, :] + inv[:, :, None]).min(axis=0)
        for q, perm in enumerate(left_perms):
            arrived[q, ~labelled_mask(perm, prof.term_left, 1)] = INF
        if s == inst.n:
            return arrived.min(axis=0)
        right_perms = list(permutations(sorted(prof.right)))
        passing = prof.passing
        by_passing: dict[tuple, np.ndarray] = {}
        for q, perm in enumerate(left_perms):
            key = restrict(perm, passing)
            row = by_passing.get(key)
            by_passing[key] = arrived[q].copy() if row is None else np.minimum(row, arrived[q])
        state = np.full((len(right_perms), size), INF, dtype=np.int64)
        for r, perm in enumerate(right_perms):
            row = by_passing.get(restrict(perm, passing))
            if row is None:
                continue
            state[r] = np.where(labelled_mask(perm, prof.term_right, 0), row, INF)
    raise AssertionError("unreachable")


def enumerate_layouts(inst: Instance, av: Sequence[EndAssignment] | None = None) -> int:
    """Minimum crossings over all layouts (realizing ``av`` when given)."""
    table = layout_table(inst)
    if av is None:
        return int(table.min())
    if len(av) != len(inst.lines):
        raise InstanceError(f"assignment covers {len(av)} lines, instance has {len(inst.lines)}")
    return int(table[assignment_code(av)])


def iter_layouts(inst: Instance) -> Iterator[Layout]:
    """Literally every admissible, periphery-respecting layout (tiny instances only)."""
    _guard_layouts(inst)
    sides = []
    for s in range(1, inst.n):
        ids = sorted(inst.profiles[s].right)
        sides.append(list(permutations(ids)))
    for rights in product(*sides):
        for lefts in product(*sides):
            lay = Layout.from_edges(rights, lefts)
            if check_admissible(inst, lay) and check_periphery(inst, lay):
                yield lay


def naive_dp(inst: Instance) -> int:
    """Side-by-side DP over every periphery-respecting permutation.

    Right-side values copy the best left-side value with the same order of
    passing lines; left-side values add the inversions against each
    permutation of the previous right side.
    """
    k = multiplicity(inst)
    if k > MAX_NAIVE_K:
        raise OracleGuardError(f"naive DP is limited to multiplicity {MAX_NAIVE_K}, instance has {k}")
    prof = inst.profiles[1]
    f_right = {
        p: 0 for p in permutations(sorted(prof.right)) if side_is_peripheral(p, prof.term_right)
    }
    for s in range(2, inst.n + 1):
        prof = inst.profiles[s]
        f_left = {}
        for p in permutations(sorted(prof.left)):
            if not side_is_peripheral(p, prof.term_left):
                continue
            f_left[p] = min(v + inversions(q, p) for q, v in f_right.items())
        if s == inst.n:
            return min(f_left.values())
        passing = prof.passing
        best: dict[tuple, int] = {}
        for p, v in f_left.items():
            key = restrict(p, passing)
            best[key] = min(v, best.get(key, v))
        f_right = {}
        for p in permutations(sorted(prof.right)):
            if not side_is_peripheral(p, prof.term_right):
                continue
            key = restrict(p, passing)
            if key in best:
                f_right[p] = best[key]
    raise AssertionError("unreachable")
