"""Minimum-crossing layouts for a fixed assignment of line ends.

The sweep keeps the permutation of the current edge. At each station the
lines ending there are pushed to their assigned extreme (every swap is one
crossing on the edge entering the station), then the lines starting there
are inserted at their assigned extreme. Only forced pairs ever swap, so the
layout realizes exactly :func:`count_forced_crossings`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .model import (
    TOP,
    EndAssignment,
    Instance,
    Layout,
    _check_assignment,
    inversions,
)


@dataclass(frozen=True)
class PaResult:
    crossings: int
    layout: Layout


def _starter_block(ids: Sequence[int], inst: Instance, av: Sequence[EndAssignment]) -> list[int]:
    # Lines leaving on the same side never swap with each other: those that
    # exit at the top are stacked earliest-ending outermost above those that
    # exit at the bottom, which are stacked earliest-ending innermost.  The
    # same top-to-bottom order works for the upper and the lower block.
    by_end = sorted(ids, key=lambda x: inst.lines[x].j)
    up = [x for x in by_end if av[x].right is TOP]
    down = [x for x in reversed(by_end) if av[x].right is not TOP]
    return up + down


def solve_pa(inst: Instance, av: Sequence[EndAssignment]) -> PaResult:
    _check_assignment(inst, av)
    lefts: list[tuple[int, ...]] = []
    rights: list[tuple[int, ...]] = []
    current: list[int] = []
    crossings = 0
    for s in range(1, inst.n + 1):
        prof = inst.profiles[s]
        if s > 1:
            ends = prof.term_left
            up = [x for x in current if x in ends and av[x].right is TOP]
            down = [x for x in current if x in ends and av[x].right is not TOP]
            mid = [x for x in current if x not in ends]
            arrived = up + mid + down
            crossings += inversions(current, arrived)
            lefts.append(tuple(arrived))
            current = mid
        if s < inst.n:
            starts = sorted(prof.term_right)
            up = _starter_block([x for x in starts if av[x].left is TOP], inst, av)
            down = _starter_block([x for x in starts if av[x].left is not TOP], inst, av)
            current = up + current + down
            rights.append(tuple(current))
    return PaResult(crossings, Layout.from_edges(rights, lefts))
