"""Exact solver: enumerate left-end sides, pick right ends greedily.

Whether a line ``l`` crosses a later-ending partner depends only on both
ends of ``l`` and the left end of the partner, so once all left ends are
fixed each right end can be chosen on its own. The ``2^|L|`` left-end maps
are walked in Gray-code order so each step flips a single line and only the
lines whose counters mention it are re-scored.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .model import (
    BOTTOM,
    TOP,
    EndAssignment,
    Instance,
    InstanceError,
    Layout,
    PairType,
    Side,
    count_forced_crossings,
)
from .pa_solver import solve_pa

log = logging.getLogger(__name__)

DEFAULT_CAP = 30


class EnumerationCapError(InstanceError):
    pass


@dataclass(frozen=True)
class SolveResult:
    crossings: int
    assignment: tuple[EndAssignment, ...]
    layout: Layout
    stats: dict = field(default_factory=dict, compare=False)


def _competitors(inst: Instance):
    """For each line, its later-ending partners grouped by pair type.

    A partner ``k`` of ``j`` satisfies ``i_k < j_j < j_k``; the pair is then
    of type A, C_l or I with ``j`` first.
    """
    comp = {ln.id: {PairType.A: [], PairType.CL: [], PairType.I: []} for ln in inst.lines}
    cr_pairs = []
    for a, b, t in inst.pairs:
        if t in comp[a]:
            comp[a][t].append(b)
        elif t is PairType.CR:
            cr_pairs.append((a, b))
    return comp, cr_pairs


def _right_costs(left: Side, a_top: int, n_a: int, cl_top: int, n_cl: int, n_i: int) -> tuple[int, int]:
    """Crossings against later-ending partners for right = Top and right = Bottom."""
    if left is TOP:
        return a_top, (n_a - a_top) + (n_cl - cl_top) + n_i
    return a_top + cl_top + n_i, n_a - a_top


def greedy_right_ends(
    inst: Instance, left_sides: Mapping[int, Side] | Sequence[Side], order: Sequence[int] | None = None
) -> tuple[tuple[EndAssignment, ...], int]:
    """Complete ``left_sides`` with the cheaper right end for every line (Top on ties)."""
    if len(left_sides) != len(inst.lines) or any(ln.id not in range(len(left_sides)) for ln in inst.lines):
        raise InstanceError("left sides must cover every line")
    lefts = [left_sides[ln.id] for ln in inst.lines]
    comp, _ = _competitors(inst)
    rights: list[Side | None] = [None] * len(lefts)
    for j in (order if order is not None else range(len(lefts))):
        c = comp[j]
        a_top = sum(lefts[k] is TOP for k in c[PairType.A])
        cl_top = sum(lefts[k] is TOP for k in c[PairType.CL])
        up, down = _right_costs(lefts[j], a_top, len(c[PairType.A]), cl_top, len(c[PairType.CL]), len(c[PairType.I]))
        rights[j] = TOP if up <= down else BOTTOM
    av = tuple(EndAssignment(lf, rt) for lf, rt in zip(lefts, rights))
    return av, count_forced_crossings(inst, av)


def _scan(inst: Instance, fixed: Sequence[tuple[int, Side]], free: Sequence[int]) -> tuple[int, int]:
    """Best ``(crossings, code)`` over all sides of ``free`` lines with ``fixed`` held."""
    nl = len(inst.lines)
    comp, cr_pairs = _competitors(inst)
    lefts = [TOP] * nl
    for x, side in fixed:
        lefts[x] = side
    n_a = [len(comp[j][PairType.A]) for j in range(nl)]
    n_cl = [len(comp[j][PairType.CL]) for j in range(nl)]
    n_i = [len(comp[j][PairType.I]) for j in range(nl)]
    a_top = [sum(lefts[k] is TOP for k in comp[j][PairType.A]) for j in range(nl)]
    cl_top = [sum(lefts[k] is TOP for k in comp[j][PairType.CL]) for j in range(nl)]
    # reverse index: who counts line x among its A / C_l partners
    a_of = [[] for _ in range(nl)]
    cl_of = [[] for _ in range(nl)]
    for j in range(nl):
        for k in comp[j][PairType.A]:
            a_of[k].append(j)
        for k in comp[j][PairType.CL]:
            cl_of[k].append(j)
    cr_of = [[] for _ in range(nl)]
    for p, (a, b) in enumerate(cr_pairs):
        cr_of[a].append(p)
        cr_of[b].append(p)
    touched = [sorted({x, *a_of[x], *cl_of[x]}) for x in range(nl)]

    rights = [TOP] * nl
    cost = [0] * nl

    def settle(j: int) -> None:
        up, down = _right_costs(lefts[j], a_top[j], n_a[j], cl_top[j], n_cl[j], n_i[j])
        rights[j], cost[j] = (TOP, up) if up <= down else (BOTTOM, down)

    def cr_hit(p: int) -> int:
        a, b = cr_pairs[p]
        return int(lefts[a] is not rights[a] and rights[b] is lefts[a])

    def bits(j: int) -> int:
        return ((lefts[j].bit << 1) | rights[j].bit) << (2 * (nl - 1 - j))

    for j in range(nl):
        settle(j)
    cr_state = [cr_hit(p) for p in range(len(cr_pairs))]
    total = sum(cost) + sum(cr_state)
    code = sum(bits(j) for j in range(nl))
    best = (total, code)
    for step in range(1, 1 << len(free)):
        x = free[(step & -step).bit_length() - 1]
        delta = 1 if lefts[x] is BOTTOM else -1
        for j in touched[x]:
            code -= bits(j)
            total -= cost[j]
        lefts[x] = lefts[x].flip()
        for j in a_of[x]:
            a_top[j] += delta
        for j in cl_of[x]:
            cl_top[j] += delta
        for j in touched[x]:
            settle(j)
            code += bits(j)
            total += cost[j]
        for j in touched[x]:
            for p in cr_of[j]:
                hit = cr_hit(p)
                total += hit - cr_state[p]
                cr_state[p] = hit
        if total <= best[0] and (total, code) < best:
            best = (total, code)
    return best


def _decode(code: int, nl: int) -> tuple[EndAssignment, ...]:
    sides = (TOP, BOTTOM)
    return tuple(
        EndAssignment(sides[(code >> (2 * (nl - 1 - x) + 1)) & 1], sides[(code >> (2 * (nl - 1 - x))) & 1])
        for x in range(nl)
    )


def fix_left_end(inst: Instance, cap: int = DEFAULT_CAP, threads: int = 1) -> SolveResult:
    nl = len(inst.lines)
    if nl > cap:
        raise EnumerationCapError(f"exact solver enumerates 2^|L| left ends and is capped at {cap} lines; instance has {nl}")
    # the last lines are enumerated inside each worker
    prefix = 0
    if threads > 1 and nl > 8:
        prefix = min(nl - 4, max(1, (threads - 1).bit_length() + 1))
    free = list(range(prefix, nl))
    jobs = []
    for pmask in range(1 << prefix):
        fixed = [(x, BOTTOM if (pmask >> (prefix - 1 - x)) & 1 else TOP) for x in range(prefix)]
        jobs.append(fixed)
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_scan, [inst] * len(jobs), jobs, [free] * len(jobs)))
    else:
        results = [_scan(inst, fixed, free) for fixed in jobs]
    crossings, code = min(results)
    av = _decode(code, nl)
    pa = solve_pa(inst, av)
    if pa.crossings != crossings:
        raise AssertionError(f"layout has {pa.crossings} crossings, assignment scored {crossings}")
    log.debug("fix_left_end: %d lines, %d masks, optimum %d", nl, 1 << nl, crossings)
    return SolveResult(crossings, av, pa.layout, {"masks": 1 << nl, "algorithm": "exact"})
