"""Dynamic program over station sides, exponential only in the multiplicity.

The table of a side maps each candidate key to the fewest crossings of any
partial layout ending in it. Only arrangements an optimal layout can use are
generated, no more than ``2^k`` per side:

* crossings happen only on the edge entering the station where the earlier
  of the two lines ends, so going from the right side of ``s`` to the left
  side of ``s + 1`` only moves the lines ending at ``s + 1`` to the head or
  the tail (keeping their order);
* the lines starting at a station go to the head or the tail of the passing
  block.

A key is a tuple of blocks read top to bottom. The lines starting at one
station on one side form a block; their mutual order is left open until the
traceback knows where each of them leaves, and then fixed so that they never
cross. On a left side the lines ending there form a head and a tail block
since only their exit side matters from then on. Flattening a key gives a
permutation in the restricted set (earliest right end outermost).

Left-side keys with the same passing blocks produce the same right-side
successors, so only the cheapest one per class is expanded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .exact import SolveResult
from .model import (
    Instance,
    InstanceError,
    Layout,
    assignment_of,
    inversions,
    layout_crossings,
    multiplicity,
    restrict,
    side_is_peripheral,
)

PermKey = tuple  # line ids top to bottom, or a tuple of such blocks


def _peelable(perm: Sequence[int], rank) -> bool:
    """Lines can be removed from the two ends of ``perm`` in ascending ``rank`` order.

    Lines sharing a rank may leave in one round from either end.
    """
    lo, hi = 0, len(perm)
    for r in sorted({rank(x) for x in perm}):
        while lo < hi and rank(perm[lo]) == r:
            lo += 1
        while hi > lo and rank(perm[hi - 1]) == r:
            hi -= 1
        if any(rank(perm[p]) == r for p in range(lo, hi)):
            return False
    return True


def _check_set(perm, expected, what):
    if len(perm) != len(expected) or set(perm) != expected:
        raise InstanceError(f"{what} must hold exactly {sorted(expected)}, got {tuple(perm)}")


def pi_valid_left(inst: Instance, s: int, perm: Sequence[int]) -> bool:
    """Membership in the restricted set of left-side permutations of station ``s``."""
    prof = inst.profiles[s]
    _check_set(perm, prof.left, f"left side of station {s}")
    if not side_is_peripheral(perm, prof.term_left):
        return False
    # left ends laid out in parallel: the latest start must be outermost first
    start = lambda x: -inst.lines[x].i  # noqa: E731
    if not _peelable(restrict(perm, prof.term_left), start):
        return False
    return _peelable(restrict(perm, prof.passing), start)


def pi_valid_right(inst: Instance, s: int, perm: Sequence[int]) -> bool:
    """Membership in the restricted set of right-side permutations of station ``s``."""
    prof = inst.profiles[s]
    _check_set(perm, prof.right, f"right side of station {s}")
    if not side_is_peripheral(perm, prof.term_right):
        return False
    if not _peelable(restrict(perm, prof.term_right), lambda x: inst.lines[x].j):
        return False
    return _peelable(restrict(perm, prof.right - prof.term_right), lambda x: -inst.lines[x].i)


def _as_blocks(key) -> tuple[tuple[int, ...], ...]:
    if key and not isinstance(key[0], tuple):
        return tuple((x,) for x in key)
    return tuple(key)


def flatten(key) -> tuple[int, ...]:
    """The top-to-bottom permutation a key stands for."""
    if key and isinstance(key[0], tuple):
        return tuple(x for block in key for x in block)
    return tuple(key)


def _mate_inversions(before: Sequence[tuple[int, ...]], after: Sequence[int]) -> int:
    pos = {x: k for k, x in enumerate(after)}
    return sum(
        1
        for block in before
        for u in range(len(block))
        for v in range(u + 1, len(block))
        if pos[block[u]] > pos[block[v]]
    )


def generate_left_perms(right_perm, ends: Iterable[int]) -> list[tuple[PermKey, int]]:
    """Successors on the far side of an edge, with their crossing counts.

    The lines in ``ends`` keep their relative order; the first ``p`` of them
    go to the head and the rest to the tail, for every split ``p``.

    ``right_perm`` is either a plain permutation or a tuple of blocks (lines
    that started together on the same side); lines of one block are free to
    pass each other, so swaps inside a block are not counted.
    """
    blocked = bool(right_perm) and isinstance(right_perm[0], tuple)
    blocks = _as_blocks(right_perm)
    flat = flatten(blocks)
    ends = set(ends)
    moving = [x for x in flat if x in ends]
    staying = tuple(b for b in (tuple(x for x in blk if x not in ends) for blk in blocks) if b)
    out: dict[PermKey, int] = {}
    for p in range(len(moving) + 1):
        moved = tuple(moving[:p]) + flatten(staying) + tuple(moving[p:])
        if blocked:
            # lines leaving here no longer matter, only which way they went;
            # ids ascend with the left end among lines sharing a right end
            head = tuple(sorted(moving[:p], reverse=True))
            tail = tuple(sorted(moving[p:]))
            key = ((head,) if head else ()) + staying + ((tail,) if tail else ())
        else:
            key = moved
        cost = inversions(flat, moved) - _mate_inversions(blocks, moved)
        if key not in out or cost < out[key]:
            out[key] = cost
    return list(out.items())


def generate_right_perms(inst: Instance, left_perm, ends: Iterable[int], starts: Iterable[int]) -> list[PermKey]:
    """Right-side permutations reachable inside a station.

    ``ends`` leave, the passing order is kept, and every subset of
    ``starts`` is placed above the rest, earliest right end outermost on both
    sides. With a block key each of the two groups of starters becomes one
    block.
    """
    blocked = bool(left_perm) and isinstance(left_perm[0], tuple)
    blocks = _as_blocks(left_perm)
    ends = set(ends)
    starts = sorted(starts, key=lambda x: inst.lines[x].j)
    passing = tuple(b for b in (tuple(x for x in blk if x not in ends) for blk in blocks) if b)
    if set(flatten(passing)) & set(starts):
        raise InstanceError("starting lines cannot already pass through the station")
    out: dict[PermKey, None] = {}
    for mask in range(1 << len(starts)):
        up = tuple(x for b, x in enumerate(starts) if not (mask >> b) & 1)
        down = tuple(x for b, x in enumerate(starts) if (mask >> b) & 1)[::-1]
        cand = ((up,) if up else ()) + passing + ((down,) if down else ())
        out.setdefault(cand if blocked else flatten(cand), None)
    return list(out)


@dataclass
class DpState:
    """One side table: key -> (value, predecessor key on the previous side)."""

    station: int
    side: str
    table: dict

    def best(self) -> tuple[int, PermKey]:
        return min((v, key) for key, (v, _) in self.table.items())


def _merge(table: dict, key: PermKey, value: int, pred: PermKey | None) -> None:
    old = table.get(key)
    if old is None or (value, pred or ()) < (old[0], old[1] or ()):
        table[key] = (value, pred)


def _restrict_blocks(key, keep) -> PermKey:
    return tuple(b for b in (tuple(x for x in blk if x in keep) for blk in key) if b)


def run_dp(inst: Instance, validate: bool = False) -> list[DpState]:
    """Forward pass; returns the side tables in order (right of 1, left of 2, right of 2, ...)."""
    k = multiplicity(inst)
    bound = 1 << k
    prof = inst.profiles[1]
    first: dict = {}
    for key in sorted(generate_right_perms(inst, (), (), prof.term_right)):
        _merge(first, _as_blocks(key), 0, None)
    states = [DpState(1, "right", first)]
    for s in range(2, inst.n + 1):
        prof = inst.profiles[s]
        prev = states[-1].table
        left: dict = {}
        for src in sorted(prev):
            base = prev[src][0]
            for key, cost in generate_left_perms(src, prof.term_left):
                _merge(left, key, base + cost, src)
        states.append(DpState(s, "left", left))
        if s == inst.n:
            break
        classes: dict[PermKey, tuple[int, PermKey]] = {}
        for key in sorted(left):
            cls = _restrict_blocks(key, prof.passing)
            cand = (left[key][0], key)
            if cls not in classes or cand < classes[cls]:
                classes[cls] = cand
        right: dict = {}
        for cls in sorted(classes):
            value, rep = classes[cls]
            for key in generate_right_perms(inst, rep, prof.term_left, prof.term_right):
                _merge(right, _as_blocks(key), value, rep)
        states.append(DpState(s, "right", right))
    for st in states:
        if len(st.table) > bound:
            raise AssertionError(f"{st.side} side of station {st.station} stores {len(st.table)} > 2^{k} keys")
        if validate:
            check = pi_valid_left if st.side == "left" else pi_valid_right
            for key in st.table:
                if not check(inst, st.station, flatten(key)):
                    raise AssertionError(
                        f"{flatten(key)} on the {st.side} side of station {st.station} is not in the restricted set"
                    )
    return states


def _resolve(inst: Instance, keys: list) -> tuple[list, list]:
    """Turn the traced keys into concrete permutations.

    Inside a block, lines that leave at the top go above those that leave
    at the bottom; lines leaving at the top are ordered by ascending right
    end, those leaving at the bottom by descending right end, so no two
    members of a block ever swap.
    """
    right_keys = keys[0::2]
    left_keys = keys[1::2]
    exits_up: dict[int, bool] = {}
    for s, key in enumerate(left_keys, start=2):
        ends = inst.profiles[s].term_left
        flat = flatten(key)
        first_stay = next((p for p, x in enumerate(flat) if x not in ends), len(flat))
        for p, x in enumerate(flat):
            if x in ends:
                exits_up[x] = p < first_stay
    rank = {}
    for x, up in exits_up.items():
        j = inst.lines[x].j
        rank[x] = (0, j) if up else (1, -j)
    rights = [tuple(x for blk in key for x in sorted(blk, key=rank.__getitem__)) for key in right_keys]
    lefts = []
    for s, prev in enumerate(rights, start=2):
        ends = inst.profiles[s].term_left
        up = [x for x in prev if x in ends and exits_up[x]]
        down = [x for x in prev if x in ends and not exits_up[x]]
        lefts.append(tuple(up + [x for x in prev if x not in ends] + down))
    return rights, lefts


def solve_fpt(inst: Instance, validate: bool = False) -> SolveResult:
    states = run_dp(inst, validate=validate)
    value, key = states[-1].best()
    # states alternate right/left starting with the right side of station 1
    perms = [key]
    for st in reversed(states[1:]):
        key = st.table[key][1]
        perms.append(key)
    perms.reverse()
    rights, lefts = _resolve(inst, perms)
    lay = Layout.from_edges(rights, lefts)
    crossings = layout_crossings(inst, lay)
    if crossings != value:
        raise AssertionError(f"traceback has {crossings} crossings, table says {value}")
    stats = {
        "algorithm": "fpt",
        "multiplicity": multiplicity(inst),
        "max_table": max(len(st.table) for st in states),
        "table_sizes": [len(st.table) for st in states],
    }
    return SolveResult(value, assignment_of(inst, lay), lay, stats)
