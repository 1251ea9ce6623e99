"""Instance families shared by the test modules."""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations

from mlcmp.model import Instance

I_A = Instance.from_intervals(4, [(1, 3), (2, 4)])
I_TRI = Instance.from_intervals(6, [(1, 4), (2, 5), (3, 6)])

# one two-line shape per pair type
TWO_LINE_SHAPES = {
    "A": Instance.from_intervals(4, [(1, 3), (2, 4)]),
    "Cl": Instance.from_intervals(4, [(1, 3), (1, 4)]),
    "Cr": Instance.from_intervals(4, [(2, 4), (1, 4)]),
    "I": Instance.from_intervals(4, [(2, 3), (1, 4)]),
    "D": Instance.from_intervals(4, [(1, 2), (3, 4)]),
}


@lru_cache(maxsize=None)
def shifted_suite(max_lines: int, max_n: int) -> tuple[Instance, ...]:
    """Every line set up to translation: some line starts at 1 and some ends at ``n``.

    The empty instance on two stations is included once.
    """
    out = [Instance(2)]
    for n in range(2, max_n + 1):
        ivs = [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]
        for m in range(1, max_lines + 1):
            for combo in combinations(ivs, m):
                if min(i for i, _ in combo) == 1 and max(j for _, j in combo) == n:
                    out.append(Instance.from_intervals(n, combo))
    return tuple(out)


@lru_cache(maxsize=None)
def compressed_suite(max_lines: int, max_n: int) -> tuple[Instance, ...]:
    """Line sets in which every station is an end of some line.

    Stations touched by no line end only stretch edges; any instance
    reduces to one of these by deleting such stations, so this family
    covers every relative arrangement of up to ``max_lines`` lines.
    """
    out = [Instance(2)]
    for n in range(2, max_n + 1):
        if n > 2 * max_lines:
            break
        ivs = [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]
        for m in range(1, max_lines + 1):
            if 2 * m < n:
                continue
            for combo in combinations(ivs, m):
                ends = {i for i, _ in combo} | {j for _, j in combo}
                if len(ends) == n:
                    out.append(Instance.from_intervals(n, combo))
    return tuple(out)


def random_instance(rng: random.Random, max_n: int, max_lines: int, min_n: int = 2) -> Instance:
    n = rng.randint(min_n, max_n)
    ivs = [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]
    m = rng.randint(0, min(max_lines, len(ivs)))
    return Instance.from_intervals(n, rng.sample(ivs, m))


def random_instances(seed: int, count: int, max_n: int, max_lines: int, min_n: int = 2) -> list[Instance]:
    rng = random.Random(seed)
    return [random_instance(rng, max_n, max_lines, min_n) for _ in range(count)]


def random_bounded_instances(
    seed: int, count: int, max_n: int, max_lines: int, max_k: int
) -> list[Instance]:
    """Random instances with multiplicity at most ``max_k`` (lines that would overload an edge are skipped)."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, max_n)
        target = rng.randint(0, max_lines)
        load = [0] * (n + 1)
        chosen = set()
        for _ in range(20 * max(target, 1)):
            if len(chosen) == target:
                break
            i = rng.randint(1, n - 1)
            j = rng.randint(i + 1, n)
            if (i, j) in chosen or any(load[e] >= max_k for e in range(i, j)):
                continue
            chosen.add((i, j))
            for e in range(i, j):
                load[e] += 1
        out.append(Instance.from_intervals(n, sorted(chosen)))
    return out


# acceptance criterion number -> its pass/fail line, printed in the pytest summary
ACCEPTANCE_LINES: dict[int, str] = {}
