"""Command-line front end.

Subcommands: ``solve``, ``decide``, ``gen``, ``render``, ``bench``. Instance
files look like::

    stations 4
    # comment
    line 1 3
    line 2 4

Exit codes: 0 success (or "yes" for ``decide``), 1 "no" or a failed
``--check``, 2 errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import random
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from .decision import decide_zero_crossing
from .exact import DEFAULT_CAP, SolveResult, fix_left_end
from .fpt import solve_fpt
from .model import (
    EndAssignment,
    Instance,
    InstanceError,
    Layout,
    LayoutError,
    Side,
    _peel,
    check_admissible,
    check_periphery,
    consistent_side_labels,
    layout_crossings,
    multiplicity,
    validate_structure,
)
from .oracle import brute_force_assignments
from .pa_solver import solve_pa

log = logging.getLogger("mlcmp")

ALGORITHMS = ("exact", "fpt", "oracle")
GEN_ATTEMPTS = 200  # restarts before giving up; each restart draws up to 50 * lines intervals

# ---------------------------------------------------------------- instance files


class InstanceFileError(InstanceError):
    def __init__(self, msg: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno is not None else msg)


def parse_instance(text: str) -> Instance:
    n = None
    intervals = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if not body:
            continue
        word, args = body[0], body[1:]
        try:
            nums = [int(a) for a in args]
        except ValueError:
            raise InstanceFileError(f"expected integers after {word!r}, got {' '.join(args)!r}", lineno) from None
        if word == "stations":
            if n is not None:
                raise InstanceFileError("'stations' given twice", lineno)
            if intervals:
                raise InstanceFileError("'stations' must come before any 'line'", lineno)
            if len(nums) != 1:
                raise InstanceFileError("'stations' takes one number", lineno)
            n = nums[0]
        elif word == "line":
            if n is None:
                raise InstanceFileError("'line' before 'stations'", lineno)
            if len(nums) != 2:
                raise InstanceFileError("'line' takes two numbers", lineno)
            intervals.append((lineno, nums[0], nums[1]))
        else:
            raise InstanceFileError(f"unknown keyword {word!r}", lineno)
    if n is None:
        raise InstanceFileError("missing 'stations' line")
    try:
        Instance(n)
    except InstanceError as e:
        raise InstanceFileError(str(e)) from None
    seen = {}
    for lineno, i, j in intervals:
        if not 1 <= i < j <= n:
            raise InstanceFileError(f"line [{i}, {j}] needs 1 <= i < j <= {n}", lineno)
        if (i, j) in seen:
            raise InstanceFileError(f"duplicate line [{i}, {j}] (first on line {seen[(i, j)]})", lineno)
        seen[(i, j)] = lineno
    return Instance.from_intervals(n, [(i, j) for _, i, j in intervals])


def format_instance(inst: Instance) -> str:
    out = [f"stations {inst.n}"]
    out += [f"line {i} {j}" for i, j in inst.intervals]
    return "\n".join(out) + "\n"


def read_instance(path: str) -> Instance:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_instance(text)


# ---------------------------------------------------------------- reports


def _letters(a: EndAssignment) -> str:
    return a.left.value + a.right.value


@dataclass
class ResultReport:
    algorithm: str
    crossings: int
    stations: int
    lines: list[tuple[int, int]]
    assignment: list[str]
    left: list[list[int] | None]
    right: list[list[int] | None]
    wall_time: float
    checks: dict = field(default_factory=dict)

    @classmethod
    def from_result(cls, inst: Instance, algorithm: str, res: SolveResult, wall: float) -> "ResultReport":
        lay = res.layout
        return cls(
            algorithm=algorithm,
            crossings=res.crossings,
            stations=inst.n,
            lines=[list(iv) for iv in inst.intervals],
            assignment=[_letters(a) for a in res.assignment],
            left=[None if p is None else list(p) for p in lay.left],
            right=[None if p is None else list(p) for p in lay.right],
            wall_time=wall,
        )

    @classmethod
    def from_dict(cls, d: dict) -> "ResultReport":
        return cls(**{k: d[k] for k in cls.__dataclass_fields__ if k in d})

    def instance(self) -> Instance:
        inst = Instance.from_intervals(self.stations, self.lines)
        if [list(iv) for iv in inst.intervals] != [list(iv) for iv in self.lines]:
            raise LayoutError("report lines are not in canonical order")
        return inst

    def layout(self) -> Layout:
        return Layout(
            left=tuple(None if p is None else tuple(p) for p in self.left),
            right=tuple(None if p is None else tuple(p) for p in self.right),
        )

    def end_assignment(self) -> tuple[EndAssignment, ...]:
        return tuple(EndAssignment(Side(s[0]), Side(s[1])) for s in self.assignment)

    def to_text(self) -> str:
        out = [
            f"algorithm   {self.algorithm}",
            f"crossings   {self.crossings}",
            f"wall_time   {self.wall_time:.6f} s",
            "assignment",
        ]
        for k, ((i, j), a) in enumerate(zip(self.lines, self.assignment)):
            out.append(f"  line {k:<3} [{i}, {j}]  {a}")
        out.append("layout")
        for s in range(1, self.stations + 1):
            lf = "-" if self.left[s - 1] is None else " ".join(map(str, self.left[s - 1]))
            rt = "-" if self.right[s - 1] is None else " ".join(map(str, self.right[s - 1]))
            out.append(f"  station {s:<3} left: {lf or '.'}  right: {rt or '.'}")
        for name, value in self.checks.items():
            out.append(f"check {name}: {value}")
        return "\n".join(out) + "\n"

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1, sort_keys=True) + "\n"


def revalidate(report: ResultReport, inst: Instance | None = None) -> list[str]:
    """Discrepancies between a report and the model; empty when it checks out."""
    problems = []
    try:
        if inst is None:
            inst = report.instance()
        lay = report.layout()
        validate_structure(inst, lay)
    except (InstanceError, LayoutError) as e:
        return [str(e)]
    if not check_admissible(inst, lay):
        problems.append("layout is not admissible")
    if not check_periphery(inst, lay):
        problems.append("layout violates the periphery condition")
    count = layout_crossings(inst, lay)
    if count != report.crossings:
        problems.append(f"layout has {count} crossings, report says {report.crossings}")
    try:
        av = report.end_assignment()
    except (ValueError, IndexError):
        return problems + ["assignment letters must be U or D"]
    if len(av) != len(inst.lines):
        return problems + ["assignment does not cover every line"]
    # every reported end must be readable from the layout
    for s in range(1, inst.n + 1):
        prof = inst.profiles[s]
        sides = [(lay.right[s - 1], prof.term_right, 0)] if s < inst.n else []
        if s > 1:
            sides.append((lay.left[s - 1], prof.term_left, 1))
        for perm, ends, which in sides:
            if not ends:
                continue
            want = {x: av[x][which] for x in ends}
            if want not in consistent_side_labels(perm, ends):
                problems.append(f"station {s} does not realize the reported ends of {sorted(ends)}")
    return problems


# ---------------------------------------------------------------- solving


def solve_oracle(inst: Instance) -> SolveResult:
    res = brute_force_assignments(inst)
    av = res.argmin[0] if inst.lines else ()
    pa = solve_pa(inst, av)
    return SolveResult(res.min_crossings, av, pa.layout, {"algorithm": "oracle"})


def run_solver(inst: Instance, algorithm: str, threads: int = 1) -> tuple[SolveResult, float]:
    start = time.perf_counter()
    if algorithm == "exact":
        res = fix_left_end(inst, cap=DEFAULT_CAP, threads=threads)
    elif algorithm == "fpt":
        res = solve_fpt(inst)
    elif algorithm == "oracle":
        res = solve_oracle(inst)
    else:
        raise InstanceError(f"unknown algorithm {algorithm!r}")
    return res, time.perf_counter() - start


def _second_opinion(algorithm: str) -> str:
    return "fpt" if algorithm == "exact" else "exact"


# ---------------------------------------------------------------- generation


def generate_instance(
    n: int, nlines: int, max_multiplicity: int, seed: int, max_length: int | None = None
) -> Instance:
    """Random distinct lines with every edge carrying at most ``max_multiplicity`` of them.

    Lines are drawn one at a time (left end uniform, length uniform up to
    ``max_length``) and rejected if they repeat a line or overload an edge.
    After ``50 * nlines`` draws without completing, the attempt restarts;
    after ``GEN_ATTEMPTS`` restarts the call fails.
    """
    if n < 2:
        raise InstanceError(f"need at least 2 stations, got {n}")
    if nlines < 0 or max_multiplicity < 0:
        raise InstanceError("line count and multiplicity must be non-negative")
    reach = n - 1 if max_length is None else min(max_length, n - 1)
    if reach < 1:
        raise InstanceError("max_length must be at least 1")
    available = sum(min(reach, n - i) for i in range(1, n))
    if nlines > available:
        raise InstanceError(f"infeasible: only {available} distinct lines fit on {n} stations")
    if nlines > max_multiplicity * (n - 1):
        raise InstanceError(
            f"infeasible: {nlines} lines need more than {max_multiplicity} per edge on {n - 1} edges"
        )
    rng = random.Random(seed)
    for _ in range(GEN_ATTEMPTS):
        load = [0] * n
        chosen: set[tuple[int, int]] = set()
        for _ in range(50 * max(nlines, 1)):
            if len(chosen) == nlines:
                break
            i = rng.randint(1, n - 1)
            j = i + rng.randint(1, min(reach, n - i))
            if (i, j) in chosen or any(load[e] >= max_multiplicity for e in range(i, j)):
                continue
            chosen.add((i, j))
            for e in range(i, j):
                load[e] += 1
        if len(chosen) == nlines:
            inst = Instance.from_intervals(n, sorted(chosen))
            assert multiplicity(inst) <= max_multiplicity
            return inst
    raise InstanceError(f"no instance found after {GEN_ATTEMPTS} restarts; parameters may be infeasible")


# ---------------------------------------------------------------- SVG

STATION_PITCH = 120
SLOT_PITCH = 14
MARGIN = 60
OVAL_RX = 12


def _color(k: int) -> str:
    hue = (k * 137.508) % 360
    return f"hsl({hue:.1f},70%,42%)"


def station_columns(inst: Instance, lay: Layout) -> list[list[int]]:
    """Top-to-bottom slot order inside each station, consistent with both of its sides."""
    cols = []
    for s in range(1, inst.n + 1):
        prof = inst.profiles[s]
        left = lay.left[s - 1] or ()
        right = lay.right[s - 1] or ()
        lt, lmid, lb = _peel(left, prof.term_left)
        rt, rmid, rb = _peel(right, prof.term_right)
        if lmid and rmid and lmid != rmid:
            raise LayoutError(f"station {s} is not admissible")
        cols.append(lt + rt + (lmid or rmid) + rb + lb)
    return cols


def render_svg(inst: Instance, lay: Layout) -> str:
    validate_structure(inst, lay)
    if not (check_admissible(inst, lay) and check_periphery(inst, lay)):
        raise LayoutError("only admissible, periphery-respecting layouts can be drawn")
    cols = station_columns(inst, lay)
    height_slots = max([len(c) for c in cols] + [1])
    width = 2 * MARGIN + STATION_PITCH * (inst.n - 1)
    height = 2 * MARGIN + SLOT_PITCH * height_slots
    mid_y = height / 2

    def x_of(s: int) -> float:
        return MARGIN + STATION_PITCH * (s - 1)

    def y_of(s: int, x: int) -> float:
        col = cols[s - 1]
        return mid_y + SLOT_PITCH * (col.index(x) - (len(col) - 1) / 2)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for s in range(1, inst.n + 1):
        ry = SLOT_PITCH * max(len(cols[s - 1]), 1) / 2 + 6
        out.append(
            f'<ellipse class="station" cx="{x_of(s):.2f}" cy="{mid_y:.2f}" rx="{OVAL_RX}" ry="{ry:.2f}" '
            'fill="none" stroke="black" stroke-width="1.5"/>'
        )
        out.append(
            f'<text x="{x_of(s):.2f}" y="{mid_y + ry + 16:.2f}" font-size="12" '
            f'text-anchor="middle" font-family="sans-serif">{s}</text>'
        )
    third = STATION_PITCH / 3
    for ln in inst.lines:
        pts = [(x_of(ln.i), y_of(ln.i, ln.id))]
        for s in range(ln.i, ln.j):
            y0, y1 = y_of(s, ln.id), y_of(s + 1, ln.id)
            x0 = x_of(s)
            pts += [(x0 + OVAL_RX, y0), (x0 + third, y0), (x0 + 2 * third, y1), (x0 + STATION_PITCH - OVAL_RX, y1)]
            if s + 1 < ln.j:
                pts.append((x0 + STATION_PITCH + OVAL_RX, y1))
        pts.append((x_of(ln.j), y_of(ln.j, ln.id)))
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        out.append(
            f'<polyline class="line" data-line="{ln.id}" points="{coords}" fill="none" '
            f'stroke="{_color(ln.id)}" stroke-width="3" stroke-linejoin="round"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- bench


@dataclass
class BenchRow:
    n: int
    lines: int
    k: int
    seed: int
    algorithm: str
    crossings: int
    wall_time: float
    agree: bool


BENCH_FIELDS = list(BenchRow.__dataclass_fields__)


def run_bench(
    stations: Sequence[int],
    line_counts: Sequence[int],
    k: int,
    seeds: Sequence[int],
    algorithms: Sequence[str] = ("exact", "fpt"),
    max_length: int | None = None,
    clock: Callable[[], float] = time.perf_counter,
) -> list[BenchRow]:
    rows = []
    for n in stations:
        for m in line_counts:
            for seed in seeds:
                inst = generate_instance(n, m, k, seed, max_length=max_length)
                batch = []
                for alg in algorithms:
                    if alg == "decide":
                        t0 = clock()
                        yes = decide_zero_crossing(inst)
                        batch.append([alg, 0 if yes else 1, clock() - t0])
                        continue
                    t0 = clock()
                    res, _ = run_solver(inst, alg)
                    batch.append([alg, res.crossings, clock() - t0])
                minima = {c for a, c, _ in batch if a != "decide"}
                agree = len(minima) <= 1
                for alg, c, wall in batch:
                    rows.append(BenchRow(n, m, multiplicity(inst), seed, alg, c, wall, agree))
    return rows


def bench_csv(rows: Sequence[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        d = asdict(r)
        d["wall_time"] = f"{r.wall_time:.6f}"
        w.writerow(d)
    return buf.getvalue()


def bench_text(rows: Sequence[BenchRow]) -> str:
    head = f"{'n':>6} {'lines':>6} {'k':>3} {'seed':>5} {'algorithm':>9} {'min':>5} {'time_s':>10} agree"
    out = [head, "-" * len(head)]
    for r in rows:
        out.append(
            f"{r.n:>6} {r.lines:>6} {r.k:>3} {r.seed:>5} {r.algorithm:>9} {r.crossings:>5} "
            f"{r.wall_time:>10.5f} {'yes' if r.agree else 'NO'}"
        )
    return "\n".join(out) + "\n"


def bench_figure(rows: Sequence[BenchRow], path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    vary_n = len({r.n for r in rows}) > 1
    fig, ax = plt.subplots(figsize=(6, 4))
    for alg in sorted({r.algorithm for r in rows}):
        pts: dict[int, list[float]] = {}
        for r in rows:
            if r.algorithm == alg:
                pts.setdefault(r.n if vary_n else r.lines, []).append(r.wall_time)
        xs = sorted(pts)
        ax.plot(xs, [sum(pts[x]) / len(pts[x]) for x in xs], marker="o", label=alg)
    ax.set_xlabel("stations" if vary_n else "lines")
    ax.set_ylabel("mean wall time (s)")
    ax.set_yscale("log")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None} if path.suffix == ".png" else None)
    plt.close(fig)


# ---------------------------------------------------------------- commands


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _ints(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    res, wall = run_solver(inst, args.algorithm, threads=args.threads)
    report = ResultReport.from_result(inst, args.algorithm, res, wall)
    status = 0
    if args.check:
        problems = revalidate(ResultReport.from_dict(json.loads(report.to_json())), inst)
        other = _second_opinion(args.algorithm)
        res2, _ = run_solver(inst, other, threads=args.threads)
        report.checks["layout"] = "ok" if not problems else "; ".join(problems)
        report.checks[other] = res2.crossings
        if problems or res2.crossings != res.crossings:
            status = 1
    _emit(report.to_json() if args.format == "json" else report.to_text(), args.out)
    return status


def cmd_decide(args) -> int:
    inst = read_instance(args.instance)
    yes = decide_zero_crossing(inst)
    _emit("yes\n" if yes else "no\n", args.out)
    return 0 if yes else 1


def cmd_gen(args) -> int:
    inst = generate_instance(args.stations, args.lines, args.max_multiplicity, args.seed, args.max_length)
    _emit(format_instance(inst), args.out)
    return 0


def cmd_render(args) -> int:
    inst = read_instance(args.instance)
    if args.report:
        report = ResultReport.from_dict(json.loads(Path(args.report).read_text()))
        if report.stations != inst.n or [tuple(x) for x in report.lines] != inst.intervals:
            raise LayoutError("report was produced for a different instance")
        lay = report.layout()
    else:
        res, _ = run_solver(inst, args.algorithm, threads=args.threads)
        lay = res.layout
    svg = render_svg(inst, lay)
    if args.out:
        Path(args.out).write_text(svg)
    else:
        sys.stdout.write(svg)
    return 0


def cmd_bench(args) -> int:
    algs = [a for a in args.algorithms.split(",") if a]
    for a in algs:
        if a not in ALGORITHMS + ("decide",):
            raise InstanceError(f"unknown algorithm {a!r}")
    rows = run_bench(args.stations, args.lines, args.k, args.seeds, algs, max_length=args.max_length)
    text = bench_text(rows)
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "bench.csv").write_text(bench_csv(rows))
        (out / "bench.txt").write_text(text)
        bench_figure(rows, out / "bench.png")
    else:
        sys.stdout.write("\n" + bench_csv(rows))
    return 0 if all(r.agree for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mlcmp", description="Metro-line crossing minimization on a path.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, algorithm=True):
        if algorithm:
            sp.add_argument("--algorithm", choices=ALGORITHMS, default="exact")
            sp.add_argument("--threads", type=int, default=1, help="worker processes for the exact solver")
        sp.add_argument("--out", help="write to this file instead of standard output")

    sp = sub.add_parser("solve", help="minimum-crossing layout")
    sp.add_argument("instance", help="instance file, or - for standard input")
    common(sp)
    sp.add_argument("--check", action="store_true", help="re-validate and cross-run a second algorithm")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("decide", help="is a crossing-free layout possible?")
    sp.add_argument("instance")
    common(sp, algorithm=False)
    sp.set_defaults(func=cmd_decide)

    sp = sub.add_parser("gen", help="random instance")
    sp.add_argument("--stations", "-n", type=int, required=True)
    sp.add_argument("--lines", "-m", type=int, required=True)
    sp.add_argument("--max-multiplicity", "-k", type=int, required=True)
    sp.add_argument("--max-length", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    common(sp, algorithm=False)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("render", help="draw a layout as SVG")
    sp.add_argument("instance")
    sp.add_argument("--report", help="JSON report from 'solve --format json' (solved afresh otherwise)")
    common(sp)
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("bench", help="timing table over generated instances")
    sp.add_argument("--stations", type=_ints, default=[10], help="comma-separated station counts")
    sp.add_argument("--lines", type=_ints, default=[8], help="comma-separated line counts")
    sp.add_argument("-k", type=int, default=4)
    sp.add_argument("--seeds", type=_ints, default=[0, 1, 2], help="comma-separated seeds")
    sp.add_argument("--seed", type=int, default=None, help="single seed (overrides --seeds)")
    sp.add_argument("--max-length", type=int, default=None)
    sp.add_argument("--algorithms", default="exact,fpt")
    sp.add_argument("--out", help="directory for bench.csv, bench.txt and bench.png")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if getattr(args, "seed", None) is not None and args.command == "bench":
        args.seeds = [args.seed]
    try:
        return args.func(args)
    except (InstanceError, LayoutError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
