"""Exhaustive oracles: colorability, exact minimum box counts, obstruction
sets, and a seeded resampling colorer.

Two exact engines are used.  When the colorings of all but the longest axis
are few enough, a grid is viewed as a multiset of *layers* (colorings of the
remaining axes) stacked along the longest axis; two layers conflict in the
number of lower boxes they both color monochromatically with the same color,
so the search runs over nondecreasing layer sequences.  Otherwise a plain
cell-by-cell backtracking search is used.
"""
from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bounds import bound_certificate
from .certificate import COLORABLE, GUARANTEED, UNKNOWN, Certificate
from .grid import (
    Coloring,
    Grid,
    GridLike,
    as_grid,
    box_count,
    canonicalize,
    coordinate_coloring,
    count_monochromatic_boxes,
    dominance_leq,
)

LAYER_LIMIT = 2048
DEFAULT_SECONDS = 600.0


def default_seconds() -> float:
    env = os.environ.get("GRIDRAMSEY_BUDGET_SECONDS")
    return float(env) if env else DEFAULT_SECONDS


@dataclass
class SearchBudget:
    max_nodes: int = 10 ** 9
    max_seconds: float = field(default_factory=default_seconds)
    parallel_shards: int = 1

    def __post_init__(self):
        if self.max_nodes < 1 or self.max_seconds <= 0 or self.parallel_shards < 1:
            raise ValueError("budget values must be positive")


class BudgetExhausted(Exception):
    pass


class _Meter:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.nodes = 0
        self.deadline = time.monotonic() + budget.max_seconds

    def tick(self, n: int = 1) -> None:
        self.nodes += n
        if self.nodes > self.budget.max_nodes:
            raise BudgetExhausted(f"node limit {self.budget.max_nodes} reached")
        if (self.nodes & 0x3FF) == 0 and time.monotonic() > self.deadline:
            raise BudgetExhausted(f"time limit {self.budget.max_seconds}s reached")


@dataclass
class SearchOutcome:
    value: int | None  # minimum box count found; None if unknown
    witness: Coloring | None
    complete: bool
    nodes: int
    engine: str


# -- layer model ----------------------------------------------------------------

def _fold_boxes(arr: np.ndarray) -> np.ndarray:
    """(B, a1..ak) -> (B, number of k-boxes): the box color, or -1."""
    out = arr.reshape(arr.shape[:1] + (1,) + arr.shape[1:])
    for axis_len in arr.shape[1:]:
        xs, ys = np.triu_indices(axis_len, k=1)
        left, right = out[:, :, xs], out[:, :, ys]
        out = np.where(left == right, left, -1)
        out = out.reshape(out.shape[:1] + (-1,) + out.shape[3:])
    return out.reshape(out.shape[0], -1)


class LayerModel:
    """All c-colorings of the non-stacked axes and their pairwise conflicts."""

    def __init__(self, c: int, grid: Grid, stack_axis: int):
        self.c = c
        self.grid = grid
        self.stack_axis = stack_axis
        self.layer_dims = tuple(a for i, a in enumerate(grid.dims) if i != stack_axis)
        self.depth = grid.dims[stack_axis]
        vol = int(np.prod(self.layer_dims, dtype=np.int64)) if self.layer_dims else 1
        n = c ** vol
        codes = np.arange(n, dtype=np.int64)
        digits = np.empty((n, vol), dtype=np.int64)
        for k in range(vol - 1, -1, -1):
            digits[:, k] = codes % c
            codes //= c
        self.layers = digits.reshape((n,) + self.layer_dims)
        folded = _fold_boxes(self.layers) if self.layer_dims else digits
        onehot = np.concatenate([(folded == col) for col in range(c)], axis=1).astype(np.int32)
        self.conflict = (onehot @ onehot.T).astype(np.int64)

    @property
    def size(self) -> int:
        return self.conflict.shape[0]

    def assemble(self, seq) -> Coloring:
        stacked = self.layers[list(seq)]  # (depth, layer dims...)
        arr = np.moveaxis(stacked, 0, self.stack_axis)
        return Coloring(self.grid, self.c, arr.ravel())


def _layer_model_for(c: int, grid: Grid) -> LayerModel | None:
    axis = max(range(grid.d), key=lambda i: (grid.dims[i], i))
    vol = grid.volume // grid.dims[axis]
    if c ** vol > LAYER_LIMIT:
        return None
    return LayerModel(c, grid, axis)


def _multiset_search(conflict, depth, limit, meter, first=None, stop_below=None):
    """Minimum total pairwise conflict over nondecreasing index sequences of
    length ``depth``; only sequences with cost < ``limit`` are reported.
    ``first`` restricts the first index.  Stops early once a sequence with
    cost < ``stop_below`` is found.  Returns (cost, seq) or (None, None)."""
    n = conflict.shape[0]
    best = [limit, None]

    def rec(seq, cost, inc, last):
        meter.tick()
        k = len(seq)
        if k == depth:
            best[0], best[1] = cost, list(seq)
            return stop_below is not None and cost < stop_below
        if k == 0 and first is not None:
            cand = np.asarray(first, dtype=np.int64)
        else:
            cand = np.arange(last, n, dtype=np.int64)
        tail = inc[last:]
        sufmin = np.minimum.accumulate(tail[::-1])[::-1]
        child_cost = cost + inc[cand]
        lb = child_cost + (depth - k - 1) * sufmin[cand - last]
        keep = lb < best[0]
        cand, child_cost = cand[keep], child_cost[keep]
        order = np.argsort(child_cost, kind="stable")
        for q, cc in zip(cand[order].tolist(), child_cost[order].tolist()):
            if cc + (depth - k - 1) * int(sufmin[q - last]) >= best[0]:
                continue
            seq.append(q)
            done = rec(seq, cc, inc + conflict[q], q)
            seq.pop()
            if done:
                return True
        return False

    rec([], 0, np.zeros(n, dtype=np.int64), 0)
    if best[1] is None:
        return None, None
    return best[0], best[1]


def _shard_worker(args):
    conflict, depth, limit, first, stop_below, budget = args
    meter = _Meter(budget)
    try:
        cost, seq = _multiset_search(conflict, depth, limit, meter, first, stop_below)
        return cost, seq, True, meter.nodes
    except BudgetExhausted:
        return None, None, False, meter.nodes


def _layer_minimize(model: LayerModel, limit: int, budget: SearchBudget, stop_below=None) -> SearchOutcome:
    shards = max(1, min(budget.parallel_shards, model.size))
    if shards == 1:
        meter = _Meter(budget)
        try:
            cost, seq = _multiset_search(model.conflict, model.depth, limit, meter, None, stop_below)
        except BudgetExhausted:
            return SearchOutcome(None, None, False, meter.nodes, "layers")
        results = [(cost, seq, True, meter.nodes)]
    else:
        parts = [list(range(i, model.size, shards)) for i in range(shards)]
        jobs = [(model.conflict, model.depth, limit, p, stop_below, budget) for p in parts]
        with ProcessPoolExecutor(max_workers=shards) as pool:
            results = list(pool.map(_shard_worker, jobs))
    nodes = sum(r[3] for r in results)
    found = [(r[0], r[1]) for r in results if r[0] is not None]
    complete = all(r[2] for r in results)
    if found:
        cost, seq = min(found, key=lambda cs: (cs[0], cs[1]))
        witness = model.assemble(seq)
        assert count_monochromatic_boxes(witness) == cost
        if stop_below is not None and cost < stop_below:
            complete = True
        return SearchOutcome(cost, witness, complete, nodes, "layers")
    return SearchOutcome(None, None, complete, nodes, "layers")


# -- cell backtracking -------------------------------------------------------------

def _closing_boxes(grid: Grid) -> list[np.ndarray]:
    """For each cell (row-major), the other corners of every box whose
    largest corner it is."""
    dims = grid.dims
    d = grid.d
    per_cell: list[list[tuple[int, ...]]] = [[] for _ in range(grid.volume)]
    strides = np.cumprod((1,) + dims[::-1])[:-1][::-1]
    axis_pairs = [list(itertools.combinations(range(a), 2)) for a in dims]
    eps_all = list(itertools.product((0, 1), repeat=d))
    for pairs in itertools.product(*axis_pairs):
        corners = [sum(pairs[i][e[i]] * int(strides[i]) for i in range(d)) for e in eps_all]
        top = max(corners)
        per_cell[top].append(tuple(x for x in corners if x != top))
    return [np.array(lst, dtype=np.int64).reshape(len(lst), 2 ** d - 1) for lst in per_cell]


def _cell_search(c: int, grid: Grid, limit: int, meter: _Meter, stop_below=None):
    closing = _closing_boxes(grid)
    n = grid.volume
    cells = np.full(n, -1, dtype=np.int64)
    best = [limit, None]

    def rec(i, cost, used):
        meter.tick()
        if i == n:
            best[0], best[1] = cost, cells.copy()
            return stop_below is not None and cost < stop_below
        boxes = closing[i]
        # colors beyond the first unused one are symmetric; try one of them
        for col in range(min(used + 1, c)):
            add = int(np.count_nonzero((cells[boxes] == col).all(axis=1))) if len(boxes) else 0
            if cost + add >= best[0]:
                continue
            cells[i] = col
            if rec(i + 1, cost + add, max(used, col + 1)):
                return True
            cells[i] = -1
        return False

    rec(0, 0, 0)
    if best[1] is None:
        return None, None
    return best[0], Coloring(grid, c, best[1])


def _minimize(c: int, grid: Grid, limit: int, budget: SearchBudget, stop_below=None) -> SearchOutcome:
    if grid.volume == 0:
        raise ValueError("empty grid")
    model = _layer_model_for(c, grid)
    if model is not None:
        return _layer_minimize(model, limit, budget, stop_below)
    meter = _Meter(budget)
    try:
        cost, witness = _cell_search(c, grid, limit, meter, stop_below)
    except BudgetExhausted:
        return SearchOutcome(None, None, False, meter.nodes, "cells")
    return SearchOutcome(cost, witness, True, meter.nodes, "cells")


# -- public oracles --------------------------------------------------------------------

UNKNOWN_RESULT = "unknown"


def find_coloring(c: int, grid: GridLike, budget: SearchBudget | None = None):
    """A box-free c-coloring, ``None`` if none exists, or ``"unknown"``."""
    grid = as_grid(grid)
    budget = budget or SearchBudget()
    quick = coordinate_coloring(grid, c)
    if quick is not None:
        return quick
    out = _minimize(c, grid, limit=1, budget=budget, stop_below=1)
    if out.witness is not None:
        assert count_monochromatic_boxes(out.witness) == 0
        return out.witness
    return None if out.complete else UNKNOWN_RESULT


def minimize_mono_boxes(c: int, grid: GridLike, budget: SearchBudget | None = None) -> SearchOutcome:
    grid = as_grid(grid)
    budget = budget or SearchBudget()
    quick = coordinate_coloring(grid, c)
    if quick is not None:
        return SearchOutcome(0, quick, True, 0, "coordinate")
    return _minimize(c, grid, limit=box_count(grid) + 1, budget=budget, stop_below=1)


def min_mono_boxes_exact(c: int, grid: GridLike, budget: SearchBudget | None = None) -> int | None:
    """Exact minimum number of monochromatic boxes over all c-colorings;
    ``None`` when the budget runs out."""
    out = minimize_mono_boxes(c, grid, budget)
    return out.value if out.complete else None


def min_mono_boxes_bruteforce(c: int, grid: GridLike, chunk: int = 1 << 16) -> int:
    """Minimum over literally every one of the c^volume colorings."""
    grid = as_grid(grid)
    if any(a < 2 for a in grid.dims):
        return 0
    n = c ** grid.volume
    best = None
    for start in range(0, n, chunk):
        codes = np.arange(start, min(n, start + chunk), dtype=np.int64)
        digits = np.empty((codes.size, grid.volume), dtype=np.int64)
        for k in range(grid.volume - 1, -1, -1):
            digits[:, k] = codes % c
            codes //= c
        arr = digits.reshape((-1,) + grid.dims)
        total = np.zeros(arr.shape[0], dtype=np.int64)
        if grid.d == 1:
            for col in range(c):
                g = np.count_nonzero(arr == col, axis=1)
                total += g * (g - 1) // 2
        else:
            moved = np.moveaxis(arr, -1, 1)  # (B, a_d, a_1..a_{d-1})
            flat = moved.reshape((-1,) + grid.dims[:-1])
            folded = _fold_boxes(flat).reshape(arr.shape[0], grid.dims[-1], -1)
            for col in range(c):
                g = np.count_nonzero(folded == col, axis=1)
                total += (g * (g - 1) // 2).sum(axis=1)
        low = int(total.min())
        best = low if best is None else min(best, low)
        if best == 0:
            break
    return best


def is_guaranteed_exact(c: int, grid: GridLike, budget: SearchBudget | None = None) -> Certificate:
    grid = as_grid(grid)
    budget = budget or SearchBudget()
    quick = coordinate_coloring(grid, c)
    if quick is not None:
        return Certificate(COLORABLE, "coordinate", grid, c, witness=quick)
    t0 = time.monotonic()
    out = _minimize(c, grid, limit=1, budget=budget, stop_below=1)
    params = {"engine": out.engine, "nodes": out.nodes}
    if out.witness is not None:
        return Certificate(COLORABLE, "exhaustive", grid, c, params=params, witness=out.witness)
    if out.complete:
        return Certificate(GUARANTEED, "exhaustive", grid, c, params=params)
    params["seconds"] = round(time.monotonic() - t0, 3)
    return Certificate(UNKNOWN, "exhaustive", grid, c, params=params)


# -- obstruction sets ------------------------------------------------------------------

@dataclass
class ObstructionSet:
    c: int
    d: int
    caps: Grid
    grids: list[Grid]
    certificates: dict[Grid, Certificate]
    decrement_certificates: dict[Grid, list[Certificate]]
    frontier_complete: bool
    decided: dict[Grid, Certificate]
    notes: list[str] = field(default_factory=list)


class Decider:
    """Decides c-guarantee of monotone grids, reusing earlier verdicts
    through the dominance order."""

    def __init__(self, c: int, budget: SearchBudget | None = None):
        self.c = c
        self.budget = budget or SearchBudget()
        self.known: dict[Grid, Certificate] = {}

    def decide(self, grid: GridLike) -> Certificate:
        g = canonicalize(grid)
        if g in self.known:
            return self.known[g]
        cert = self._decide(g)
        self.known[g] = cert
        return cert

    def _decide(self, g: Grid) -> Certificate:
        c = self.c
        quick = coordinate_coloring(g, c)
        if quick is not None:
            return Certificate(COLORABLE, "coordinate", g, c, witness=quick)
        for h, cert in self.known.items():
            if h.d != g.d:
                continue
            if cert.guaranteed and dominance_leq(h, g):
                return Certificate(GUARANTEED, "dominance", g, c, params={"from": list(h.dims)}, sub_certificates=[cert])
            if cert.colorable and dominance_leq(g, h):
                sub = cert.witness.array[tuple(slice(0, a) for a in g.dims)]
                return Certificate(
                    COLORABLE, "dominance", g, c, params={"from": list(h.dims)},
                    witness=Coloring(g, c, sub.ravel()),
                )
        cert = bound_certificate(c, g)
        if cert is not None:
            return cert
        return is_guaranteed_exact(c, g, self.budget)


def _monotone_prefixes(lo: int, caps: tuple[int, ...]):
    if not caps:
        yield ()
        return

    def rec(prefix, start):
        k = len(prefix)
        if k == len(caps):
            yield tuple(prefix)
            return
        for a in range(start, caps[k] + 1):
            yield from rec(prefix + [a], a)

    yield from rec([], lo)


def obstruction_set(c: int, d: int, bound: GridLike, budget: SearchBudget | None = None) -> ObstructionSet:
    """Minimal c-guaranteed monotone grids ``a_1 <= ... <= a_d`` with
    ``a_i <= bound[i]``."""
    caps = as_grid(bound)
    if caps.d != d:
        raise ValueError(f"caps {caps} do not have dimension {d}")
    dec = Decider(c, budget)
    notes = _cap_notes(c, caps)
    complete = True
    candidates = []
    # every side of a guaranteed grid exceeds c
    for prefix in _monotone_prefixes(c + 1, caps.dims[:-1]):
        start = max(prefix[-1] if prefix else c + 1, c + 1)
        for last in range(start, caps.dims[-1] + 1):
            cert = dec.decide(prefix + (last,))
            if cert.verdict == UNKNOWN:
                complete = False
                continue
            if cert.guaranteed:
                candidates.append(Grid(prefix + (last,)))
                break
    members, certs, dcerts = [], {}, {}
    for g in candidates:
        decs = []
        minimal = True
        seen = set()
        for i in range(d):
            lower = list(g.dims)
            lower[i] -= 1
            if lower[i] < 1 or canonicalize(lower) in seen:
                continue
            seen.add(canonicalize(lower))
            cert = dec.decide(lower)
            if cert.verdict == UNKNOWN:
                complete = False
                minimal = False
                break
            if cert.guaranteed:
                minimal = False
                break
            decs.append(cert)
        if minimal:
            members.append(g)
            certs[g] = dec.decide(g)
            dcerts[g] = decs
    members = sorted(set(members), key=lambda g: g.dims)
    return ObstructionSet(c, d, caps, members, certs, dcerts, complete, dict(dec.known), notes)


def _cap_notes(c: int, caps: Grid) -> list[str]:
    """Compare the caps with the explicit side bound a_l <= d 2^(d-l) c^(2^(l-1)) + 2
    available at the first pinch point."""
    d = caps.d
    first_point_bound = max(d * 2 ** (d - l) * c ** (2 ** (l - 1)) + 2 for l in range(1, d + 1))
    notes = []
    if caps.dims[0] < first_point_bound:
        notes.append(
            f"cap a_1 <= {caps.dims[0]} is below the pinch-point side bound {first_point_bound};"
            " members with larger first side are not searched"
        )
    return notes


# -- resampling colorer -----------------------------------------------------------------

def box_corner_table(grid: GridLike) -> np.ndarray:
    """(number of boxes, 2^d) flat corner indices, boxes in lexicographic
    order of their per-axis hyperplane pairs."""
    grid = as_grid(grid)
    dims = grid.dims
    if any(a < 2 for a in dims):
        return np.zeros((0, 2 ** grid.d), dtype=np.int64)
    strides = np.cumprod((1,) + dims[::-1])[:-1][::-1]
    pairs = [np.array(list(itertools.combinations(range(a), 2)), dtype=np.int64) for a in dims]
    mesh = np.meshgrid(*[np.arange(len(p)) for p in pairs], indexing="ij")
    idx = [m.ravel() for m in mesh]
    cols = []
    for eps in itertools.product((0, 1), repeat=grid.d):
        cols.append(sum(pairs[i][idx[i], eps[i]] * strides[i] for i in range(grid.d)))
    return np.stack(cols, axis=1)


@dataclass
class ResampleResult:
    coloring: Coloring | None
    resamples: int
    success: bool


def moser_tardos_color(c: int, grid: GridLike, seed: int, max_resamples: int = 100_000) -> ResampleResult:
    """Resample the lowest-indexed monochromatic box until none is left."""
    grid = as_grid(grid)
    rng = np.random.default_rng(seed)
    cells = rng.integers(0, c, size=grid.volume)
    corners = box_corner_table(grid)
    for step in range(max_resamples + 1):
        if corners.shape[0] == 0:
            break
        vals = cells[corners]
        mono = (vals == vals[:, :1]).all(axis=1)
        if not mono.any():
            break
        if step == max_resamples:
            return ResampleResult(None, step, False)
        box = corners[int(np.argmax(mono))]
        cells[box] = rng.integers(0, c, size=box.size)
    else:
        return ResampleResult(None, max_resamples, False)
    col = Coloring(grid, c, cells)
    assert count_monochromatic_boxes(col) == 0
    return ResampleResult(col, step, True)
