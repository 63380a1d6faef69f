"""Upper bounds on the least a3 making [a1, a2, a3] 2-guaranteed, and the
obstruction-count exponent table."""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .bounds import count_bound_sequence, guaranteed_count_lower_bound
from .certificate import GUARANTEED, Certificate
from .grid import Grid, GridLike, as_grid, box_count
from .qform import min_rectangles
from .search import SearchBudget, find_coloring

A3_CAP = 10 ** 6

# published bound table: rows a1 = 3..12, columns a2 = 3..12, None = blank
PRINTED_TABLE = {
    3: [None, None, None, None, 127, 85, 73, 68, 67, 67],
    4: [None, None, None, None, 127, 85, 73, 68, 67, 67],
    5: [None, None, 101, 76, 53, 47, 46, 46, 40, 37],
    6: [None, None, 76, 76, 53, 47, 46, 46, 40, 37],
    7: [127, 127, 53, 53, 53, 46, 40, 37, 34, 33],
    8: [85, 85, 47, 47, 46, 45, 40, 37, 34, 33],
    9: [73, 73, 46, 46, 40, 40, 37, 34, 31, 30],
    10: [68, 68, 46, 46, 37, 37, 34, 33, 31, 30],
    11: [67, 67, 40, 40, 34, 34, 31, 31, 30, 28],
    12: [67, 67, 37, 37, 33, 33, 30, 30, 28, 28],
}


def printed_cell(a1: int, a2: int) -> int | None:
    return PRINTED_TABLE[a1][a2 - 3]


def product_extension(c: int, grid: GridLike, t: int, certificate: Certificate | None = None):
    """``K = floor(cM/t) + 1`` for a (c, t)-guaranteed grid; returns
    ``(K, certificate for grid x [K])``."""
    grid = as_grid(grid)
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    boxes = box_count(grid)
    k = c * boxes // t + 1
    cert = Certificate(
        GUARANTEED, "product", Grid(grid.dims + (k,)), c,
        params={"t": t, "boxes": boxes, "K": k},
        sub_certificates=[certificate] if certificate is not None else [],
    )
    return k, cert


@dataclass
class BestT:
    grid: Grid
    t: int
    method: str  # "qform-exact" | "exhaustive" | "delta-ceiling" | "none"
    exact: bool
    delta_t: int | None
    qform_t: int | None
    witness_upper: int | None = None
    witness: object = None  # box-free Coloring when t == 0


def best_t(grid: GridLike, c: int = 2, max_seconds: float = 60.0) -> BestT:
    """Largest t known with ``grid`` (c, t)-guaranteed (2-D, c = 2)."""
    grid = as_grid(grid)
    if grid.d != 2 or c != 2:
        raise ValueError("best_t handles 2-dimensional grids with 2 colors")
    delta_t = max(
        (guaranteed_count_lower_bound(c, order, use_ceiling=True) or 0)
        for order in (grid.dims, grid.dims[::-1])
    ) if min(grid.dims) >= 2 else 0
    r, s = sorted(grid.dims)
    res = min_rectangles(r, s, max_seconds=max_seconds)
    if res.complete:
        if res.t == 0:
            # the qform optimum is a box-free coloring; cross-check with search
            witness = find_coloring(c, grid, SearchBudget(max_seconds=max_seconds))
            if witness is None:
                raise AssertionError(f"qform and search disagree on colorability of {grid}")
            return BestT(grid, 0, "exhaustive", True, delta_t or None, 0, witness=witness)
        return BestT(grid, max(res.t, delta_t), "qform-exact", True, delta_t or None, res.t)
    if delta_t:
        return BestT(grid, delta_t, "delta-ceiling", False, delta_t, None, res.upper)
    return BestT(grid, 0, "none", False, None, None, res.upper)


def _delta3_positive(c: int, dims, a3: int, use_ceiling: bool = True) -> bool:
    return guaranteed_count_lower_bound(c, tuple(dims) + (a3,), use_ceiling=use_ceiling) is not None


def least_a3_delta(c: int, a1: int, a2: int, cap: int = A3_CAP, use_ceiling: bool = True) -> int | None:
    """Least a3 (<= cap) for which the Delta recurrence on ``[a1, a2, a3]``
    (either order of a1, a2) stays positive, rounding counts up at each step
    unless ``use_ceiling`` is false.

    Positivity is monotone in a3, so the scan is a bisection.  With rounding
    the answer is not monotone in a1, a2: (5, 6) gives 101 but (6, 6) 113.
    """
    if a1 < 2 or a2 < 2:
        raise ValueError("need a1, a2 >= 2")
    best = None
    for dims in {(a1, a2), (a2, a1)}:
        if not _delta3_positive(c, dims, cap, use_ceiling):
            continue
        lo, hi = 2, cap  # answer lies in [lo, hi]
        while lo < hi:
            mid = (lo + hi) // 2
            if _delta3_positive(c, dims, mid, use_ceiling):
                hi = mid
            else:
                lo = mid + 1
        best = lo if best is None else min(best, lo)
    return best


@dataclass
class BoundTableEntry:
    a1: int
    a2: int
    a3_bound: int | None
    method: str | None  # product | delta | dominance
    t_used: int | None = None
    t_exact: bool = False
    source: tuple[int, int, int] | None = None  # dominating triple for dominance
    candidates: dict = field(default_factory=dict)

    source_entry: "BoundTableEntry | None" = None

    def certificate(self) -> Certificate | None:
        if self.a3_bound is None:
            return None
        grid = Grid((self.a1, self.a2, self.a3_bound))
        if self.method == "product":
            base = Grid((self.a1, self.a2))
            if self.t_exact:
                sub = Certificate(GUARANTEED, "exhaustive", base, 2, params={"t": self.t_used, "engine": "qform"})
            else:
                sub = Certificate(GUARANTEED, "delta", base, 2, params={"t": self.t_used, "use_ceiling": True})
            return product_extension(2, base, self.t_used, sub)[1]
        if self.method == "delta":
            return Certificate(GUARANTEED, "delta", grid, 2, params={"use_ceiling": True})
        src = self.source_entry
        subs = [src.certificate()] if src is not None else []
        return Certificate(GUARANTEED, "dominance", grid, 2, params={"source": list(self.source)},
                           sub_certificates=subs)


_PRIORITY = {"product-exact": 0, "product-delta": 1, "delta": 2, "dominance": 3}


def _cell(a1: int, a2: int, max_seconds: float) -> BoundTableEntry:
    c = 2
    bt = best_t((a1, a2), c, max_seconds)
    cands = {}
    if bt.qform_t:
        cands["product-exact"] = product_extension(c, (a1, a2), max(bt.qform_t, bt.delta_t or 0))[0]
    if bt.delta_t:
        cands["product-delta"] = product_extension(c, (a1, a2), bt.delta_t)[0]
    d3 = least_a3_delta(c, a1, a2)
    if d3 is not None:
        cands["delta"] = d3
    if not cands:
        return BoundTableEntry(a1, a2, None, None, candidates=cands)
    key = min(cands, key=lambda k: (cands[k], _PRIORITY[k]))
    method = "delta" if key == "delta" else "product"
    t_used = None
    if key == "product-exact":
        t_used = max(bt.qform_t, bt.delta_t or 0)
    elif key == "product-delta":
        t_used = bt.delta_t
    return BoundTableEntry(a1, a2, cands[key], method, t_used, key == "product-exact", None, cands)


def a3_table(a1_range, a2_range, max_seconds_per_cell: float = 60.0, c: int = 2) -> dict[tuple[int, int], BoundTableEntry]:
    """Bound table; each cell is the best of the product lemma (exact or
    Delta-derived t), the ceiling Delta scan, and dominance/permutation
    closure over everything computed."""
    if c != 2:
        raise ValueError("the table is defined for 2 colors")
    cells = sorted({tuple(sorted((x, y))) for x in a1_range for y in a2_range})
    raw = {cell: _cell(cell[0], cell[1], max_seconds_per_cell) for cell in cells}
    triples = [(a, b, e.a3_bound) for (a, b), e in raw.items() if e.a3_bound is not None]
    table = {}
    for x in a1_range:
        for y in a2_range:
            base = raw[tuple(sorted((x, y)))]
            entry = BoundTableEntry(x, y, base.a3_bound, base.method, base.t_used, base.t_exact,
                                    None, dict(base.candidates))
            for tri in triples:
                for p, q, u in set(itertools.permutations(tri)):
                    if p <= x and q <= y and (entry.a3_bound is None or u < entry.a3_bound):
                        entry.a3_bound, entry.method, entry.source = u, "dominance", tri
                        entry.source_entry = raw[(tri[0], tri[1])]
                        entry.t_used, entry.t_exact = None, False
            table[(x, y)] = entry
    return table


def table_csv(table: dict[tuple[int, int], BoundTableEntry]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a1", "a2", "a3_bound", "method", "t_used", "t_exact", "printed"])
    for (x, y), e in sorted(table.items()):
        printed = printed_cell(x, y) if x in PRINTED_TABLE and 3 <= y <= 12 else None
        w.writerow([x, y, "" if e.a3_bound is None else e.a3_bound, e.method or "",
                    "" if e.t_used is None else e.t_used, int(e.t_exact), "" if printed is None else printed])
    return buf.getvalue()


def surface_csv(table: dict[tuple[int, int], BoundTableEntry]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a1", "a2", "a3_bound"])
    for (x, y), e in sorted(table.items()):
        if e.a3_bound is not None:
            w.writerow([x, y, e.a3_bound])
    return buf.getvalue()


def table_markdown(table: dict[tuple[int, int], BoundTableEntry]) -> str:
    rows = sorted({x for x, _ in table})
    cols = sorted({y for _, y in table})
    width = max(3, max((len(str(e.a3_bound)) for e in table.values() if e.a3_bound), default=3))
    head = "| a1\\a2 | " + " | ".join(str(y).rjust(width) for y in cols) + " |"
    sep = "|---" + "|---" * len(cols) + "|"
    lines = [head, sep]
    for x in rows:
        vals = [table[(x, y)].a3_bound for y in cols]
        lines.append(f"| {x} | " + " | ".join(("" if v is None else str(v)).rjust(width) for v in vals) + " |")
    return "\n".join(lines) + "\n"


# -- obstruction-count exponent --------------------------------------------------

def obstruction_count_exponent(d: int) -> int:
    """e with |O(c, d)| = O(c^e): (17 * 3^(d-3) - 1)/2 for d >= 3; for d = 2
    the known bound |O(c, 2)| <= 2c^2 gives e = 2."""
    if d == 2:
        return 2
    if d < 3:
        raise ValueError(f"no exponent bound for d = {d}")
    return (17 * 3 ** (d - 3) - 1) // 2


def pinch_split_exponent(d: int, m: int) -> Fraction:
    """(3^m - 1)/2 + 3^m 2^(d-m-1) (d-m-1), the count exponent when the
    second-largest pinch point is m (0 <= m < d)."""
    if not 0 <= m < d:
        raise ValueError("need 0 <= m < d")
    return Fraction(3 ** m - 1, 2) + Fraction(3 ** m * 2 ** (d - m - 1) * (d - m - 1))


def exponent_ratio(n: int) -> Fraction:
    return Fraction(1 + 2 ** n * (n - 1), 3 ** n)


def exponent_argmax(d: int) -> int:
    """The n in [d] maximizing (1 + 2^n (n - 1)) / 3^n."""
    return max(range(1, d + 1), key=lambda n: (exponent_ratio(n), -n))


def exponent_table(ds=range(3, 7)) -> list[tuple[int, int]]:
    return [(d, obstruction_count_exponent(d)) for d in ds]
