"""Grids, boxes, colorings and exact monochromatic-box counting.

A grid ``[a1, ..., ad]`` is the product of the integer intervals
``{1..a_i}``.  Internally coordinates are 0-based and colors are 0-based;
the text file format uses 1-based colors.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence, Union

import numpy as np


class GridError(ValueError):
    pass


class ColoringFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(a) for a in self.dims)
        if not dims:
            raise GridError("a grid needs at least one dimension")
        if any(a < 1 for a in dims):
            raise GridError(f"side lengths must be positive: {dims}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def parse(cls, text: str) -> "Grid":
        """Parse ``3x7x127`` (also accepts commas or spaces)."""
        parts = [p for p in re.split(r"[x,\s]+", text.strip().lower()) if p]
        try:
            return cls(tuple(int(p) for p in parts))
        except ValueError as exc:
            raise GridError(f"cannot parse grid {text!r}") from exc

    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def volume(self) -> int:
        return math.prod(self.dims)

    def __len__(self) -> int:
        return len(self.dims)

    def __iter__(self) -> Iterator[int]:
        return iter(self.dims)

    def __getitem__(self, i):
        return self.dims[i]

    def __str__(self) -> str:
        return "x".join(map(str, self.dims))


GridLike = Union[Grid, Sequence[int], str]


def as_grid(g: GridLike) -> Grid:
    if isinstance(g, Grid):
        return g
    if isinstance(g, str):
        return Grid.parse(g)
    return Grid(tuple(g))


def canonicalize(grid: GridLike) -> Grid:
    """Sort the side lengths ascending (the monotone representative)."""
    return Grid(tuple(sorted(as_grid(grid).dims)))


def dominance_leq(g1: GridLike, g2: GridLike) -> bool:
    """``g1 <= g2`` in the dominance order, up to permuting coordinates."""
    a, b = canonicalize(g1), canonicalize(g2)
    if a.d != b.d:
        raise GridError(f"dimension mismatch: {a} vs {b}")
    return all(x <= y for x, y in zip(a.dims, b.dims))


def box_count(grid: GridLike) -> int:
    return math.prod(math.comb(a, 2) for a in as_grid(grid).dims)


@dataclass(frozen=True)
class Box:
    anchor: tuple[int, ...]
    offsets: tuple[int, ...]

    def __post_init__(self):
        if len(self.anchor) != len(self.offsets):
            raise GridError("anchor and offsets differ in length")
        if any(s == 0 for s in self.offsets):
            raise GridError("box offsets must be nonzero")

    def corners(self) -> list[tuple[int, ...]]:
        return [
            tuple(x + e * s for x, e, s in zip(self.anchor, eps, self.offsets))
            for eps in itertools.product((0, 1), repeat=len(self.anchor))
        ]

    def inside(self, grid: GridLike) -> bool:
        dims = as_grid(grid).dims
        return all(0 <= p[i] < dims[i] for p in self.corners() for i in range(len(dims)))


def iter_boxes(grid: GridLike) -> Iterator[Box]:
    """Every box of the grid exactly once (lowest corner + positive offsets)."""
    dims = as_grid(grid).dims
    per_axis = [
        [(x, s) for x in range(a) for s in range(1, a - x)] for a in dims
    ]
    for choice in itertools.product(*per_axis):
        yield Box(tuple(x for x, _ in choice), tuple(s for _, s in choice))


class Coloring:
    """A total map from grid points to colors ``0..c-1``, stored row-major.

    The cell array is read-only; ``array`` is a shaped view of it.
    """

    __slots__ = ("grid", "colors", "cells")

    def __init__(self, grid: GridLike, colors: int, cells: Iterable[int]):
        grid = as_grid(grid)
        if colors < 1:
            raise ColoringFormatError("need at least one color")
        arr = np.array(list(cells) if not isinstance(cells, np.ndarray) else cells, dtype=np.int64).ravel()
        if arr.size != grid.volume:
            raise ColoringFormatError(
                f"cell count {arr.size} does not match volume {grid.volume} of {grid}"
            )
        if arr.size and (arr.min() < 0 or arr.max() >= colors):
            raise ColoringFormatError(f"color out of range for c={colors}")
        arr.flags.writeable = False
        self.grid = grid
        self.colors = int(colors)
        self.cells = arr

    @classmethod
    def from_array(cls, arr, colors: int) -> "Coloring":
        arr = np.asarray(arr)
        return cls(Grid(arr.shape), colors, arr.ravel())

    @property
    def array(self) -> np.ndarray:
        return self.cells.reshape(self.grid.dims)

    def __getitem__(self, point) -> int:
        return int(self.array[tuple(point)])

    def __eq__(self, other):
        if not isinstance(other, Coloring):
            return NotImplemented
        return (
            self.grid == other.grid
            and self.colors == other.colors
            and np.array_equal(self.cells, other.cells)
        )

    def __hash__(self):
        return hash((self.grid, self.colors, self.cells.tobytes()))

    def __repr__(self):
        return f"Coloring(grid={self.grid}, colors={self.colors})"


def count_monochromatic_boxes(coloring: Coloring) -> int:
    """Exact number of monochromatic boxes.

    Pairs of hyperplanes are folded axis by axis (cells that disagree become
    the sentinel -1); the final axis is then counted per lower box B and
    color i as ``C(gamma_i(B), 2)``.
    """
    dims = coloring.grid.dims
    if any(a < 2 for a in dims):
        return 0
    arr = coloring.array.reshape((1,) + dims)
    for axis_len in dims[:-1]:
        xs, ys = np.triu_indices(axis_len, k=1)
        left, right = arr[:, xs], arr[:, ys]
        arr = np.where(left == right, left, -1)
        arr = arr.reshape((-1,) + arr.shape[2:])
    # arr now has shape (number of (d-1)-boxes, a_d)
    total = 0
    for color in range(coloring.colors):
        gamma = np.count_nonzero(arr == color, axis=1).astype(np.int64)
        # each term is at most C(a_d, 2) and there are arr.shape[0] of them,
        # both bounded by what fits in memory, so int64 cannot overflow here
        total += int(np.sum(gamma * (gamma - 1) // 2))
    return total


def count_monochromatic_boxes_naive(coloring: Coloring) -> int:
    """Reference counter straight from the box definition. Small grids only."""
    arr = coloring.array
    n = 0
    for box in iter_boxes(coloring.grid):
        if len({int(arr[p]) for p in box.corners()}) == 1:
            n += 1
    return n


def coordinate_coloring(grid: GridLike, colors: int) -> Coloring | None:
    """Box-free coloring by one short coordinate, if some side is <= colors."""
    grid = as_grid(grid)
    for axis, a in enumerate(grid.dims):
        if a <= colors:
            shape = [1] * grid.d
            shape[axis] = a
            arr = np.broadcast_to(np.arange(a).reshape(shape), grid.dims)
            return Coloring(grid, colors, arr.ravel())
    return None


# -- file format -----------------------------------------------------------

def format_coloring(coloring: Coloring) -> str:
    dims = coloring.grid.dims
    lines = [
        "grid " + " ".join(map(str, dims)),
        f"colors {coloring.colors}",
    ]
    rows = (coloring.cells + 1).reshape(-1, dims[-1])
    lines.extend(" ".join(map(str, row)) for row in rows.tolist())
    return "\n".join(lines) + "\n"


def parse_coloring(text: str) -> Coloring:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) < 2:
        raise ColoringFormatError("missing header lines")
    head = lines[0].split()
    if head[0] != "grid" or len(head) < 2:
        raise ColoringFormatError(f"malformed grid header: {lines[0]!r}")
    chead = lines[1].split()
    if chead[0] != "colors" or len(chead) != 2:
        raise ColoringFormatError(f"malformed colors header: {lines[1]!r}")
    try:
        grid = Grid(tuple(int(x) for x in head[1:]))
        colors = int(chead[1])
        values = [int(tok) for ln in lines[2:] for tok in ln.split()]
    except (ValueError, GridError) as exc:
        raise ColoringFormatError(str(exc)) from exc
    if colors < 1:
        raise ColoringFormatError("colors must be positive")
    if len(values) != grid.volume:
        raise ColoringFormatError(
            f"expected {grid.volume} cells for grid {grid}, found {len(values)}"
        )
    bad = [v for v in values if not 1 <= v <= colors]
    if bad:
        raise ColoringFormatError(f"color {bad[0]} out of range 1..{colors}")
    return Coloring(grid, colors, [v - 1 for v in values])


def write_coloring(coloring: Coloring, path) -> None:
    Path(path).write_text(format_coloring(coloring))


def read_coloring(path) -> Coloring:
    return parse_coloring(Path(path).read_text())
