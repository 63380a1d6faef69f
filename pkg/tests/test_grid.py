import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridramsey.grid import (
    Box,
    Coloring,
    ColoringFormatError,
    Grid,
    GridError,
    box_count,
    canonicalize,
    coordinate_coloring,
    count_monochromatic_boxes,
    count_monochromatic_boxes_naive,
    dominance_leq,
    format_coloring,
    iter_boxes,
    parse_coloring,
    read_coloring,
    write_coloring,
)


def test_grid_parse_and_str():
    g = Grid.parse("3x7x127")
    assert g.dims == (3, 7, 127)
    assert g.d == 3
    assert g.volume == 3 * 7 * 127
    assert str(g) == "3x7x127"


@pytest.mark.parametrize("bad", ["", "3x0", "3xq", "-1x4"])
def test_grid_parse_rejects(bad):
    with pytest.raises(GridError):
        Grid.parse(bad)


def test_volume_is_exact_for_huge_sides():
    g = Grid((10 ** 30, 10 ** 30))
    assert g.volume == 10 ** 60


@pytest.mark.parametrize("dims,expected", [((5, 5), 100), ((3, 7), 63), ((9, 1), 0), ((4,), 6)])
def test_box_count(dims, expected):
    assert box_count(dims) == expected


def test_canonicalize_examples():
    assert canonicalize((7, 3)).dims == (3, 7)
    assert canonicalize((5, 5)).dims == (5, 5)
    assert canonicalize((12, 3, 7)).dims == (3, 7, 12)


def test_dominance_examples():
    assert dominance_leq((3, 7), (4, 7))
    assert not dominance_leq((5, 5), (3, 7))
    assert dominance_leq((3, 7), (7, 3))
    with pytest.raises(GridError):
        dominance_leq((3, 7), (3, 7, 1))


grids3 = st.lists(st.integers(1, 9), min_size=3, max_size=3).map(tuple)


@given(grids3, grids3, grids3)
def test_dominance_is_partial_order(a, b, c):
    assert dominance_leq(a, a)
    if dominance_leq(a, b) and dominance_leq(b, a):
        assert canonicalize(a) == canonicalize(b)
    if dominance_leq(a, b) and dominance_leq(b, c):
        assert dominance_leq(a, c)


def test_count_examples():
    assert count_monochromatic_boxes(Coloring(Grid((4,)), 2, [0, 0, 1, 1])) == 2
    assert count_monochromatic_boxes(Coloring(Grid((2, 2)), 1, [0, 0, 0, 0])) == 1
    assert count_monochromatic_boxes(Coloring(Grid((2, 2)), 2, [0, 1, 1, 0])) == 0


def test_box_corners_inside():
    g = Grid((3, 4, 2))
    boxes = list(iter_boxes(g))
    assert len(boxes) == box_count(g)
    for b in boxes:
        corners = b.corners()
        assert len(set(corners)) == 8
        assert all(all(0 <= x < a for x, a in zip(p, g.dims)) for p in corners)


def test_box_rejects_zero_offset():
    with pytest.raises(GridError):
        Box((0, 0), (1, 0))


@st.composite
def small_colorings(draw):
    d = draw(st.integers(1, 3))
    dims = []
    vol = 1
    for _ in range(d):
        a = draw(st.integers(1, max(1, 20 // vol)))
        dims.append(a)
        vol *= a
    c = draw(st.integers(1, 3))
    cells = draw(st.lists(st.integers(0, c - 1), min_size=vol, max_size=vol))
    return Coloring(Grid(tuple(dims)), c, cells)


@settings(max_examples=200)
@given(small_colorings())
def test_count_matches_naive_enumeration(col):
    n = count_monochromatic_boxes(col)
    assert n == count_monochromatic_boxes_naive(col)
    if min(col.grid.dims) < 2:
        assert n == 0


@given(st.lists(st.integers(1, 5), min_size=1, max_size=3))
def test_box_count_matches_enumerator(dims):
    assert box_count(dims) == sum(1 for _ in iter_boxes(dims))


def test_count_is_python_int_and_large():
    col = Coloring(Grid((40, 40)), 1, np.zeros(1600, dtype=np.int64))
    n = count_monochromatic_boxes(col)
    assert isinstance(n, int) and n == 780 ** 2


@settings(max_examples=50)
@given(small_colorings())
def test_file_round_trip(col):
    assert parse_coloring(format_coloring(col)) == col


def test_file_round_trip_on_disk(tmp_path):
    col = Coloring(Grid((2, 3)), 3, [0, 1, 2, 2, 1, 0])
    write_coloring(col, tmp_path / "c.txt")
    text = (tmp_path / "c.txt").read_text()
    assert text.splitlines()[:2] == ["grid 2 3", "colors 3"]
    assert read_coloring(tmp_path / "c.txt") == col


def test_parse_ignores_comments():
    col = parse_coloring("# hi\ngrid 2 2\n# more\ncolors 2\n1 2\n2 1\n")
    assert col.grid.dims == (2, 2) and count_monochromatic_boxes(col) == 0


@pytest.mark.parametrize("text", [
    "grid 2 2\ncolors 2\n1 2\n3 1\n",  # color out of range
    "grid 2 2\ncolors 2\n1 2 1\n",  # cell count mismatch
    "grd 2 2\ncolors 2\n1 2\n2 1\n",
    "grid 2 2\n1 2\n2 1\n",
    "grid 2 2\ncolors 2\n1 2\n0 1\n",
])
def test_parse_rejects_malformed(text):
    with pytest.raises(ColoringFormatError):
        parse_coloring(text)


def test_coloring_validation():
    with pytest.raises(ValueError):
        Coloring(Grid((2, 2)), 2, [0, 1, 2, 0])
    with pytest.raises(ValueError):
        Coloring(Grid((2, 2)), 2, [0, 1, 1])


def test_coordinate_coloring():
    col = coordinate_coloring((2, 9, 9), 2)
    assert col is not None and count_monochromatic_boxes(col) == 0
    assert coordinate_coloring((3, 7), 2) is None


def test_row_major_layout():
    col = Coloring(Grid((2, 3)), 6, list(range(6)))
    assert col.array[1, 0] == 3
    assert list(itertools.chain.from_iterable(col.array.tolist())) == list(range(6))
