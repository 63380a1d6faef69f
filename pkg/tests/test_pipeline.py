import pytest

from gridramsey.grid import Coloring, Grid, count_monochromatic_boxes
from gridramsey.pipeline import (
    PRINTED_TABLE,
    a3_table,
    best_t,
    exponent_argmax,
    exponent_ratio,
    least_a3_delta,
    obstruction_count_exponent,
    printed_cell,
    pinch_split_exponent,
    product_extension,
    surface_csv,
    table_csv,
    table_markdown,
)
from gridramsey.search import find_coloring, min_mono_boxes_exact
from gridramsey.verify import verify_certificate


def test_product_extension_examples():
    k, cert = product_extension(2, [3, 7], 1)
    assert k == 127 and cert.grid == Grid((3, 7, 127)) and cert.method == "product"
    assert product_extension(2, [5, 5], 2)[0] == 101
    assert product_extension(2, [3], 1)[0] == 7
    with pytest.raises(ValueError):
        product_extension(2, [3, 7], 0)


@pytest.mark.parametrize("a", range(3, 9))
def test_product_lemma_against_search_1d(a):
    t = min_mono_boxes_exact(2, (a,))
    k, cert = product_extension(2, [a], t)
    assert find_coloring(2, (a, k)) is None
    assert verify_certificate(cert).valid


def test_product_extension_monotone():
    ks = [product_extension(2, [5, 6], t)[0] for t in range(1, 10)]
    assert ks == sorted(ks, reverse=True)
    assert product_extension(2, [5, 6], 3)[0] > product_extension(2, [5, 5], 3)[0]


def test_best_t_examples():
    b = best_t((3, 8), max_seconds=30)
    assert (b.t, b.method, b.exact) == (2, "qform-exact", True)
    assert best_t((5, 6), max_seconds=30).t == 4
    zero = best_t((3, 3), max_seconds=30)
    assert zero.t == 0 and zero.method == "exhaustive"
    assert isinstance(zero.witness, Coloring) and count_monochromatic_boxes(zero.witness) == 0
    with pytest.raises(ValueError):
        best_t((3, 3, 3))


def test_best_t_falls_back_to_delta():
    b = best_t((12, 12), max_seconds=0.2)
    assert not b.exact and b.method == "delta-ceiling" and b.t == b.delta_t > 0


def test_least_a3_delta():
    assert least_a3_delta(2, 13, 13) is not None
    assert least_a3_delta(2, 3, 3) is None
    with pytest.raises(ValueError):
        least_a3_delta(2, 1, 5)


def test_least_a3_delta_antitone_without_rounding():
    vals = {(x, y): least_a3_delta(2, x, y, use_ceiling=False) for x in range(5, 15) for y in range(5, 15)}
    for (x, y), v in vals.items():
        if v is None:
            continue
        for nx, ny in ((x + 1, y), (x, y + 1)):
            w = vals.get((nx, ny))
            if (nx, ny) in vals:
                assert w is not None and w <= v


def test_rounding_breaks_antitonicity():
    # per-step rounding helps [5, 6] more than [6, 6]; the table's dominance
    # closure repairs this
    assert least_a3_delta(2, 5, 6) == 101
    assert least_a3_delta(2, 6, 6) == 113
    assert least_a3_delta(2, 6, 6, use_ceiling=False) <= least_a3_delta(2, 5, 6, use_ceiling=False)


@pytest.fixture(scope="module")
def small_table():
    return a3_table(range(3, 7), range(3, 8), max_seconds_per_cell=20)


def test_table_cells(small_table):
    assert small_table[(3, 7)].a3_bound == 127
    assert small_table[(5, 5)].a3_bound == 101
    assert small_table[(5, 6)].a3_bound == 76
    assert small_table[(6, 5)].a3_bound == 76
    for y in range(3, 7):
        assert small_table[(3, y)].a3_bound is None
    assert small_table[(4, 7)].a3_bound == small_table[(3, 7)].a3_bound


def test_table_matches_printed_where_available(small_table):
    for (x, y), e in small_table.items():
        p = printed_cell(x, y)
        assert (e.a3_bound is None) == (p is None)
        if p is not None:
            assert e.a3_bound <= p


def test_table_certificates_verify(small_table):
    for e in small_table.values():
        cert = e.certificate()
        if cert is None:
            continue
        assert cert.grid.dims[2] == e.a3_bound
        assert verify_certificate(cert).valid, (e.a1, e.a2)


def test_table_outputs(small_table):
    csv_text = table_csv(small_table)
    lines = csv_text.splitlines()
    assert lines[0] == "a1,a2,a3_bound,method,t_used,t_exact,printed"
    assert "3,7,127,product,1,1,127" in lines
    md = table_markdown(small_table)
    assert md.splitlines()[0].startswith("| a1\\a2 |")
    surf = surface_csv(small_table).splitlines()
    assert surf[0] == "a1,a2,a3_bound" and "5,5,101" in surf


def test_printed_table_symmetric_and_shape():
    assert sorted(PRINTED_TABLE) == list(range(3, 13))
    assert all(len(row) == 10 for row in PRINTED_TABLE.values())
    # rows 3 and 4 coincide
    assert PRINTED_TABLE[3] == PRINTED_TABLE[4]


@pytest.mark.parametrize("d,e", [(2, 2), (3, 8), (4, 25), (5, 76), (6, 229)])
def test_obstruction_exponent(d, e):
    assert obstruction_count_exponent(d) == e


def test_obstruction_exponent_rejects_small_d():
    with pytest.raises(ValueError):
        obstruction_count_exponent(1)


@pytest.mark.parametrize("d", range(3, 11))
def test_exponent_is_max_over_pinch_splits(d):
    assert max(pinch_split_exponent(d, m) for m in range(d)) == obstruction_count_exponent(d)


def test_exponent_argmax():
    for d in range(3, 13):
        assert exponent_argmax(d) == 3
    assert exponent_ratio(3) == pytest.approx(17 / 27)
