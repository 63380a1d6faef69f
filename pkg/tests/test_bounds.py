from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridramsey.bounds import (
    BoundsError,
    bound_certificate,
    compose_guarantee,
    corollary_grid,
    delta_sequence,
    drop_last_layer,
    e_enclosure,
    epsilon,
    gamma_sequence,
    guaranteed_count_lower_bound,
    hereditary_check,
    hereditary_constant,
    lll_volume_threshold,
    minimal_coloring,
    minimal_coloring_data,
    minus_grid,
    mu_guarantee_certificate,
    mu_lower_bound_holds,
    mu_sequence,
    pigeonhole_certificate,
    pinch_points,
    virtual_color_count,
    volume_sandwich,
)
from gridramsey.certificate import CertificateError
from gridramsey.grid import Grid, count_monochromatic_boxes
from gridramsey.verify import verify_certificate

sides = st.lists(st.integers(2, 40), min_size=1, max_size=4)


def test_delta_examples():
    assert delta_sequence(2, [4]).terms == (1, Fraction(2, 3))
    seq = delta_sequence(2, [5, 5])
    assert seq.terms[1] == Fraction(3, 4)
    # Delta_1^2 (1 - (4/Delta_1 - 1)/4) = (9/16)(1 - 13/12)
    assert seq.terms[2] == Fraction(-3, 64)
    assert not seq.certifies


def test_delta_with_one_color():
    seq = delta_sequence(1, [3, 4, 5])
    assert all(t == 1 for t in seq.terms)


def test_delta_zero_term_is_handled():
    # c=2, a=3: Delta_1 = 1 - 1/2 = 1/2; a=2 gives Delta_1 = 0 and then no division
    seq = delta_sequence(2, [2, 5])
    assert seq.terms[1] == 0 and seq.terms[2] == 0


def test_count_bound_examples():
    assert guaranteed_count_lower_bound(2, [4]) == 2
    assert guaranteed_count_lower_bound(2, [4], use_ceiling=True) == 2
    assert guaranteed_count_lower_bound(2, [5, 5]) is None
    assert guaranteed_count_lower_bound(2, [3]) == Fraction(3, 4)
    assert guaranteed_count_lower_bound(2, [3], use_ceiling=True) == 1


@given(sides, st.integers(1, 4))
def test_ceiling_never_weakens(dims, c):
    plain = guaranteed_count_lower_bound(c, dims)
    ceil = guaranteed_count_lower_bound(c, dims, use_ceiling=True)
    if plain is not None:
        assert ceil is not None and ceil >= plain


def test_gamma_examples():
    assert gamma_sequence(2, [4]).terms[1] == Fraction(1, 3)
    seq = gamma_sequence(2, [13, 13])
    assert seq.terms[1:] == (Fraction(5, 6), Fraction(5, 12))
    assert seq.certifies


@given(sides, st.integers(1, 4))
def test_gamma_below_delta(dims, c):
    g = gamma_sequence(c, dims).terms
    d = delta_sequence(c, dims).terms
    # proved for the positive prefix of Gamma; [4, 2] with c = 2 shows it
    # can fail once both sequences are negative
    for j in range(1, len(dims) + 1):
        if g[j] <= 0:
            break
        assert g[j] <= d[j]


def test_gamma_delta_order_fails_when_negative():
    g, d = gamma_sequence(2, [4, 2]).terms, delta_sequence(2, [4, 2]).terms
    assert g[2] == Fraction(-11, 9) > d[2] == Fraction(-16, 9)


@given(sides, st.integers(1, 4))
def test_epsilon_controls_gamma(dims, c):
    eps = epsilon(c, dims).terms
    gam = gamma_sequence(c, dims).terms
    if all(e < 1 for e in eps):
        assert all(g >= 1 - e for g, e in zip(gam, eps))


@given(sides, st.integers(1, 4))
def test_epsilon_recurrence_and_monotone(dims, c):
    eps = epsilon(c, dims).terms
    assert eps[0] == 0
    for j, a in enumerate(dims, start=1):
        assert eps[j] == 2 * eps[j - 1] + Fraction(c ** (2 ** (j - 1)), a - 1)
        assert eps[j] > eps[j - 1]


def test_epsilon_examples():
    assert epsilon(2, [13, 13]).final == Fraction(2, 3)
    seq = epsilon(2, [3, 7])
    assert seq.final == Fraction(8, 3) and not seq.certifies


@pytest.mark.parametrize("fn", [delta_sequence, gamma_sequence, epsilon])
def test_sequences_reject_short_sides(fn):
    with pytest.raises(BoundsError):
        fn(2, [1, 5])


def test_corollary_grid_examples():
    assert corollary_grid(2, 1).dims == (5,)  # 2*1*2 + 1
    assert epsilon(2, [5]).final == Fraction(1, 2)
    assert corollary_grid(2, 2).dims == (13, 13)
    assert corollary_grid(3, 2).dims == (19, 28)


def test_e_enclosure_brackets_e():
    lo, hi = e_enclosure(20)
    e_lo = Fraction(271828182845904523536, 10 ** 20)
    assert lo < e_lo + Fraction(1, 10 ** 20) and hi > e_lo and hi - lo < Fraction(1, 10 ** 15)


def test_lll_threshold_examples():
    assert lll_volume_threshold(2, 1) == 0
    assert lll_volume_threshold(2, 3) == 5
    assert lll_volume_threshold(10, 2) == 91


def test_volume_sandwich():
    s = volume_sandwich(2, 2)
    assert s["lower"] == lll_volume_threshold(2, 2) < s["upper_exclusive"]


def test_hereditary_examples():
    assert hereditary_check(2, [3])
    assert not hereditary_check(2, [2])
    assert hereditary_constant(2, 2) == 512
    assert hereditary_check(2, [3, 2731])
    assert not hereditary_check(2, [3, 2730])
    # sides are canonicalized first
    assert hereditary_check(2, [2731, 3])


def test_virtual_colors():
    assert virtual_color_count(2, [3, 7], 1) == 6
    assert virtual_color_count(2, [3, 7, 127], 2) == 126
    assert virtual_color_count(1, [2, 2], 1) == 1
    with pytest.raises(BoundsError):
        virtual_color_count(2, [3, 7], 2)


def test_compose_guarantee():
    cert = compose_guarantee(pigeonhole_certificate(2, 3), pigeonhole_certificate(6, 7))
    assert cert.guaranteed and cert.grid == Grid((3, 7))
    assert cert.params == {"j": 1, "virtual_colors": 6}
    assert verify_certificate(cert).valid
    with pytest.raises(CertificateError):
        compose_guarantee(pigeonhole_certificate(2, 3), pigeonhole_certificate(5, 7))


def test_mu_certificates_chain():
    cert = mu_guarantee_certificate(2, 3)
    assert cert.grid == Grid((3, 7, 127)) and cert.method == "product-composition"
    assert cert.params["virtual_colors"] == 126
    assert verify_certificate(cert).valid


def test_bound_certificate_picks_method():
    assert bound_certificate(2, [13, 13]).method == "epsilon"
    assert bound_certificate(2, [5, 5]) is None
    assert bound_certificate(2, [3]).method == "pigeonhole"
    assert bound_certificate(2, [2]) is None
    cert = bound_certificate(2, [3, 2731])
    assert cert is not None and verify_certificate(cert).valid


def test_pinch_points():
    assert pinch_points(2, [3, 7]).points == (2,)
    assert pinch_points(2, [3, 7], choice="least").points == (1, 2)
    assert pinch_points(2, [3, 7, 127], choice="least").points == (1, 2, 3)
    for choice in ("largest", "least"):
        assert pinch_points(2, [3, 7, 127], choice=choice).points[-1] == 3
    with pytest.raises(BoundsError):
        pinch_points(2, [2, 7])
    with pytest.raises(BoundsError):
        pinch_points(2, [7, 3])
    with pytest.raises(BoundsError):
        pinch_points(2, [40, 40])  # eps of R^- below 1: not an obstruction


def test_minus_grid():
    assert minus_grid([5, 5]).dims == (4, 5)
    assert minus_grid([3, 7]).dims == (3, 6)


def test_mu_sequence():
    assert mu_sequence(2, 4) == [3, 7, 127, 1008127]
    assert mu_sequence(3, 2) == [4, 19]
    with pytest.raises(BoundsError):
        mu_sequence(1, 2)


@pytest.mark.parametrize("c", [2, 3, 4, 5])
def test_mu_lower_bound(c):
    for j, m in enumerate(mu_sequence(c, 4), start=1):
        assert mu_lower_bound_holds(c, j, m)


def test_minimal_coloring_base_case():
    col = minimal_coloring(2, 1)
    # (2, 1, 2) in file colors: the single mono pair is {1, 3}
    assert (col.cells + 1).tolist() == [2, 1, 2]
    assert count_monochromatic_boxes(col) == 1


@pytest.mark.parametrize("c,d", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_minimal_coloring_one_box(c, d):
    data = minimal_coloring_data(c, d)
    col = data.coloring
    assert col.grid.dims == tuple(mu_sequence(c, d))
    assert count_monochromatic_boxes(col) == 1
    trimmed = drop_last_layer(col)
    assert trimmed.grid.dims[-1] == mu_sequence(c, d)[-1] - 1
    assert count_monochromatic_boxes(trimmed) == 0
    # the recorded box is the monochromatic one
    from itertools import product
    corners = {col.array[p] for p in product(*data.box)}
    assert corners == {data.color}
