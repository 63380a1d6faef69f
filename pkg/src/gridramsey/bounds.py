"""Exact-rational guarantee certificates and explicit constructions.

Every verdict here is decided in exact integer/rational arithmetic; the
powers ``c**(2**(j-1))`` grow doubly exponentially, so floats never enter.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .certificate import GUARANTEED, Certificate, CertificateError
from .grid import Coloring, Grid, GridError, GridLike, as_grid, box_count, canonicalize


class BoundsError(ValueError):
    pass


@dataclass(frozen=True)
class RationalBoundSequence:
    kind: str  # "delta" | "gamma" | "epsilon"
    c: int
    grid: Grid
    terms: tuple[Fraction, ...]

    @property
    def final(self) -> Fraction:
        return self.terms[-1]

    @property
    def certifies(self) -> bool:
        """Whether the sequence proves the grid c-guaranteed."""
        if self.kind == "epsilon":
            return self.final < 1
        return all(t > 0 for t in self.terms[1:])


def _require_sides(grid: Grid, least: int = 2) -> None:
    if any(a < least for a in grid.dims):
        raise BoundsError(f"all side lengths must be >= {least}: {grid}")


def delta_sequence(c: int, grid: GridLike) -> RationalBoundSequence:
    grid = as_grid(grid)
    _require_sides(grid)
    terms = [Fraction(1)]
    for j, a in enumerate(grid.dims, start=1):
        prev = terms[-1]
        power = c ** (2 ** (j - 1))
        # expanded form of prev^2 (1 - (power/prev - 1)/(a - 1)); no division by prev
        terms.append(prev * (prev - (power - prev) / Fraction(a - 1)))
    return RationalBoundSequence("delta", c, grid, tuple(terms))


def gamma_sequence(c: int, grid: GridLike) -> RationalBoundSequence:
    grid = as_grid(grid)
    _require_sides(grid)
    terms = [Fraction(1)]
    for j, a in enumerate(grid.dims, start=1):
        prev = terms[-1]
        terms.append(prev * (prev - Fraction(c ** (2 ** (j - 1)), a - 1)))
    return RationalBoundSequence("gamma", c, grid, tuple(terms))


def epsilon(c: int, grid: GridLike) -> RationalBoundSequence:
    """Prefix values eps_0..eps_d; the last one equals eps_c(R)."""
    grid = as_grid(grid)
    _require_sides(grid)
    terms = [Fraction(0)]
    for j, a in enumerate(grid.dims, start=1):
        terms.append(2 * terms[-1] + Fraction(c ** (2 ** (j - 1)), a - 1))
    return RationalBoundSequence("epsilon", c, grid, tuple(terms))


def epsilon_value(c: int, grid: GridLike) -> Fraction:
    """Closed form sum_i 2^(d-i) c^(2^(i-1)) / (a_i - 1)."""
    grid = as_grid(grid)
    _require_sides(grid)
    d = grid.d
    return sum(
        (Fraction(2 ** (d - i) * c ** (2 ** (i - 1)), a - 1) for i, a in enumerate(grid.dims, start=1)),
        Fraction(0),
    )


def count_bound_sequence(c: int, grid: GridLike, use_ceiling: bool = False) -> list[Fraction]:
    """Lower bounds T_j on the monochromatic boxes of every coloring of
    ``[a_1..a_j]``, j = 0..d.

    ``T_j = (S^2 - M c S) / (2 M c)`` with ``S = a_j T_{j-1}`` and ``M`` the box
    count of ``[a_1..a_{j-1}]``.  Without rounding this is exactly
    ``M_j Delta_j / c^(2^j - 1)``.  With ``use_ceiling`` each T_j is rounded up
    before the next step, which is sound because box counts are integers.
    Iteration stops at the first nonpositive term.
    """
    grid = as_grid(grid)
    _require_sides(grid)
    bounds = [Fraction(1)]
    boxes = 1
    for a in grid.dims:
        s = a * bounds[-1]
        t = (s * s - boxes * c * s) / (2 * boxes * c)
        if use_ceiling and t > 0:
            t = Fraction(math.ceil(t))
        bounds.append(t)
        if t <= 0:
            break
        boxes *= math.comb(a, 2)
    return bounds


def guaranteed_count_lower_bound(c: int, grid: GridLike, use_ceiling: bool = False):
    """``M Delta_d / c^(2^d - 1)`` (a Fraction), or its per-step ceiling version
    (an int).  ``None`` when some step is nonpositive: no bound."""
    grid = as_grid(grid)
    if any(a < 2 for a in grid.dims):
        return None
    bounds = count_bound_sequence(c, grid, use_ceiling)
    if len(bounds) != grid.d + 1 or any(t <= 0 for t in bounds[1:]):
        return None
    final = bounds[-1]
    return int(final) if use_ceiling else final


def corollary_grid(c: int, d: int) -> Grid:
    """Sides ``(d+1) 2^(d-j) c^(2^(j-1)) + 1``; eps_c of it is d/(d+1)."""
    if c < 2 or d < 1:
        raise BoundsError("need c >= 2 and d >= 1")
    return Grid(tuple((d + 1) * 2 ** (d - j) * c ** (2 ** (j - 1)) + 1 for j in range(1, d + 1)))


# -- small-volume colorability ----------------------------------------------

def e_enclosure(terms: int) -> tuple[Fraction, Fraction]:
    """Rational bounds lo < e < hi from the partial sum of 1/k!, k <= terms."""
    if terms < 1:
        raise BoundsError("need at least one term")
    lo = Fraction(0)
    fact = 1
    for k in range(terms + 1):
        if k:
            fact *= k
        lo += Fraction(1, fact)
    # tail sum_{k>n} 1/k! < 1/(n! n)
    return lo, lo + Fraction(1, fact * terms)


def floor_div_e(x: Fraction) -> int:
    """floor(x / e) for rational x > 0, decided on a refining enclosure of e."""
    n = 8
    while True:
        lo, hi = e_enclosure(n)
        a, b = math.floor(x / hi), math.floor(x / lo)
        if a == b:
            return a
        n *= 2


def lll_volume_threshold(c: int, d: int) -> int:
    """Largest V with V * e * 2^d <= c^(2^d - 1): every grid of volume <= V
    is c-colorable."""
    if c < 2 or d < 1:
        raise BoundsError("need c >= 2 and d >= 1")
    return floor_div_e(Fraction(c ** (2 ** d - 1), 2 ** d))


def volume_sandwich(c: int, d: int) -> dict:
    """Proven interval for V(c, d): ``lll_threshold <= V < upper``."""
    return {
        "c": c,
        "d": d,
        "lower": lll_volume_threshold(c, d),
        "upper_exclusive": (d + 2) ** d * 2 ** (d * (d - 1) // 2) * c ** (2 ** d - 1),
    }


# -- hereditary volume criterion --------------------------------------------

def hereditary_constant(d: int, j: int) -> int:
    # 3^(j-1) is odd, so the exponent 3(3^(j-1) - 1)/2 is an integer
    return (d * 2 ** d) ** (3 * (3 ** (j - 1) - 1) // 2)


def hereditary_check(c: int, grid: GridLike) -> bool:
    """Every prefix volume ``a_1...a_j`` exceeds ``C_j c^((3^j - 1)/2)``."""
    grid = canonicalize(grid)
    d = grid.d
    vol = 1
    for j, a in enumerate(grid.dims, start=1):
        vol *= a
        if vol <= hereditary_constant(d, j) * c ** ((3 ** j - 1) // 2):
            return False
    return True


# -- virtual colors ------------------------------------------------------------

def virtual_color_count(c: int, grid: GridLike, j: int) -> int:
    grid = as_grid(grid)
    if not 1 <= j < grid.d:
        raise BoundsError(f"j must lie in 1..{grid.d - 1}, got {j}")
    return c * box_count(grid.dims[:j])


def compose_guarantee(cert_low: Certificate, cert_high: Certificate) -> Certificate:
    """``R_j`` c-guaranteed and ``R-bar_j`` c'-guaranteed give ``R`` c-guaranteed."""
    if not (cert_low.guaranteed and cert_high.guaranteed):
        raise CertificateError("both sub-certificates must be guaranteed")
    c = cert_low.colors
    j = cert_low.grid.d
    grid = Grid(cert_low.grid.dims + cert_high.grid.dims)
    expected = virtual_color_count(c, grid, j)
    if cert_high.colors != expected:
        raise CertificateError(
            f"upper certificate uses {cert_high.colors} colors, need c' = {expected}"
        )
    return Certificate(
        GUARANTEED,
        "product-composition",
        grid,
        c,
        params={"j": j, "virtual_colors": expected},
        sub_certificates=[cert_low, cert_high],
    )


def pigeonhole_certificate(c: int, a: int) -> Certificate:
    if a <= c:
        raise CertificateError(f"[{a}] is not {c}-guaranteed by pigeonhole")
    return Certificate(GUARANTEED, "pigeonhole", Grid((a,)), c)


def bound_certificate(c: int, grid: GridLike) -> Certificate | None:
    """Try the closed-form criteria (pigeonhole, eps, Gamma, Delta,
    hereditary) on every ordering of the sides; first success wins."""
    grid = as_grid(grid)
    if grid.d == 1:
        return pigeonhole_certificate(c, grid[0]) if grid[0] > c else None
    if any(a < 2 for a in grid.dims):
        return None
    orders = sorted(set(itertools.permutations(grid.dims))) if grid.d <= 5 else [canonicalize(grid).dims]
    for kind, fn in (("epsilon", epsilon), ("gamma", gamma_sequence), ("delta", delta_sequence)):
        for order in orders:
            seq = fn(c, order)
            if seq.certifies:
                return Certificate(
                    GUARANTEED, kind, grid, c,
                    params={"order": list(order), "terms": [str(t) for t in seq.terms]},
                )
    if hereditary_check(c, grid):
        return Certificate(GUARANTEED, "hereditary", grid, c)
    return None


# -- pinch points --------------------------------------------------------------

@dataclass(frozen=True)
class PinchPointSet:
    grid: Grid
    c: int
    points: tuple[int, ...]  # 1-based, increasing, ends with d
    virtual_colors: tuple[int, ...]  # color count in force when each point was chosen
    side_bounds: tuple[int, ...]  # a_point <= bound, from the defining inequality


def minus_grid(grid: GridLike) -> Grid:
    """R^-: subtract one from the first side equal to the largest side."""
    dims = list(canonicalize(grid).dims)
    j = dims.index(dims[-1])
    dims[j] -= 1
    return Grid(tuple(dims))


def pinch_points(c: int, grid: GridLike, choice: str = "largest") -> PinchPointSet:
    """Pinch point set of a (candidate) obstruction grid.

    At each stage the chosen index is the largest (default) or least index
    ``m`` after the previous point ``p`` with
    ``2^(d-m) c_p^(2^(m-p-1)) / (a_m - 2) >= 1/(d-p)``, where
    ``c_p = c * prod_{i<=p} C(a_i, 2)``.
    """
    if choice not in ("largest", "least"):
        raise BoundsError(f"unknown choice {choice!r}")
    grid = as_grid(grid)
    if grid != canonicalize(grid):
        raise BoundsError(f"grid must be monotone: {grid}")
    if any(a < 3 for a in grid.dims):
        raise BoundsError(f"all sides must be >= 3: {grid}")
    if epsilon_value(c, minus_grid(grid)) < 1:
        raise BoundsError(f"eps_c(R^-) < 1, so {grid} cannot be an obstruction for c={c}")
    d = grid.d
    a = (None,) + grid.dims  # 1-based
    points, colors_used, side_bounds = [], [], []
    prev, cc = 0, c
    while prev < d:
        rem = d - prev
        ok = [
            m for m in range(prev + 1, d + 1)
            if Fraction(2 ** (d - m) * cc ** (2 ** (m - prev - 1)), a[m] - 2) >= Fraction(1, rem)
        ]
        if not ok:
            raise BoundsError(f"no admissible pinch point after {prev}; premise fails for {grid}")
        m = ok[-1] if choice == "largest" else ok[0]
        points.append(m)
        colors_used.append(cc)
        side_bounds.append(rem * 2 ** (d - m) * cc ** (2 ** (m - prev - 1)) + 2)
        cc = c * box_count(grid.dims[:m])
        prev = m
    return PinchPointSet(grid, c, tuple(points), tuple(colors_used), tuple(side_bounds))


# -- the mu sequence and minimal colorings --------------------------------------

def mu_sequence(c: int, d: int) -> list[int]:
    if c < 2 or d < 1:
        raise BoundsError("need c >= 2 and d >= 1")
    mus = [1 + c]
    while len(mus) < d:
        mus.append(1 + c * box_count(mus))
    return mus


def mu_lower_bound_holds(c: int, j: int, mu_j: int) -> bool:
    """``mu_j >= 1 + 2^((1 - 3^(j-1))/2) c^(3^(j-1))``, cleared of the power of two."""
    k = 3 ** (j - 1)
    return (mu_j - 1) * 2 ** ((k - 1) // 2) >= c ** k


@dataclass
class MinimalColoring:
    coloring: Coloring
    box: tuple[tuple[int, int], ...]  # the unique monochromatic box, per-axis pair
    color: int


def _axis_perm(n: int, src: tuple[int, int], dst: tuple[int, int]) -> np.ndarray:
    """Permutation of range(n) sending src -> dst pairwise, rest in order."""
    perm = np.empty(n, dtype=np.int64)
    perm[list(src)] = list(dst)
    rest_src = [i for i in range(n) if i not in src]
    rest_dst = [i for i in range(n) if i not in dst]
    perm[rest_src] = rest_dst
    return perm


def minimal_coloring_data(c: int, d: int) -> MinimalColoring:
    if c < 2 or d < 1:
        raise BoundsError("need c >= 2 and d >= 1")
    mus = mu_sequence(c, d)
    base = np.array([(x + 1) % c for x in range(c + 1)], dtype=np.int64)
    current = MinimalColoring(Coloring(Grid((c + 1,)), c, base), ((0, c),), 1 % c)
    for k in range(1, d):
        sides = mus[:k]
        f = current.coloring.array
        n_layers = mus[k] - 1
        layers = np.empty((n_layers,) + tuple(sides), dtype=np.int64)
        axis_pairs = [list(itertools.combinations(range(a), 2)) for a in sides]
        idx = 0
        for box in itertools.product(*axis_pairs):
            perms = [_axis_perm(a, src, dst) for a, src, dst in zip(sides, current.box, box)]
            for s in range(c):
                sigma = np.arange(c)
                sigma[[current.color, s]] = sigma[[s, current.color]]
                layer = np.empty(tuple(sides), dtype=np.int64)
                layer[np.ix_(*perms)] = sigma[f]
                layers[idx] = layer
                idx += 1
        assert idx == n_layers
        full = np.concatenate([layers, layers[:1]], axis=0)
        # layers run along the new last axis
        arr = np.moveaxis(full, 0, -1)
        first_box = tuple(axis_pairs_i[0] for axis_pairs_i in axis_pairs)
        current = MinimalColoring(
            Coloring(Grid(tuple(sides) + (n_layers + 1,)), c, arr.ravel()),
            first_box + ((0, n_layers),),
            0,
        )
    return current


def minimal_coloring(c: int, d: int) -> Coloring:
    """A coloring of ``[mu_1..mu_d]`` with exactly one monochromatic box.

    Built by stacking one layer per (box, color) pair of the
    ``[mu_1..mu_(d-1)]`` minimal coloring, boxes in lexicographic order of
    their hyperplane pairs and colors ascending, then repeating the first
    layer at the end.
    """
    return minimal_coloring_data(c, d).coloring


def drop_last_layer(coloring: Coloring) -> Coloring:
    """Remove the final hyperplane along the last axis."""
    arr = coloring.array[..., :-1]
    return Coloring(Grid(arr.shape), coloring.colors, arr.ravel())


def mu_guarantee_certificate(c: int, d: int) -> Certificate:
    """Certificate that ``[mu_1..mu_d]`` is c-guaranteed, by composing
    pigeonhole steps."""
    mus = mu_sequence(c, d)
    cert = pigeonhole_certificate(c, mus[0])
    for k in range(1, d):
        cprime = virtual_color_count(c, mus[: k + 1], k)
        cert = compose_guarantee(cert, pigeonhole_certificate(cprime, mus[k]))
    return cert
