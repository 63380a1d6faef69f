"""The column-type quadratic form for 2-colored ``r x s`` grids.

Column types are the maps ``f_j : [r] -> [2]``; bit ``k`` of ``j`` set means
``f_j(k+1) = 2``.  ``M_r[i, j]`` counts the rectangles formed by one column
of type ``i`` and one of type ``j``, so for a multiplicity vector ``v`` with
``sum(v) = s`` the number of monochromatic rectangles is
``(v^T M_r v - v . diag(M_r)) / 2``.
"""
from __future__ import annotations

import functools
import math
import time
from dataclasses import dataclass, field

import numpy as np


class QFormError(ValueError):
    pass


@dataclass(frozen=True)
class QFormInstance:
    r: int
    matrix: np.ndarray
    diag: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def _popcount(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.int64)
    out = np.zeros_like(x)
    while np.any(x):
        out += x & 1
        x = x >> 1
    return out


@functools.lru_cache(maxsize=4)
def build_matrix(r: int) -> QFormInstance:
    if not 1 <= r <= 16:
        raise QFormError(f"r must lie in 1..16, got {r}")
    n = 1 << r
    idx = np.arange(n, dtype=np.int64)
    pc = _popcount(idx)
    i, j = idx[:, None], idx[None, :]
    ones = pc[i & j]
    zeros = pc[~(i | j) & (n - 1)]
    matrix = ones * (ones - 1) // 2 + zeros * (zeros - 1) // 2
    matrix.flags.writeable = False
    diag = matrix.diagonal().copy()
    diag.flags.writeable = False
    return QFormInstance(r, matrix, diag)


def format_matrix(inst: QFormInstance) -> str:
    rows = [str(inst.r)] + [" ".join(map(str, row)) for row in inst.matrix.tolist()]
    return "\n".join(rows) + "\n"


def qform_penalized(inst: QFormInstance, v) -> int:
    """``v^T M v - v . delta`` in exact integer arithmetic."""
    v = [int(x) for x in v]
    if len(v) != inst.n:
        raise QFormError(f"vector length {len(v)} != {inst.n}")
    if any(x < 0 for x in v):
        raise QFormError("vector entries must be nonnegative")
    support = [k for k, x in enumerate(v) if x]
    total = 0
    for a in support:
        row = inst.matrix[a]
        total += v[a] * sum(int(row[b]) * v[b] for b in support)
        total -= v[a] * int(inst.diag[a])
    return total


def columns_to_vector(r: int, columns) -> list[int]:
    """Multiplicity vector of 0/1 column patterns (0 = color 1)."""
    v = [0] * (1 << r)
    for col in columns:
        v[sum(int(bit) << k for k, bit in enumerate(col))] += 1
    return v


def vector_to_array(r: int, v) -> np.ndarray:
    """An ``r x s`` 0/1 array with ``v[j]`` columns of type ``j``."""
    cols = []
    for j, mult in enumerate(v):
        cols.extend([[(j >> k) & 1 for k in range(r)]] * int(mult))
    return np.array(cols, dtype=np.int64).T.reshape(r, len(cols))


# -- exact minimization ----------------------------------------------------------

class BudgetExceeded(Exception):
    pass


@dataclass
class QFormMinimum:
    r: int
    s: int
    t: int | None  # minimum rectangle count; None when the budget ran out
    v: list[int] | None
    complete: bool
    nodes: int = 0
    upper: int | None = None  # best value seen, also when incomplete


@dataclass
class _Ctx:
    matrix: np.ndarray
    deadline: float
    max_nodes: int
    nodes: int = 0
    best: int = 0
    best_cols: list = field(default_factory=list)


def _balance(r: int) -> np.ndarray:
    w = _popcount(np.arange(1 << r))
    return np.minimum(w, r - w)


def _heuristic_upper(inst: QFormInstance, s: int, seed: int = 0, restarts: int = 20) -> tuple[int, list[int]]:
    """Greedy construction plus single-column swaps; any value is an upper bound."""
    rng = np.random.default_rng(seed)
    m = inst.matrix
    n = inst.n
    best_val, best_cols = None, None
    for _ in range(restarts):
        cols = [int(rng.integers(n))]
        inc = m[cols[0]].astype(np.int64).copy()
        while len(cols) < s:
            low = np.flatnonzero(inc == inc.min())
            q = int(low[rng.integers(low.size)])
            cols.append(q)
            inc += m[q]
        improved = True
        while improved:
            improved = False
            for k in range(s):
                q_old = cols[k]
                base = inc - m[q_old]  # pairs with the other s-1 columns
                gain_old = int(base[q_old])
                q_new = int(np.argmin(base))
                if int(base[q_new]) < gain_old:
                    cols[k] = q_new
                    inc = base + m[q_new]
                    improved = True
        val = sum(int(m[cols[a], cols[b]]) for a in range(s) for b in range(a + 1, s))
        if best_val is None or val < best_val:
            best_val, best_cols = val, list(cols)
    return best_val, sorted(best_cols)


def _dfs(ctx: _Ctx, cols: list, cost: int, inc: np.ndarray, allowed: np.ndarray, start: int, remaining: int, tail_lb):
    ctx.nodes += 1
    if ctx.nodes > ctx.max_nodes or ((ctx.nodes & 0x3FF) == 0 and time.monotonic() > ctx.deadline):
        raise BudgetExceeded
    if remaining == 0:
        if cost < ctx.best:
            ctx.best, ctx.best_cols = cost, list(cols)
        return
    cand = allowed[start:]
    vals = inc[cand]
    sufmin = np.minimum.accumulate(vals[::-1])[::-1]
    after = remaining - 1
    lb = cost + vals + after * sufmin + tail_lb[after]
    ok = np.flatnonzero(lb < ctx.best)
    if ok.size == 0:
        return
    order = ok[np.argsort(vals[ok], kind="stable")]
    for pos in order.tolist():
        if cost + int(vals[pos]) + after * int(sufmin[pos]) + tail_lb[after] >= ctx.best:
            continue
        q = int(cand[pos])
        cols.append(q)
        _dfs(ctx, cols, cost + int(vals[pos]), inc + ctx.matrix[q], allowed, start + pos, after, tail_lb)
        cols.pop()


def min_rectangles(r: int, s: int, max_seconds: float = 600.0, max_nodes: int = 10 ** 9,
                   _tail: dict | None = None) -> QFormMinimum:
    """Exact minimum of ``(Q_r(v) - v . delta_r) / 2`` over ``v >= 0`` with
    ``sum(v) = s``: the least number of monochromatic rectangles in a
    2-coloring of ``[r] x [s]``.

    Up to swapping the colors and permuting rows, some column is
    ``1^b 0^(r-b)`` where ``b`` is the least balance ``min(w, r-w)`` over all
    columns, and every other column has balance ``>= b``.  The remaining
    ``s - 1`` columns are enumerated as nondecreasing index sequences with
    branch and bound; the bound adds the cheapest admissible increment for
    every open slot and the exact minimum for the open slots among
    themselves (computed first for smaller ``s``).
    """
    if r < 1 or s < 0:
        raise QFormError("need r >= 1 and s >= 0")
    inst = build_matrix(r)
    deadline = time.monotonic() + max_seconds
    if s <= 1:
        return QFormMinimum(r, s, 0, [0] * inst.n if s == 0 else [1] + [0] * (inst.n - 1), True)
    tail = {} if _tail is None else _tail
    tail.setdefault(0, 0)
    tail.setdefault(1, 0)
    nodes = 0
    for m in range(2, s):
        if m not in tail:
            sub = min_rectangles(r, m, max(deadline - time.monotonic(), 1e-3), max_nodes, tail)
            nodes += sub.nodes
            if not sub.complete:
                return QFormMinimum(r, s, None, None, False, nodes)
            tail[m] = sub.t
    tail_lb = [tail[m] for m in range(s)]

    upper, upper_cols = _heuristic_upper(inst, s)
    ctx = _Ctx(inst.matrix, deadline, max_nodes, best=upper + 1)
    balance = _balance(r)
    complete = True
    try:
        for b in range(r // 2 + 1):
            first = (1 << b) - 1
            allowed = np.flatnonzero(balance >= b).astype(np.int64)
            _dfs(ctx, [first], 0, inst.matrix[first].astype(np.int64), allowed, 0, s - 1, tail_lb)
    except BudgetExceeded:
        complete = False
    nodes += ctx.nodes
    if ctx.best_cols:
        best_val, best_cols = ctx.best, ctx.best_cols
    else:
        best_val, best_cols = upper, upper_cols
    if not complete:
        return QFormMinimum(r, s, None, None, False, nodes, upper=min(best_val, upper))
    v = [0] * inst.n
    for q in best_cols:
        v[q] += 1
    assert qform_penalized(inst, v) == 2 * best_val
    return QFormMinimum(r, s, best_val, v, True, nodes, upper=best_val)


# -- spectrum --------------------------------------------------------------------

RANK_PRIME = 2_147_483_647  # 2^31 - 1


def _small_primes_below(limit: int, count: int) -> list[int]:
    out = []
    k = limit - 1
    while len(out) < count:
        if k > 1 and all(k % p for p in range(2, math.isqrt(k) + 1)):
            out.append(k)
        k -= 1
    return out


def rank_mod_p(a: np.ndarray, p: int = RANK_PRIME) -> int:
    """Rank over GF(p); never exceeds the rank over the rationals."""
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        nz = np.flatnonzero(m[rank:, col])
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, col]), p - 2, p)
        m[rank] = (m[rank] * inv) % p
        others = np.flatnonzero(m[:, col])
        others = others[others != rank]
        if others.size:
            factors = m[others, col][:, None]
            m[others] = (m[others] - (factors * m[rank][None, :]) % p) % p
        rank += 1
    return rank


def polynomial_vanishes(matrix: np.ndarray, roots) -> bool:
    """Whether ``prod (M - lambda I)`` is exactly the zero matrix.

    Evaluated modulo several primes below 2^21 (float64 products stay exact
    there for n <= 1024); the primes multiply past twice the entry bound
    given by the product of infinity norms, so vanishing modulo all of
    them means vanishing over the integers.
    """
    n = matrix.shape[0]
    if n > 1024:
        raise QFormError("exact check supports n <= 1024")
    m = matrix.astype(np.int64)
    bound = 1
    for lam in roots:
        shifted = m - int(lam) * np.eye(n, dtype=np.int64)
        bound *= int(np.abs(shifted).sum(axis=1).max())
    needed, primes = 2 * bound + 1, []
    candidates = iter(_small_primes_below(1 << 21, 64))
    prod = 1
    while prod <= needed:
        p = next(candidates)
        primes.append(p)
        prod *= p
    for p in primes:
        acc = None
        for lam in roots:
            factor = ((m - int(lam) * np.eye(n, dtype=np.int64)) % p).astype(np.float64)
            acc = factor if acc is None else np.mod(acc @ factor, p)
        if np.any(acc):
            return False
    return True


def conjectured_spectrum(r: int) -> dict[int, int] | None:
    """Eigenvalue -> multiplicity as stated for r = 3 and for r >= 4."""
    if r == 3:
        return {0: 2, 1: 4, 4: 2}
    if r < 4:
        return None
    pairs = [
        (0, 2 ** r - r * (r + 1) // 2),
        (2 ** (r - 2), r * (r - 1) // 2 - 1),
        (2 ** (r - 3) * (r - 2), r - 1),
        (2 ** (r - 2) * (r - 1), 1),
        (2 ** (r - 4) * (r * r - r + 2), 1),
    ]
    out: dict[int, int] = {}
    for lam, mult in pairs:
        out[lam] = out.get(lam, 0) + mult
    return out


def observed_spectrum_formula(r: int) -> dict[int, int] | None:
    """The r >= 4 formula with the second eigenvalue 2^(r-3), which is what
    exact verification finds."""
    if r < 4:
        return None
    pairs = [
        (0, 2 ** r - r * (r + 1) // 2),
        (2 ** (r - 3), r * (r - 1) // 2 - 1),
        (2 ** (r - 3) * (r - 2), r - 1),
        (2 ** (r - 2) * (r - 1), 1),
        (2 ** (r - 4) * (r * r - r + 2), 1),
    ]
    out: dict[int, int] = {}
    for lam, mult in pairs:
        out[lam] = out.get(lam, 0) + mult
    return out


@dataclass
class SpectrumCheck:
    candidates: dict[int, int]
    annihilates: bool
    multiplicities: dict[int, int] | None  # exact, when annihilates
    residual_rank: int  # rank mod p of prod (M - lambda I); 0 when it vanishes


def verify_candidates(inst: QFormInstance, candidates) -> SpectrumCheck:
    """Exact check that the distinct values in ``candidates`` are the whole
    spectrum, and their exact multiplicities.

    M is symmetric, hence diagonalizable: if the product over the candidate
    values annihilates M, every eigenvalue is a candidate, and multiplicity
    of ``lambda`` is ``n - rank(M - lambda I)``.  Ranks modulo a prime can
    only undercount, so each ``n - rank_p`` is an upper bound; when those
    upper bounds add up to ``n`` they are exact.
    """
    roots = sorted(set(int(x) for x in candidates))
    claimed = dict(candidates) if isinstance(candidates, dict) else {lam: None for lam in roots}
    n = inst.n
    m = inst.matrix.astype(np.int64)
    if not polynomial_vanishes(m, roots):
        p = _small_primes_below(1 << 21, 1)[0]
        prod = None
        for lam in roots:
            factor = ((m - lam * np.eye(n, dtype=np.int64)) % p).astype(np.float64)
            prod = factor if prod is None else np.mod(prod @ factor, p)
        return SpectrumCheck(claimed, False, None, rank_mod_p(prod.astype(np.int64), p))
    for p in (RANK_PRIME, 1_000_000_007, 998_244_353):
        mults = {lam: n - rank_mod_p(m - lam * np.eye(n, dtype=np.int64), p) for lam in roots}
        if sum(mults.values()) == n:
            return SpectrumCheck(claimed, True, {k: v for k, v in mults.items() if v}, 0)
    raise QFormError("could not certify multiplicities")


@dataclass
class SpectrumReport:
    r: int
    pairs: list[tuple[int, int]]  # exactly verified (eigenvalue, multiplicity)
    conjectured_pairs: list[tuple[int, int]] | None
    matches_conjecture: bool | None
    residual_rank: int | None  # of the conjectured product, when it fails
    status: str

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "pairs": [{"lambda": lam, "mult": mult} for lam, mult in self.pairs],
            "conjectured_pairs": None if self.conjectured_pairs is None else [
                {"lambda": lam, "mult": mult} for lam, mult in self.conjectured_pairs
            ],
            "matches_conjecture": self.matches_conjecture,
            "residual_rank": self.residual_rank,
            "status": self.status,
            "psd": all(lam >= 0 for lam, _ in self.pairs) if self.pairs else None,
        }


def spectrum(r: int) -> SpectrumReport:
    if not 1 <= r <= 10:
        raise QFormError(f"spectrum supports 1 <= r <= 10, got {r}")
    inst = build_matrix(r)
    claimed = conjectured_spectrum(r)
    residual = None
    matches = None
    if claimed is not None:
        check = verify_candidates(inst, claimed)
        if check.annihilates and check.multiplicities == {k: v for k, v in claimed.items() if v}:
            pairs = sorted(check.multiplicities.items())
            return SpectrumReport(r, pairs, sorted(claimed.items()), True, None, "matches conjectured spectrum")
        matches = False
        residual = check.residual_rank
    # candidate values from a floating-point solver; only the exact check decides
    approx = np.linalg.eigvalsh(inst.matrix.astype(np.float64))
    proposal = sorted(set(int(round(x)) for x in approx))
    check = verify_candidates(inst, proposal)
    if not check.annihilates:
        return SpectrumReport(r, [], sorted(claimed.items()) if claimed else None, matches, residual,
                              "spectrum not integral or not certified")
    status = "spectrum outside conjectured set" if claimed is not None else "no conjectured spectrum for this r"
    return SpectrumReport(r, sorted(check.multiplicities.items()),
                          sorted(claimed.items()) if claimed else None, matches, residual, status)


def psd_check(r: int) -> bool:
    """All exactly verified eigenvalues are >= 0.  The conjecture concerns
    r >= 3; smaller r are computed the same way but carry no claim."""
    report = spectrum(r)
    if not report.pairs:
        raise QFormError(f"spectrum of M_{r} could not be certified")
    return all(lam >= 0 for lam, _ in report.pairs)


def trace_identity(r: int) -> int:
    """sum_w C(r, w) (C(w, 2) + C(r - w, 2)): the trace of M_r."""
    return sum(math.comb(r, w) * (math.comb(w, 2) + math.comb(r - w, 2)) for w in range(r + 1))
