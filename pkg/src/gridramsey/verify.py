"""Independent re-checking of certificates and witness colorings."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .bounds import (
    delta_sequence,
    epsilon,
    gamma_sequence,
    guaranteed_count_lower_bound,
    hereditary_check,
    virtual_color_count,
)
from .certificate import COLORABLE, GUARANTEED, UNKNOWN, Certificate
from .grid import Grid, box_count, canonicalize, count_monochromatic_boxes, dominance_leq


@dataclass
class VerifyReport:
    valid: bool = True
    errors: list[str] = field(default_factory=list)
    # premises accepted without recomputation (e.g. exhaustive searches)
    trusted: list[str] = field(default_factory=list)
    checked: int = 0

    def fail(self, msg: str) -> None:
        self.valid = False
        self.errors.append(msg)

    def to_dict(self) -> dict:
        return {"valid": self.valid, "errors": self.errors, "trusted": self.trusted, "checked": self.checked}


def _orders(grid: Grid):
    return sorted(set(itertools.permutations(grid.dims)))


def _check_t(cert: Certificate, t: int, report: VerifyReport, recheck: bool, budget) -> None:
    """Premise: ``cert.grid`` is (c, t)-guaranteed."""
    g, c = cert.grid, cert.colors
    if cert.method == "delta":
        best = max((guaranteed_count_lower_bound(c, o, use_ceiling=True) or 0) for o in _orders(g))
        if best < t:
            report.fail(f"{g}: ceiling count bound {best} < t = {t}")
        return
    if not recheck:
        report.trusted.append(f"{g} is ({c},{t})-guaranteed by {cert.method}")
        return
    if g.d == 2 and c == 2:
        from .qform import min_rectangles

        r, s = sorted(g.dims)
        res = min_rectangles(r, s, max_seconds=budget.max_seconds if budget else 600.0)
        value = res.t if res.complete else None
    else:
        from .search import min_mono_boxes_exact

        value = min_mono_boxes_exact(c, g, budget)
    if value is None:
        report.trusted.append(f"{g}: recheck of t = {t} ran out of budget")
    elif value < t:
        report.fail(f"{g}: exact minimum {value} < claimed t = {t}")


def verify_certificate(cert: Certificate, recheck_exhaustive: bool = False, budget=None,
                       report: VerifyReport | None = None) -> VerifyReport:
    """Recompute everything the certificate claims that can be recomputed
    cheaply; exhaustive-search premises are trusted unless
    ``recheck_exhaustive`` is set."""
    report = report or VerifyReport()
    report.checked += 1
    g, c, p = cert.grid, cert.colors, cert.params
    if cert.verdict == UNKNOWN:
        return report
    if cert.verdict == COLORABLE:
        w = cert.witness
        if w is None:
            report.fail(f"{g}: colorable without witness")
        elif w.grid != g or w.colors != c:
            report.fail(f"{g}: witness is a {w.colors}-coloring of {w.grid}")
        elif count_monochromatic_boxes(w) != 0:
            report.fail(f"{g}: witness has a monochromatic box")
        return report

    assert cert.verdict == GUARANTEED
    m = cert.method
    for sub in cert.sub_certificates:
        if "t" not in sub.params or m != "product":
            verify_certificate(sub, recheck_exhaustive, budget, report)
    if m == "pigeonhole":
        if g.d != 1 or g[0] <= c:
            report.fail(f"{g}: pigeonhole needs one side longer than {c}")
    elif m in ("epsilon", "gamma", "delta"):
        if p.get("use_ceiling"):
            if not any(guaranteed_count_lower_bound(c, o, use_ceiling=True) for o in _orders(g)):
                report.fail(f"{g}: ceiling count bound is not positive in any order")
            return report
        fn = {"epsilon": epsilon, "gamma": gamma_sequence, "delta": delta_sequence}[m]
        order = tuple(p.get("order", g.dims))
        if sorted(order) != sorted(g.dims):
            report.fail(f"{g}: order {order} is not a permutation of the sides")
        elif not fn(c, order).certifies:
            report.fail(f"{g}: {m} sequence does not certify")
    elif m == "hereditary":
        if not hereditary_check(c, g):
            report.fail(f"{g}: hereditary volume condition fails")
    elif m == "product-composition":
        if len(cert.sub_certificates) != 2:
            report.fail(f"{g}: composition needs two sub-certificates")
            return report
        low, high = cert.sub_certificates
        j = low.grid.d
        if Grid(low.grid.dims + high.grid.dims) != g or low.colors != c:
            report.fail(f"{g}: sub-grids {low.grid}, {high.grid} do not split it")
        elif high.colors != virtual_color_count(c, g, j):
            report.fail(f"{g}: upper part uses {high.colors} colors, need {virtual_color_count(c, g, j)}")
    elif m == "product":
        t = p.get("t")
        base = Grid(g.dims[:-1]) if g.d > 1 else None
        if not isinstance(t, int) or t < 1 or base is None:
            report.fail(f"{g}: product certificate needs integer t >= 1")
            return report
        k = c * box_count(base) // t + 1
        if g.dims[-1] < k:
            report.fail(f"{g}: last side {g.dims[-1]} < floor(cM/t)+1 = {k}")
        subs = [s for s in cert.sub_certificates if s.grid == base]
        if subs:
            _check_t(subs[0], t, report, recheck_exhaustive, budget)
        else:
            report.trusted.append(f"{base} is ({c},{t})-guaranteed (no sub-certificate)")
    elif m == "dominance":
        src = p.get("from", p.get("source"))
        if src is None:
            report.fail(f"{g}: dominance without a source grid")
        elif not dominance_leq(canonicalize(tuple(src)), canonicalize(g)):
            report.fail(f"{g}: source {tuple(src)} does not lie below it")
        elif not cert.sub_certificates:
            report.trusted.append(f"{tuple(src)} guaranteed (no sub-certificate)")
    elif m == "exhaustive":
        if recheck_exhaustive:
            from .search import is_guaranteed_exact

            again = is_guaranteed_exact(c, g, budget)
            if again.verdict == COLORABLE:
                report.fail(f"{g}: search finds a box-free coloring")
            elif again.verdict == UNKNOWN:
                report.trusted.append(f"{g}: exhaustive recheck ran out of budget")
        else:
            report.trusted.append(f"{g} guaranteed by exhaustive search")
    else:
        report.fail(f"{g}: method {m} cannot certify a guarantee")
    return report
