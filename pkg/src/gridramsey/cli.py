"""Command-line interface: ``gridramsey <subcommand> ...``.

Every run prints one JSON document (``"schema": 1``) on stdout.  Exit code 0
means the computation finished, whatever the verdict; 2 means bad usage or
bad input; 1 an internal error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds, pipeline, qform, search
from .certificate import Certificate, certificate_from_dict
from .grid import (
    ColoringFormatError,
    Grid,
    GridError,
    count_monochromatic_boxes,
    parse_coloring,
    write_coloring,
)
from .verify import verify_certificate

SCHEMA = 1


class UsageError(Exception):
    pass


def _grid(text: str) -> Grid:
    try:
        return Grid.parse(text)
    except GridError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _range(text: str) -> range:
    """``3..12`` (inclusive) or a single number."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return range(int(lo), int(hi) + 1)
        return range(int(text), int(text) + 1)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse range {text!r}") from exc


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {value}")
    return value


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _budget(args) -> search.SearchBudget:
    kw = {"parallel_shards": args.threads}
    if args.budget is not None:
        kw["max_seconds"] = args.budget
    return search.SearchBudget(**kw)


def _seconds(args) -> float:
    return args.budget if args.budget is not None else search.default_seconds()


def _cert_doc(cert: Certificate, witness_path: str | None) -> dict:
    if cert.witness is not None and witness_path:
        write_coloring(cert.witness, witness_path)
        return cert.to_dict(witness_file=witness_path)
    return cert.to_dict()


# -- subcommand handlers --------------------------------------------------------

def cmd_check(args) -> dict:
    g = args.grid
    cert = None
    if args.method in ("auto", "bounds"):
        cert = bounds.bound_certificate(args.c, g)
    if cert is None and args.method in ("auto", "exhaustive"):
        cert = search.is_guaranteed_exact(args.c, g, _budget(args))
    if cert is None:
        return {"verdict": "unknown", "reason": "no closed-form bound applies"}
    doc = _cert_doc(cert, args.witness)
    if args.certificate:
        Path(args.certificate).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return {"verdict": cert.verdict, "certificate": doc}


def cmd_mint(args) -> dict:
    out = search.minimize_mono_boxes(args.c, args.grid, _budget(args))
    res = {"min_boxes": out.value if out.complete else None, "complete": out.complete,
           "best_found": out.value, "nodes": out.nodes, "engine": out.engine}
    if out.witness is not None and args.witness:
        write_coloring(out.witness, args.witness)
        res["witness_file"] = args.witness
    return res


def cmd_mu(args) -> dict:
    mus = bounds.mu_sequence(args.c, args.d)
    res = {
        "mu": mus,
        "lower_bound_holds": [bounds.mu_lower_bound_holds(args.c, j, m) for j, m in enumerate(mus, 1)],
        "certificate": bounds.mu_guarantee_certificate(args.c, args.d).to_dict(),
    }
    if args.coloring:
        col = bounds.minimal_coloring(args.c, args.d)
        write_coloring(col, args.coloring)
        res["coloring_file"] = args.coloring
        res["mono_boxes"] = count_monochromatic_boxes(col)
    return res


def cmd_minimal_coloring(args) -> dict:
    data = bounds.minimal_coloring_data(args.c, args.d)
    col = data.coloring
    res = {
        "grid": list(col.grid.dims),
        "mono_boxes": count_monochromatic_boxes(col),
        "mono_boxes_without_last_layer": count_monochromatic_boxes(bounds.drop_last_layer(col)),
        "box": [[x + 1, y + 1] for x, y in data.box],
        "box_color": data.color + 1,
    }
    if args.out:
        write_coloring(col, args.out)
        res["coloring_file"] = args.out
    return res


def _sequence_doc(seq) -> dict:
    return {"terms": [_frac(t) for t in seq.terms], "final": _frac(seq.final), "certifies": seq.certifies}


def cmd_eps(args) -> dict:
    return _sequence_doc(bounds.epsilon(args.c, args.grid))


def cmd_delta(args) -> dict:
    res = _sequence_doc(bounds.delta_sequence(args.c, args.grid))
    low = bounds.guaranteed_count_lower_bound(args.c, args.grid, use_ceiling=args.ceiling)
    res["count_lower_bound"] = None if low is None else (_frac(low) if isinstance(low, Fraction) else low)
    return res


def cmd_gamma(args) -> dict:
    return _sequence_doc(bounds.gamma_sequence(args.c, args.grid))


def cmd_lll(args) -> dict:
    return bounds.volume_sandwich(args.c, args.d)


def cmd_hereditary(args) -> dict:
    g = args.grid
    return {"holds": bounds.hereditary_check(args.c, g),
            "constants": [bounds.hereditary_constant(g.d, j) for j in range(1, g.d + 1)]}


def cmd_pinch(args) -> dict:
    ps = bounds.pinch_points(args.c, args.grid, choice=args.choice)
    return {"points": list(ps.points), "virtual_colors": list(ps.virtual_colors),
            "side_bounds": list(ps.side_bounds), "choice": args.choice}


def cmd_qform_build(args) -> dict:
    inst = qform.build_matrix(args.r)
    res = {"r": args.r, "n": inst.n, "trace": int(inst.diag.sum())}
    if args.out:
        Path(args.out).write_text(qform.format_matrix(inst))
        res["matrix_file"] = args.out
    return res


def cmd_qform_min(args) -> dict:
    m = qform.min_rectangles(args.r, args.s, max_seconds=_seconds(args))
    return {"r": m.r, "s": m.s, "t": m.t, "v": m.v, "complete": m.complete, "nodes": m.nodes, "upper": m.upper}


def cmd_spectrum(args) -> dict:
    report = qform.spectrum(args.r).to_dict()
    report["trace_identity"] = qform.trace_identity(args.r)
    return report


def cmd_table(args) -> dict:
    if args.kind == "exponent":
        return {"exponents": [{"d": d, "e": e} for d, e in pipeline.exponent_table(args.range)]}
    if args.c != 2:
        raise UsageError("the a3 table is defined for --c 2")
    a2 = args.a2_range or args.range
    table = pipeline.a3_table(args.range, a2, max_seconds_per_cell=args.cell_seconds)
    csv_text = pipeline.table_csv(table)
    for path, text in ((args.csv, csv_text), (args.markdown, pipeline.table_markdown(table)),
                       (args.surface, pipeline.surface_csv(table))):
        if path:
            Path(path).write_text(text)
    cells = [
        {"a1": x, "a2": y, "a3_bound": e.a3_bound, "method": e.method, "t_used": e.t_used,
         "t_exact": e.t_exact, "source": list(e.source) if e.source else None,
         "printed": pipeline.printed_cell(x, y) if x in pipeline.PRINTED_TABLE and 3 <= y <= 12 else None}
        for (x, y), e in sorted(table.items())
    ]
    return {"cells": cells, "csv": csv_text}


def cmd_obstructions(args) -> dict:
    obs = search.obstruction_set(args.c, args.d, args.caps, _budget(args))
    wdir = Path(args.witness_dir) if args.witness_dir else None
    if wdir:
        wdir.mkdir(parents=True, exist_ok=True)
    members = []
    for g in obs.grids:
        decs = []
        for cert in obs.decrement_certificates[g]:
            path = str(wdir / f"colorable_{cert.grid}.txt") if wdir and cert.witness is not None else None
            decs.append(_cert_doc(cert, path))
        members.append({"grid": list(g.dims), "certificate": obs.certificates[g].to_dict(),
                        "decrements": decs})
    return {"members": members, "frontier_complete": obs.frontier_complete, "notes": obs.notes,
            "decided": len(obs.decided)}


def cmd_mt_color(args) -> dict:
    res = search.moser_tardos_color(args.c, args.grid, args.seed, args.max_resamples)
    doc = {"success": res.success, "resamples": res.resamples, "seed": args.seed}
    if res.coloring is not None:
        doc["mono_boxes"] = count_monochromatic_boxes(res.coloring)
        if args.out:
            write_coloring(res.coloring, args.out)
            doc["coloring_file"] = args.out
    return doc


def _load_certificate(doc: dict, json_dir: Path) -> Certificate:
    """Accept a bare certificate or a CLI result document holding one."""
    if "schema" in doc:
        doc = doc.get("result", {})
    doc = doc.get("certificate", doc)
    return certificate_from_dict(_resolve_witness_files(doc, json_dir))


def _resolve_witness_files(doc: dict, json_dir: Path) -> dict:
    doc = dict(doc)
    if doc.get("witness_file") and not doc.get("witness"):
        p = Path(doc["witness_file"])
        if not p.is_absolute() and not p.exists():
            p = json_dir / p
        doc["witness"] = p.read_text()
    doc["sub_certificates"] = [_resolve_witness_files(s, json_dir) for s in doc.get("sub_certificates", [])]
    return doc


def cmd_verify(args) -> dict:
    results = []
    for name in args.files:
        path = Path(name)
        text = path.read_text()
        entry = {"file": name}
        if text.lstrip().startswith("{"):
            doc = json.loads(text)
            try:
                cert = _load_certificate(doc, path.parent)
            except (KeyError, ValueError) as exc:
                entry.update(kind="certificate", valid=False, errors=[f"unreadable certificate: {exc}"])
                results.append(entry)
                continue
            report = verify_certificate(cert, recheck_exhaustive=args.recheck, budget=_budget(args))
            entry.update(kind="certificate", verdict=cert.verdict, **report.to_dict())
        else:
            try:
                col = parse_coloring(text)
            except ColoringFormatError as exc:
                entry.update(kind="coloring", valid=False, errors=[str(exc)])
                results.append(entry)
                continue
            n = count_monochromatic_boxes(col)
            expected = args.expect_boxes
            entry.update(kind="coloring", grid=list(col.grid.dims), colors=col.colors, mono_boxes=n,
                         valid=n == expected, errors=[] if n == expected else [f"{n} monochromatic boxes, expected {expected}"])
        results.append(entry)
    return {"files": results, "all_valid": all(r["valid"] for r in results)}


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=_positive, default=1, help="search shards (default 1)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=float, default=None,
                        help="seconds per search (default: $GRIDRAMSEY_BUDGET_SECONDS or 600)")
    common.add_argument("--output", help="also write the JSON document here")

    parser = argparse.ArgumentParser(prog="gridramsey", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=fn)
        return p

    def cg(p, grid=True):
        p.add_argument("--c", type=_positive, required=True, help="number of colors")
        if grid:
            p.add_argument("--grid", type=_grid, required=True, help="AxBxC")
        return p

    p = cg(add("check", cmd_check, "decide c-guarantee of a grid"))
    p.add_argument("--method", choices=("auto", "exhaustive", "bounds"), default="auto")
    p.add_argument("--witness", help="write a colorable witness to this file")
    p.add_argument("--certificate", help="write the certificate JSON here")

    p = cg(add("mint", cmd_mint, "exact minimum number of monochromatic boxes"))
    p.add_argument("--witness", help="write an optimal coloring here")

    p = cg(add("mu", cmd_mu, "mu sequence"), grid=False)
    p.add_argument("--d", type=_positive, required=True)
    p.add_argument("--coloring", help="write the minimal coloring here")

    p = cg(add("minimal-coloring", cmd_minimal_coloring, "coloring with exactly one monochromatic box"), grid=False)
    p.add_argument("--d", type=_positive, required=True)
    p.add_argument("--out")

    cg(add("eps", cmd_eps, "epsilon sum"))
    p = cg(add("delta", cmd_delta, "Delta recurrence and count bound"))
    p.add_argument("--ceiling", action="store_true", help="round counts up at every step")
    cg(add("gamma", cmd_gamma, "Gamma recurrence"))

    p = cg(add("lll", cmd_lll, "local-lemma volume threshold"), grid=False)
    p.add_argument("--d", type=_positive, required=True)

    cg(add("hereditary", cmd_hereditary, "prefix-volume criterion"))
    p = cg(add("pinch", cmd_pinch, "pinch points of an obstruction candidate"))
    p.add_argument("--choice", choices=("largest", "least"), default="largest")

    p = add("qform-build", cmd_qform_build, "build the matrix M_r")
    p.add_argument("--r", type=_positive, required=True)
    p.add_argument("--out", help="write the matrix as text")

    p = add("qform-min", cmd_qform_min, "exact minimum rectangle count of r x s")
    p.add_argument("--r", type=_positive, required=True)
    p.add_argument("--s", type=_positive, required=True)

    p = add("spectrum", cmd_spectrum, "exact spectrum of M_r")
    p.add_argument("--r", type=_positive, required=True)

    p = add("table", cmd_table, "a3 bound table or exponent table")
    p.add_argument("--c", type=_positive, default=2)
    p.add_argument("--range", type=_range, default=range(3, 13), help="a1 range, e.g. 3..12")
    p.add_argument("--a2-range", type=_range, default=None)
    p.add_argument("--kind", choices=("a3", "exponent"), default="a3")
    p.add_argument("--cell-seconds", type=float, default=60.0)
    p.add_argument("--csv")
    p.add_argument("--markdown")
    p.add_argument("--surface", help="CSV triples (a1, a2, a3_bound)")

    p = cg(add("obstructions", cmd_obstructions, "minimal guaranteed grids within caps"), grid=False)
    p.add_argument("--d", type=_positive, required=True)
    p.add_argument("--caps", type=_grid, required=True, help="side caps, e.g. 8x30")
    p.add_argument("--witness-dir")

    p = cg(add("mt-color", cmd_mt_color, "resampling colorer"))
    p.add_argument("--max-resamples", type=int, default=100_000)
    p.add_argument("--out")

    p = add("verify", cmd_verify, "re-check coloring files and certificate JSON")
    p.add_argument("files", nargs="+")
    p.add_argument("--expect-boxes", type=int, default=0)
    p.add_argument("--recheck", action="store_true", help="rerun exhaustive premises")
    return parser


_ARG_KEYS = ("c", "d", "r", "s", "seed", "threads", "method", "choice", "kind", "ceiling")


def _args_doc(args) -> dict:
    doc = {k: getattr(args, k) for k in _ARG_KEYS if getattr(args, k, None) is not None}
    for k in ("grid", "caps"):
        if getattr(args, k, None) is not None:
            doc[k] = list(getattr(args, k).dims)
    if isinstance(getattr(args, "range", None), range):
        doc["range"] = [args.range.start, args.range.stop - 1]
    return doc


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.handler(args)
    except (UsageError, GridError, ColoringFormatError, bounds.BoundsError, qform.QFormError,
            ValueError, FileNotFoundError) as exc:
        print(json.dumps({"schema": SCHEMA, "command": args.command, "error": str(exc)}, sort_keys=True))
        print(f"gridramsey: error: {exc}", file=sys.stderr)
        return 2
    doc = {"schema": SCHEMA, "command": args.command, "args": _args_doc(args), "result": result}
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.output:
        Path(args.output).write_text(text + "\n")
    print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
