"""Machine-checkable verdicts about grids."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .grid import Coloring, Grid, as_grid, count_monochromatic_boxes, format_coloring

GUARANTEED = "guaranteed"
COLORABLE = "colorable"
UNKNOWN = "unknown"

VERDICTS = (GUARANTEED, COLORABLE, UNKNOWN)
METHODS = (
    "exhaustive",
    "epsilon",
    "gamma",
    "delta",
    "hereditary",
    "product",
    "product-composition",
    "dominance",
    "pigeonhole",
    "construction",
    "coordinate",
    "moser-tardos",
)


class CertificateError(ValueError):
    pass


@dataclass
class Certificate:
    verdict: str
    method: str
    grid: Grid
    colors: int
    params: dict[str, Any] = field(default_factory=dict)
    sub_certificates: list["Certificate"] = field(default_factory=list)
    witness: Coloring | None = None

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise CertificateError(f"unknown verdict {self.verdict!r}")
        if self.method not in METHODS:
            raise CertificateError(f"unknown method {self.method!r}")
        self.grid = as_grid(self.grid)
        if self.verdict == COLORABLE:
            if self.witness is None:
                raise CertificateError("colorable certificate needs a witness")
            if count_monochromatic_boxes(self.witness) != 0:
                raise CertificateError("witness coloring has a monochromatic box")

    @property
    def guaranteed(self) -> bool:
        return self.verdict == GUARANTEED

    @property
    def colorable(self) -> bool:
        return self.verdict == COLORABLE

    def to_dict(self, witness_file: str | None = None, inline_witness: bool = True) -> dict:
        doc: dict[str, Any] = {
            "verdict": self.verdict,
            "method": self.method,
            "params": _jsonable({"grid": list(self.grid.dims), "c": self.colors, **self.params}),
            "sub_certificates": [s.to_dict(inline_witness=inline_witness) for s in self.sub_certificates],
        }
        if witness_file is not None:
            doc["witness_file"] = witness_file
        elif self.witness is not None and inline_witness:
            doc["witness"] = format_coloring(self.witness)
        return doc

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(**kw), indent=2, sort_keys=True)


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Grid):
        return list(value.dims)
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, int):
        return f"{value.numerator}/{value.denominator}"
    return value


def certificate_from_dict(doc: dict) -> Certificate:
    from .grid import parse_coloring

    params = dict(doc.get("params", {}))
    grid = Grid(tuple(params.pop("grid")))
    colors = int(params.pop("c"))
    witness = parse_coloring(doc["witness"]) if doc.get("witness") else None
    return Certificate(
        verdict=doc["verdict"],
        method=doc["method"],
        grid=grid,
        colors=colors,
        params=params,
        sub_certificates=[certificate_from_dict(s) for s in doc.get("sub_certificates", [])],
        witness=witness,
    )
