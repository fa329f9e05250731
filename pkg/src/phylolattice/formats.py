"""Text formats: distance-matrix CSV, gram and mergegram JSON, Reeb DOT,
and hand-rolled SVG plots.

All serializers are canonical: equal values produce byte-identical text.
JSON documents carry a "format": "phylolattice/1" field; infinite deaths
are the string "inf".
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Mapping, Sequence

import numpy as np

from .faces import FaceSet
from .grams import KINDS, Gram
from .mergegram import Interval, LabeledMergegram, Mergegram, PersistenceDiagram
from .networks import PhyloNetwork, validate_network
from .reeb import ReebGraph
from .taxa import TaxaSet

FORMAT = "phylolattice/1"


# ---------------------------------------------------------------- matrices

def parse_matrix_csv(text: str) -> PhyloNetwork:
    """Header row of taxa labels, then a square numeric body."""
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise ValueError("empty matrix document")
    labels = [c.strip() for c in rows[0]]
    n = len(labels)
    if len(rows) - 1 != n:
        raise ValueError(f"expected {n} data rows after the header, found {len(rows) - 1}")
    body = np.zeros((n, n))
    for i, row in enumerate(rows[1:]):
        if len(row) != n:
            raise ValueError(f"row {i + 2} has {len(row)} cells, expected {n}")
        for j, cell in enumerate(row):
            try:
                body[i, j] = float(cell)
            except ValueError:
                raise ValueError(
                    f"non-numeric cell at row {i + 2}, column {j + 1}: {cell.strip()!r}"
                ) from None
    return validate_network(labels, body)


def serialize_matrix_csv(net: PhyloNetwork) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(net.universe.labels)
    for row in net.matrix:
        w.writerow([repr(float(v)) for v in row])
    return out.getvalue()


# ------------------------------------------------------------------- JSON

def _dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _load(text: str, want: str | Sequence[str]) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ValueError("top level must be an object")
    if doc.get("format") != FORMAT:
        raise ValueError(f'missing or unsupported "format" (expected {FORMAT!r})')
    wanted = (want,) if isinstance(want, str) else tuple(want)
    if doc.get("type") not in wanted:
        raise ValueError(f'document "type" is {doc.get("type")!r}, expected {wanted}')
    return doc


def _death_out(d: float):
    return "inf" if math.isinf(d) else d


def _death_in(v) -> float:
    if v == "inf":
        return math.inf
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    raise ValueError(f"bad death value {v!r}")


def gram_json(g: Gram) -> str:
    return _dumps(
        {
            "format": FORMAT,
            "type": "gram",
            "kind": g.kind,
            "taxa": list(g.universe.labels),
            "levels": [
                {"t": t, "faces": [list(g.universe.names_of(m)) for m in fs.faces]}
                for t, fs in g.levels
            ],
        }
    )


def parse_gram_json(text: str) -> Gram:
    doc = _load(text, "gram")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ValueError(f"unknown gram kind {kind!r}")
    taxa = doc.get("taxa")
    if not isinstance(taxa, list) or not all(isinstance(s, str) for s in taxa):
        raise ValueError('"taxa" must be a list of strings')
    universe = TaxaSet(taxa)
    levels = []
    for item in doc.get("levels", ()):
        if not isinstance(item, dict) or "t" not in item or "faces" not in item:
            raise ValueError('each level needs "t" and "faces"')
        fs = FaceSet.from_names(universe, item["faces"])
        levels.append((float(item["t"]), fs))
    return Gram(universe, levels, kind)


def mergegram_json(m: Mergegram | PersistenceDiagram) -> str:
    kind = "diagram" if isinstance(m, PersistenceDiagram) else "mergegram"
    return _dumps(
        {
            "format": FORMAT,
            "type": kind,
            "points": [
                {"birth": b, "death": _death_out(d), "mult": k} for b, d, k in m.points
            ],
        }
    )


def labeled_mergegram_json(lm: LabeledMergegram) -> str:
    return _dumps(
        {
            "format": FORMAT,
            "type": "labeled-mergegram",
            "taxa": list(lm.universe.labels),
            "points": [
                {
                    "birth": iv.birth,
                    "death": _death_out(iv.death),
                    "mult": 1,
                    "label": list(lm.universe.names_of(mask)),
                }
                for mask, iv in sorted(
                    lm.entries.items(),
                    key=lambda kv: (kv[1].birth, kv[1].death, kv[0]),
                )
            ],
        }
    )


def parse_mergegram_json(text: str):
    doc = _load(text, ("mergegram", "diagram", "labeled-mergegram"))
    points = doc.get("points")
    if not isinstance(points, list):
        raise ValueError('"points" must be a list')
    if doc["type"] == "labeled-mergegram":
        universe = TaxaSet(doc.get("taxa", ()))
        entries = {}
        for p in points:
            mask = universe.mask_of(p["label"])
            if mask in entries:
                raise ValueError(f"face {p['label']!r} listed twice")
            entries[mask] = Interval(float(p["birth"]), _death_in(p["death"]))
        return LabeledMergegram(universe, entries)
    cls = PersistenceDiagram if doc["type"] == "diagram" else Mergegram
    return cls(
        (float(p["birth"]), _death_in(p["death"]), int(p.get("mult", 1)))
        for p in points
    )


# -------------------------------------------------------------------- DOT

def reeb_dot(r: ReebGraph) -> str:
    """Undirected DOT drawing; node labels carry the critical heights."""
    lines = ["graph reeb {", "  rankdir=BT;"]
    for i, t in enumerate(r.criticals):
        for k in range(r.vertex_counts[i]):
            lines.append(f'  v{i}_{k} [label="t={t:g}"];')
    lines.append('  top [label="inf", shape=plaintext];')
    n = len(r.criticals)
    for i in range(n):
        for mask in r.edge_sets[i]:
            name = "{" + ",".join(r.universe.names_of(mask)) + "}"
            a = f"v{i}_{r.down[i][mask]}"
            if i < n - 1:
                b = f"v{i + 1}_{r.up[i][mask]}"
                lines.append(f'  {a} -- {b} [label="{name}"];')
            else:
                lines.append(f'  {a} -- top [label="{name}", style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -------------------------------------------------------------------- SVG

_W = 480
_PAD = 48


def _scale(vals: Sequence[float]) -> tuple[float, float]:
    finite = [v for v in vals if math.isfinite(v)]
    lo = min(finite, default=0.0)
    hi = max(finite, default=1.0)
    if lo > 0:
        lo = 0.0
    if hi <= lo:
        hi = lo + 1.0
    return lo, hi


def diagram_svg(m: Mergegram | PersistenceDiagram | LabeledMergegram, title: str = "") -> str:
    """Scatter plot: multiplicity as concentric rings, infinite deaths on a
    shaded band above the finite range."""
    labels: dict[tuple[float, float], str] = {}
    if isinstance(m, LabeledMergegram):
        for mask, iv in m.sorted_entries():
            key = (iv.birth, iv.death)
            name = "{" + ",".join(m.universe.names_of(mask)) + "}"
            labels[key] = (labels[key] + " " + name) if key in labels else name
        m = m.unlabeled()
    coords = [v for b, d, _ in m.points for v in (b, d)]
    lo, hi = _scale(coords)
    span = hi - lo
    inner = _W - 2 * _PAD
    band_y = _PAD - 18  # the infinity band sits above the finite area

    def sx(v: float) -> float:
        return _PAD + (v - lo) / span * inner

    def sy(v: float) -> float:
        if math.isinf(v):
            return band_y
        return _W - _PAD - (v - lo) / span * inner

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_W}" '
        f'viewBox="0 0 {_W} {_W}" font-family="sans-serif" font-size="11">',
        f'<rect width="{_W}" height="{_W}" fill="white"/>',
        f'<rect x="{_PAD}" y="{band_y - 8}" width="{inner}" height="16" fill="#eef" />',
        f'<text x="{_PAD - 26}" y="{band_y + 4}">inf</text>',
        f'<line x1="{_PAD}" y1="{_W - _PAD}" x2="{_W - _PAD}" y2="{_W - _PAD}" stroke="black"/>',
        f'<line x1="{_PAD}" y1="{_W - _PAD}" x2="{_PAD}" y2="{_PAD}" stroke="black"/>',
        f'<line x1="{sx(lo)}" y1="{sy(lo)}" x2="{sx(hi)}" y2="{sy(hi)}" stroke="#bbb" stroke-dasharray="4 3"/>',
        f'<text x="{_W - _PAD}" y="{_W - _PAD + 28}" text-anchor="end">birth</text>',
        f'<text x="{_PAD - 34}" y="{_PAD - 28}">death</text>',
    ]
    for tick in (lo, (lo + hi) / 2, hi):
        parts.append(
            f'<text x="{sx(tick):.1f}" y="{_W - _PAD + 14}" text-anchor="middle">{tick:g}</text>'
        )
        parts.append(
            f'<text x="{_PAD - 6}" y="{sy(tick):.1f}" text-anchor="end">{tick:g}</text>'
        )
    if title:
        parts.append(f'<text x="{_W / 2}" y="16" text-anchor="middle">{title}</text>')
    for b, d, mult in m.points:
        x, y = sx(b), sy(d)
        parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="3" fill="#225"/>')
        for k in range(1, mult):
            parts.append(
                f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{3 + 3 * k}" fill="none" stroke="#225"/>'
            )
        tag = labels.get((b, d))
        if tag:
            parts.append(f'<text x="{x + 6:.1f}" y="{y - 6:.1f}">{tag}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


_PALETTE = ("#225", "#a33", "#282", "#a60", "#629")


def line_plot_svg(
    series: Mapping[str, Sequence[tuple[float, float]]],
    x_label: str = "",
    y_label: str = "",
) -> str:
    xs = [x for pts in series.values() for x, _ in pts]
    ys = [y for pts in series.values() for _, y in pts]
    xlo, xhi = _scale(xs)
    ylo, yhi = _scale(ys)
    inner = _W - 2 * _PAD

    def sx(v: float) -> float:
        return _PAD + (v - xlo) / (xhi - xlo) * inner

    def sy(v: float) -> float:
        return _W - _PAD - (v - ylo) / (yhi - ylo) * inner

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_W}" '
        f'viewBox="0 0 {_W} {_W}" font-family="sans-serif" font-size="11">',
        f'<rect width="{_W}" height="{_W}" fill="white"/>',
        f'<line x1="{_PAD}" y1="{_W - _PAD}" x2="{_W - _PAD}" y2="{_W - _PAD}" stroke="black"/>',
        f'<line x1="{_PAD}" y1="{_W - _PAD}" x2="{_PAD}" y2="{_PAD}" stroke="black"/>',
        f'<text x="{_W - _PAD}" y="{_W - _PAD + 28}" text-anchor="end">{x_label}</text>',
        f'<text x="{_PAD}" y="{_PAD - 20}">{y_label}</text>',
    ]
    for tick in (ylo, (ylo + yhi) / 2, yhi):
        parts.append(
            f'<text x="{_PAD - 6}" y="{sy(tick):.1f}" text-anchor="end">{tick:.3g}</text>'
        )
    for tick in (xlo, (xlo + xhi) / 2, xhi):
        parts.append(
            f'<text x="{sx(tick):.1f}" y="{_W - _PAD + 14}" text-anchor="middle">{tick:g}</text>'
        )
    for k, (name, pts) in enumerate(sorted(series.items())):
        color = _PALETTE[k % len(_PALETTE)]
        path = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in sorted(pts))
        parts.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<text x="{_W - _PAD - 2}" y="{_PAD + 14 * k}" text-anchor="end" fill="{color}">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
