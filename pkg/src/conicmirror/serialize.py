"""Canonical serialization: JSON with exact rationals, CSV clouds, SVG plots.

All JSON emission is deterministic: keys sorted, rationals as exact "p/q"
strings, complex numbers as [re, im] pairs, no timestamps. A version string
travels in a separate header field so payloads of identical inputs are
byte-identical across runs.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping, Optional, Sequence

from . import __version__
from .errors import SchemaError
from .lattice_geometry import HeightedPolygon, Triangulation, build_triangulation
from .mckay_covers import CoverAlgebraElement, Sublattice
from .mirror_ring import MirrorElement
from .numerics import AmoebaCloud, Viewport
from .sections_bundles import FramedSection, LineBundleClass
from .theta_ring import ThetaElement
from .tropical_curves import TropicalCurve


def rational_str(x: Fraction) -> str:
    return str(Fraction(x))


def parse_rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError(f"{where}: expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"{where}: bad rational string {value!r}") from exc
    raise SchemaError(f"{where}: expected an integer or 'p/q' string, got {value!r}")


def _int_pair(value: Any, where: str) -> tuple[int, int]:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)
    ):
        raise SchemaError(f"{where}: expected a pair of integers, got {value!r}")
    return (value[0], value[1])


def envelope(kind: str, payload: Mapping[str, Any]) -> dict:
    out = {"version": __version__, "kind": kind}
    out.update(payload)
    return out


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------- polygons


def polygon_to_json(poly: HeightedPolygon) -> dict:
    return {
        "points": [list(p) for p in poly.points],
        "heights": [rational_str(h) for h in poly.heights],
    }


def polygon_from_json(data: Any, where: str = "polygon") -> HeightedPolygon:
    if not isinstance(data, Mapping):
        raise SchemaError(f"{where}: expected an object with points/heights")
    if "points" not in data:
        raise SchemaError(f"{where}: missing 'points'")
    raw_pts = data["points"]
    if not isinstance(raw_pts, list) or not raw_pts:
        raise SchemaError(f"{where}: 'points' must be a nonempty list")
    points = [_int_pair(p, f"{where}.points[{i}]") for i, p in enumerate(raw_pts)]
    raw_heights = data.get("heights", 0)
    if isinstance(raw_heights, list):
        if len(raw_heights) != len(points):
            raise SchemaError(f"{where}: heights length differs from points length")
        heights = [
            parse_rational(h, f"{where}.heights[{i}]") for i, h in enumerate(raw_heights)
        ]
    else:
        heights = parse_rational(raw_heights, f"{where}.heights")
    try:
        return HeightedPolygon.create(points, heights)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{where}: {exc}") from exc


# ----------------------------------------------------------- triangulations


def triangulation_to_json(tri: Triangulation) -> dict:
    return {
        "points": [list(p) for p in tri.points],
        "cells": [list(c) for c in tri.cells],
        "edges": [
            {"v": list(e.v), "interior": e.interior, "cells": list(e.cells)}
            for e in tri.edges
        ],
    }


# ------------------------------------------------------------------ curves


def curve_to_json(curve: TropicalCurve) -> dict:
    return {
        "vertices": [[rational_str(v[0]), rational_str(v[1])] for v in curve.vertices],
        "bounded_edges": [
            {"v": list(be.v), "dual_edge": [list(be.dual_edge[0]), list(be.dual_edge[1])]}
            for be in curve.bounded_edges
        ],
        "legs": [
            {
                "base_vertex": leg.base_vertex,
                "base": [rational_str(leg.base[0]), rational_str(leg.base[1])],
                "dual_edge": [list(leg.dual_edge[0]), list(leg.dual_edge[1])],
                "direction": list(leg.direction),
                "a_i": rational_str(leg.a_i),
                "c_sq": rational_str(leg.c_sq),
                "c_prime": rational_str(leg.c_prime),
                "c_dblprime": rational_str(leg.c_dblprime),
            }
            for leg in curve.legs
        ],
    }


# ---------------------------------------------------------- ring elements


def mirror_element_to_json(x: MirrorElement) -> list:
    return [
        {"n": list(n), "i": i, "c": rational_str(c)} for (n, i), c in x.items()
    ]


def mirror_element_from_json(data: Any, where: str = "element") -> MirrorElement:
    if isinstance(data, Mapping) and data.get("theta"):
        raise SchemaError(f"{where}: got a theta element where a mirror element is required")
    if not isinstance(data, list):
        raise SchemaError(f"{where}: expected a list of terms")
    coeffs: dict = {}
    for k, item in enumerate(data):
        if not isinstance(item, Mapping) or not {"n", "i", "c"} <= set(item):
            raise SchemaError(f"{where}[{k}]: expected an object with n, i, c")
        n = _int_pair(item["n"], f"{where}[{k}].n")
        i = item["i"]
        if not isinstance(i, int) or isinstance(i, bool):
            raise SchemaError(f"{where}[{k}].i: expected an integer")
        c = parse_rational(item["c"], f"{where}[{k}].c")
        coeffs[(n, i)] = coeffs.get((n, i), Fraction(0)) + c
    return MirrorElement(coeffs)


def theta_element_to_json(x: ThetaElement) -> dict:
    return {
        "theta": True,
        "terms": [
            {"n": list(n), "i": i, "c": rational_str(c)} for (n, i), c in x.items()
        ],
    }


def theta_element_from_json(data: Any, where: str = "element") -> ThetaElement:
    if not isinstance(data, Mapping) or data.get("theta") is not True:
        raise SchemaError(f"{where}: expected an object with theta: true and terms")
    terms = data.get("terms")
    if not isinstance(terms, list):
        raise SchemaError(f"{where}.terms: expected a list")
    coeffs: dict = {}
    for k, item in enumerate(terms):
        if not isinstance(item, Mapping) or not {"n", "i", "c"} <= set(item):
            raise SchemaError(f"{where}.terms[{k}]: expected an object with n, i, c")
        n = _int_pair(item["n"], f"{where}.terms[{k}].n")
        i = item["i"]
        if not isinstance(i, int) or isinstance(i, bool):
            raise SchemaError(f"{where}.terms[{k}].i: expected an integer")
        coeffs[(n, i)] = coeffs.get((n, i), Fraction(0)) + parse_rational(
            item["c"], f"{where}.terms[{k}].c"
        )
    return ThetaElement(coeffs)


# ------------------------------------------------------ sections, bundles


def section_to_json(s: FramedSection) -> dict:
    return {"section": {str(c): list(v) for c, v in s.items()}}


def section_from_json(data: Any, where: str = "section") -> FramedSection:
    if not isinstance(data, Mapping) or "section" not in data:
        raise SchemaError(f"{where}: expected an object with a 'section' map")
    body = data["section"]
    if not isinstance(body, Mapping):
        raise SchemaError(f"{where}.section: expected an object keyed by cell id")
    values = {}
    for key, v in body.items():
        try:
            cell = int(key)
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"{where}.section: bad cell id {key!r}") from exc
        values[cell] = _int_pair(v, f"{where}.section[{key}]")
    return FramedSection(values)


def degree_vector_to_json(d: LineBundleClass) -> dict:
    return {str(e): v for e, v in d.items()}


# ------------------------------------------------------------ sublattices


def sublattice_from_json(data: Any, where: str = "sublattice") -> Sublattice:
    if not isinstance(data, Mapping) or "basis" not in data:
        raise SchemaError(f"{where}: expected an object with a 2x2 'basis'")
    basis = data["basis"]
    if not isinstance(basis, list) or len(basis) != 2:
        raise SchemaError(f"{where}.basis: expected two rows")
    rows = tuple(_int_pair(r, f"{where}.basis[{i}]") for i, r in enumerate(basis))
    return Sublattice(rows)


def sublattice_to_json(sub: Sublattice) -> dict:
    return {"basis": [list(r) for r in sub.basis]}


def cover_element_to_json(x: CoverAlgebraElement) -> dict:
    return {
        "cover": True,
        "entries": [
            {"g": list(g), "h": list(h), "n": list(n), "i": i, "c": rational_str(c)}
            for (g, h, n, i), c in x.items()
        ],
    }


def cover_element_from_json(data: Any, where: str = "element") -> CoverAlgebraElement:
    if not isinstance(data, Mapping) or data.get("cover") is not True:
        raise SchemaError(f"{where}: expected an object with cover: true and entries")
    entries = data.get("entries")
    if not isinstance(entries, list):
        raise SchemaError(f"{where}.entries: expected a list")
    out: dict = {}
    for k, item in enumerate(entries):
        if not isinstance(item, Mapping) or not {"g", "h", "n", "i", "c"} <= set(item):
            raise SchemaError(f"{where}.entries[{k}]: expected g, h, n, i, c")
        g = _int_pair(item["g"], f"{where}.entries[{k}].g")
        h = _int_pair(item["h"], f"{where}.entries[{k}].h")
        n = _int_pair(item["n"], f"{where}.entries[{k}].n")
        i = item["i"]
        if not isinstance(i, int) or isinstance(i, bool):
            raise SchemaError(f"{where}.entries[{k}].i: expected an integer")
        key = (g, h, n, i)
        out[key] = out.get(key, Fraction(0)) + parse_rational(
            item["c"], f"{where}.entries[{k}].c"
        )
    return CoverAlgebraElement(out)


# ------------------------------------------------------------ point clouds


def cloud_to_json(cloud: AmoebaCloud) -> dict:
    return {
        "points": [[p[0], p[1]] for p in cloud.points],
        "failed_lines": list(cloud.failed_lines),
        "viewport": [list(cloud.viewport[0]), list(cloud.viewport[1])],
    }


def cloud_to_csv(cloud: AmoebaCloud) -> str:
    lines = ["r1,r2"]
    lines.extend(f"{p[0]!r},{p[1]!r}" for p in cloud.points)
    return "\n".join(lines) + "\n"


# -------------------------------------------------------------------- SVG


def _svg_coords(p, vp: Viewport, width: int, height: int) -> tuple[float, float]:
    (xlo, ylo), (xhi, yhi) = vp
    x = (float(p[0]) - xlo) / (xhi - xlo) * width
    y = height - (float(p[1]) - ylo) / (yhi - ylo) * height
    return x, y


def plot_svg(
    curve: TropicalCurve,
    viewport: Viewport,
    cloud: Optional[AmoebaCloud] = None,
    width: int = 600,
    height: int = 600,
) -> str:
    """Deterministic SVG of the tropical curve, optional amoeba overlay.

    Bounded edges and legs are clipped to the viewport; legs carry the
    class "leg" so they are countable in the output. Amoeba points render
    as a translucent cloud under the curve.
    """
    from .numerics import _clipped_curve_segments, _clip_segment_to_rect

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if cloud is not None:
        (xlo, ylo), (xhi, yhi) = viewport
        for p in cloud.points:
            if not (xlo <= p[0] <= xhi and ylo <= p[1] <= yhi):
                continue
            x, y = _svg_coords(p, viewport, width, height)
            parts.append(
                f'<circle class="amoeba" cx="{x:.2f}" cy="{y:.2f}" r="1.5" '
                f'fill="#d08080" fill-opacity="0.5"/>'
            )
    verts = [(float(v[0]), float(v[1])) for v in curve.vertices]
    for be in curve.bounded_edges:
        p, q = verts[be.v[0]], verts[be.v[1]]
        d = (q[0] - p[0], q[1] - p[1])
        rng = _clip_segment_to_rect(p, d, 0.0, 1.0, viewport)
        if rng is None:
            continue
        s0, s1 = rng
        a = _svg_coords((p[0] + s0 * d[0], p[1] + s0 * d[1]), viewport, width, height)
        b = _svg_coords((p[0] + s1 * d[0], p[1] + s1 * d[1]), viewport, width, height)
        parts.append(
            f'<line class="edge" x1="{a[0]:.2f}" y1="{a[1]:.2f}" '
            f'x2="{b[0]:.2f}" y2="{b[1]:.2f}" stroke="#204080" stroke-width="2"/>'
        )
    for leg in curve.legs:
        p = (float(leg.base[0]), float(leg.base[1]))
        d = (float(leg.direction[0]), float(leg.direction[1]))
        rng = _clip_segment_to_rect(p, d, 0.0, 1e30, viewport)
        if rng is None:
            continue
        s0, s1 = rng
        if s1 <= s0:
            continue
        a = _svg_coords((p[0] + s0 * d[0], p[1] + s0 * d[1]), viewport, width, height)
        b = _svg_coords((p[0] + s1 * d[0], p[1] + s1 * d[1]), viewport, width, height)
        parts.append(
            f'<line class="leg" x1="{a[0]:.2f}" y1="{a[1]:.2f}" '
            f'x2="{b[0]:.2f}" y2="{b[1]:.2f}" stroke="#208040" stroke-width="2"/>'
        )
    for v in verts:
        x, y = _svg_coords(v, viewport, width, height)
        parts.append(
            f'<circle class="vertex" cx="{x:.2f}" cy="{y:.2f}" r="3" fill="#202020"/>'
        )
    # chamber labels at the lattice points, placed at a point of the chamber
    from .tropical_curves import chamber_of

    (xlo, ylo), (xhi, yhi) = viewport
    step_x = (xhi - xlo) / 40.0
    step_y = (yhi - ylo) / 40.0
    labeled = set()
    for gi in range(41):
        for gj in range(41):
            n = (xlo + gi * step_x, ylo + gj * step_y)
            label = chamber_of(curve.polygon, (Fraction(n[0]).limit_denominator(10**6),
                                               Fraction(n[1]).limit_denominator(10**6)))
            if label is None or label in labeled:
                continue
            labeled.add(label)
            x, y = _svg_coords(n, viewport, width, height)
            parts.append(
                f'<text class="chamber" x="{x:.2f}" y="{y:.2f}" '
                f'font-size="12" fill="#606060">{label[0]},{label[1]}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
