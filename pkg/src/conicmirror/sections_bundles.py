"""Framed sections over a triangulation and their line-bundle degree vectors.

A framed section assigns an integer covector n_sigma to every cell. Across
each interior edge with endpoints alpha, beta the jump must pair to zero with
alpha - beta, which forces it to be an integer multiple of the primitive
(beta - alpha)^perp. Sections related by a global shift by N are equivalent;
the degree vector (one integer per interior edge, the pairing of the jump with
(beta - alpha)^perp) is a shift invariant and is additive.

Orientation conventions, fixed once: for each interior edge, sigma is the
adjacent cell with the smaller id and alpha the lexicographically smaller
endpoint. Any consistent convention flips signs uniformly per edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import InvalidSection, UnknownCell
from .lattice_geometry import (
    Covector,
    Triangulation,
    pairing,
    perp,
    primitivize,
    vsub,
)


@dataclass(frozen=True)
class FramedSection:
    """Integer covector per cell id (keys are indices into tri.cells)."""

    values: Mapping[int, Covector] = field(default_factory=dict)

    def __post_init__(self):
        norm = {
            int(k): (int(v[0]), int(v[1])) for k, v in dict(self.values).items()
        }
        object.__setattr__(self, "values", norm)

    def __getitem__(self, cell_id: int) -> Covector:
        return self.values[cell_id]

    def __add__(self, other: "FramedSection") -> "FramedSection":
        if set(self.values) != set(other.values):
            raise UnknownCell("sections defined over different cell sets")
        return FramedSection(
            {c: (v[0] + other.values[c][0], v[1] + other.values[c][1])
             for c, v in self.values.items()}
        )

    def shift(self, n: Sequence[int]) -> "FramedSection":
        return FramedSection(
            {c: (v[0] + int(n[0]), v[1] + int(n[1])) for c, v in self.values.items()}
        )

    def items(self):
        return sorted(self.values.items())


@dataclass(frozen=True)
class LineBundleClass:
    """Integer degree per interior edge (keys are indices into tri.edges)."""

    degrees: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "degrees", {int(k): int(v) for k, v in dict(self.degrees).items()}
        )

    def __add__(self, other: "LineBundleClass") -> "LineBundleClass":
        if set(self.degrees) != set(other.degrees):
            raise UnknownCell("degree vectors over different edge sets")
        return LineBundleClass(
            {e: d + other.degrees[e] for e, d in self.degrees.items()}
        )

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.degrees.values())

    def items(self):
        return sorted(self.degrees.items())


def _require_cells_match(tri: Triangulation, s: FramedSection) -> None:
    expected = set(range(len(tri.cells)))
    if set(s.values) != expected:
        raise UnknownCell(
            f"section assigns cells {sorted(s.values)}, triangulation has {sorted(expected)}"
        )


def _edge_frame(tri: Triangulation, e) -> tuple[int, int, Covector, Covector]:
    """(sigma, sigma', alpha, beta) under the fixed orientation conventions."""
    sigma, sigma_p = sorted(e.cells)
    p, q = tri.edge_points(e)
    alpha, beta = (p, q) if p < q else (q, p)
    return sigma, sigma_p, alpha, beta


def check_section(tri: Triangulation, s: FramedSection) -> bool:
    """True iff every interior-edge constraint <n_s - n_s', alpha - beta> = 0 holds."""
    _require_cells_match(tri, s)
    for e in tri.interior_edges():
        sigma, sigma_p, alpha, beta = _edge_frame(tri, e)
        jump = vsub(s[sigma], s[sigma_p])
        if pairing(jump, vsub(alpha, beta)) != 0:
            return False
    return True


def degree_vector(tri: Triangulation, s: FramedSection) -> LineBundleClass:
    """d_tau = <n_sigma - n_sigma', (beta - alpha)^perp> per interior edge."""
    if not check_section(tri, s):
        raise InvalidSection("section violates an interior-edge constraint")
    degrees = {}
    for e_id, e in enumerate(tri.edges):
        if not e.interior:
            continue
        sigma, sigma_p, alpha, beta = _edge_frame(tri, e)
        jump = vsub(s[sigma], s[sigma_p])
        degrees[e_id] = pairing(jump, perp(vsub(beta, alpha)))
    return LineBundleClass(degrees)


def shift_normalize(s: FramedSection) -> FramedSection:
    """Canonical representative: subtract the value on the lowest-indexed cell."""
    base = s.values[min(s.values)]
    return s.shift((-base[0], -base[1]))


def enumerate_sections(tri: Triangulation, box: int) -> list[FramedSection]:
    """All valid sections with entries in [-box, box]^2, up to shift.

    Returns one shift-normalized representative per class, sorted. The search
    walks cells outward from cell 0 along interior edges; each new cell's
    value is constrained to a 1-parameter family by its first visited
    neighbor, and remaining edges are checked on assignment.
    """
    if box < 0:
        raise ValueError("box must be >= 0")
    k = len(tri.cells)
    adj: dict[int, list[tuple[int, Covector]]] = {c: [] for c in range(k)}
    for e in tri.interior_edges():
        c1, c2 = e.cells
        alpha, beta = tri.edge_points(e)
        step = primitivize(perp(vsub(beta, alpha)))
        adj[c1].append((c2, step))
        adj[c2].append((c1, step))

    # visit order: BFS from cell 0 (dual graph of a polygon triangulation is
    # connected); for each cell after the first, remember one visited neighbor
    order = [0]
    parent: dict[int, tuple[int, Covector]] = {}
    seen = {0}
    qi = 0
    while qi < len(order):
        c = order[qi]
        qi += 1
        for d, step in adj[c]:
            if d not in seen:
                seen.add(d)
                parent[d] = (c, step)
                order.append(d)
    if len(order) != k:
        raise UnknownCell("triangulation dual graph is not connected")

    span = range(-box, box + 1)
    found: set[tuple] = set()
    results = []

    def consistent(assign: dict[int, Covector], c: int) -> bool:
        for d, _step in adj[c]:
            if d in assign:
                e_pts = None
                for e in tri.interior_edges():
                    if set(e.cells) == {c, d}:
                        e_pts = tri.edge_points(e)
                        break
                alpha, beta = e_pts
                if pairing(vsub(assign[c], assign[d]), vsub(alpha, beta)) != 0:
                    return False
        return True

    def rec(pos: int, assign: dict[int, Covector]):
        if pos == k:
            s = shift_normalize(FramedSection(dict(assign)))
            key = tuple(s.items())
            if key not in found:
                found.add(key)
                results.append(s)
            return
        c = order[pos]
        if c in parent:
            base_cell, step = parent[c]
            bx, by = assign[base_cell]
            candidates = []
            for m in range(-4 * box - 4, 4 * box + 5):
                v = (bx + m * step[0], by + m * step[1])
                if -box <= v[0] <= box and -box <= v[1] <= box:
                    candidates.append(v)
        else:
            candidates = [(x, y) for x in span for y in span]
        for v in candidates:
            assign[c] = v
            if consistent(assign, c):
                rec(pos + 1, assign)
            del assign[c]

    rec(0, {})
    results.sort(key=lambda s: tuple(s.items()))
    return results


@dataclass(frozen=True)
class ClassificationReport:
    """Realized shift classes in a box and their degree vectors.

    Reports the realized degree sublattice without claiming it is all of the
    Picard group; kernel_seen records whether some nonzero normalized section
    had degree vector zero (so the degree map fails to be injective on what
    was enumerated).
    """

    box: int
    classes: tuple[FramedSection, ...]
    degree_vectors: tuple[LineBundleClass, ...]
    kernel_seen: bool


def classification_report(tri: Triangulation, box: int) -> ClassificationReport:
    classes = enumerate_sections(tri, box)
    degs = [degree_vector(tri, s) for s in classes]
    kernel = any(
        d.is_zero() and any(v != (0, 0) for v in s.values.values())
        for s, d in zip(classes, degs)
    )
    return ClassificationReport(
        box=box,
        classes=tuple(classes),
        degree_vectors=tuple(degs),
        kernel_seen=kernel,
    )
