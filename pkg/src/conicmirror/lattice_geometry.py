"""Exact lattice polygon machinery.

Points live in M = Z^2, covectors in the dual N = Z^2; the pairing is the dot
product. A heighted polygon is a finite point set A together with exact rational
heights nu; the induced regular (coherent) triangulation is the projection of
the lower convex hull of the lifted points (m, nu(m)).

All geometry in this module is exact: integer cross products and Fraction
arithmetic; no floating point.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import (
    DegeneratePolygon,
    InconsistentInput,
    MissingLatticePoints,
    NonTriangularCell,
)

Point = tuple[int, int]
Covector = tuple[int, int]
RationalLike = Union[int, str, Fraction]


# ---------------------------------------------------------------------------
# vector helpers


def vadd(a: Sequence, b: Sequence) -> tuple:
    return (a[0] + b[0], a[1] + b[1])


def vsub(a: Sequence, b: Sequence) -> tuple:
    return (a[0] - b[0], a[1] - b[1])


def vneg(a: Sequence) -> tuple:
    return (-a[0], -a[1])


def pairing(n: Sequence, m: Sequence):
    """<n, m> = n1*m1 + n2*m2."""
    return n[0] * m[0] + n[1] * m[1]


def perp(v: Sequence) -> tuple:
    """Fixed global convention: (a, b)^perp = (-b, a)."""
    return (-v[1], v[0])


def cross(a: Sequence, b: Sequence):
    return a[0] * b[1] - a[1] * b[0]


def orient(o: Sequence, a: Sequence, b: Sequence):
    """Sign of the doubled signed area of triangle (o, a, b)."""
    return cross(vsub(a, o), vsub(b, o))


def gcd2(a: int, b: int) -> int:
    return math.gcd(abs(a), abs(b))


def primitivize(v: Covector) -> Covector:
    g = gcd2(v[0], v[1])
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return (v[0] // g, v[1] // g)


def as_fraction(x: RationalLike) -> Fraction:
    """Exact rational from int, Fraction, or a string ("p/q" or decimal)."""
    if isinstance(x, bool):
        raise TypeError("bool is not a rational height")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected exact rational, got {type(x).__name__}: {x!r}")


# ---------------------------------------------------------------------------
# convex hull (exact, integers)


def convex_hull(points: Iterable[Point]) -> list[Point]:
    """Vertices of the convex hull in counterclockwise order.

    Andrew's monotone chain on integer coordinates; collinear boundary points
    are dropped, so the result lists extreme points only.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and orient(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        # all points collinear
        return [pts[0], pts[-1]]
    return hull


def hull_doubled_area(points: Iterable[Point]) -> int:
    hull = convex_hull(points)
    if len(hull) < 3:
        return 0
    s = 0
    for i in range(len(hull)):
        s += cross(hull[i], hull[(i + 1) % len(hull)])
    return abs(s)


def point_in_hull(hull: Sequence[Point], q: Sequence) -> bool:
    """Closed membership test against a CCW hull (q may have Fraction coords)."""
    if len(hull) == 0:
        return False
    if len(hull) == 1:
        return tuple(q) == hull[0]
    if len(hull) == 2:
        a, b = hull
        if orient(a, b, q) != 0:
            return False
        lo, hi = min(a, b), max(a, b)
        return lo <= tuple(q) <= hi
    return all(
        orient(hull[i], hull[(i + 1) % len(hull)], q) >= 0 for i in range(len(hull))
    )


def lattice_points_in_hull(points: Iterable[Point]) -> list[Point]:
    """All integer points of conv(points), by bounding-box scan (O(area))."""
    pts = list(points)
    hull = convex_hull(pts)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    out = []
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            if point_in_hull(hull, (x, y)):
                out.append((x, y))
    return out


# ---------------------------------------------------------------------------
# heighted polygons


@dataclass(frozen=True)
class HeightedPolygon:
    """A finite set A of distinct lattice points with exact rational heights nu.

    Points are stored as an ordered tuple; all ids elsewhere in the package are
    indices into it. Heights are parallel to points. The hull may be degenerate
    at construction time; operations that need a 2-dimensional polygon raise
    DegeneratePolygon.
    """

    points: tuple[Point, ...]
    heights: tuple[Fraction, ...]

    def __post_init__(self):
        pts = tuple((int(p[0]), int(p[1])) for p in self.points)
        if len(set(pts)) != len(pts):
            raise ValueError("points must be distinct")
        hts = tuple(as_fraction(h) for h in self.heights)
        if len(hts) != len(pts):
            raise ValueError("heights must be parallel to points")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "heights", hts)

    @classmethod
    def create(
        cls,
        points: Iterable[Sequence[int]],
        heights: Union[Mapping[Point, RationalLike], Sequence[RationalLike], RationalLike] = 0,
    ) -> "HeightedPolygon":
        pts = tuple((int(p[0]), int(p[1])) for p in points)
        if isinstance(heights, Mapping):
            hmap = {(int(k[0]), int(k[1])): as_fraction(v) for k, v in heights.items()}
            hts = tuple(hmap.get(p, Fraction(0)) for p in pts)
        elif isinstance(heights, (int, str, Fraction)):
            hts = tuple(as_fraction(heights) for _ in pts)
        else:
            hts = tuple(as_fraction(h) for h in heights)
        return cls(points=pts, heights=hts)

    def height(self, point: Sequence[int]) -> Fraction:
        p = (int(point[0]), int(point[1]))
        try:
            return self.heights[self.points.index(p)]
        except ValueError:
            raise KeyError(f"point {p} not in A")

    def index_of(self, point: Sequence[int]) -> int:
        return self.points.index((int(point[0]), int(point[1])))

    @property
    def is_full_dimensional(self) -> bool:
        return hull_doubled_area(self.points) > 0

    def require_full_dimensional(self) -> None:
        if not self.is_full_dimensional:
            raise DegeneratePolygon(
                f"convex hull of {len(self.points)} points is not 2-dimensional"
            )

    def hull(self) -> list[Point]:
        return convex_hull(self.points)

    def has_all_lattice_points(self) -> bool:
        """True iff A contains every lattice point of conv(A)."""
        return set(lattice_points_in_hull(self.points)) <= set(self.points)


# ---------------------------------------------------------------------------
# triangulations


@dataclass(frozen=True)
class Edge:
    """An edge of a triangulation: vertex ids, interior flag, adjacent cell ids."""

    v: tuple[int, int]
    interior: bool
    cells: tuple[int, ...]


@dataclass(frozen=True)
class Triangulation:
    """A triangulation of conv(A) using points of A.

    cells are sorted triples of indices into points; edges carry their 1 or 2
    adjacent cell ids (indices into cells). vertices_used lists the point ids
    that appear in some cell; input points may be unused (lifted above the
    lower hull).
    """

    points: tuple[Point, ...]
    cells: tuple[tuple[int, int, int], ...]
    edges: tuple[Edge, ...] = field(default=())
    vertices_used: tuple[int, ...] = field(default=())

    def cell_points(self, cell_id: int) -> tuple[Point, Point, Point]:
        i, j, k = self.cells[cell_id]
        return (self.points[i], self.points[j], self.points[k])

    def interior_edges(self) -> list[Edge]:
        return [e for e in self.edges if e.interior]

    def boundary_edges(self) -> list[Edge]:
        return [e for e in self.edges if not e.interior]

    def edge_points(self, e: Edge) -> tuple[Point, Point]:
        return (self.points[e.v[0]], self.points[e.v[1]])


def cell_doubled_area(points: Sequence[Point], cell: Sequence[int]) -> int:
    a, b, c = (points[cell[0]], points[cell[1]], points[cell[2]])
    return abs(cross(vsub(b, a), vsub(c, a)))


def build_triangulation(
    points: Sequence[Point], cells: Iterable[Sequence[int]]
) -> Triangulation:
    """Assemble and validate a Triangulation from cells given as id triples.

    Exact validation: nondegenerate cells, doubled areas summing to the doubled
    hull area, every edge shared by at most 2 cells, single-cell edges lying on
    the hull boundary, and no T-junctions (no used vertex strictly inside
    another cell's edge). Raises InconsistentInput on violation.
    """
    pts = tuple((int(p[0]), int(p[1])) for p in points)
    norm_cells = []
    for c in cells:
        ids = tuple(sorted(int(i) for i in c))
        if len(ids) != 3 or len(set(ids)) != 3:
            raise InconsistentInput(f"cell {c} is not a triple of distinct ids")
        if not all(0 <= i < len(pts) for i in ids):
            raise InconsistentInput(f"cell {c} has out-of-range ids")
        if cell_doubled_area(pts, ids) == 0:
            raise InconsistentInput(f"cell {c} is degenerate (collinear)")
        norm_cells.append(ids)
    norm_cells.sort()
    if len(set(norm_cells)) != len(norm_cells):
        raise InconsistentInput("duplicate cells")

    total = sum(cell_doubled_area(pts, c) for c in norm_cells)
    hull_area = hull_doubled_area(pts)
    if total != hull_area:
        raise InconsistentInput(
            f"cell areas sum to {total}, hull doubled area is {hull_area}"
        )

    edge_cells: dict[tuple[int, int], list[int]] = {}
    for ci, c in enumerate(norm_cells):
        for u, v in ((c[0], c[1]), (c[0], c[2]), (c[1], c[2])):
            edge_cells.setdefault((u, v), []).append(ci)

    hull = convex_hull(pts)

    def on_hull_boundary(a: Point, b: Point) -> bool:
        for i in range(len(hull)):
            p, q = hull[i], hull[(i + 1) % len(hull)]
            if orient(p, q, a) == 0 and orient(p, q, b) == 0:
                lo, hi = min(p, q), max(p, q)
                if lo <= min(a, b) and max(a, b) <= hi:
                    return True
        return False

    used = sorted({i for c in norm_cells for i in c})
    edges = []
    for (u, v), adj in sorted(edge_cells.items()):
        if len(adj) > 2:
            raise InconsistentInput(f"edge {(u, v)} shared by {len(adj)} cells")
        interior = len(adj) == 2
        if not interior and not on_hull_boundary(pts[u], pts[v]):
            raise InconsistentInput(
                f"edge {(u, v)} has one adjacent cell but is not on the boundary"
            )
        # T-junction test: no used vertex strictly inside this edge
        a, b = pts[u], pts[v]
        for w in used:
            if w in (u, v):
                continue
            r = pts[w]
            if orient(a, b, r) == 0 and min(a, b) < r < max(a, b):
                raise InconsistentInput(
                    f"vertex {w} lies strictly inside edge {(u, v)}"
                )
        edges.append(Edge(v=(u, v), interior=interior, cells=tuple(adj)))

    return Triangulation(
        points=pts,
        cells=tuple(norm_cells),
        edges=tuple(edges),
        vertices_used=tuple(used),
    )


# ---------------------------------------------------------------------------
# lower-hull regular triangulation


def _affine_through(
    a: Point, b: Point, c: Point, ha: Fraction, hb: Fraction, hc: Fraction
):
    """The affine function P(x) = u.x + w with P(a)=ha, P(b)=hb, P(c)=hc.

    Returns (u1, u2, w) as Fractions; raises ZeroDivisionError style ValueError
    if a, b, c are collinear.
    """
    d = cross(vsub(b, a), vsub(c, a))
    if d == 0:
        raise ValueError("collinear triple")
    db, dc = hb - ha, hc - ha
    ab, ac = vsub(b, a), vsub(c, a)
    # solve [ab; ac] u = (db, dc)
    u1 = Fraction(db * ac[1] - dc * ab[1], d)
    u2 = Fraction(ab[0] * dc - ac[0] * db, d)
    w = ha - (u1 * a[0] + u2 * a[1])
    return u1, u2, w


def regular_triangulation(poly: HeightedPolygon) -> Triangulation:
    """The regular triangulation induced by the heights.

    A triple of points spans a lower facet iff the affine function
    interpolating its lifted vertices lies weakly below all lifted points. The
    facet is the hull of every on-plane point: if that polygon has more than 3
    vertices the heights are non-generic and NonTriangularCell is raised; if it
    is a triangle, the cell is emitted once (on-plane points inside the facet
    or its edges are not vertices of the decomposition and go unused, as do
    points lifted strictly above the lower hull).

    Brute force over triples with early exit, O(|A|^4) worst case; intended for
    the small point sets of 2-dimensional Newton polygons.
    """
    poly.require_full_dimensional()
    pts = poly.points
    hts = poly.heights
    n = len(pts)
    cells = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                a, b, c = pts[i], pts[j], pts[k]
                if cross(vsub(b, a), vsub(c, a)) == 0:
                    continue
                u1, u2, w = _affine_through(a, b, c, hts[i], hts[j], hts[k])
                coplanar = []
                is_facet = True
                for q in range(n):
                    if q in (i, j, k):
                        continue
                    val = hts[q] - (u1 * pts[q][0] + u2 * pts[q][1] + w)
                    if val < 0:
                        is_facet = False
                        break
                    if val == 0:
                        coplanar.append(q)
                if not is_facet:
                    continue
                if coplanar:
                    face = sorted([i, j, k] + coplanar)
                    verts = convex_hull([pts[q] for q in face])
                    if len(verts) > 3:
                        raise NonTriangularCell(
                            f"lower-hull face through points {face} "
                            f"({[pts[q] for q in face]}) is not a triangle; "
                            "heights are non-generic (try perturb_heights)"
                        )
                    # facet is a triangle with extra on-plane non-vertex
                    # points; emit it only for the triple that is its vertex
                    # set, so each facet appears exactly once
                    if {a, b, c} != set(verts):
                        continue
                cells.append((i, j, k))
    if not cells:
        raise DegeneratePolygon("no lower-hull facets found")
    return build_triangulation(pts, cells)


def is_unimodular(tri: Triangulation) -> bool:
    """True iff every cell {a,b,c} has |det(b-a, c-a)| = 1."""
    return all(cell_doubled_area(tri.points, c) == 1 for c in tri.cells)


def unimodular_triangulation(poly: HeightedPolygon) -> Triangulation:
    """regular_triangulation for point sets that must carry all lattice points.

    Raises MissingLatticePoints if A omits a lattice point of conv(A) (no
    triangulation using A could then be unimodular), and NonTriangularCell /
    DegeneratePolygon as regular_triangulation does. The result may still be
    non-unimodular; test with is_unimodular.
    """
    missing = set(lattice_points_in_hull(poly.points)) - set(poly.points)
    if missing:
        raise MissingLatticePoints(
            f"point set omits lattice points of its hull: {sorted(missing)}"
        )
    return regular_triangulation(poly)


def is_adapted(poly: HeightedPolygon, tri: Triangulation) -> bool:
    """True iff the heights induce exactly this triangulation (up to cell order)."""
    if tuple(tri.points) != tuple(poly.points):
        return False
    try:
        induced = regular_triangulation(poly)
    except (NonTriangularCell, DegeneratePolygon):
        return False
    return set(induced.cells) == set(tri.cells)


def coherence_witness(tri: Triangulation) -> Optional[HeightedPolygon]:
    """Heights certifying that tri is regular, or None if tri is incoherent.

    Exact LP feasibility: for each cell, the affine function interpolating its
    lifted vertices must lie strictly below all other lifted points. A margin
    variable t is maximized subject to interpolation(q) + t <= nu(q), with all
    heights boxed to [-1, 1] (the constraint system is scale-invariant); the
    witness exists iff the optimum has t > 0. Solved with an exact rational
    simplex. The returned heights are verified with is_adapted before return.
    """
    import sympy
    from sympy.solvers.simplex import lpmax

    pts = tri.points
    n = len(pts)
    hs = sympy.symbols(f"h0:{n}")
    t = sympy.Symbol("t")
    constraints = [t >= 0, t <= 1]
    for s in hs:
        constraints += [s >= -1, s <= 1]
    for cell in tri.cells:
        i, j, k = cell
        a, b, c = pts[i], pts[j], pts[k]
        d = cross(vsub(b, a), vsub(c, a))
        ab, ac = vsub(b, a), vsub(c, a)
        for q in range(n):
            if q in cell:
                continue
            aq = vsub(pts[q], a)
            lam_b = sympy.Rational(cross(aq, ac), d)
            lam_c = sympy.Rational(cross(ab, aq), d)
            interp = hs[i] + lam_b * (hs[j] - hs[i]) + lam_c * (hs[k] - hs[i])
            constraints.append(interp + t <= hs[q])
    opt, assignment = lpmax(t, constraints)
    if opt <= 0:
        return None
    heights = tuple(
        Fraction(int(assignment[s].p), int(assignment[s].q)) for s in hs
    )
    witness = HeightedPolygon(points=pts, heights=heights)
    if not is_adapted(witness, tri):
        raise InconsistentInput("LP witness failed verification")
    return witness


def perturb_heights(poly: HeightedPolygon, seed: int) -> HeightedPolygon:
    """Add distinct tiny rationals eps*k_i to break ties in non-generic heights.

    The perturbation scale is chosen small enough that every strict lower-hull
    comparison keeps its sign: comparison values of the unperturbed heights are
    multiples of 1/(L*D) with L the common height denominator and D a cell
    determinant bounded by 8R^2 (R = max coordinate magnitude), while the
    perturbation moves any comparison by less than eps*maxk*(2 + 16R^2).
    Deterministic for a fixed seed; genericity of the result is overwhelmingly
    likely but not guaranteed (reseed if NonTriangularCell persists).
    """
    n = len(poly.points)
    rng = random.Random(seed)
    ks = rng.sample(range(1, 16 * max(n, 2) ** 3), n)
    lcm = 1
    for h in poly.heights:
        lcm = lcm * h.denominator // math.gcd(lcm, h.denominator)
    r = max(max(abs(p[0]), abs(p[1])) for p in poly.points) or 1
    maxk = max(ks)
    eps = Fraction(1, 2 * lcm * maxk * (2 + 16 * r * r) * (8 * r * r))
    heights = tuple(h + eps * k for h, k in zip(poly.heights, ks))
    return HeightedPolygon(points=poly.points, heights=heights)
