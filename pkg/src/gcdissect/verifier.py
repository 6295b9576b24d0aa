"""Independent checks that a dissection plan is what it claims to be.

The verifier reads only coordinates.  It re-classifies every tile, sums
areas, clips every pair of tiles against each other for overlap, and for
glass-cut plans checks that each recorded cut runs between relative
interior points of opposite sides of its quad.  Exact inputs are checked
exactly; a positive tolerance scales with the root's area for the area
checks and is passed through to classification.

Clipping is done with the Sutherland-Hodgman algorithm over the input
scalars, so rational plans produce rational intersection areas and a
tolerance of zero is meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .affine_types import (
    AffineClass,
    Point,
    canonicalize,
    class_close,
    classify_quadrangle,
    cross,
    dot,
    vsub,
)
from .errors import AmbiguousGeometryError, InvalidQuadrangleError
from .realizer import CutRecord, DissectionPlan
from .scalars import Scalar

Polygon = Sequence[Point]


def polygon_area(pts: Polygon) -> Scalar:
    """Unsigned area of a simple polygon."""
    total = 0
    n = len(pts)
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return abs(total) / 2


def _signed_area2(pts: Polygon) -> Scalar:
    total = 0
    n = len(pts)
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return total


def _clip_halfplane(subject: list[Point], a: Point, b: Point) -> list[Point]:
    """Keep the part of subject on or left of the directed line ab."""
    if not subject:
        return subject
    edge = vsub(b, a)
    out: list[Point] = []
    prev = subject[-1]
    prev_side = cross(edge, vsub(prev, a))
    for cur in subject:
        cur_side = cross(edge, vsub(cur, a))
        if cur_side >= 0:
            if prev_side < 0:
                t = prev_side / (prev_side - cur_side)
                out.append(
                    (
                        prev[0] + t * (cur[0] - prev[0]),
                        prev[1] + t * (cur[1] - prev[1]),
                    )
                )
            out.append(cur)
        elif prev_side >= 0:
            t = prev_side / (prev_side - cur_side)
            out.append(
                (
                    prev[0] + t * (cur[0] - prev[0]),
                    prev[1] + t * (cur[1] - prev[1]),
                )
            )
        prev, prev_side = cur, cur_side
    return out


def convex_intersection_area(p: Polygon, q: Polygon) -> Scalar:
    """Area of the intersection of two convex polygons.

    Symmetric in its arguments.  Polygons may be given in either
    orientation; shared edges and vertices contribute nothing.
    """
    p = list(p)
    q = list(q)
    if _signed_area2(q) < 0:
        q = q[::-1]
    subject = p
    for i in range(len(q)):
        subject = _clip_halfplane(subject, q[i], q[(i + 1) % len(q)])
        if not subject:
            return 0
    return polygon_area(subject)


@dataclass(frozen=True)
class TileCheck:
    """Re-classification outcome for one tile."""

    index: int
    expected: AffineClass
    got: AffineClass | None
    ok: bool
    note: str = ""


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    tile_results: tuple[TileCheck, ...]
    area_deficit: Scalar
    max_overlap_area: Scalar
    gc_cut_violations: tuple[str, ...]


def _interior_param(pt: Point, a: Point, b: Point, tol: Scalar) -> bool:
    """Is pt strictly inside segment ab (up to tol, relative)."""
    v = vsub(b, a)
    w = vsub(pt, a)
    vv = dot(v, v)
    off = cross(v, w)
    if tol:
        if abs(off) > tol * vv:
            return False
        t = dot(w, v) / vv
        return tol < t < 1 - tol
    if off != 0:
        return False
    t = dot(w, v) / vv
    return 0 < t < 1


def _check_cut(cut: CutRecord, tol: Scalar) -> str | None:
    if cut.end_side != (cut.start_side + 2) % 4:
        return (
            f"cut joins sides {cut.start_side} and {cut.end_side}, "
            "which are not opposite"
        )
    pts = cut.parent
    for label, point, side in (
        ("start", cut.start, cut.start_side),
        ("end", cut.end, cut.end_side),
    ):
        a, b = pts[side], pts[(side + 1) % 4]
        if not _interior_param(point, a, b, tol):
            return f"cut {label} {point} not interior to side {side}"
    return None


def verify_plan(
    plan: DissectionPlan,
    tol: Scalar = 0,
    expected: AffineClass | None = None,
) -> VerificationReport:
    """Check a plan's geometry against its claims.

    Four checks: every tile re-classifies to the expected class (up to
    flip); tile areas sum to the root's area; no two tiles overlap in
    positive area; and, for glass-cut plans, every recorded cut joins
    relative interior points of opposite sides.  tol = 0 demands exact
    agreement; a positive tol bounds the class parameters directly and
    the area checks relative to the root's area.

    The expected class defaults to the root's own class, which is right
    for self-affine plans.  Pass it explicitly for plans whose tiles are
    copies of some other class.
    """
    if not plan.tiles:
        raise InvalidQuadrangleError("plan has no tiles")
    if expected is None:
        expected = plan.root.cls
    expected = canonicalize(expected)
    class_tol = float(tol) if tol else 0

    tile_results = []
    for i, tile in enumerate(plan.tiles):
        try:
            got = classify_quadrangle(
                tile.points, tol=class_tol if class_tol else 1e-15
            )
        except (InvalidQuadrangleError, AmbiguousGeometryError) as exc:
            tile_results.append(TileCheck(i, expected, None, False, str(exc)))
            continue
        ok = class_close(got.cls, expected, tol)
        note = "" if ok else f"classified as {got.cls}"
        tile_results.append(TileCheck(i, expected, got.cls, ok, note))

    root_area = polygon_area(plan.root.points)
    tile_area = sum(polygon_area(t.points) for t in plan.tiles)
    area_deficit = abs(root_area - tile_area)
    area_ok = area_deficit <= tol * root_area

    max_overlap: Scalar = 0
    tiles = plan.tiles
    for i in range(len(tiles)):
        for j in range(i + 1, len(tiles)):
            overlap = convex_intersection_area(tiles[i].points, tiles[j].points)
            if overlap > max_overlap:
                max_overlap = overlap
    overlap_ok = max_overlap <= tol * root_area

    violations: list[str] = []
    if plan.gc:
        for cut in plan.cuts:
            problem = _check_cut(cut, tol)
            if problem is not None:
                violations.append(problem)

    ok = (
        all(r.ok for r in tile_results)
        and area_ok
        and overlap_ok
        and not violations
    )
    return VerificationReport(
        ok=ok,
        tile_results=tuple(tile_results),
        area_deficit=area_deficit,
        max_overlap_area=max_overlap,
        gc_cut_violations=tuple(violations),
    )
