"""Concrete dissections: from cut trees and named recipes to coordinates.

A realized dissection is a DissectionPlan: a root quadrangle with labeled
vertices, the tiles that cover it, and the cut segments that produced them.
realize_tree walks a cut tree top down, choosing concrete operand classes
at every node so that the composition algebra is satisfied, and emits one
tile per leaf.  The dissect_* functions package the known recipes (pair
chains for trapezoids, odd tile counts, fans, and the two recipes that give
up the opposite-side cut discipline) as plans.

All geometry is affine.  Exact inputs stay exact: every cut point is a
rational combination of the parent's vertices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Union

from .affine_types import (
    AffineClass,
    GenericQuad,
    Parallelogram,
    Point,
    Trapezoid,
    class_is_exact,
    canonicalize,
    classify_quadrangle,
    cross,
    flip,
    flip_factor,
    is_affine_kite,
    lerp,
    vadd,
    vscale,
    vsub,
)
from .composition import (
    _QC,
    _QP,
    _PP,
    _TI,
    _TP,
    ClassSet,
    ClassTerm,
    Interval,
    Op,
    _quotients_equal,
    _tokens,
    combine,
    member,
)
from .errors import UnrealizableError
from .scalars import Scalar, exactify, is_exact
from .treesearch import LEAF, ExtTree, Leaf, Node, evaluate

# Tolerance for matching classes at internal nodes when any scalar in play
# is a float; exact inputs always match exactly.
INTERNAL_MATCH_TOL = 1e-12

# Stop width and residual for the one-dimensional root finding inside
# dissect_even_general.
BISECTION_TOL = Fraction(1, 10**12)

SIDE_OPENING = "opening"
SIDE_CLOSING = "closing"
SIDE_CONSTANT = "constant"


def _side_types(cls: AffineClass) -> tuple[str, str, str, str]:
    if isinstance(cls, GenericQuad):
        return (SIDE_OPENING, SIDE_CLOSING, SIDE_CLOSING, SIDE_OPENING)
    if isinstance(cls, Trapezoid):
        return (SIDE_CONSTANT, SIDE_CLOSING, SIDE_CONSTANT, SIDE_OPENING)
    return (SIDE_CONSTANT,) * 4


@dataclass(frozen=True)
class LabeledQuad:
    """Four concrete vertices in the reference labeling of their class.

    For a generic class the sides ab and dc extend to one apex and ad, bc
    to the other; for a trapezoid, bc is the short parallel side and ad the
    long one.  Either orientation is allowed; mirror-labeled quads carry
    the class of the mirror labeling.
    """

    cls: AffineClass
    a: Point
    b: Point
    c: Point
    d: Point

    @property
    def points(self) -> tuple[Point, Point, Point, Point]:
        return (self.a, self.b, self.c, self.d)

    @property
    def side_types(self) -> tuple[str, str, str, str]:
        return _side_types(self.cls)

    def side(self, i: int) -> tuple[Point, Point]:
        pts = self.points
        return pts[i], pts[(i + 1) % 4]

    @property
    def is_ccw(self) -> bool:
        return cross(vsub(self.b, self.a), vsub(self.c, self.b)) > 0


@dataclass(frozen=True)
class CutRecord:
    """One straight cut, kept with the quad it subdivided.

    start_side and end_side index the parent's sides (0 = ab, 1 = bc,
    2 = cd, 3 = da); a glass cut always joins two opposite sides.
    """

    parent: tuple[Point, Point, Point, Point]
    start: Point
    end: Point
    start_side: int
    end_side: int


@dataclass(frozen=True)
class Construction:
    """Tag for plans built by a named recipe instead of a cut tree."""

    name: str
    params: tuple[tuple[str, object], ...] = ()


@dataclass(frozen=True)
class DissectionPlan:
    root: LabeledQuad
    tiles: tuple[LabeledQuad, ...]
    tree: Union[ExtTree, Construction]
    pinned: tuple[Scalar, ...] = ()
    gc: bool = True
    cuts: tuple[CutRecord, ...] = ()


def standard_placement(cls: AffineClass) -> LabeledQuad:
    """Reference coordinates for a class.

    Generic: a = (0,0), b = (1-alpha, 0), c = (1-beta, 1-beta'), with
    (alpha', beta') the mirror parameters, so that ab and dc meet at (1,0)
    and ad, bc at the second apex.  Trapezoid: the legs meet at (1,0) and
    the parallel sides are vertical.  Parallelogram: the unit square.
    """
    zero = Fraction(0)
    one = Fraction(1)
    if isinstance(cls, GenericQuad):
        mirrored = flip(cls)
        return LabeledQuad(
            cls,
            (zero, zero),
            (1 - cls.alpha, zero),
            (1 - cls.beta, 1 - mirrored.beta),
            (zero, 1 - mirrored.alpha),
        )
    if isinstance(cls, Trapezoid):
        g = cls.gamma
        return LabeledQuad(
            cls, (zero, zero), (1 - g, zero), (1 - g, g), (zero, one)
        )
    return LabeledQuad(cls, (zero, zero), (one, zero), (one, one), (zero, one))


def _mirror(lq: LabeledQuad) -> LabeledQuad:
    """Relabel with reversed orientation; generic params become the flip."""
    if isinstance(lq.cls, GenericQuad):
        return LabeledQuad(flip(lq.cls), lq.a, lq.d, lq.c, lq.b)
    if isinstance(lq.cls, Trapezoid):
        return LabeledQuad(lq.cls, lq.d, lq.c, lq.b, lq.a)
    return LabeledQuad(lq.cls, lq.a, lq.d, lq.c, lq.b)


def _ccw(lq: LabeledQuad) -> LabeledQuad:
    return lq if lq.is_ccw else _mirror(lq)


def _meet(p: Point, q: Point, r: Point, s: Point) -> Point:
    """Intersection of lines pq and rs; the lines must not be parallel."""
    denom = cross(vsub(q, p), vsub(s, r))
    t = cross(vsub(r, p), vsub(s, r)) / denom
    return lerp(p, q, t)


# ---------------------------------------------------------------------------
# one cut


def _apex_params(cls: AffineClass) -> tuple[Scalar, Scalar]:
    if isinstance(cls, GenericQuad):
        return cls.alpha, cls.beta
    if isinstance(cls, Trapezoid):
        return cls.gamma, cls.gamma
    raise UnrealizableError("parallelograms have no apex to cut towards")


def _cut_apex(
    parent: LabeledQuad, eff_l: AffineClass, eff_r: AffineClass
) -> tuple[LabeledQuad, LabeledQuad, CutRecord]:
    """Cut from side ab to side dc, towards their common apex.

    Both operands are generic or unmirrored trapezoids; the child at the
    a end keeps the parent's a corner.
    """
    p1, q1 = _apex_params(eff_l)
    pp, qp = _apex_params(parent.cls)
    x = lerp(parent.a, parent.b, (1 - p1) / (1 - pp))
    y = lerp(parent.d, parent.c, (1 - q1) / (1 - qp))
    child_l = LabeledQuad(eff_l, parent.a, x, y, parent.d)
    child_r = LabeledQuad(eff_r, x, parent.b, parent.c, y)
    return child_l, child_r, CutRecord(parent.points, x, y, 0, 2)


def _cut_colon(
    parent: LabeledQuad, eff_l: GenericQuad, eff_r: GenericQuad
) -> tuple[LabeledQuad, LabeledQuad, CutRecord]:
    """Cut from ab to dc with the two children facing opposite apexes.

    One child keeps the parent's orientation, the other is mirror-labeled.
    Which one depends on the order of the two cross products alpha1*beta2
    and beta1*alpha2; at a tie the parent is the trapezoid they glue to.
    """
    a1, b1 = eff_l.alpha, eff_l.beta
    u = a1 * eff_r.beta
    v = b1 * eff_r.alpha
    if is_exact(u) and is_exact(v):
        swapped = u > v
    else:
        swapped = not _quotients_equal(u, v) and u > v
    if not swapped:
        x = lerp(parent.a, parent.b, (1 - a1) / (1 - u))
        y = lerp(parent.d, parent.c, (1 - b1) / (1 - v))
        child_l = LabeledQuad(eff_l, parent.a, x, y, parent.d)
        child_r = LabeledQuad(eff_r, y, parent.c, parent.b, x)
    else:
        x = lerp(parent.a, parent.b, (1 - b1) / (1 - v))
        y = lerp(parent.d, parent.c, (1 - a1) / (1 - u))
        child_l = LabeledQuad(eff_l, parent.d, y, x, parent.a)
        child_r = LabeledQuad(eff_r, x, parent.b, parent.c, y)
    return child_l, child_r, CutRecord(parent.points, x, y, 0, 2)


def _cut_between_parallels(
    parent: LabeledQuad, g_a: Scalar, g_far: Scalar, take_lam: Callable[[], Scalar]
) -> tuple[LabeledQuad, LabeledQuad, Point, Point]:
    """Cut a trapezoid parent from side da to side bc.

    Both children are mirror-placed trapezoids; the one with ratio g_a
    takes the parent's a corner.  take_lam is consulted only when the
    ratios agree with the parent's (the one case with a free cut
    position); otherwise the position is forced by the three ratios.
    """
    gp = parent.cls.gamma
    if g_a == gp and g_far == gp:
        lam = take_lam()
        if lam <= 0:
            raise UnrealizableError(f"pinned cut ratio {lam} must be positive")
        p = lerp(parent.a, parent.d, 1 / (1 + lam))
        q = lerp(parent.b, parent.c, 1 / (1 + lam))
        near = LabeledQuad(Trapezoid(g_a), parent.a, parent.b, q, p)
        far = LabeledQuad(Trapezoid(g_far), p, q, parent.c, parent.d)
        return near, far, p, q
    lam = (gp - g_a) / (1 - gp * g_far)
    if lam <= 0:
        raise UnrealizableError(
            f"trapezoid ratio {gp} does not lie above the glued ratio {g_a}"
        )
    p = lerp(parent.a, parent.d, 1 / (1 + lam * g_far))
    q = lerp(parent.b, parent.c, g_a / (g_a + lam))
    near = LabeledQuad(Trapezoid(g_a), parent.a, parent.b, q, p)
    far = LabeledQuad(Trapezoid(g_far), parent.c, parent.d, p, q)
    return near, far, p, q


def _cut_parallelogram_tt(
    parent: LabeledQuad, g_a: Scalar, g_far: Scalar
) -> tuple[LabeledQuad, LabeledQuad, Point, Point]:
    """Split a parallelogram into two mirror-placed trapezoids.

    The cut position is forced: the g_a child sits at the a corner with its
    short parallel side along ad.
    """
    u = (1 - g_far) / (1 - g_a * g_far)
    t = g_a * u
    p = lerp(parent.a, parent.d, t)
    q = lerp(parent.b, parent.c, u)
    near = LabeledQuad(Trapezoid(g_a), q, p, parent.a, parent.b)
    far = LabeledQuad(Trapezoid(g_far), p, q, parent.c, parent.d)
    return near, far, p, q


def _cut_tp(
    parent: LabeledQuad, g0: Scalar
) -> tuple[LabeledQuad, LabeledQuad, Point, Point]:
    """Trapezoid parent into a mirror-placed trapezoid plus parallelogram."""
    gp = parent.cls.gamma
    if not g0 < gp:
        raise UnrealizableError(
            f"parallelogram complement needs ratio below {gp}, got {g0}"
        )
    t = (1 - gp) / (1 - g0)
    s = g0 * t / gp
    p = lerp(parent.a, parent.d, t)
    q = lerp(parent.b, parent.c, s)
    near = LabeledQuad(Trapezoid(g0), parent.a, parent.b, q, p)
    far = LabeledQuad(Parallelogram(), p, q, parent.c, parent.d)
    return near, far, p, q


def _cut_pp(
    parent: LabeledQuad, lam: Scalar
) -> tuple[LabeledQuad, LabeledQuad, Point, Point]:
    if lam <= 0:
        raise UnrealizableError(f"pinned cut ratio {lam} must be positive")
    h = 1 / (1 + lam)
    p = lerp(parent.a, parent.d, h)
    q = lerp(parent.b, parent.c, h)
    near = LabeledQuad(Parallelogram(), parent.a, parent.b, q, p)
    far = LabeledQuad(Parallelogram(), p, q, parent.c, parent.d)
    return near, far, p, q


def _cut_node(
    parent: LabeledQuad,
    op: Op,
    left: AffineClass,
    left_flip: bool,
    right: AffineClass,
    right_flip: bool,
    take_lam: Callable[[], Scalar],
    check: bool,
    tol: Scalar,
) -> tuple[LabeledQuad, LabeledQuad, CutRecord]:
    if check:
        result = combine(ClassTerm(left, left_flip), ClassTerm(right, right_flip), op)
        if not member(result, parent.cls, tol):
            raise UnrealizableError(
                f"glueing {left} and {right} cannot produce {parent.cls}"
            )

    def effective(cls: AffineClass, flagged: bool) -> AffineClass:
        if isinstance(cls, GenericQuad) and flagged:
            return flip(cls)
        return cls

    eff_l = effective(left, left_flip)
    eff_r = effective(right, right_flip)
    mirror_l = left_flip and isinstance(left, GenericQuad)
    mirror_r = right_flip and isinstance(right, GenericQuad)

    if op is Op.COLON:
        child_l, child_r, cut = _cut_colon(parent, eff_l, eff_r)
    else:
        t_flag_l = left_flip and not isinstance(left, GenericQuad)
        t_flag_r = right_flip and not isinstance(right, GenericQuad)
        l_par = isinstance(eff_l, Parallelogram)
        r_par = isinstance(eff_r, Parallelogram)
        if l_par and r_par:
            near, far, p, q = _cut_pp(parent, take_lam())
            child_l, child_r = near, far
        elif l_par or r_par:
            g0 = eff_r.gamma if l_par else eff_l.gamma
            near, far, p, q = _cut_tp(parent, g0)
            child_l, child_r = (far, near) if l_par else (near, far)
        elif t_flag_l and t_flag_r:
            g1, g2 = eff_l.gamma, eff_r.gamma
            if isinstance(parent.cls, Parallelogram):
                if g1 <= g2:
                    near, far, p, q = _cut_parallelogram_tt(parent, g1, g2)
                    child_l, child_r = near, far
                else:
                    near, far, p, q = _cut_parallelogram_tt(parent, g2, g1)
                    child_l, child_r = far, near
            elif g1 <= g2:
                near, far, p, q = _cut_between_parallels(parent, g1, g2, take_lam)
                child_l, child_r = near, far
            else:
                near, far, p, q = _cut_between_parallels(parent, g2, g1, take_lam)
                child_l, child_r = far, near
        else:
            child_l, child_r, cut = _cut_apex(parent, eff_l, eff_r)
            if mirror_l:
                child_l = _mirror(child_l)
            if mirror_r:
                child_r = _mirror(child_r)
            return child_l, child_r, cut
        cut = CutRecord(parent.points, p, q, 3, 1)
        return child_l, child_r, cut

    if mirror_l:
        child_l = _mirror(child_l)
    if mirror_r:
        child_r = _mirror(child_r)
    return child_l, child_r, cut


def realize_cut(
    parent: LabeledQuad,
    op: Op,
    left: AffineClass,
    left_flip: bool,
    right: AffineClass,
    right_flip: bool,
    lam: Union[Scalar, None] = None,
) -> tuple[LabeledQuad, LabeledQuad, CutRecord]:
    """Subdivide parent by one glueing step into two labeled children.

    left and right are the classes the two pieces must have, with their
    mirror flags as they would appear on the tree edges.  The composition of
    the two classes must contain the parent's class; lam pins the cut
    position in the cases where it is free (defaults to an even split).
    Children are returned in (left, right) order; the cut runs between
    opposite sides of the parent.
    """
    tol = 0 if class_is_exact(parent.cls) and class_is_exact(left) and class_is_exact(right) else INTERNAL_MATCH_TOL
    return _cut_node(
        parent,
        op,
        left,
        left_flip,
        right,
        right_flip,
        take_lam=lambda: Fraction(1) if lam is None else lam,
        check=True,
        tol=tol,
    )


# ---------------------------------------------------------------------------
# choosing operand classes at a node

_Token = tuple


def _pick_interval(iv: Interval, prefer: Union[Scalar, None] = None) -> Scalar:
    if prefer is not None and iv.contains(prefer):
        return prefer
    if iv.lo_closed:
        return iv.lo
    return (iv.lo + iv.hi) / 2


def _pick_below(iv: Interval, bound: Scalar) -> Union[Scalar, None]:
    """A member of iv strictly below bound, or None."""
    if iv.lo >= bound:
        return None
    if iv.lo_closed:
        return iv.lo
    hi = min(iv.hi, bound)
    return (iv.lo + hi) / 2


def _intersect_feasible(iv: Interval, lo: Scalar, hi: Scalar) -> Union[Scalar, None]:
    """A point of iv inside [lo, hi], treating all endpoints as open-ish."""
    lo2 = max(iv.lo, lo)
    hi2 = min(iv.hi, hi)
    if lo2 > hi2:
        return None
    if lo2 == hi2:
        return lo2 if iv.contains(lo2) and lo <= lo2 <= hi else None
    return (lo2 + hi2) / 2


def _close(a: Scalar, b: Scalar, tol: Scalar) -> bool:
    if tol == 0:
        return a == b
    return abs(a - b) <= tol


class _NodeSolver:
    """Finds concrete operand classes at a tree node.

    Given the class sets of the two subtrees, their edge flags, and the
    class the parent quad carries, picks one member from each side whose
    glueing contains the parent class.  Deterministic: tokens are tried in
    the order the sets store them, first success wins.
    """

    def __init__(self, tol: Scalar) -> None:
        self.tol = tol

    def solve(
        self,
        set_l: ClassSet,
        flip_l: bool,
        set_r: ClassSet,
        flip_r: bool,
        op: Op,
        target: AffineClass,
    ) -> tuple[AffineClass, AffineClass]:
        for tok_l in _tokens(set_l, flip_l):
            for tok_r in _tokens(set_r, flip_r):
                pair = self._try(tok_l, tok_r, op, target)
                if pair is not None:
                    eff_l, eff_r = pair
                    return (
                        self._to_subtree(eff_l, flip_l),
                        self._to_subtree(eff_r, flip_r),
                    )
        raise UnrealizableError(
            f"no operand choice glues to {target} at this node"
        )

    @staticmethod
    def _to_subtree(eff: AffineClass, flagged: bool) -> AffineClass:
        if flagged and isinstance(eff, GenericQuad):
            return flip(eff)
        return eff

    # The cases mirror the glueing table rows, solved for the operands.

    def _try(
        self, tok_l: _Token, tok_r: _Token, op: Op, target: AffineClass
    ) -> Union[tuple[AffineClass, AffineClass], None]:
        kind_l, kind_r = tok_l[0], tok_r[0]
        if op is Op.COLON:
            if kind_l == _QP and kind_r == _QP:
                return self._colon_pp(tok_l[1], tok_r[1], target)
            if kind_l == _QP and kind_r == _QC:
                pair = self._colon_pc(tok_l[1], tok_r[1], target)
                return pair
            if kind_l == _QC and kind_r == _QP:
                pair = self._colon_pc(tok_r[1], tok_l[1], target)
                return None if pair is None else (pair[1], pair[0])
            if kind_l == _QC and kind_r == _QC:
                return self._colon_cc(tok_l[1], tok_r[1], target)
            return None

        handlers = {
            (_QP, _QP): lambda: self._dot_qq(tok_l[1], tok_r[1], target),
            (_QP, _QC): lambda: self._dot_qc(tok_l[1], tok_r[1], target),
            (_QC, _QP): lambda: self._swap(self._dot_qc(tok_r[1], tok_l[1], target)),
            (_QC, _QC): lambda: self._dot_cc(tok_l[1], tok_r[1], target),
            (_QP, _TP): lambda: self._dot_qt(tok_l[1], tok_r, target),
            (_TP, _QP): lambda: self._swap(self._dot_qt(tok_r[1], tok_l, target)),
            (_QP, _TI): lambda: self._dot_qti(tok_l[1], tok_r, target),
            (_TI, _QP): lambda: self._swap(self._dot_qti(tok_r[1], tok_l, target)),
            (_QC, _TP): lambda: self._dot_ct(tok_l[1], tok_r, target),
            (_TP, _QC): lambda: self._swap(self._dot_ct(tok_r[1], tok_l, target)),
            (_QC, _TI): lambda: self._dot_cti(tok_l[1], tok_r, target),
            (_TI, _QC): lambda: self._swap(self._dot_cti(tok_r[1], tok_l, target)),
            (_TP, _TP): lambda: self._dot_tt(tok_l, tok_r, target),
            (_TP, _TI): lambda: self._dot_tt(tok_l, tok_r, target),
            (_TI, _TP): lambda: self._dot_tt(tok_l, tok_r, target),
            (_TI, _TI): lambda: self._dot_tt(tok_l, tok_r, target),
            (_TP, _PP): lambda: self._dot_t_par(tok_l, tok_r, target),
            (_TI, _PP): lambda: self._dot_t_par(tok_l, tok_r, target),
            (_PP, _TP): lambda: self._swap(self._dot_t_par(tok_r, tok_l, target)),
            (_PP, _TI): lambda: self._swap(self._dot_t_par(tok_r, tok_l, target)),
            (_PP, _PP): lambda: self._dot_pp(tok_l, tok_r, target),
        }
        handler = handlers.get((kind_l, kind_r))
        return None if handler is None else handler()

    @staticmethod
    def _swap(pair):
        return None if pair is None else (pair[1], pair[0])

    def _colon_pp(self, q1, q2, target):
        u = q1.alpha * q2.beta
        v = q1.beta * q2.alpha
        if _quotients_equal(u, v):
            if isinstance(target, Trapezoid) and self._eq(target.gamma, u):
                return q1, q2
            return None
        lo, hi = (u, v) if u < v else (v, u)
        if (
            isinstance(target, GenericQuad)
            and self._eq(target.alpha, lo)
            and self._eq(target.beta, hi)
        ):
            return q1, q2
        return None

    def _colon_pc(self, q, curve, target):
        rq = q.alpha / q.beta
        rc = curve.quotient
        if _quotients_equal(rq, rc):
            if not isinstance(target, Trapezoid):
                return None
            b = target.gamma / q.alpha
            if curve.betas.contains(b, self.tol):
                return q, curve.at(b)
            return None
        if not isinstance(target, GenericQuad):
            return None
        if rc < rq:
            b = target.beta / q.alpha
            if curve.betas.contains(b, self.tol) and self._eq(
                target.alpha, (rc / rq) * target.beta
            ):
                return q, curve.at(b)
            return None
        b = target.beta / (rc * q.beta)
        if curve.betas.contains(b, self.tol) and self._eq(
            target.alpha, (rq / rc) * target.beta
        ):
            return q, curve.at(b)
        return None

    def _colon_cc(self, c1, c2, target):
        r1, r2 = c1.quotient, c2.quotient
        if _quotients_equal(r1, r2):
            if not isinstance(target, Trapezoid):
                return None
            product = target.gamma / r1
        else:
            if not isinstance(target, GenericQuad):
                return None
            lo_q, hi_q = (r1, r2) if r1 < r2 else (r2, r1)
            if not self._eq(target.alpha, (lo_q / hi_q) * target.beta):
                return None
            product = target.beta / hi_q
        return self._split_product(c1, c2, product)

    def _dot_qq(self, q1, q2, target):
        if (
            isinstance(target, GenericQuad)
            and self._eq(q1.alpha * q2.alpha, target.alpha)
            and self._eq(q1.beta * q2.beta, target.beta)
        ):
            return q1, q2
        return None

    def _dot_qc(self, q, curve, target):
        if not isinstance(target, GenericQuad):
            return None
        b = target.beta / q.beta
        if curve.betas.contains(b, self.tol) and self._eq(
            target.alpha, q.alpha * curve.quotient * b
        ):
            return q, curve.at(b)
        return None

    def _dot_cc(self, c1, c2, target):
        if not isinstance(target, GenericQuad):
            return None
        r = c1.quotient * c2.quotient
        if not self._eq(target.alpha, r * target.beta):
            return None
        return self._split_product(c1, c2, target.beta)

    def _dot_qt(self, q, tok_t, target):
        if tok_t[2] or not isinstance(target, GenericQuad):
            return None
        g = tok_t[1].gamma
        if self._eq(q.alpha * g, target.alpha) and self._eq(q.beta * g, target.beta):
            return q, tok_t[1]
        return None

    def _dot_qti(self, q, tok_i, target):
        if tok_i[2] or not isinstance(target, GenericQuad):
            return None
        g = target.beta / q.beta
        if tok_i[1].contains(g, self.tol) and self._eq(q.alpha * g, target.alpha):
            return q, Trapezoid(g)
        return None

    def _dot_ct(self, curve, tok_t, target):
        if tok_t[2] or not isinstance(target, GenericQuad):
            return None
        g = tok_t[1].gamma
        b = target.beta / g
        if curve.betas.contains(b, self.tol) and self._eq(
            target.alpha, curve.quotient * target.beta
        ):
            return curve.at(b), tok_t[1]
        return None

    def _dot_cti(self, curve, tok_i, target):
        if tok_i[2] or not isinstance(target, GenericQuad):
            return None
        if not self._eq(target.alpha, curve.quotient * target.beta):
            return None
        iv = tok_i[1]
        g = _intersect_feasible(
            iv, target.beta / curve.betas.hi, target.beta / curve.betas.lo
        )
        if g is None:
            return None
        b = target.beta / g
        if not curve.betas.contains(b, self.tol):
            return None
        return curve.at(b), Trapezoid(g)

    def _dot_tt(self, tok_l, tok_r, target):
        flagged = tok_l[2]
        if flagged != tok_r[2]:
            return None
        if not flagged:
            if not isinstance(target, Trapezoid):
                return None
            if tok_l[0] == _TP and tok_r[0] == _TP:
                g1, g2 = tok_l[1].gamma, tok_r[1].gamma
                if self._eq(g1 * g2, target.gamma):
                    return tok_l[1], tok_r[1]
                return None
            if tok_l[0] == _TP:
                g1 = tok_l[1].gamma
                g2 = target.gamma / g1
                if tok_r[1].contains(g2, self.tol):
                    return tok_l[1], Trapezoid(g2)
                return None
            if tok_r[0] == _TP:
                g2 = tok_r[1].gamma
                g1 = target.gamma / g2
                if tok_l[1].contains(g1, self.tol):
                    return Trapezoid(g1), tok_r[1]
                return None
            iv_l, iv_r = tok_l[1], tok_r[1]
            g1 = _intersect_feasible(
                iv_l, target.gamma / iv_r.hi, target.gamma / iv_r.lo
            )
            if g1 is None:
                return None
            g2 = target.gamma / g1
            if not iv_r.contains(g2, self.tol):
                return None
            return Trapezoid(g1), Trapezoid(g2)
        # mirror-placed pair: parent is anything from the joint minimum up,
        # or a parallelogram
        if isinstance(target, Parallelogram):
            g1 = self._any_t(tok_l, None)
            g2 = self._any_t(tok_r, g1)
            return Trapezoid(g1), Trapezoid(g2)
        if not isinstance(target, Trapezoid):
            return None
        gp = target.gamma
        g1 = self._t_point(tok_l)
        g2 = self._t_point(tok_r)
        if g1 is not None and g2 is not None:
            ok = min(g1, g2) < gp or (g1 == g2 == gp)
            if not ok and self.tol:
                ok = min(g1, g2) <= gp + self.tol
            return (Trapezoid(g1), Trapezoid(g2)) if ok else None
        if g1 is not None:
            pair = self._mirror_point_interval(g1, tok_r[1], gp)
            return None if pair is None else (Trapezoid(pair[0]), Trapezoid(pair[1]))
        if g2 is not None:
            pair = self._mirror_point_interval(g2, tok_l[1], gp)
            return None if pair is None else (Trapezoid(pair[1]), Trapezoid(pair[0]))
        iv_l, iv_r = tok_l[1], tok_r[1]
        below = _pick_below(iv_l, gp)
        if below is not None:
            return Trapezoid(below), Trapezoid(_pick_interval(iv_r, gp))
        below = _pick_below(iv_r, gp)
        if below is not None:
            return Trapezoid(_pick_interval(iv_l, gp)), Trapezoid(below)
        if iv_l.contains(gp) and iv_r.contains(gp):
            return Trapezoid(gp), Trapezoid(gp)
        return None

    @staticmethod
    def _t_point(tok) -> Union[Scalar, None]:
        return tok[1].gamma if tok[0] == _TP else None

    @staticmethod
    def _any_t(tok, prefer) -> Scalar:
        if tok[0] == _TP:
            return tok[1].gamma
        return _pick_interval(tok[1], prefer)

    def _mirror_point_interval(self, g1, iv, gp):
        """Partner ratio for a fixed g1 under a mirror-placed pair."""
        if g1 == gp:
            if iv.contains(gp):
                return g1, gp
            g2 = _pick_below(iv, gp)
            return None if g2 is None else (g1, g2)
        if g1 < gp or (self.tol and g1 <= gp + self.tol):
            return g1, _pick_interval(iv, gp)
        g2 = _pick_below(iv, gp)
        return None if g2 is None else (g1, g2)

    def _dot_t_par(self, tok_t, tok_p, target):
        if not tok_t[2] or tok_p[1]:
            return None
        if not isinstance(target, Trapezoid):
            return None
        gp = target.gamma
        if tok_t[0] == _TP:
            g0 = tok_t[1].gamma
            if g0 < gp or (self.tol and g0 <= gp + self.tol):
                return tok_t[1], Parallelogram()
            return None
        g0 = _pick_below(tok_t[1], gp)
        return None if g0 is None else (Trapezoid(g0), Parallelogram())

    def _dot_pp(self, tok_l, tok_r, target):
        if tok_l[1] or tok_r[1]:
            return None
        if isinstance(target, Parallelogram):
            return Parallelogram(), Parallelogram()
        return None

    def _split_product(self, c1, c2, product):
        """Betas (b1, b2) on the two curves with b1 * b2 = product."""
        b1 = _intersect_feasible(
            c1.betas, product / c2.betas.hi, product / c2.betas.lo
        )
        if b1 is None:
            return None
        b2 = product / b1
        if not c2.betas.contains(b2, self.tol):
            return None
        return c1.at(b1), c2.at(b2)

    def _eq(self, a: Scalar, b: Scalar) -> bool:
        return _close(a, b, self.tol)


# ---------------------------------------------------------------------------
# whole-tree realization


class _TreeRealizer:
    def __init__(
        self,
        leaf: AffineClass,
        cache: dict[str, ClassSet],
        pinned: Iterable[Scalar],
        tol: Scalar,
    ) -> None:
        self.leaf = leaf
        self.cache = cache
        self.pinned = deque(pinned)
        self.used: list[Scalar] = []
        self.solver = _NodeSolver(tol)
        self.tol = tol
        self.tiles: list[LabeledQuad] = []
        self.cuts: list[CutRecord] = []

    def take_lam(self) -> Scalar:
        lam = self.pinned.popleft() if self.pinned else Fraction(1)
        self.used.append(lam)
        return lam

    def walk(self, t: ExtTree, quad: LabeledQuad) -> None:
        if isinstance(t, Leaf):
            self.tiles.append(_ccw(quad))
            return
        set_l = evaluate(t.left, self.leaf, self.cache)
        set_r = evaluate(t.right, self.leaf, self.cache)
        cls_l, cls_r = self.solver.solve(
            set_l, t.left_flip, set_r, t.right_flip, t.op, quad.cls
        )
        child_l, child_r, cut = _cut_node(
            quad,
            t.op,
            cls_l,
            t.left_flip,
            cls_r,
            t.right_flip,
            take_lam=self.take_lam,
            check=False,
            tol=self.tol,
        )
        self.cuts.append(cut)
        self.walk(t.left, child_l)
        self.walk(t.right, child_r)


def _realize_into(
    t: ExtTree,
    leaf: AffineClass,
    root_quad: LabeledQuad,
    pinned: Iterable[Scalar],
    tol: Scalar,
    cache: Union[dict[str, ClassSet], None] = None,
) -> _TreeRealizer:
    cache = {} if cache is None else cache
    root_set = evaluate(t, leaf, cache)
    if not member(root_set, root_quad.cls, tol):
        raise UnrealizableError(
            f"tree cannot produce {root_quad.cls} from copies of {leaf}"
        )
    state = _TreeRealizer(leaf, cache, pinned, tol)
    state.walk(t, root_quad)
    return state


def _auto_tol(*classes: AffineClass) -> Scalar:
    return 0 if all(class_is_exact(c) for c in classes) else INTERNAL_MATCH_TOL


def realize_tree(
    t: ExtTree,
    leaf: AffineClass,
    pinned: Iterable[Scalar] = (),
    root: Union[AffineClass, None] = None,
    tol: Union[Scalar, None] = None,
) -> DissectionPlan:
    """Concrete coordinates for a cut tree over one leaf class.

    The root is placed at standard_placement of its class: the leaf itself,
    its flip, or an explicit root override that the tree's class set must
    contain.  pinned supplies cut positions for the free-ratio cuts in the
    order the walk meets them (missing values default to 1, an even split).
    Raises UnrealizableError when the tree cannot produce the root class.
    """
    if tol is None:
        tol = _auto_tol(leaf) if root is None else _auto_tol(leaf, root)
    cache: dict[str, ClassSet] = {}
    if root is None:
        root_set = evaluate(t, leaf, cache)
        candidates: list[AffineClass] = [leaf]
        if isinstance(leaf, GenericQuad):
            other = flip(leaf)
            if other != leaf:
                candidates.append(other)
        for cand in candidates:
            if member(root_set, cand, tol):
                root = cand
                break
        else:
            points = list(root_set.members())
            if len(points) == 1 and not root_set.t_intervals and not root_set.q_curves:
                # Not self-affine, but the tree admits exactly one root class.
                root = points[0]
            else:
                raise UnrealizableError(
                    f"tree cannot reproduce {leaf} or its flip at the root"
                )
    root_quad = standard_placement(root)
    state = _realize_into(t, leaf, root_quad, pinned, tol, cache)
    return DissectionPlan(
        root=root_quad,
        tiles=tuple(state.tiles),
        tree=t,
        pinned=tuple(state.used),
        gc=True,
        cuts=tuple(state.cuts),
    )


# ---------------------------------------------------------------------------
# named recipes


def _pair_tree(flagged: bool) -> Node:
    return Node(Op.COLON, LEAF, flagged, LEAF, flagged)


def _chain_tree(pairs: int, flagged: bool) -> ExtTree:
    """pairs colon-pairs glued in a row; the result ratio is a power."""
    t: ExtTree = _pair_tree(flagged)
    for _ in range(pairs - 1):
        t = Node(Op.DOT, _pair_tree(flagged), False, t, False)
    return t


def _trapezoid_branch(cls: GenericQuad) -> tuple[bool, Scalar, Scalar]:
    """(use mirror copies, pair ratio, admissible lower bound)."""
    f = flip_factor(cls)
    base = cls.alpha * cls.beta
    flagged = f < 1
    other = flip(cls)
    g = other.alpha * other.beta if flagged else base
    bound = base * min(f, 1)
    return flagged, g, bound


def dissect_trapezoid(gamma: Scalar, cls: GenericQuad, k: int) -> DissectionPlan:
    """Cut T(gamma) into k copies of cls; k must be even.

    k = 2 works only for gamma = alpha * beta (the one ratio two copies can
    glue to across a single cut).  For even k >= 4 every gamma at or above
    alpha * beta * min(flip_factor, 1) is realizable: k/2 - 1 pairs stack
    into a thin trapezoid and the last pair closes the gap, mirror-placed.
    """
    if not isinstance(cls, GenericQuad):
        raise ValueError(f"tile class must be generic, got {cls}")
    if k < 2 or k % 2:
        raise UnrealizableError(
            f"a trapezoid splits into an even number of copies, not {k}"
        )
    if k == 2:
        base = cls.alpha * cls.beta
        if not _close(gamma, base, _auto_tol(cls, Trapezoid(gamma))):
            raise UnrealizableError(
                f"two copies only glue to ratio {base}, not {gamma}"
            )
        tree: ExtTree = _pair_tree(False)
        return realize_tree(tree, cls, root=Trapezoid(gamma))
    flagged, _, bound = _trapezoid_branch(cls)
    if gamma < bound:
        raise UnrealizableError(
            f"ratio {gamma} lies below the admissible bound {bound} for {cls}"
        )
    m = k // 2
    tree = Node(Op.DOT, _pair_tree(flagged), True, _chain_tree(m - 1, flagged), True)
    return realize_tree(tree, cls, root=Trapezoid(gamma))


def _odd_kite_ratio(cls: GenericQuad) -> Scalar:
    a, b = cls.alpha, cls.beta
    return (1 - a * a * b) * b / (1 - a * b * b)


def dissect_odd(cls: GenericQuad, n: int) -> DissectionPlan:
    """Cut a generic quadrangle into an odd number n >= 5 of its own copies.

    Away from the fixed points of flip the quad splits off one full-size
    copy whose complement is a trapezoid with the flip factor as ratio.
    At a fixed point (beta = 1/(2 - alpha)) that complement degenerates,
    n = 5 becomes impossible, and n >= 7 goes through a three-tile head
    whose complement ratio stays realizable.
    """
    if not isinstance(cls, GenericQuad):
        raise ValueError(f"need a generic class, got {cls}")
    if n % 2 == 0:
        raise UnrealizableError(f"dissect_odd handles odd counts, got {n}")
    if n < 5:
        raise UnrealizableError(
            f"no glass-cut self-affine dissection into {n} generic tiles exists"
        )
    tol = _auto_tol(cls)
    if is_affine_kite(cls, tol if tol else 0):
        if n == 5:
            raise UnrealizableError(
                "an affine kite admits no glass-cut dissection into five "
                "copies of itself: the complement of one copy degenerates "
                "at the flip fixed point"
            )
        gamma = _odd_kite_ratio(cls)
        base = cls.alpha * cls.beta
        assert gamma >= base, "kite complement ratio fell below the pair ratio"
        head = Node(Op.DOT, LEAF, False, _pair_tree(False), False)
        m = (n - 3) // 2
        chain = Node(
            Op.DOT, _pair_tree(False), True, _chain_tree(m - 1, False), True
        )
        tree = Node(Op.DOT, head, True, chain, False)
        return realize_tree(tree, cls, root=cls)
    rep = cls if flip_factor(cls) < 1 else flip(cls)
    f_rep = flip_factor(rep)
    flagged, _, bound = _trapezoid_branch(rep)
    assert f_rep >= bound, "complement ratio fell below the admissible bound"
    m = (n - 1) // 2
    chain = Node(Op.DOT, _pair_tree(flagged), True, _chain_tree(m - 1, flagged), True)
    tree = Node(Op.DOT, LEAF, False, chain, False)
    return realize_tree(tree, rep, root=flip(rep))


def dissect_trapezoid_selfaffine(
    cls: Union[Trapezoid, Parallelogram], n: int
) -> DissectionPlan:
    """Fan of n >= 2 parallel cuts: every tile is the class itself.

    Cut positions are pinned to equal fractions of the long parallel side,
    so the n tiles are congruent up to the fixed affine frame.
    """
    if not isinstance(cls, (Trapezoid, Parallelogram)):
        raise ValueError(f"need a trapezoid or parallelogram, got {cls}")
    if n < 2:
        raise UnrealizableError(f"a fan needs at least two tiles, got {n}")
    flagged = isinstance(cls, Trapezoid)
    tree: ExtTree = LEAF
    for _ in range(n - 1):
        tree = Node(Op.DOT, LEAF, flagged, tree, flagged)
    pinned = tuple(Fraction(j) for j in range(n - 1, 0, -1))
    return realize_tree(tree, cls, pinned=pinned, root=cls)


def _exact_generic(cls: GenericQuad) -> GenericQuad:
    return GenericQuad(exactify(cls.alpha), exactify(cls.beta))


def _forced_pair_split(
    parent: LabeledQuad, piece: GenericQuad
) -> tuple[LabeledQuad, LabeledQuad]:
    """Colon split with the fractions of piece, without a class check.

    Used where the parent's ratio differs from piece's pair ratio by a
    bisection residual; the two children are then copies of piece up to
    that residual.
    """
    child_l, child_r, _ = _cut_colon(parent, piece, piece)
    return child_l, child_r


def dissect_por5(cls: GenericQuad) -> DissectionPlan:
    """Five copies via one shrunk copy and two split trapezoids.

    Scales the quad into its own corner at ratio alpha * beta; the
    complement splits along the diagonal through that corner into two
    trapezoids of exactly the pair ratio, each of which is two copies.
    The middle cuts are not between opposite sides, so the plan is not
    glass-cut.
    """
    if not isinstance(cls, GenericQuad):
        raise ValueError(f"need a generic class, got {cls}")
    ecls = _exact_generic(cls)
    root = standard_placement(ecls)
    a, b, c, d = root.points
    r = ecls.alpha * ecls.beta
    rb, rc, rd = vscale(r, b), vscale(r, c), vscale(r, d)
    shrunk = LabeledQuad(ecls, a, rb, rc, rd)
    trap1 = LabeledQuad(Trapezoid(r), b, rb, rc, c)
    trap2 = LabeledQuad(Trapezoid(r), c, rc, rd, d)
    t1a, t1b = _forced_pair_split(trap1, ecls)
    t2a, t2b = _forced_pair_split(trap2, ecls)
    tiles = tuple(_ccw(t) for t in (shrunk, t1a, t1b, t2a, t2b))
    return DissectionPlan(
        root=root,
        tiles=tiles,
        tree=Construction("por5"),
        pinned=(),
        gc=False,
        cuts=(),
    )


def _even_general_pieces(
    nu: Fraction, k: Fraction, frame: LabeledQuad
) -> tuple[Point, Point, Trapezoid]:
    """Cut points of the scaled copy against the two filler triangles."""
    a, b, c, d = frame.points
    big_b, big_c, big_d = vscale(k, b), vscale(k, c), vscale(k, d)
    z1 = _meet(big_b, c, vscale(nu, big_b), vscale(nu, big_c))
    z2 = _meet(c, big_d, vscale(nu, big_c), vscale(nu, big_d))
    ratio = classify_quadrangle((b, vscale(nu, big_b), z1, c)).cls
    assert isinstance(ratio, Trapezoid)
    return z1, z2, ratio


def dissect_even_general(cls: GenericQuad, n: int) -> DissectionPlan:
    """n >= 6 even copies of a generic quadrangle, not glass-cut.

    An expanded frame holds the original, a reversed affine copy, and two
    filler trapezoids of a ratio that varies continuously with the frame
    size.  The frame is tuned until that ratio hits the pair ratio
    alpha * beta (to within 1e-12, from above), and the fillers then split
    into 2 and n - 4 copies.  Four copies are impossible; odd counts are
    handled by dissect_odd.
    """
    if not isinstance(cls, GenericQuad):
        raise ValueError(f"need a generic class, got {cls}")
    if n % 2:
        raise UnrealizableError(f"dissect_even_general handles even counts, got {n}")
    if n < 6:
        raise UnrealizableError(
            f"no self-affine dissection of a generic quadrangle into {n} tiles exists"
        )
    ecls = _exact_generic(cls)
    frame = standard_placement(ecls)
    a, b, c, d = frame.points
    mirrored = flip(ecls)
    mu_hat = (1 - ecls.beta) / (1 - ecls.alpha)
    nu_hat = (1 - mirrored.beta) / (1 - mirrored.alpha)
    assert c == vadd(vscale(mu_hat, b), vscale(nu_hat, d))
    t = 2 - mu_hat - nu_hat
    assert 0 < t < 1, "reversed copy fell outside the frame"
    k = 1 / t
    target = ecls.alpha * ecls.beta

    def ratio_at(nu: Fraction) -> Scalar:
        return _even_general_pieces(nu, k, frame)[2].gamma

    lo = t + (1 - t) / 4
    hi = 1 - (1 - t) / 4
    for _ in range(64):
        if ratio_at(lo) > target:
            break
        lo = (t + lo) / 2
    else:
        raise AssertionError("no bracket end with ratio above the target")
    for _ in range(64):
        if ratio_at(hi) < target:
            break
        hi = (hi + 1) / 2
    else:
        raise AssertionError("no bracket end with ratio below the target")
    for _ in range(200):
        mid = (lo + hi) / 2
        r = ratio_at(mid)
        if r == target:
            lo = mid
            break
        if r > target:
            lo = mid
        else:
            hi = mid
        if hi - lo < BISECTION_TOL and ratio_at(lo) - target < BISECTION_TOL:
            break
    else:
        raise AssertionError("frame tuning did not converge")
    nu0 = lo

    big_b, big_c, big_d = vscale(k, b), vscale(k, c), vscale(k, d)
    z1, z2, ratio_cls = _even_general_pieces(nu0, k, frame)
    mu0 = ratio_cls.gamma
    assert mu0 >= target and mu0 - target < BISECTION_TOL

    original = LabeledQuad(ecls, a, b, c, d)
    reversed_pts = (c, z2, vscale(nu0, big_c), z1)
    rev_cl = classify_quadrangle(reversed_pts)
    assert rev_cl.cls == canonicalize(ecls), "reversed copy is not the same class"
    reversed_copy = LabeledQuad(
        rev_cl.cls, *(reversed_pts[j] for j in rev_cl.labeling)
    )
    trap1 = LabeledQuad(Trapezoid(mu0), b, vscale(nu0, big_b), z1, c)
    trap2_pts = (c, z2, vscale(nu0, big_d), d)
    trap2_cl = classify_quadrangle(trap2_pts)
    assert trap2_cl.cls == Trapezoid(mu0), "filler ratios disagree"
    trap2 = LabeledQuad(Trapezoid(mu0), *trap2_pts)

    t1a, t1b = _forced_pair_split(trap1, ecls)
    pieces: list[LabeledQuad] = [original, reversed_copy, t1a, t1b]
    if n == 6:
        t2a, t2b = _forced_pair_split(trap2, ecls)
        pieces += [t2a, t2b]
    else:
        flagged, _, bound = _trapezoid_branch(ecls)
        assert mu0 >= bound
        m = (n - 4) // 2
        chain = Node(
            Op.DOT, _pair_tree(flagged), True, _chain_tree(m - 1, flagged), True
        )
        state = _realize_into(chain, ecls, trap2, pinned=(), tol=0)
        pieces += state.tiles

    scale = 1 / (nu0 * k)
    tiles = tuple(
        _ccw(LabeledQuad(p.cls, *(vscale(scale, pt) for pt in p.points)))
        for p in pieces
    )
    return DissectionPlan(
        root=frame,
        tiles=tiles,
        tree=Construction("even_general", (("n", n),)),
        pinned=(nu0,),
        gc=False,
        cuts=(),
    )
