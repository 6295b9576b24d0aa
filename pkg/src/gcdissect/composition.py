"""Partial glueing algebra on affine classes.

Two convex quadrangles sharing a full side merge into a convex quadrangle in
only a handful of patterns.  Writing x for the first tile's class, y for the
second, an optional ^F for a mirror-placed tile, and "dot"/"colon" for the
two ways the shared side can sit (dot: the shared side runs between two
opposite sides of the parent; colon: it runs between the other pair), the
complete table is:

    Q(a1,b1)   . Q(a2,b2)    -> Q(a1*a2, b1*b2)
    Q(a1,b1)   : Q(a2,b2)    -> Q(a1*b2, b1*a2) ordered by quotient,
                                or T(a1*b2) when the quotients are equal
    Q(a,b)     . T(g)        -> Q(a*g, b*g)        (T unflipped only)
    T(g1)      . T(g2)       -> T(g1*g2)
    T(g1)^F    . T(g2)^F     -> {T(g): min(g1,g2) <= g < 1} u {P}
                                (closed at the min only when g1 = g2)
    T(g0)^F    . P           -> {T(g): g0 < g < 1}
    P          . P           -> P

Mirror placement of a Q tile is not tracked with a flag: it is the same as
using the flipped parameters, so ClassTerm normalizes it away.  For T and P
tiles the flag is real (it decides whether glueing happens along constant
sides) and undefined rows raise GlueingError.  Everything else about this
module is plumbing to make the table total over *sets* of classes, since
the interval-valued rows force set-valued results.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .affine_types import (
    AffineClass,
    GenericQuad,
    Parallelogram,
    Trapezoid,
    affine_quotient,
    flip,
)
from .errors import GlueingError
from .scalars import Scalar, is_exact

# Relative width of the tie band when comparing float quotients in the colon
# rule.  Flipped float parameters reproduce the quotient only to roundoff, so
# an exact == would misread "equal quotients" as a two-sided split.
QUOTIENT_TIE_REL = 1e-12


class Op(Enum):
    """The two glueing operations."""

    DOT = "dot"
    COLON = "colon"

    @property
    def symbol(self) -> str:
        return "." if self is Op.DOT else ":"


@dataclass(frozen=True)
class ClassTerm:
    """A class with a mirror flag, as it appears on a tree edge.

    Q-classes absorb the flag into their parameters at construction; for T
    and P the flag is kept and interpreted by the glueing table.
    """

    cls: AffineClass
    flipped: bool = False

    def __post_init__(self) -> None:
        if isinstance(self.cls, GenericQuad) and self.flipped:
            object.__setattr__(self, "cls", flip(self.cls))
            object.__setattr__(self, "flipped", False)


@dataclass(frozen=True)
class Interval:
    """Subinterval of (0, 1) of trapezoid ratios (or curve scales).

    Endpoints may individually be open or closed; hi = 1 is always open
    (ratio 1 would be a parallelogram, tracked separately).
    """

    lo: Scalar
    lo_closed: bool
    hi: Scalar
    hi_closed: bool

    def __post_init__(self) -> None:
        if not (0 < self.lo < self.hi <= 1):
            raise ValueError(f"interval ({self.lo}, {self.hi}) not inside (0, 1]")
        if self.hi == 1 and self.hi_closed:
            raise ValueError("interval closed at 1 is not a set of trapezoid ratios")

    def contains(self, x: Scalar, tol: Scalar = 0) -> bool:
        """Membership; with tol > 0 endpoints soften and strictness is ignored."""
        if tol:
            return self.lo - tol <= x <= self.hi + tol
        if not self.lo <= x <= self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def scaled(self, c: Scalar) -> "Interval":
        """Image under multiplication by a constant 0 < c <= 1."""
        return Interval(self.lo * c, self.lo_closed, self.hi * c, self.hi_closed)


def interval_product(i: Interval, j: Interval) -> Interval:
    """{x*y : x in i, y in j}; an endpoint is attained iff both factors are."""
    return Interval(
        i.lo * j.lo, i.lo_closed and j.lo_closed, i.hi * j.hi, i.hi_closed and j.hi_closed
    )


@dataclass(frozen=True)
class QCurve:
    """One-parameter family {Q(quotient*b, b) : b in betas}.

    Every Q-set produced by the table keeps the affine quotient constant
    along its parametric families, so a curve is determined by the quotient
    and the range of its beta coordinate.
    """

    quotient: Scalar
    betas: Interval

    def __post_init__(self) -> None:
        if not (0 < self.quotient < 1):
            raise ValueError(f"curve quotient {self.quotient} outside (0,1)")
        if self.betas.hi == 1 and self.betas.hi_closed:
            raise ValueError("beta range reaches 1")

    def at(self, beta: Scalar) -> GenericQuad:
        return GenericQuad(self.quotient * beta, beta)

    def flipped(self) -> "QCurve":
        """Image of the member set under flip: same quotient, mapped betas.

        b -> (1-b)/(1-q*b) is a decreasing involution of (0,1), so the beta
        interval reverses.
        """
        q = self.quotient
        lo, hi = self.betas.lo, self.betas.hi
        return QCurve(
            q,
            Interval(
                (1 - hi) / (1 - q * hi),
                self.betas.hi_closed,
                (1 - lo) / (1 - q * lo),
                self.betas.lo_closed,
            ),
        )


@dataclass(frozen=True)
class ClassSet:
    """Finite union of points, trapezoid intervals, and Q-curves; has_p
    tracks the parallelogram class separately."""

    q_points: tuple[GenericQuad, ...] = ()
    t_points: tuple[Trapezoid, ...] = ()
    t_intervals: tuple[Interval, ...] = ()
    q_curves: tuple[QCurve, ...] = ()
    has_p: bool = False

    def __bool__(self) -> bool:
        return bool(
            self.q_points or self.t_points or self.t_intervals or self.q_curves or self.has_p
        )

    def members(self) -> Iterator[AffineClass]:
        """The isolated-point members (intervals and curves are uncountable)."""
        yield from self.q_points
        yield from self.t_points
        if self.has_p:
            yield Parallelogram()


EMPTY_SET = ClassSet()


def singleton(cls: AffineClass) -> ClassSet:
    if isinstance(cls, GenericQuad):
        return ClassSet(q_points=(cls,))
    if isinstance(cls, Trapezoid):
        return ClassSet(t_points=(cls,))
    return ClassSet(has_p=True)


def make_class_set(
    q_points: Iterable[GenericQuad] = (),
    t_points: Iterable[Trapezoid] = (),
    t_intervals: Iterable[Interval] = (),
    q_curves: Iterable[QCurve] = (),
    has_p: bool = False,
) -> ClassSet:
    """Deduplicated, deterministically ordered ClassSet."""
    qp = sorted(set(q_points), key=lambda q: (q.alpha, q.beta))
    tp = sorted(set(t_points), key=lambda t: t.gamma)
    ti = sorted(
        set(t_intervals), key=lambda i: (i.lo, i.hi, i.lo_closed, i.hi_closed)
    )
    qc = sorted(
        set(q_curves),
        key=lambda c: (c.quotient, c.betas.lo, c.betas.hi, c.betas.lo_closed),
    )
    return ClassSet(tuple(qp), tuple(tp), tuple(ti), tuple(qc), has_p)


# ---------------------------------------------------------------------------
# membership


def member(s: ClassSet, c: AffineClass, tol: Scalar = 0) -> bool:
    """Whether c lies in s, componentwise within tol.

    tol = 0 demands exact membership including interval endpoint strictness;
    tol > 0 softens interval endpoints and compares parameters by |diff|.
    Q-membership against a curve needs the quotient to match within tol and
    the beta coordinate to land in the curve's range.
    """
    if isinstance(c, Parallelogram):
        return s.has_p
    if isinstance(c, Trapezoid):
        for t in s.t_points:
            if _near(t.gamma, c.gamma, tol):
                return True
        return any(i.contains(c.gamma, tol) for i in s.t_intervals)
    for q in s.q_points:
        if _near(q.alpha, c.alpha, tol) and _near(q.beta, c.beta, tol):
            return True
    cq = affine_quotient(c)
    return any(
        _near(curve.quotient, cq, tol) and curve.betas.contains(c.beta, tol)
        for curve in s.q_curves
    )


def _near(a: Scalar, b: Scalar, tol: Scalar) -> bool:
    if tol == 0:
        return a == b
    return abs(a - b) <= tol


# ---------------------------------------------------------------------------
# the table, over set pieces

# Internal operand tokens: the pieces of a ClassSet with the edge flag
# distributed onto them.  Q pieces absorb the flag; T/P pieces carry it.
_QP, _QC, _TP, _TI, _PP = "q", "qc", "t", "ti", "p"


def _tokens(s: ClassSet, flipped: bool) -> Iterator[tuple]:
    for q in s.q_points:
        yield (_QP, flip(q) if flipped else q)
    for c in s.q_curves:
        yield (_QC, c.flipped() if flipped else c)
    for t in s.t_points:
        yield (_TP, t, flipped)
    for i in s.t_intervals:
        yield (_TI, i, flipped)
    if s.has_p:
        yield (_PP, flipped)


class _Acc:
    """Mutable accumulator for result pieces."""

    def __init__(self) -> None:
        self.q_points: list[GenericQuad] = []
        self.t_points: list[Trapezoid] = []
        self.t_intervals: list[Interval] = []
        self.q_curves: list[QCurve] = []
        self.has_p = False

    def done(self) -> ClassSet:
        return make_class_set(
            self.q_points, self.t_points, self.t_intervals, self.q_curves, self.has_p
        )


def _quotients_equal(u: Scalar, v: Scalar) -> bool:
    if is_exact(u) and is_exact(v):
        return u == v
    uf, vf = float(u), float(v)
    return abs(uf - vf) <= QUOTIENT_TIE_REL * max(abs(uf), abs(vf))


def _glue(a: tuple, b: tuple, op: Op, out: _Acc) -> None:
    """Apply one table row to a token pair, appending results to out.

    Raises GlueingError for every pattern outside the table, naming the row.
    """
    # Normalize unordered pair by kind rank so each row is written once.
    rank = {_QP: 0, _QC: 1, _TP: 2, _TI: 3, _PP: 4}
    if rank[a[0]] > rank[b[0]]:
        a, b = b, a
    ka, kb = a[0], b[0]

    # --- rows with a parallelogram operand -------------------------------
    if kb == _PP:
        p_flagged = b[1]
        if p_flagged:
            raise GlueingError("no glueing row admits a mirror-placed parallelogram")
        if op is Op.COLON:
            raise GlueingError("colon glueing is defined only for two generic quadrangles")
        if ka == _PP:
            if a[1]:
                raise GlueingError("no glueing row admits a mirror-placed parallelogram")
            out.has_p = True
            return
        if ka == _TP:
            if not a[2]:
                raise GlueingError(
                    "trapezoid . parallelogram requires the trapezoid mirror-placed"
                )
            out.t_intervals.append(Interval(a[1].gamma, False, 1, False))
            return
        if ka == _TI:
            if not a[2]:
                raise GlueingError(
                    "trapezoid . parallelogram requires the trapezoid mirror-placed"
                )
            out.t_intervals.append(Interval(a[1].lo, False, 1, False))
            return
        raise GlueingError("no glueing combines a generic quadrangle with a parallelogram")

    # --- rows with a trapezoid operand (point or interval) ---------------
    if kb in (_TP, _TI):
        if op is Op.COLON:
            raise GlueingError("colon glueing is defined only for two generic quadrangles")
        if ka in (_QP, _QC):
            if b[2]:
                raise GlueingError(
                    "generic . trapezoid requires the trapezoid unflipped"
                )
            if ka == _QP:
                q = a[1]
                if kb == _TP:
                    g = b[1].gamma
                    out.q_points.append(GenericQuad(q.alpha * g, q.beta * g))
                else:
                    out.q_curves.append(
                        QCurve(affine_quotient(q), b[1].scaled(q.beta))
                    )
            else:
                curve = a[1]
                betas = (
                    curve.betas.scaled(b[1].gamma)
                    if kb == _TP
                    else interval_product(curve.betas, b[1])
                )
                out.q_curves.append(QCurve(curve.quotient, betas))
            return
        # both operands trapezoid-kind
        fa = a[2]
        fb = b[2]
        if fa != fb:
            raise GlueingError("dot of two trapezoids requires equal mirror flags")
        lo_a, hi_a, alo_c, ahi_c = _t_bounds(a)
        lo_b, hi_b, blo_c, bhi_c = _t_bounds(b)
        if not fa:
            # plain product row
            lo = lo_a * lo_b
            hi = hi_a * hi_b
            if a[0] == _TP and b[0] == _TP:
                out.t_points.append(Trapezoid(lo))
            else:
                out.t_intervals.append(Interval(lo, alo_c and blo_c, hi, ahi_c and bhi_c))
            return
        # mirror-mirror row: everything from the joint min up, plus P; the
        # min is attained only when both operands attain it (g1 = g2 there)
        m = lo_a if lo_a <= lo_b else lo_b
        closed = _contains_value(a, m) and _contains_value(b, m)
        out.t_intervals.append(Interval(m, closed, 1, False))
        out.has_p = True
        return

    # --- generic-generic rows -------------------------------------------
    if ka == _QP and kb == _QP:
        q1, q2 = a[1], b[1]
        if op is Op.DOT:
            out.q_points.append(GenericQuad(q1.alpha * q2.alpha, q1.beta * q2.beta))
            return
        u = q1.alpha * q2.beta
        v = q1.beta * q2.alpha
        if _quotients_equal(affine_quotient(q1), affine_quotient(q2)):
            if is_exact(u) and is_exact(v):
                assert u == v, "equal quotients must make the colon expressions agree"
            out.t_points.append(Trapezoid(u))
        elif u < v:
            out.q_points.append(GenericQuad(u, v))
        else:
            out.q_points.append(GenericQuad(v, u))
        return

    # point-curve and curve-curve: quotients are constant along curves, so
    # the colon branch is uniform and results stay curves (or T-intervals).
    if ka == _QP and kb == _QC:
        q, curve = a[1], b[1]
        rq, rc = affine_quotient(q), curve.quotient
        if op is Op.DOT:
            out.q_curves.append(QCurve(rq * rc, curve.betas.scaled(q.beta)))
            return
        if _quotients_equal(rq, rc):
            out.t_intervals.append(curve.betas.scaled(q.alpha))
            return
        if rc < rq:
            out.q_curves.append(QCurve(rc / rq, curve.betas.scaled(q.alpha)))
        else:
            out.q_curves.append(QCurve(rq / rc, curve.betas.scaled(rc * q.beta)))
        return

    if ka == _QC and kb == _QC:
        c1, c2 = a[1], b[1]
        r1, r2 = c1.quotient, c2.quotient
        both = interval_product(c1.betas, c2.betas)
        if op is Op.DOT:
            out.q_curves.append(QCurve(r1 * r2, both))
            return
        if _quotients_equal(r1, r2):
            out.t_intervals.append(both.scaled(r1))
            return
        lo_q, hi_q = (r1, r2) if r1 < r2 else (r2, r1)
        out.q_curves.append(QCurve(lo_q / hi_q, both.scaled(hi_q)))
        return

    raise GlueingError(f"no glueing row for pattern {ka}/{kb} under {op.value}")


def _t_bounds(tok: tuple) -> tuple[Scalar, Scalar, bool, bool]:
    """(lo, hi, lo_closed, hi_closed) of a trapezoid token."""
    if tok[0] == _TP:
        g = tok[1].gamma
        return g, g, True, True
    i = tok[1]
    return i.lo, i.hi, i.lo_closed, i.hi_closed


def _contains_value(tok: tuple, x: Scalar) -> bool:
    if tok[0] == _TP:
        return tok[1].gamma == x
    return tok[1].contains(x)


def combine(left: ClassTerm, right: ClassTerm, op: Op) -> ClassSet:
    """One table row applied to two single-class terms.

    Returns the set of possible parent classes (a singleton for the
    determinate rows, an interval-with-P for the mirror trapezoid rows).
    Undefined patterns raise GlueingError naming the violated row.
    """
    out = _Acc()
    (ta,) = _tokens(singleton(left.cls), left.flipped)
    (tb,) = _tokens(singleton(right.cls), right.flipped)
    _glue(ta, tb, op, out)
    return out.done()


def compose_sets(
    left: ClassSet, left_flipped: bool, right: ClassSet, right_flipped: bool, op: Op
) -> ClassSet:
    """combine lifted over all pairs of members; impossible pairs are skipped.

    The result may be empty, which means no parent class exists for this
    edge configuration.
    """
    out = _Acc()
    right_tokens = list(_tokens(right, right_flipped))
    for ta in _tokens(left, left_flipped):
        for tb in right_tokens:
            try:
                _glue(ta, tb, op, out)
            except GlueingError:
                continue
    return out.done()
