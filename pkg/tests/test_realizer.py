"""Tests for concrete cut placement and the named constructions."""

from __future__ import annotations

from fractions import Fraction as F

import pytest

from gcdissect import (
    Construction,
    GenericQuad,
    GlueingError,
    Op,
    Parallelogram,
    Trapezoid,
    UnrealizableError,
    canonicalize,
    classify_quadrangle,
    dissect_even_general,
    dissect_odd,
    dissect_por5,
    dissect_trapezoid,
    dissect_trapezoid_selfaffine,
    flip,
    realize_cut,
    realize_tree,
    standard_placement,
    verify_plan,
)
from gcdissect.affine_types import lerp
from gcdissect.treesearch import LEAF, Node

Q_GENERIC = GenericQuad(F(1, 5), F(1, 2))
Q_KITE = GenericQuad(F(1, 2), F(2, 3))


def _classes_match(lq):
    return classify_quadrangle(lq.points, 0).cls == canonicalize(lq.cls)


# ----------------------------------------------------------- single cuts


def test_cut_generic_dot():
    """Q(1/20, 5/16) splits into Q(1/5, 1/2) . Q(1/4, 5/8)."""
    parent = standard_placement(GenericQuad(F(1, 20), F(5, 16)))
    left, right, cut = realize_cut(
        parent,
        Op.DOT,
        GenericQuad(F(1, 5), F(1, 2)),
        False,
        GenericQuad(F(1, 4), F(5, 8)),
        False,
    )
    assert (cut.start_side, cut.end_side) == (0, 2)
    assert cut.start == lerp(parent.a, parent.b, F(16, 19)) == (F(4, 5), 0)
    assert cut.end == lerp(parent.d, parent.c, F(8, 11)) == (F(1, 2), F(42, 95))
    assert left.cls == GenericQuad(F(1, 5), F(1, 2))
    assert right.cls == GenericQuad(F(1, 4), F(5, 8))
    assert _classes_match(left) and _classes_match(right)


def test_cut_trapezoid_pair():
    parent = standard_placement(Trapezoid(F(1, 100)))
    left, right, cut = realize_cut(
        parent, Op.DOT, Trapezoid(F(1, 10)), False, Trapezoid(F(1, 10)), False
    )
    assert (cut.start_side, cut.end_side) == (0, 2)
    assert cut.start == lerp(parent.a, parent.b, F(10, 11)) == (F(9, 10), 0)
    assert cut.end == lerp(parent.d, parent.c, F(10, 11)) == (F(9, 10), F(1, 10))
    assert _classes_match(left) and _classes_match(right)


def test_cut_flagged_trapezoid_pair():
    # both mirror copies of T(1/10) fill T(1/2); lambda is forced here and
    # puts the leg cut at 95/99 of the way from a to d
    parent = standard_placement(Trapezoid(F(1, 2)))
    left, right, cut = realize_cut(
        parent, Op.DOT, Trapezoid(F(1, 10)), True, Trapezoid(F(1, 10)), True
    )
    assert (cut.start_side, cut.end_side) == (3, 1)
    assert cut.start == lerp(parent.a, parent.d, F(95, 99)) == (0, F(95, 99))
    assert left.cls == right.cls == Trapezoid(F(1, 10))
    assert _classes_match(left) and _classes_match(right)


def test_cut_rejects_illegal_glueing():
    parent = standard_placement(Trapezoid(F(1, 100)))
    with pytest.raises(GlueingError):
        realize_cut(
            parent, Op.COLON, Trapezoid(F(1, 10)), False, Trapezoid(F(1, 10)), False
        )


def test_cut_rejects_wrong_parent():
    parent = standard_placement(Trapezoid(F(1, 3)))
    with pytest.raises(UnrealizableError):
        realize_cut(
            parent, Op.DOT, Trapezoid(F(1, 10)), False, Trapezoid(F(1, 10)), False
        )


# ------------------------------------------------------------ cut trees


def test_realize_tree_pair():
    pair = Node(Op.COLON, LEAF, False, LEAF, False)
    plan = realize_tree(pair, Q_GENERIC, root=Trapezoid(F(1, 10)))
    assert len(plan.tiles) == 2
    assert plan.gc
    assert verify_plan(plan, 0, expected=Q_GENERIC).ok


def test_realize_tree_unique_root_fallback():
    # T(1/10) . T(1/10) only produces T(1/100); with no explicit root the
    # one admissible class is taken
    pair = Node(Op.DOT, LEAF, False, LEAF, False)
    plan = realize_tree(pair, Trapezoid(F(1, 10)))
    assert plan.root.cls == Trapezoid(F(1, 100))
    assert verify_plan(plan, 0, expected=Trapezoid(F(1, 10))).ok


def test_realize_tree_rejects_impossible_root():
    pair = Node(Op.DOT, LEAF, False, LEAF, False)
    with pytest.raises(UnrealizableError):
        realize_tree(pair, Q_GENERIC, root=Trapezoid(F(1, 3)))


# ------------------------------------------------------- trapezoid hosts


def test_trapezoid_two_copies_exact_ratio():
    plan = dissect_trapezoid(F(1, 10), Q_GENERIC, 2)
    assert len(plan.tiles) == 2
    assert plan.root.cls == Trapezoid(F(1, 10))
    assert verify_plan(plan, 0, expected=Q_GENERIC).ok


def test_trapezoid_two_copies_wrong_ratio():
    with pytest.raises(UnrealizableError):
        dissect_trapezoid(F(1, 3), Q_GENERIC, 2)


def test_trapezoid_four_copies():
    plan = dissect_trapezoid(F(1, 2), Q_GENERIC, 4)
    assert len(plan.tiles) == 4
    assert plan.gc
    assert verify_plan(plan, 0, expected=Q_GENERIC).ok


def test_trapezoid_many_copies():
    for k in (6, 8):
        plan = dissect_trapezoid(F(1, 2), Q_GENERIC, k)
        assert len(plan.tiles) == k
        assert verify_plan(plan, 0, expected=Q_GENERIC).ok


def test_trapezoid_ratio_below_bound():
    with pytest.raises(UnrealizableError):
        dissect_trapezoid(F(1, 100), Q_GENERIC, 4)


def test_trapezoid_rejects_odd_count():
    with pytest.raises(UnrealizableError):
        dissect_trapezoid(F(1, 2), Q_GENERIC, 3)


# ------------------------------------------------------------ odd counts


@pytest.mark.parametrize("n", [5, 7, 9])
def test_odd_generic(n):
    plan = dissect_odd(Q_GENERIC, n)
    assert len(plan.tiles) == n
    assert plan.gc
    assert verify_plan(plan, 0, expected=Q_GENERIC).ok


def test_odd_generic_root_in_flip_orbit():
    plan = dissect_odd(Q_GENERIC, 5)
    assert plan.root.cls in (Q_GENERIC, flip(Q_GENERIC))


@pytest.mark.parametrize("n", [7, 9])
def test_odd_kite(n):
    plan = dissect_odd(Q_KITE, n)
    assert len(plan.tiles) == n
    assert verify_plan(plan, 0, expected=Q_KITE).ok


def test_odd_kite_five_refused():
    with pytest.raises(UnrealizableError, match="kite"):
        dissect_odd(Q_KITE, 5)


def test_odd_rejects_bad_counts():
    with pytest.raises(UnrealizableError):
        dissect_odd(Q_GENERIC, 6)
    with pytest.raises(UnrealizableError):
        dissect_odd(Q_GENERIC, 3)


# ------------------------------------------------------------------ fans


@pytest.mark.parametrize("n", range(2, 9))
def test_fan_trapezoid(n):
    plan = dissect_trapezoid_selfaffine(Trapezoid(F(1, 2)), n)
    assert len(plan.tiles) == n
    assert plan.gc
    assert all(t.cls == Trapezoid(F(1, 2)) for t in plan.tiles)
    assert verify_plan(plan, 0).ok


def test_fan_wide_trapezoid():
    plan = dissect_trapezoid_selfaffine(Trapezoid(F(9, 10)), 2)
    assert verify_plan(plan, 0).ok


def test_fan_parallelogram():
    plan = dissect_trapezoid_selfaffine(Parallelogram(), 4)
    assert len(plan.tiles) == 4
    assert verify_plan(plan, 0).ok


def test_fan_rejects_one_tile():
    with pytest.raises(UnrealizableError):
        dissect_trapezoid_selfaffine(Trapezoid(F(1, 2)), 1)


# ----------------------------------------------------- five-tile generic


@pytest.mark.parametrize("cls", [Q_GENERIC, Q_KITE])
def test_por5(cls):
    plan = dissect_por5(cls)
    assert len(plan.tiles) == 5
    assert not plan.gc
    assert verify_plan(plan, 0, expected=cls).ok


# ------------------------------------------------------ even counts >= 6


@pytest.mark.parametrize("n", [6, 8])
def test_even_general(n):
    plan = dissect_even_general(Q_GENERIC, n)
    assert len(plan.tiles) == n
    assert not plan.gc
    assert plan.tree == Construction("even_general", (("n", n),))
    assert len(plan.pinned) == 1
    assert verify_plan(plan, 1e-9, expected=Q_GENERIC).ok


def test_even_general_rejects_four():
    with pytest.raises(UnrealizableError):
        dissect_even_general(Q_GENERIC, 4)
    with pytest.raises(UnrealizableError):
        dissect_even_general(Q_GENERIC, 5)
