"""Extended dissection trees: enumeration, evaluation, self-affinity search.

A gc-dissection of a convex quadrangle into quadrangle tiles is recorded by
a binary tree: each internal node is one straight cut, annotated with the
glueing operation that reverses it (dot or colon) and a mirror flag per
child edge.  Evaluating a tree bottom-up through the glueing algebra yields
the set of classes the root can have when every leaf tile belongs to a given
class; the tree witnesses n-gc-self-affinity of that class exactly when the
class (or its flip) lies in the root set.

Canonical form quotients only by commutativity of the glueing operations:
children of a node are ordered by (leaf count, serialized key, flag).  Flags
are enumerated on every edge, including edges to leaves; a flag on a leaf
edge is only redundant when the leaf class happens to be mirror-symmetric,
so normalizing it away in general would lose trees (a trapezoid leaf needs
mirror-placed copies already at n = 2).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Union

from .affine_types import AffineClass, GenericQuad, flip, is_affine_kite
from .composition import ClassSet, Op, compose_sets, member, singleton
from .errors import SearchCapError

DEFAULT_SEARCH_CAP = 8
CAP_ENV_VAR = "GCDISSECT_SEARCH_CAP"

# Levels up to this size are materialized and cached; larger levels stream.
_MATERIALIZE_LIMIT = 7


@dataclass(frozen=True)
class Leaf:
    """A tile of the dissection; all leaves carry the same class."""

    @property
    def n_leaves(self) -> int:
        return 1

    @property
    def key(self) -> str:
        return "L"


@dataclass(frozen=True)
class Node:
    """One cut: op plus the two subtrees with their edge mirror flags."""

    op: Op
    left: "ExtTree"
    left_flip: bool
    right: "ExtTree"
    right_flip: bool

    @cached_property
    def n_leaves(self) -> int:
        return self.left.n_leaves + self.right.n_leaves

    @cached_property
    def key(self) -> str:
        lf = "F" if self.left_flip else ""
        rf = "F" if self.right_flip else ""
        return f"({self.left.key}{lf}{self.op.symbol}{self.right.key}{rf})"


ExtTree = Union[Leaf, Node]

LEAF = Leaf()


def _edge_order(t: ExtTree, flag: bool) -> tuple[int, str, bool]:
    return (t.n_leaves, t.key, flag)


def canonical(t: ExtTree) -> ExtTree:
    """Equivalent tree with children sorted at every node."""
    if isinstance(t, Leaf):
        return t
    left = canonical(t.left)
    right = canonical(t.right)
    if _edge_order(left, t.left_flip) <= _edge_order(right, t.right_flip):
        return Node(t.op, left, t.left_flip, right, t.right_flip)
    return Node(t.op, right, t.right_flip, left, t.left_flip)


def search_cap() -> int:
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None:
        return DEFAULT_SEARCH_CAP
    try:
        return int(raw)
    except ValueError:
        raise SearchCapError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from None


def count_trees(n: int) -> int:
    """Number of canonical trees with n leaves, by recurrence (no enumeration).

    With F(k) = 2 * count(k) counting (subtree, flag) choices, a node picks
    an op and an unordered pair of flagged subtrees whose sizes sum to n.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    return _count(n)


@lru_cache(maxsize=None)
def _count(n: int) -> int:
    if n == 1:
        return 1
    pairs = 0
    for n1 in range(1, (n + 1) // 2):
        pairs += 2 * _count(n1) * 2 * _count(n - n1)
    if n % 2 == 0:
        f = 2 * _count(n // 2)
        pairs += f * (f + 1) // 2
    return 2 * pairs


def enumerate_trees(n: int) -> Iterator[ExtTree]:
    """All canonical trees with n leaves, in a fixed deterministic order.

    Refuses n above the enumeration cap (GCDISSECT_SEARCH_CAP, default 8)
    with the would-be tree count in the message.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    cap = search_cap()
    if n > cap:
        raise SearchCapError(
            f"enumeration of {n}-leaf trees exceeds the cap of {cap} "
            f"(would visit {count_trees(n)} trees; "
            f"set {CAP_ENV_VAR} higher to allow)"
        )
    if n <= _MATERIALIZE_LIMIT:
        yield from _level(n)
    else:
        yield from _compose_level(n)


@lru_cache(maxsize=None)
def _level(n: int) -> tuple[ExtTree, ...]:
    return tuple(_compose_level(n))


def _compose_level(n: int) -> Iterator[ExtTree]:
    if n == 1:
        yield LEAF
        return
    for op in (Op.DOT, Op.COLON):
        for n1 in range(1, n // 2 + 1):
            n2 = n - n1
            if n1 < n2:
                for t1 in _level(n1):
                    for f1 in (False, True):
                        for t2 in _level(n2):
                            for f2 in (False, True):
                                yield Node(op, t1, f1, t2, f2)
            else:
                # pair order must match canonical()'s comparator
                flagged = sorted(
                    ((t, f) for t in _level(n1) for f in (False, True)),
                    key=lambda tf: _edge_order(tf[0], tf[1]),
                )
                for i, (t1, f1) in enumerate(flagged):
                    for t2, f2 in flagged[i:]:
                        yield Node(op, t1, f1, t2, f2)


# ---------------------------------------------------------------------------
# evaluation


def evaluate(
    t: ExtTree, leaf_class: AffineClass, cache: dict[str, ClassSet] | None = None
) -> ClassSet:
    """Set of possible root classes when every leaf is leaf_class.

    Empty result means no dissection with this tree exists for the class.
    A cache dict (keyed by subtree key) may be shared across calls with the
    same leaf_class; enumerated trees share subtree structure heavily.
    """
    if isinstance(t, Leaf):
        return singleton(leaf_class)
    if cache is None:
        cache = {}
    got = cache.get(t.key)
    if got is None:
        left = evaluate(t.left, leaf_class, cache)
        right = evaluate(t.right, leaf_class, cache)
        got = compose_sets(left, t.left_flip, right, t.right_flip, t.op)
        cache[t.key] = got
    return got


# ---------------------------------------------------------------------------
# symbolic quotient exponents

_T_TOKEN = ("T",)
_P_TOKEN = ("P",)


def quotient_exponents(t: ExtTree) -> frozenset[int]:
    """Exponents k with some root member of quotient (alpha/beta)^k, symbolically.

    Treats the leaf as a generic quadrangle with indeterminate quotient
    q = alpha/beta: dot glueings add exponents, colon glueings take the
    absolute difference, and equal exponents under colon produce trapezoids.
    Trapezoid and parallelogram members have quotient 1 = q^0 and are
    reported as exponent 0.
    """
    toks = _sym_eval(t)
    out = {k for kind, *rest in toks if kind == "Q" for k in rest}
    if _T_TOKEN in toks or _P_TOKEN in toks:
        out.add(0)
    return frozenset(out)


_LEAF_TOKENS = frozenset({("Q", 1)})
# Symbolic sets depend only on tree shape, so one global cache is safe.
_SYM_CACHE: dict[str, frozenset[tuple]] = {}


def _sym_eval(t: ExtTree) -> frozenset[tuple]:
    if isinstance(t, Leaf):
        return _LEAF_TOKENS
    got = _SYM_CACHE.get(t.key)
    if got is None:
        left = _sym_eval(t.left)
        right = _sym_eval(t.right)
        out: set[tuple] = set()
        for x in left:
            for y in right:
                out.update(_sym_glue(x, t.left_flip, y, t.right_flip, t.op))
        got = frozenset(out)
        _SYM_CACHE[t.key] = got
    return got


def _sym_glue(
    x: tuple, fx: bool, y: tuple, fy: bool, op: Op
) -> Iterator[tuple]:
    # Mirror flags on Q operands are absorbed (the quotient is flip-invariant)
    # but on T/P operands they gate the same rows as the concrete table.
    if x[0] == "Q" and y[0] == "Q":
        j, k = x[1], y[1]
        if op is Op.DOT:
            yield ("Q", j + k)
        elif j == k:
            yield _T_TOKEN
        else:
            yield ("Q", abs(j - k))
        return
    if op is Op.COLON:
        return
    if x[0] == "Q" or y[0] == "Q":
        q, other, of = (x, y, fy) if x[0] == "Q" else (y, x, fx)
        if other == _T_TOKEN and not of:
            yield q
        return
    if x == _T_TOKEN and y == _T_TOKEN:
        if fx != fy:
            return
        yield _T_TOKEN
        if fx:
            yield _P_TOKEN
        return
    if x == _P_TOKEN and y == _P_TOKEN:
        if not fx and not fy:
            yield _P_TOKEN
        return
    # T with P
    t_flag, p_flag = (fx, fy) if x == _T_TOKEN else (fy, fx)
    if t_flag and not p_flag:
        yield _T_TOKEN


# ---------------------------------------------------------------------------
# target-aware pruning (sound reductions from the three-tile and kite proofs)


def _no_leaf_edge_flips(t: ExtTree) -> bool:
    if isinstance(t, Leaf):
        return True
    ok_left = not (isinstance(t.left, Leaf) and t.left_flip)
    ok_right = not (isinstance(t.right, Leaf) and t.right_flip)
    return (
        ok_left
        and ok_right
        and _no_leaf_edge_flips(t.left)
        and _no_leaf_edge_flips(t.right)
    )


def _three_leaf_keep(t: Node) -> bool:
    # Canonical order puts the single leaf on the left of the root.
    leaf_flip = t.left_flip
    inner = t.right
    assert isinstance(inner, Node)
    if leaf_flip:
        return False
    if inner.op is Op.COLON and t.right_flip:
        return False
    return (t.op is Op.DOT) == (inner.op is Op.COLON)


def _kite_five_keep(t: Node) -> bool:
    if t.op is not Op.COLON or not (t.left_flip and t.right_flip):
        return False
    if not _no_leaf_edge_flips(t):
        return False
    two = t.left if t.left.n_leaves == 2 else t.right
    return isinstance(two, Node) and two.op is Op.DOT


def pruned_trees(n: int, leaf: AffineClass) -> Iterator[ExtTree]:
    """Candidate trees after the target-aware reductions, where sound.

    Reductions exist for two configurations: three leaves with a generic
    quadrangle target (nine candidate trees survive) and five leaves with an
    affine-kite target (eight survive).  Elsewhere this is full enumeration.
    """
    trees = enumerate_trees(n)
    if n == 3 and isinstance(leaf, GenericQuad):
        return (t for t in trees if _three_leaf_keep(t))
    if n == 5 and isinstance(leaf, GenericQuad) and is_affine_kite(leaf):
        return (t for t in trees if _kite_five_keep(t))
    return trees


# ---------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class SearchHit:
    """A tree witnessing self-affinity, with the root set and the member
    (the target class or its flip) that matched."""

    tree: ExtTree
    root_set: ClassSet
    witness: AffineClass


def search_self_affine(
    leaf: AffineClass, n: int, tol=0, prune: bool = False
) -> list[SearchHit]:
    """All canonical n-leaf trees whose root set contains the class.

    For generic quadrangle targets the flip is also accepted, since the two
    parametrizations name the same shape.  An empty list at tol 0 with exact
    parameters certifies the class is not n-gc-self-affine (within the
    enumeration cap).  prune=True applies the sound target-aware reductions
    where available; hits are identical either way.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    targets: list[AffineClass] = [leaf]
    if isinstance(leaf, GenericQuad):
        flipped = flip(leaf)
        if flipped != leaf:
            targets.append(flipped)
    trees = pruned_trees(n, leaf) if prune else enumerate_trees(n)
    cache: dict[str, ClassSet] = {}
    hits = []
    for t in trees:
        root = evaluate(t, leaf, cache)
        if not root:
            continue
        for target in targets:
            if member(root, target, tol):
                hits.append(SearchHit(t, root, target))
                break
    return hits
