"""Finite rooted forests: the carrier of everything else in this package.

A forest is a finite vertex set with a partial parent map. Vertices are
Labels: a positive integer base plus a (possibly empty) stack of copy tags,
so the same type serves both plain vertices and the tagged copies created by
exponential growth.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

# A copy tag: (base of the vertex that triggered the copy, copy index).
Tag = tuple[int, int]


@dataclass(frozen=True, order=True)
class Label:
    base: int
    tags: tuple[Tag, ...] = ()

    def tagged(self, tag: Tag) -> "Label":
        return Label(self.base, self.tags + (tag,))

    @property
    def core(self) -> "Label":
        """Tag-erased label (the paper-style core of an extended vertex)."""
        return Label(self.base)

    def __str__(self) -> str:
        return str(self.base) + "".join("{%d,%d}" % t for t in self.tags)

    def __repr__(self) -> str:
        return "L(%s)" % self


def L(base: int, *tags: Tag) -> Label:
    """Shorthand constructor, mostly for tests."""
    return Label(base, tuple(tags))


class RootedForest:
    """Immutable finite rooted forest given by a parent map."""

    __slots__ = ("_parent", "_vertices", "_children", "_roots", "_hash")

    def __init__(self, vertices: Iterable[Label] = (), parent: Mapping[Label, Label] | None = None):
        parent = dict(parent or {})
        vertices = frozenset(vertices) | set(parent) | set(parent.values())
        for c, p in parent.items():
            if c == p:
                raise ValueError("self-loop at %s" % (c,))
        children: dict[Label, list[Label]] = {v: [] for v in vertices}
        for c, p in parent.items():
            children[p].append(c)
        # acyclicity / rootedness check
        state: dict[Label, int] = {}
        for v in vertices:
            seen = []
            while v in parent and state.get(v) is None:
                state[v] = 0
                seen.append(v)
                v = parent[v]
                if v in seen:
                    raise ValueError("parent cycle through %s" % (v,))
            for s in seen:
                state[s] = 1
        self._parent = parent
        self._vertices = vertices
        self._children = {v: tuple(sorted(cs)) for v, cs in children.items()}
        self._roots = frozenset(v for v in vertices if v not in parent)
        self._hash = hash((self._vertices, frozenset(parent.items())))

    # -- basic accessors ----------------------------------------------------

    @property
    def vertices(self) -> frozenset[Label]:
        return self._vertices

    @property
    def roots(self) -> frozenset[Label]:
        return self._roots

    @property
    def parent(self) -> Mapping[Label, Label]:
        return self._parent

    def parent_of(self, v: Label) -> Label | None:
        return self._parent.get(v)

    def children(self, v: Label) -> tuple[Label, ...]:
        return self._children.get(v, ())

    def is_leaf(self, v: Label) -> bool:
        return not self._children.get(v)

    def __contains__(self, v: Label) -> bool:
        return v in self._vertices

    def __len__(self) -> int:
        return len(self._vertices)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RootedForest)
            and self._vertices == other._vertices
            and self._parent == other._parent
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        edges = ", ".join("%s->%s" % (p, c) for c, p in sorted(self._parent.items()))
        isolated = sorted(self._roots - {p for p in self._parent.values()})
        bits = [str(v) for v in isolated] + ([edges] if edges else [])
        return "Forest(%s)" % "; ".join(b for b in bits if b)

    # -- measures -----------------------------------------------------------

    def depth(self, v: Label) -> int:
        if v not in self._vertices:
            raise KeyError("unknown vertex %s" % (v,))
        d = 0
        while v in self._parent:
            v = self._parent[v]
            d += 1
        return d

    def ancestors(self, v: Label) -> list[Label]:
        """Strict ancestors, closest first."""
        out = []
        while v in self._parent:
            v = self._parent[v]
            out.append(v)
        return out

    def descendants(self, v: Label) -> set[Label]:
        """v together with everything below it."""
        out = {v}
        stack = [v]
        while stack:
            for c in self.children(stack.pop()):
                out.add(c)
                stack.append(c)
        return out

    # -- the paper's forest combinators --------------------------------------

    def restrict_rooted(self, X: Iterable[Label]) -> "RootedForest":
        """F_X: largest rooted subforest with roots X ∩ vertices."""
        xs = set(X) & self._vertices
        keep: set[Label] = set()
        for x in xs:
            keep |= self.descendants(x)
        parent = {c: p for c, p in self._parent.items() if c in keep and c not in xs}
        return RootedForest(keep, parent)

    def induced(self, Y: Iterable[Label]) -> "RootedForest":
        """F↾_Y: subforest induced by Y (edges with both ends in Y)."""
        ys = set(Y) & self._vertices
        parent = {c: p for c, p in self._parent.items() if c in ys and p in ys}
        return RootedForest(ys, parent)

    def graft(self, star: Label) -> "RootedForest":
        """star.F: star becomes the new root above all roots of F."""
        if star in self._vertices:
            raise ValueError("graft vertex %s already present" % (star,))
        parent = dict(self._parent)
        for r in self._roots:
            parent[r] = star
        return RootedForest(self._vertices | {star}, parent)

    def union(self, other: "RootedForest") -> "RootedForest":
        for v in self._vertices & other._vertices:
            if self._parent.get(v) != other._parent.get(v):
                raise ValueError("union conflict on parent of %s" % (v,))
        return RootedForest(self._vertices | other._vertices, {**self._parent, **other._parent})

    def relabel(self, f: Mapping[Label, Label]) -> "RootedForest":
        g = lambda v: f.get(v, v)
        return RootedForest(
            {g(v) for v in self._vertices},
            {g(c): g(p) for c, p in self._parent.items()},
        )

    # -- sibling structure ----------------------------------------------------

    def are_siblings(self, x: Label, y: Label) -> bool:
        return self._parent.get(x) == self._parent.get(y)

    def is_fraternal(self, S: Iterable[Label]) -> bool:
        s = list(S)
        if not s:
            return False
        if any(v not in self._vertices for v in s):
            return False
        p0 = self._parent.get(s[0])
        return all(self._parent.get(v) == p0 for v in s)

    def sibling_classes(self) -> list[frozenset[Label]]:
        """Maximal fraternal sets: the roots plus each vertex's child set."""
        classes = []
        if self._roots:
            classes.append(self._roots)
        for v in sorted(self._vertices):
            cs = self.children(v)
            if cs:
                classes.append(frozenset(cs))
        return classes

    def descending_maximal_paths(self) -> list[tuple[Label, ...]]:
        """All root-to-leaf chains (the move shape used by arenas)."""
        out = []

        def walk(v: Label, acc: tuple[Label, ...]):
            acc = acc + (v,)
            cs = self.children(v)
            if not cs:
                out.append(acc)
            else:
                for c in cs:
                    walk(c, acc)

        for r in sorted(self._roots):
            walk(r, ())
        return out

    # -- canonical forms -------------------------------------------------------

    def canonical_string(self) -> str:
        def tree(v: Label) -> str:
            return "(" + "".join(sorted(tree(c) for c in self.children(v))) + ")"

        return "".join(sorted(tree(r) for r in self._roots))

    def canonical(self) -> "RootedForest":
        """Deterministic relabeling to 1..n by (depth, subtree shape) order."""
        mapping: dict[Label, Label] = {}
        counter = itertools.count(1)

        def shape(v: Label) -> str:
            return "(" + "".join(sorted(shape(c) for c in self.children(v))) + ")"

        def assign(v: Label):
            mapping[v] = Label(next(counter))
            for c in sorted(self.children(v), key=lambda c: (shape(c), c)):
                assign(c)

        for r in sorted(self._roots, key=lambda r: (shape(r), r)):
            assign(r)
        return self.relabel(mapping)

    def isomorphic(self, other: "RootedForest") -> bool:
        return self.canonical_string() == other.canonical_string()


EMPTY_FOREST = RootedForest()


def forest_of_edges(*edges: tuple[Label, Label], isolated: Iterable[Label] = ()) -> RootedForest:
    """Build from (parent, child) pairs plus isolated vertices."""
    parent = {c: p for p, c in edges}
    vs = set(isolated) | set(parent) | set(parent.values())
    return RootedForest(vs, parent)


# Reserved tag base used to freshen label clashes in disjoint unions.
FRESH_BASE = 0


def disjoint_union(F: RootedForest, G: RootedForest) -> tuple[RootedForest, RootedForest]:
    """F ⊎ G with G's clashing labels renamed apart via a reserved tag.

    Returns (combined forest, the renamed copy of G) so callers can chase
    where G's vertices went.
    """
    clash = F.vertices & G.vertices
    side = 2
    ren = {}
    for v in clash:
        w = v.tagged((FRESH_BASE, side))
        while w in F.vertices or w in G.vertices:
            side += 1
            w = v.tagged((FRESH_BASE, side))
        ren[v] = w
    G2 = G.relabel(ren)
    return F.union(G2), G2


# -- enumeration of small forests -------------------------------------------

FOREST_ENUM_CAP = 7


def _tree_shapes(n: int) -> list[tuple]:
    """Canonical shapes of rooted trees with n vertices (n >= 1).

    A shape is a sorted tuple of child shapes.
    """
    if n == 1:
        return [()]
    out = set()
    for forest in _forest_shapes(n - 1):
        if forest:
            out.add(forest)
    return [s for s in sorted(out)]


def _forest_shapes(n: int) -> list[tuple]:
    """Canonical shapes of rooted forests with exactly n vertices.

    A forest shape is a sorted tuple of tree shapes.
    """
    if n == 0:
        return [()]
    out: set[tuple] = set()
    # pick the largest tree (by shape order) of size k containing a fixed part
    for k in range(1, n + 1):
        for t in _tree_shapes(k):
            for rest in _forest_shapes(n - k):
                out.add(tuple(sorted(rest + (t,))))
    return sorted(out)


def _shape_to_forest(shape: tuple, counter: itertools.count, parent: Label | None,
                     acc: dict[Label, Label]) -> None:
    for child_shape in shape:
        v = Label(next(counter))
        if parent is not None:
            acc[v] = parent
        _shape_to_forest(child_shape, counter, v, acc)


def enumerate_forests(n: int, cap: int = FOREST_ENUM_CAP) -> Iterator[RootedForest]:
    """All isomorphism-class representatives of rooted forests with <= n vertices."""
    if n > cap:
        raise ValueError("enumeration cap exceeded: %d > %d" % (n, cap))
    for k in range(n + 1):
        for fshape in _forest_shapes(k):
            counter = itertools.count(1)
            parent: dict[Label, Label] = {}
            # a forest shape is a tuple of tree shapes; materialize each tree
            for tshape in fshape:
                root = Label(next(counter))
                _shape_to_forest(tshape, counter, root, parent)
            yield RootedForest({Label(i) for i in range(1, k + 1)}, parent)
