"""Combinatorial arenas: a rooted forest with multiplicative, additive and
exponential structure, the seven constructions on them, validation, and the
inverse decomposition into a construction expression."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .forest import EMPTY_FOREST, Label, RootedForest


# ---------------------------------------------------------------------------
# exponential structure
# ---------------------------------------------------------------------------

class ExpForest:
    """Forest of (vertex-set, serial) pairs; edges are superset steps."""

    __slots__ = ("sets", "parent")

    def __init__(self, sets: dict[int, frozenset[Label]] | None = None,
                 parent: dict[int, int] | None = None):
        self.sets = dict(sets or {})
        self.parent = dict(parent or {})
        for c, p in self.parent.items():
            if c not in self.sets or p not in self.sets:
                raise ValueError("exp edge on unknown serial")

    def __bool__(self):
        return bool(self.sets)

    def __len__(self):
        return len(self.sets)

    def __eq__(self, other):
        if not isinstance(other, ExpForest):
            return NotImplemented
        return self.sets == other.sets and self.parent == other.parent

    def __hash__(self):
        return hash((frozenset(self.sets.items()), frozenset(self.parent.items())))

    def __repr__(self):
        def show(i):
            return "{%s}#%d" % (",".join(str(v) for v in sorted(self.sets[i])), i)
        return "Exp(%s)" % "; ".join(
            "%s->%s" % (show(p), show(c)) if p is not None else show(c)
            for c, p in [(i, self.parent.get(i)) for i in sorted(self.sets)]
        )

    @property
    def serials(self):
        return set(self.sets)

    def roots(self) -> list[int]:
        return sorted(i for i in self.sets if i not in self.parent)

    def children(self, i: int) -> list[int]:
        return sorted(c for c, p in self.parent.items() if p == i)

    def subtree(self, i: int) -> set[int]:
        out = {i}
        stack = [i]
        while stack:
            for c in self.children(stack.pop()):
                out.add(c)
                stack.append(c)
        return out

    def restricted_to(self, keep_serials: Iterable[int]) -> "ExpForest":
        ks = set(keep_serials)
        return ExpForest(
            {i: s for i, s in self.sets.items() if i in ks},
            {c: p for c, p in self.parent.items() if c in ks and p in ks},
        )

    def induced_on_labels(self, verts: set[Label]) -> "ExpForest":
        """Keep nodes whose set is contained in verts."""
        return self.restricted_to(i for i, s in self.sets.items() if s <= verts)

    def map_labels(self, f) -> "ExpForest":
        return ExpForest(
            {i: frozenset(f(v) for v in s) for i, s in self.sets.items()},
            dict(self.parent),
        )

    def renumbered(self, counter: Iterator[int]) -> "ExpForest":
        ren = {i: next(counter) for i in sorted(self.sets)}
        return ExpForest(
            {ren[i]: s for i, s in self.sets.items()},
            {ren[c]: ren[p] for c, p in self.parent.items()},
        )

    def longest_path_through(self, x: Label) -> list[int]:
        """Serials of the longest descending chain whose sets all contain x.

        Returns [] when no node contains x. Chains containing x are unique
        per tree; the longest one starts at the topmost node containing x.
        """
        tops = [i for i, s in self.sets.items()
                if x in s and (self.parent.get(i) is None or x not in self.sets[self.parent[i]])]
        best: list[int] = []
        for t in sorted(tops):
            chain = [t]
            while True:
                nxt = [c for c in self.children(chain[-1]) if x in self.sets[c]]
                if not nxt:
                    break
                chain.append(nxt[0])
            if len(chain) > len(best):
                best = chain
        return best


def exp_union(a: ExpForest, b: ExpForest, counter: Iterator[int]) -> ExpForest:
    b2 = b.renumbered(counter) if (a.serials & b.serials) else b
    return ExpForest({**a.sets, **b2.sets}, {**a.parent, **b2.parent})


# ---------------------------------------------------------------------------
# arenas
# ---------------------------------------------------------------------------

Pair = frozenset  # an alpha[2] edge is a frozenset of two Labels


@dataclass(frozen=True)
class Move:
    path: tuple[Label, ...]
    polarity: str  # "O" or "P"

    @property
    def principal(self) -> Label:
        """The non-switching endpoint (the mult-leaf the move ends in)."""
        return self.path[-1]

    def core(self) -> "Move":
        return Move(tuple(v.core for v in self.path), self.polarity)

    def __str__(self):
        return ".".join(str(v) for v in self.path)


class Arena:
    """Immutable combinatorial arena."""

    __slots__ = ("carrier", "mult", "add0", "add2", "exp", "origin", "_hash")

    def __init__(self, carrier: RootedForest, mult: RootedForest,
                 add0: Iterable[Label], add2: Iterable[Pair],
                 exp: ExpForest | None = None,
                 origin: dict[Label, str] | None = None):
        self.carrier = carrier
        self.mult = mult
        self.add0 = frozenset(add0)
        self.add2 = frozenset(Pair(p) for p in add2)
        self.exp = exp or ExpForest()
        self.origin = dict(origin or {})
        self._hash = hash((carrier, mult, self.add0, self.add2, self.exp))

    def __setattr__(self, k, v):
        if hasattr(self, "_hash"):
            raise AttributeError("Arena is immutable")
        object.__setattr__(self, k, v)

    def __eq__(self, other):
        return (isinstance(other, Arena)
                and self.carrier == other.carrier and self.mult == other.mult
                and self.add0 == other.add0 and self.add2 == other.add2
                and self.exp == other.exp)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return ("Arena(carrier=%r, mult=%r, add0={%s}, add2={%s}, exp=%r)" % (
            self.carrier, self.mult,
            ",".join(str(v) for v in sorted(self.add0)),
            ",".join("{%s,%s}" % tuple(sorted(p)) for p in sorted(self.add2, key=sorted)),
            self.exp))

    # -- basic notions ------------------------------------------------------

    @property
    def vertices(self) -> frozenset[Label]:
        return self.carrier.vertices

    def is_switching(self, v: Label) -> bool:
        return not self.mult.is_leaf(v)

    def size(self) -> int:
        return len(self.carrier) + len(self.exp)

    def root_set(self) -> frozenset[Label]:
        """Carrier roots that are also mult roots (the !-relevant root set)."""
        return self.carrier.roots & self.mult.roots

    def moves(self) -> list[Move]:
        out = []
        for path in self.mult.descending_maximal_paths():
            d = self.carrier.depth(path[0])
            out.append(Move(path, "O" if d % 2 == 0 else "P"))
        return out

    def move_of_vertex(self, v: Label) -> Move:
        for m in self.moves():
            if v in m.path:
                return m
        raise KeyError("vertex %s on no move" % (v,))

    def alpha2_partners(self, x: Label) -> set[Label]:
        out = set()
        for p in self.add2:
            if x in p:
                out |= p - {x}
        return out

    # -- structural surgery ---------------------------------------------------

    def induced_on(self, verts: Iterable[Label]) -> "Arena":
        vs = set(verts)
        return Arena(
            self.carrier.induced(vs),
            self.mult.induced(vs),
            self.add0 & vs,
            {p for p in self.add2 if p <= vs},
            self.exp.induced_on_labels(vs),
            {v: k for v, k in self.origin.items() if v in vs},
        )

    def sub_rooted(self, roots: Iterable[Label]) -> "Arena":
        """Combinatorial subarena induced by carrier_{roots}."""
        return self.induced_on(self.carrier.restrict_rooted(roots).vertices)

    def relabel(self, f) -> "Arena":
        """Apply a vertex renaming (callable or mapping) everywhere."""
        g = f if callable(f) else (lambda v: f.get(v, v))
        fm = {v: g(v) for v in self.vertices}
        if len(set(fm.values())) != len(fm):
            raise ValueError("relabeling not injective")
        return Arena(
            self.carrier.relabel(fm),
            self.mult.relabel(fm),
            {g(v) for v in self.add0},
            {Pair({g(x) for x in p}) for p in self.add2},
            self.exp.map_labels(g),
            {g(v): k for v, k in self.origin.items()},
        )


TOP = Arena(EMPTY_FOREST, EMPTY_FOREST, (), ())


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass
class Report:
    ok: bool
    axiom: Optional[str] = None
    detail: str = ""

    def __bool__(self):
        return self.ok


def _partitions(items: list) -> Iterator[list[list]]:
    """All set partitions of items with at least 2 blocks."""
    if len(items) < 2:
        return
    first, rest = items[0], items[1:]

    def go(rest_items):
        if not rest_items:
            yield [[first]]
            return
        for part in go(rest_items[:-1]):
            x = rest_items[-1]
            for i in range(len(part)):
                yield part[:i] + [part[i] + [x]] + part[i + 1:]
            yield part + [[x]]

    for p in go(rest):
        if len(p) >= 2:
            yield p


class _PartitionChecker:
    """Searches for an exhaustive recursive partition of a maximal fraternal
    set that satisfies the three arena axioms."""

    def __init__(self, arena: Arena):
        self.a = arena
        self.memo: dict[frozenset, bool] = {}
        self.failures: list[tuple[str, str]] = []

    def level_ok(self, blocks: list[frozenset], record=False) -> bool:
        a2 = self.a.add2
        # axiom 1+2: cross-block alpha2 membership constant per block pair,
        # and the quotient graph null or complete
        rel = {}
        for i, j in itertools.combinations(range(len(blocks)), 2):
            vals = {Pair({x, y}) in a2 for x in blocks[i] for y in blocks[j]}
            if len(vals) > 1:
                if record:
                    self.failures.append(("1", "alpha[2] not block-constant between "
                                          "{%s} and {%s}" % (_fmt(blocks[i]), _fmt(blocks[j]))))
                return False
            rel[(i, j)] = vals.pop()
        if len(set(rel.values())) > 1:
            if record:
                self.failures.append(("2", "block graph neither null nor complete"))
            return False
        # axiom 3: epsilon vertices nest with blocks
        for s in self.a.exp.sets.values():
            for b in blocks:
                if s & b and not (s <= b or b <= s):
                    if record:
                        self.failures.append(("3", "exp vertex {%s} straddles block {%s}"
                                              % (_fmt(s), _fmt(b))))
                    return False
        return True

    def search(self, V: frozenset) -> bool:
        if len(V) <= 1:
            return True
        if V in self.memo:
            return self.memo[V]
        self.memo[V] = False  # guard
        ok = False
        for blocks in self.candidate_partitions(V):
            if self.level_ok(blocks) and all(self.search(b) for b in blocks):
                ok = True
                break
        if not ok:
            # brute force as a fallback; record why partitions failed
            for blocks in self.candidate_partitions(V):
                self.level_ok(blocks, record=True)
            canonical_failed = bool(self.failures)
            for n, part in enumerate(_partitions(sorted(V))):
                blocks = [frozenset(b) for b in part]
                if self.level_ok(blocks, record=not canonical_failed and n < 8) \
                        and all(self.search(b) for b in blocks):
                    ok = True
                    break
            if ok:
                self.failures.clear()
        self.memo[V] = ok
        return ok

    def candidate_partitions(self, V: frozenset) -> list[list[frozenset]]:
        out = []
        comps = _components(V, lambda x, y: Pair({x, y}) in self.a.add2)
        if len(comps) >= 2:
            out.append(comps)
        cocomps = _components(V, lambda x, y: Pair({x, y}) not in self.a.add2)
        if len(cocomps) >= 2:
            out.append(cocomps)
        return out


def _components(V: frozenset, rel) -> list[frozenset]:
    vs = sorted(V)
    parent = {v: v for v in vs}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for x, y in itertools.combinations(vs, 2):
        if rel(x, y):
            parent[find(x)] = find(y)
    groups: dict[Label, set] = {}
    for v in vs:
        groups.setdefault(find(v), set()).add(v)
    return [frozenset(g) for g in groups.values()]


def _fmt(s) -> str:
    return ",".join(str(v) for v in sorted(s))


def validate(a: Arena) -> Report:
    car, mu = a.carrier, a.mult
    if mu.vertices != car.vertices:
        return Report(False, "multiplicative-1", "mult and carrier vertex sets differ")
    for c, p in mu.parent.items():
        if not car.are_siblings(c, p):
            return Report(False, "multiplicative-2",
                          "mult edge %s->%s not between carrier siblings" % (p, c))
    for v in a.add0:
        if v not in car.vertices or not car.is_leaf(v):
            return Report(False, "additive-0", "alpha[0] element %s is not a carrier leaf" % (v,))
        if a.is_switching(v):
            return Report(False, "additive-0", "alpha[0] element %s is switching" % (v,))
    for p in a.add2:
        if len(p) != 2:
            return Report(False, "additive-2", "alpha[2] entry %s is not an edge" % (set(p),))
        x, y = sorted(p)
        if x not in car.vertices or y not in car.vertices or not mu.are_siblings(x, y):
            return Report(False, "additive-2",
                          "alpha[2] edge {%s,%s} not between mult siblings" % (x, y))
    for i, s in a.exp.sets.items():
        if not s or not mu.is_fraternal(s):
            return Report(False, "exponential", "exp vertex {%s} not fraternal in mult" % _fmt(s))
    for c, p in a.exp.parent.items():
        if not (a.exp.sets[p] >= a.exp.sets[c]):
            return Report(False, "exponential", "exp edge not a superset step")
    roots = a.exp.roots()
    for i, j in itertools.combinations(roots, 2):
        if a.exp.sets[i] & a.exp.sets[j]:
            return Report(False, "exponential", "exp roots overlap")
    checker = _PartitionChecker(a)
    for S in mu.sibling_classes():
        if not checker.search(frozenset(S)):
            axioms = sorted({ax for ax, _ in checker.failures}) or ["1", "2", "3"]
            detail = "; ".join(d for _, d in checker.failures[:3])
            return Report(False, "arena-" + "/".join(axioms),
                          "no exhaustive recursive partition of {%s}: %s" % (_fmt(S), detail))
    return Report(True)


# ---------------------------------------------------------------------------
# construction expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Top(Expr):
    def __str__(self):
        return "Top"


@dataclass(frozen=True)
class One(Expr):
    label: Optional[Label] = None

    def __str__(self):
        return "One[%s]" % self.label if self.label else "One"


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr
    label: Optional[Label] = None

    def __str__(self):
        if isinstance(self.arg, Top):
            return "Bot[%s]" % self.label if self.label else "Bot"
        return "Neg[%s] (%s)" % (self.label or "", self.arg)


@dataclass(frozen=True)
class Bang(Expr):
    arg: Expr

    def __str__(self):
        return "!(%s)" % self.arg


@dataclass(frozen=True)
class Tensor(Expr):
    left: Expr
    right: Expr

    def __str__(self):
        return "(%s * %s)" % (self.left, self.right)


@dataclass(frozen=True)
class With(Expr):
    left: Expr
    right: Expr

    def __str__(self):
        return "(%s & %s)" % (self.left, self.right)


@dataclass(frozen=True)
class Lolli(Expr):
    left: Expr
    right: Expr
    label: Optional[Label] = None

    def __str__(self):
        sw = "[%s]" % self.label if self.label else ""
        return "(%s -o%s %s)" % (self.left, sw, self.right)


def Bot(i: int | Label | None = None) -> Neg:
    return Neg(Top(), _lab(i))


def Zero(i: int | Label | None = None, j: int | Label | None = None) -> Neg:
    return Neg(One(_lab(j)), _lab(i))


def Par(a: Expr, b: Expr, i=None, j=None, k=None) -> Neg:
    return Neg(Tensor(Neg(a, _lab(j)), Neg(b, _lab(k))), _lab(i))


def Plus(a: Expr, b: Expr, i=None, j=None, k=None) -> Neg:
    return Neg(With(Neg(a, _lab(j)), Neg(b, _lab(k))), _lab(i))


def WhyNot(a: Expr, i=None, j=None) -> Neg:
    return Neg(Bang(Neg(a, _lab(j))), _lab(i))


def Imp(a: Expr, b: Expr, label=None) -> Lolli:
    """A => B := !A -o B."""
    return Lolli(Bang(a), b, _lab(label))


def _lab(i) -> Optional[Label]:
    if i is None or isinstance(i, Label):
        return i
    return Label(i)


def expr_labels(e: Expr) -> list[Label]:
    out = []

    def go(e):
        lab = getattr(e, "label", None)
        if lab is not None:
            out.append(lab)
        for name in ("arg", "left", "right"):
            sub = getattr(e, name, None)
            if isinstance(sub, Expr):
                go(sub)

    go(e)
    return out


# ---------------------------------------------------------------------------
# build
# ---------------------------------------------------------------------------

class _Fresh:
    def __init__(self, used: Iterable[Label]):
        bases = [v.base for v in used] or [0]
        self.counter = itertools.count(max(bases) + 1)

    def label(self) -> Label:
        return Label(next(self.counter))


def build(e: Expr) -> Arena:
    labels = expr_labels(e)
    if len(labels) != len(set(labels)):
        dup = sorted({l for l in labels if labels.count(l) > 1})
        raise ValueError("duplicate identifiers: %s" % _fmt(dup))
    fresh = _Fresh(labels)
    serials = itertools.count(1)
    return _build(e, fresh, serials)


def _build(e: Expr, fresh: _Fresh, serials: Iterator[int]) -> Arena:
    if isinstance(e, Top):
        return TOP
    if isinstance(e, One):
        v = e.label or fresh.label()
        f = RootedForest({v})
        return Arena(f, f, {v}, (), None, {v: "one"})
    if isinstance(e, Neg):
        a = _build(e.arg, fresh, serials)
        v = e.label or fresh.label()
        return Arena(
            a.carrier.graft(v),
            a.mult.union(RootedForest({v})),
            a.add0, a.add2, a.exp,
            {**a.origin, v: "neg"},
        )
    if isinstance(e, Bang):
        a = _build(e.arg, fresh, serials)
        return bang(a, serials)
    if isinstance(e, (Tensor, With)):
        a = _build(e.left, fresh, serials)
        b = _build(e.right, fresh, serials)
        if a.vertices & b.vertices:
            raise ValueError("overlapping identifier use in tensor/with")
        add2 = set(a.add2) | set(b.add2)
        if isinstance(e, With):
            for x in a.root_set():
                for y in b.root_set():
                    add2.add(Pair({x, y}))
        return Arena(
            a.carrier.union(b.carrier),
            a.mult.union(b.mult),
            a.add0 | b.add0, add2,
            exp_union(a.exp, b.exp, serials),
            {**a.origin, **b.origin},
        )
    if isinstance(e, Lolli):
        a = _build(e.left, fresh, serials)
        b = _build(e.right, fresh, serials)
        if a.vertices & b.vertices:
            raise ValueError("overlapping identifier use in -o")
        sw = e.label or fresh.label()
        carrier = a.carrier.graft(sw).union(b.carrier)
        broots = b.carrier.roots
        mu_b_deep = b.mult.induced(b.carrier.vertices - broots)
        mu_b_roots = b.mult.induced(broots)
        mult = a.mult.union(mu_b_deep).union(mu_b_roots.graft(sw))
        return Arena(
            carrier, mult, a.add0 | b.add0, a.add2 | b.add2,
            exp_union(a.exp, b.exp, serials),
            {**a.origin, **b.origin, sw: "lolli"},
        )
    raise TypeError("not a construction expression: %r" % (e,))


def bang(a: Arena, serials: Iterator[int] | None = None) -> Arena:
    """The of-course construction applied to an already-built arena."""
    if serials is None:
        serials = itertools.count(max(a.exp.serials, default=0) + 1)
    R = a.root_set()
    if not R:
        if len(a.carrier):
            raise ValueError("of-course on rootless nonempty arena")
        return a
    inside = a.exp.restricted_to(
        i for i, s in a.exp.sets.items() if s <= R
    )
    outside_keep = [i for i, s in a.exp.sets.items() if not (s & R)]
    for i, s in a.exp.sets.items():
        if (s & R) and not (s <= R):
            raise ValueError("exp vertex straddles the root set under of-course")
    root_serial = next(serials)
    sets = {root_serial: frozenset(R), **inside.sets,
            **{i: a.exp.sets[i] for i in outside_keep}}
    parent = dict(a.exp.parent)
    parent = {c: p for c, p in parent.items()
              if (c in inside.sets and p in inside.sets)
              or (c in outside_keep and p in outside_keep)}
    for r in inside.roots():
        parent[r] = root_serial
    return Arena(a.carrier, a.mult, a.add0, a.add2,
                 ExpForest(sets, parent), a.origin)


# ---------------------------------------------------------------------------
# decomposition (free characterisation)
# ---------------------------------------------------------------------------

class DecomposeError(ValueError):
    pass


def decompose(a: Arena) -> Expr:
    if a.size() == 0:
        return Top()
    R = a.root_set()
    # of-course peeling: an exp root equal to R
    for i in a.exp.roots():
        if a.exp.sets[i] == R:
            stripped = _strip_exp_root(a, i)
            if stripped is not None:
                return Bang(decompose(stripped))
    roots = a.carrier.roots
    if len(roots) == 1:
        (r,) = roots
        if r in a.add0:
            return One(r)
        if any(r in s for s in a.exp.sets.values()):
            raise DecomposeError("root %s occurs in exp outside the !-form" % (r,))
        if a.is_switching(r):
            raise DecomposeError("singleton root %s is switching" % (r,))
        inner = a.induced_on(a.vertices - {r})
        return Neg(decompose(inner), r)
    if not roots:
        raise DecomposeError("no roots but nonzero size")
    mu_prime = a.mult.induced(roots)
    mu_roots = mu_prime.roots
    if len(mu_roots) == 1:
        (x0,) = mu_roots
        V1 = set(a.carrier.children(x0))
        V2 = roots - {x0}
        a1 = a.sub_rooted(V1)
        a2 = a.sub_rooted(V2)
        return Lolli(decompose(a1), decompose(a2), x0)
    # partition case: split R into blocks, null -> Tensor, complete -> With
    blocks, complete = _top_partition(a, frozenset(mu_roots))
    comps = []
    for blk in blocks:
        vs = {r for r in roots if _mu_top(mu_prime, r) in blk}
        comps.append(decompose(a.sub_rooted(vs)))
    out = comps[0]
    for c in comps[1:]:
        out = With(out, c) if complete else Tensor(out, c)
    return out


def _mu_top(mu_prime: RootedForest, r: Label) -> Label:
    while mu_prime.parent_of(r) is not None:
        r = mu_prime.parent_of(r)
    return r


def _strip_exp_root(a: Arena, i: int) -> Optional[Arena]:
    """Undo one of-course layer by removing exp root i; None if ill-shaped."""
    R = a.exp.sets[i]
    sets = {j: s for j, s in a.exp.sets.items() if j != i}
    parent = {c: p for c, p in a.exp.parent.items() if p != i and c != i}
    eps = ExpForest(sets, parent)
    # remaining roots must still be pairwise disjoint, and every vertex must
    # be inside R or disjoint from it
    rs = eps.roots()
    for x, y in itertools.combinations(rs, 2):
        if eps.sets[x] & eps.sets[y]:
            return None
    for s in sets.values():
        if (s & R) and not (s <= R):
            return None
    return Arena(a.carrier, a.mult, a.add0, a.add2, eps, a.origin)


def _exp_merge(a: Arena, R: frozenset, comps: list[frozenset]) -> list[frozenset]:
    """Coarsen comps so that every exp vertex meeting R sits inside a block."""
    idx = {v: i for i, c in enumerate(comps) for v in c}
    parent = list(range(len(comps)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for s in a.exp.sets.values():
        if not (s & R):
            continue
        if not (s <= R):
            raise DecomposeError("exp vertex {%s} leaks out of the root set" % _fmt(s))
        touched = sorted({find(idx[v]) for v in s})
        for t in touched[1:]:
            parent[t] = touched[0]
    merged: dict[int, set] = {}
    for i, c in enumerate(comps):
        merged.setdefault(find(i), set()).update(c)
    return [frozenset(c) for c in merged.values()]


def _top_partition(a: Arena, R: frozenset) -> tuple[list[frozenset], bool]:
    comps = _exp_merge(a, R, _components(R, lambda x, y: Pair({x, y}) in a.add2))
    if len(comps) >= 2:
        return comps, False
    cocomps = _exp_merge(a, R, _components(R, lambda x, y: Pair({x, y}) not in a.add2))
    if len(cocomps) >= 2:
        # complete requires all cross pairs present
        for b1, b2 in itertools.combinations(cocomps, 2):
            for x in b1:
                for y in b2:
                    if Pair({x, y}) not in a.add2:
                        raise DecomposeError("block graph neither null nor complete")
        return cocomps, True
    raise DecomposeError("cannot split root set {%s}" % _fmt(R))


# ---------------------------------------------------------------------------
# canonical expressions and isomorphism
# ---------------------------------------------------------------------------

def canonical_expr_string(e: Expr) -> str:
    if isinstance(e, Top):
        return "T"
    if isinstance(e, One):
        return "1"
    if isinstance(e, Neg):
        return "N(%s)" % canonical_expr_string(e.arg)
    if isinstance(e, Bang):
        return "!(%s)" % canonical_expr_string(e.arg)
    if isinstance(e, Lolli):
        return "L(%s,%s)" % (canonical_expr_string(e.left), canonical_expr_string(e.right))
    if isinstance(e, (Tensor, With)):
        op = "*" if isinstance(e, Tensor) else "&"
        parts = []

        def flat(x):
            if isinstance(x, type(e)):
                flat(x.left)
                flat(x.right)
            else:
                parts.append(canonical_expr_string(x))

        flat(e)
        return "%s(%s)" % (op, ",".join(sorted(parts)))
    raise TypeError(repr(e))


def arena_canonical_string(a: Arena) -> str:
    return canonical_expr_string(decompose(a))


def isomorphic(a: Arena, b: Arena) -> bool:
    return arena_canonical_string(a) == arena_canonical_string(b)


# ---------------------------------------------------------------------------
# expression grammar
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(-o|=>|[*&!()\[\]]|Top|One|Bot|Neg|\d+)")


def tokenize(src: str) -> list[str]:
    out, i = [], 0
    while i < len(src):
        m = _TOKEN.match(src, i)
        if not m:
            if src[i:].strip():
                raise SyntaxError("bad token at %r" % src[i:i + 10])
            break
        out.append(m.group(1))
        i = m.end()
    return out


class _Parser:
    def __init__(self, tokens: list[str]):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def eat(self, tok=None):
        t = self.peek()
        if t is None or (tok is not None and t != tok):
            raise SyntaxError("expected %s, got %s" % (tok or "token", t))
        self.i += 1
        return t

    def ident(self) -> Label:
        self.eat("[")
        n = self.eat()
        if not n.isdigit():
            raise SyntaxError("identifier must be a number, got %s" % n)
        self.eat("]")
        return Label(int(n))

    def opt_ident(self) -> Optional[Label]:
        if self.peek() == "[":
            return self.ident()
        return None

    def expr(self) -> Expr:
        left = self.withexpr()
        t = self.peek()
        if t == "-o":
            self.eat()
            lab = self.opt_ident()
            return Lolli(left, self.expr(), lab)
        if t == "=>":
            self.eat()
            lab = self.opt_ident()
            return Lolli(Bang(left), self.expr(), lab)
        return left

    def withexpr(self) -> Expr:
        e = self.tensor()
        while self.peek() == "&":
            self.eat()
            e = With(e, self.tensor())
        return e

    def tensor(self) -> Expr:
        e = self.unary()
        while self.peek() == "*":
            self.eat()
            e = Tensor(e, self.unary())
        return e

    def unary(self) -> Expr:
        t = self.peek()
        if t == "!":
            self.eat()
            return Bang(self.unary())
        if t == "Neg":
            self.eat()
            lab = self.opt_ident()
            return Neg(self.unary(), lab)
        return self.atom()

    def atom(self) -> Expr:
        t = self.eat()
        if t == "Top":
            return Top()
        if t == "One":
            return One(self.opt_ident())
        if t == "Bot":
            return Neg(Top(), self.opt_ident())
        if t == "(":
            e = self.expr()
            self.eat(")")
            return e
        raise SyntaxError("unexpected token %s" % t)


def parse_expr(src: str) -> Expr:
    p = _Parser(tokenize(src))
    e = p.expr()
    if p.peek() is not None:
        raise SyntaxError("trailing input from %s" % p.peek())
    return e


def expr_to_text(e: Expr) -> str:
    return str(e)


# -- random expression generation (for tests and the CLI demo corpus) --------

def random_expr(rng, max_vertices: int = 12) -> Expr:
    """A random construction expression with at most max_vertices vertices."""
    next_id = itertools.count(1)

    def go(budget: int) -> tuple[Expr, int]:
        # returns (expr, vertices used)
        choices = ["top", "one", "bot"]
        if budget >= 2:
            choices += ["neg", "bang"]
        if budget >= 2:
            choices += ["tensor", "with"]
        if budget >= 1:
            choices += ["lolli"]
        kind = rng.choice(choices)
        if kind == "top":
            return Top(), 0
        if kind == "one":
            return One(Label(next(next_id))), 1
        if kind == "bot":
            return Bot(next(next_id)), 1
        if kind == "neg":
            sub, used = go(budget - 1)
            return Neg(sub, Label(next(next_id))), used + 1
        if kind == "bang":
            sub, used = go(budget - 1)
            return Bang(sub), used
        if kind in ("tensor", "with"):
            l, ul = go(budget // 2)
            r, ur = go(budget - ul - 1)
            cls = Tensor if kind == "tensor" else With
            return cls(l, r), ul + ur
        # lolli uses one switch vertex
        l, ul = go((budget - 1) // 2)
        r, ur = go(budget - 1 - ul)
        return Lolli(l, r, Label(next(next_id))), ul + ur + 1

    e, _ = go(max_vertices)
    return e
