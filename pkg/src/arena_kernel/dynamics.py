"""Arena dynamics: how an arena grows and shrinks as moves are played.

Playing a move has two effects.  Additively, the played vertices and their
alpha[2] partners become unavailable.  Exponentially, every played vertex that
sits inside a chain of exp-vertices spawns tagged copies of the subarena
spanned by each chain element, so that banged material can be revisited.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .arena import Arena, ExpForest, Move, Pair
from .forest import Label, RootedForest

# Plays in the kernel are capped so grown arenas stay small.
MAX_PLAY = 64

ExtendedMove = Move  # an extended move is a Move whose labels carry tags


# ---------------------------------------------------------------------------
# additive dynamics
# ---------------------------------------------------------------------------

def additive_dynamics(a: Arena, m: Move) -> set[Label]:
    """Vertices consumed by playing m: alpha[2] partners, plus each played
    vertex itself when it is not switching (switching vertices stay
    replayable)."""
    out: set[Label] = set()
    for x in m.path:
        if x not in a.carrier:
            raise ValueError("move vertex %s not in arena" % (x,))
        out |= a.alpha2_partners(x)
        if not a.is_switching(x):
            out.add(x)
    return out


# ---------------------------------------------------------------------------
# exponential dynamics
# ---------------------------------------------------------------------------

def _fresh_serial_counter(a: Arena):
    return itertools.count(max(a.exp.serials, default=0) + 1)


def _copy_step(a: Arena, base: int, j: int, D: frozenset[Label]) -> Arena:
    """Adjoin one tagged copy of the subarena spanned by the mult-closure of
    D, tagging every copied vertex with (base, j)."""
    tag = (base, j)

    closure: set[Label] = set()
    for d in D:
        closure.add(d)
        closure |= a.mult.descendants(d)
    flat = a.carrier.restrict_rooted(closure)
    v_flat = flat.vertices
    cp = {v: v.tagged(tag) for v in v_flat}
    # replaying a switching vertex re-fires the same copy step; it must not
    # duplicate what is already there
    if set(cp.values()) <= a.carrier.vertices:
        return a

    # Carrier: the copy hangs under the original parent of the copied roots,
    # if they have one; otherwise its roots are new carrier roots.
    carrier_parent = dict(a.carrier.parent)
    for v in v_flat:
        p = flat.parent_of(v)
        if p is not None:
            carrier_parent[cp[v]] = cp[p]
        else:
            r = a.carrier.parent_of(v)
            if r is not None:
                carrier_parent[cp[v]] = r
    carrier = RootedForest(a.carrier.vertices | set(cp.values()), carrier_parent)

    # Mult: same treatment — copied mult-roots reattach under their original
    # mult-parent (needed so copies remain reachable as moves from above).
    restr = a.mult.induced(v_flat)
    mult_parent = dict(a.mult.parent)
    for v in v_flat:
        p = restr.parent_of(v)
        if p is not None:
            mult_parent[cp[v]] = cp[p]
        else:
            r = a.mult.parent_of(v)
            if r is not None:
                mult_parent[cp[v]] = r
    mult = RootedForest(a.mult.vertices | set(cp.values()), mult_parent)

    add0 = set(a.add0) | {cp[v] for v in a.add0 & v_flat}
    add2 = set(a.add2) | {Pair(cp[x] for x in e) for e in a.add2 if e <= v_flat}

    # Exp: copy every exp-vertex contained in the copied carrier, keeping the
    # edges among the copies; fresh serials.
    counter = _fresh_serial_counter(a)
    piece = a.exp.induced_on_labels(v_flat).map_labels(lambda v: cp[v])
    piece = piece.renumbered(counter)
    exp = ExpForest({**a.exp.sets, **piece.sets}, {**a.exp.parent, **piece.parent})

    origin = dict(a.origin)
    for v in v_flat:
        if v in origin:
            origin[cp[v]] = origin[v]
    return Arena(carrier, mult, add0, add2, exp, origin)


def _vertex_dynamics(a: Arena, y: Label) -> Arena:
    chain = a.exp.longest_path_through(y)
    for j, serial in enumerate(chain, start=1):
        D = a.exp.sets[serial]
        # A unit vertex alone spans a copy no play could ever use; skip it.
        if D == {y} and y in a.add0:
            continue
        a = _copy_step(a, y.core.base, j, D)
    return a


def exponential_dynamics(a: Arena, m: Move) -> Arena:
    """The arena grown by playing m: each played vertex lying in an exp-chain
    adjoins one tagged copy of the spanned subarena per chain element."""
    for x in m.path:
        if x not in a.carrier:
            raise ValueError("move vertex %s not in arena" % (x,))
    for x in m.path:
        a = _vertex_dynamics(a, x)
    return a


def grown(a: Arena, history: Sequence[Move]) -> Arena:
    """The arena after playing the whole history in order."""
    if len(history) > MAX_PLAY:
        raise ValueError("play longer than cap (%d)" % MAX_PLAY)
    for m in history:
        a = exponential_dynamics(a, m)
    return a


def unavailable(state: Arena, history: Sequence[Move]) -> set[Label]:
    """Vertices consumed over the history, all measured in the grown arena."""
    out: set[Label] = set()
    for m in history:
        out |= additive_dynamics(state, m)
    return out


# ---------------------------------------------------------------------------
# extended-move resolution
# ---------------------------------------------------------------------------

def _tag_key(m: Move):
    return tuple((len(v.tags), v.tags) for v in m.path)


def candidates(state: Arena, core: Move, blocked: Iterable[Label] = ()) -> list[Move]:
    """Extended moves of the state with the given core, none of whose
    vertices is blocked, in shortest-tag order."""
    bl = set(blocked)
    want = tuple(v.core for v in core.path)
    out = [m for m in state.moves()
           if tuple(v.core for v in m.path) == want and not (set(m.path) & bl)]
    out.sort(key=_tag_key)
    return out


def resolve(state: Arena, core: Move, blocked: Iterable[Label] = ()) -> Move:
    """The minimal-tag extended move with the given core avoiding the blocked
    vertices."""
    cs = candidates(state, core, blocked)
    if not cs:
        raise ValueError("no available extended move with core %s" % core)
    if len(cs) > 1:
        assert _tag_key(cs[0]) != _tag_key(cs[1]), "ambiguous resolution of %s" % core
    return cs[0]
