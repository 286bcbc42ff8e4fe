"""Justified sequences, views, positions, and sequents with cuts.

A justified sequence is a list of extended moves with a pointer; its axioms
say each move is the freshest available copy of a legal move and points at a
previous move that parents it.  Positions additionally alternate recursively
along the decomposition of the arena, keep justifiers visible, and never
touch unit vertices.  A sequent pairs an arena with a set of cut roots; its
positions must copycat across each cut.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .arena import (
    Arena,
    Bang,
    DecomposeError,
    Expr,
    Lolli,
    Move,
    Neg,
    One,
    Report,
    Tensor,
    Top,
    With,
    build,
    canonical_expr_string,
    decompose,
    validate,
)
from .dynamics import (
    MAX_PLAY,
    candidates,
    exponential_dynamics,
    grown,
    unavailable,
)
from .forest import L, Label


@dataclass(frozen=True)
class JustSeq:
    """Moves with a 1-based pointer; pointer value 0 marks an initial move."""

    moves: tuple[Move, ...]
    pointer: tuple[int, ...]

    def __len__(self):
        return len(self.moves)

    def prefix(self, k: int) -> "JustSeq":
        return JustSeq(self.moves[:k], self.pointer[:k])

    def __str__(self):
        return " ; ".join("%s < %d" % (m, j)
                          for m, j in zip(self.moves, self.pointer))


@dataclass(frozen=True)
class PlayReport:
    ok: bool
    axiom: str = ""
    index: int = 0
    detail: str = ""

    def __bool__(self):
        return self.ok


OK = PlayReport(True)


# ---------------------------------------------------------------------------
# justified sequences
# ---------------------------------------------------------------------------

def _states(a: Arena, moves: Sequence[Move]) -> list[Arena]:
    """Grown arenas before each move (index i holds the state before move
    i+1), plus the final state."""
    out = [a]
    for m in moves:
        out.append(exponential_dynamics(out[-1], m))
    return out


def check_justified(a: Arena, s: JustSeq) -> PlayReport:
    if len(s.moves) != len(s.pointer):
        return PlayReport(False, "pointer", 0, "pointer length mismatch")
    if len(s) > MAX_PLAY:
        return PlayReport(False, "cap", 0, "sequence longer than cap")
    g = a
    hist: list[Move] = []
    for i, (m, j) in enumerate(zip(s.moves, s.pointer), start=1):
        if not (0 <= j < i):
            return PlayReport(False, "pointer", i, "pointer out of range")
        blocked = unavailable(g, hist)
        cs = candidates(g, m.core(), blocked)
        if not cs:
            return PlayReport(False, "availability", i,
                              "no available copy of %s" % m.core())
        prev = s.moves[j - 1] if j else None

        def hangs(mm: Move) -> bool:
            if prev is None:
                return set(mm.path) <= g.carrier.roots
            # some justifier vertex is the carrier parent of the move's
            # entry vertices; the rest of the move hangs inside itself
            own = set(mm.path)
            return any(all(g.carrier.parent_of(y) == x
                           or g.carrier.parent_of(y) in own
                           for y in mm.path)
                       for x in prev.path)

        if not hangs(m):
            if prev is None:
                return PlayReport(False, "pointer", i,
                                  "initial move %s not made of roots" % m)
            return PlayReport(False, "pointer", i,
                              "no vertex of %s hangs %s below it" % (prev, m))
        # the minimal-tag requirement only arbitrates between copies that
        # could sit under the same justifier
        fit = [c for c in cs if hangs(c)]
        if not fit or fit[0].path != m.path:
            best = fit[0] if fit else cs[0]
            return PlayReport(False, "shortest-tag", i,
                              "%s played where %s is the freshest copy" % (m, best))
        g = exponential_dynamics(g, m)
        hist.append(m)
    return OK


# ---------------------------------------------------------------------------
# views
# ---------------------------------------------------------------------------

def _polarity(g: Arena, m: Move) -> str:
    return "O" if g.carrier.depth(m.path[0]) % 2 == 0 else "P"


def is_pseudo_initial(g: Arena, s: JustSeq, i: int) -> bool:
    """A justified occurrence all of whose vertices hang under one switching
    vertex of its justifier."""
    j = s.pointer[i - 1]
    if j == 0:
        return False
    just = s.moves[j - 1]
    return any(g.is_switching(x)
               and all(g.carrier.parent_of(y) == x for y in s.moves[i - 1].path)
               for x in just.path)


def _view_indices(g: Arena, s: JustSeq, upto: int, who: str) -> list[int]:
    """1-based indices of s kept by the P-view (who="P") or O-view of the
    prefix of length `upto`.  An occurrence with a justifier always chains to
    it, even a pseudo-initial one: resetting there would lose the justifiers
    of later moves that point across it."""
    out: list[int] = []
    i = upto
    keep_pol = "P" if who == "P" else "O"
    while i >= 1:
        out.append(i)
        m = s.moves[i - 1]
        if _polarity(g, m) == keep_pol:
            i -= 1
        elif s.pointer[i - 1] == 0:
            break
        else:
            j = s.pointer[i - 1]
            out.append(j)
            i = j - 1
    return out[::-1]


def _view_seq(a: Arena, g: Arena, s: JustSeq, upto: int, who: str) -> JustSeq:
    kept = _view_indices(g, s, upto, who)
    pos = {idx: n + 1 for n, idx in enumerate(kept)}
    ptr = tuple(pos.get(s.pointer[idx - 1], 0) for idx in kept)
    # the view's elements are the moves' cores, re-resolved to the freshest
    # available copies within the view's own (shorter) history: only this
    # keeps views of positions positions
    state = a
    hist: list[Move] = []
    moves: list[Move] = []
    for n, idx in enumerate(kept):
        core = s.moves[idx - 1].core()
        cs = candidates(state, core, unavailable(state, hist))
        prev = moves[ptr[n] - 1] if ptr[n] else None
        if prev is None:
            roots = state.carrier.roots
            fit = [c for c in cs if set(c.path) <= roots]
        else:
            fit = [c for c in cs
                   if any(all(state.carrier.parent_of(y) == x
                              or state.carrier.parent_of(y) in set(c.path)
                              for y in c.path)
                          for x in prev.path)]
        m = fit[0] if fit else (cs[0] if cs else core)
        moves.append(m)
        state = exponential_dynamics(state, m)
        hist.append(m)
    return JustSeq(tuple(moves), ptr)


def p_view(a: Arena, s: JustSeq) -> JustSeq:
    """P-view of s: its elements are cores carrying the tags their freshest
    copies have in the view's own history (justifiers lost by truncation
    point to 0)."""
    g = grown(a, s.moves)
    return _view_seq(a, g, s, len(s), "P")


def o_view(a: Arena, s: JustSeq) -> JustSeq:
    g = grown(a, s.moves)
    return _view_seq(a, g, s, len(s), "O")


# ---------------------------------------------------------------------------
# recursive alternation
# ---------------------------------------------------------------------------

def _global_alternation(pols: list[str]) -> str | None:
    for k in range(1, len(pols)):
        if pols[k] == pols[k - 1]:
            return "moves %d,%d are both %s" % (k, k + 1, pols[k])
    return None


def _layer_alternation(seq: list) -> str | None:
    """Adjacent moves of one restriction layer must alternate, except that an
    O-move may open a thread whose justifier fell out of the layer."""
    present = {idx for _, _, idx, _ in seq}
    for k in range(1, len(seq)):
        p, pol, _, jp = seq[k]
        if pol == seq[k - 1][1]:
            if pol == "O" and jp not in present:
                continue
            return "adjacent %s-moves in one component" % pol
    return None


def _exp_form(v: Label, r_bases: frozenset[int]):
    """Split the tag stack of v into the leading run of index-1 tags over the
    root set (the spine) and the remaining tags; fails when a remaining tag
    has index 1."""
    tags = list(v.tags)
    n = 0
    while n < len(tags) and tags[n][1] == 1 and tags[n][0] in r_bases:
        n += 1
    rest = tags[n:]
    if any(j <= 1 for _, j in rest):
        raise DecomposeError("extended vertex %s escapes the copy form" % (v,))
    return n, Label(v.base, tuple((b, j - 1) for b, j in rest))


def _rec_alternation(a: Arena, seq: list) -> str | None:
    """Layered alternation.  `seq` holds (path, polarity, index, justifier)
    quadruples; polarity and pointers come from the original arena, and
    copies keep the depth of their originals, so both survive every
    restriction below."""
    if not seq or not len(a.carrier):
        return None
    bad = _layer_alternation(seq)
    if bad:
        return bad
    e = decompose(a)
    if isinstance(e, (Top, One)):
        return None
    if isinstance(e, Neg):
        inner = a.induced_on(a.vertices - {e.label})
        sub = [el for el in seq if el[0][0].core != e.label]
        return _rec_alternation(inner, sub)
    if isinstance(e, Bang):
        inner = build(e.arg)
        r_bases = frozenset(v.base for v in a.root_set())
        classes: dict[int, list] = {}
        for p, pol, idx, jp in seq:
            forms = [_exp_form(v, r_bases) for v in p]
            ls = {n for n, _ in forms}
            if len(ls) != 1:
                return "copy-mixing move %s" % (p,)
            classes.setdefault(ls.pop(), []).append(
                (tuple(w for _, w in forms), pol, idx, jp))
        for sub in classes.values():
            bad = _rec_alternation(inner, sub)
            if bad:
                return bad
        return None
    if isinstance(e, (Tensor, With, Lolli)):
        parts = (e.left, e.right)
    else:
        raise TypeError("unexpected decomposition %r" % (e,))
    sub_arenas = [build(p) for p in parts]
    vsets = [frozenset(x.base for x in sa.vertices) for sa in sub_arenas]
    if isinstance(e, Lolli):
        vsets[1] = vsets[1] | {e.label.base}
    for side, (sa, vs) in enumerate(zip(sub_arenas, vsets)):
        sub = []
        for p, pol, idx, jp in seq:
            if (p[0].core.base in vsets[0]) == (side == 0):
                q = tuple(v for v in p
                          if not (isinstance(e, Lolli) and v.core == e.label))
                if q:
                    sub.append((q, pol, idx, jp))
        bad = _rec_alternation(sa, sub)
        if bad:
            return bad
    return None


# ---------------------------------------------------------------------------
# combinatorial sequents
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CombSequent:
    base: Arena
    intens: frozenset[Label]

    def __post_init__(self):
        object.__setattr__(self, "intens", frozenset(self.intens))


def as_sequent(g) -> CombSequent:
    return g if isinstance(g, CombSequent) else CombSequent(g, frozenset())


def move_sharing_subarena(a: Arena, v: Label) -> Arena:
    """The subarena spanned by the vertices sharing a mult-path with v."""
    X: set[Label] = set()
    for m in a.moves():
        if v in m.path:
            X |= set(m.path)
    return a.sub_rooted(X)


def _strip_bangs(e: Expr) -> Expr:
    while isinstance(e, Bang):
        e = e.arg
    return e


def _cut_split(a: Arena, v: Label):
    """Peel bangs off a and split the remaining cut at switch v; returns
    (left expr, right expr) or None when a is not of that shape.  The two
    arms only have to agree up to of-course prefixes: a cut may feed a plain
    output into an of-coursed input."""
    e = _strip_bangs(decompose(a))
    if isinstance(e, Neg) and isinstance(e.arg, Top) and e.label == v:
        return Top(), Top()
    if isinstance(e, Lolli) and e.label == v \
            and canonical_expr_string(_strip_bangs(e.left)) \
            == canonical_expr_string(_strip_bangs(e.right)):
        return e.left, e.right
    return None


def _expr_pairing(e1: Expr, e2: Expr, out: dict[Label, Label]):
    """Pair the labels of two expressions that are equal-shaped up to
    of-course prefixes, in canonical order."""
    e1 = _strip_bangs(e1)
    e2 = _strip_bangs(e2)
    if isinstance(e1, Top):
        return
    if isinstance(e1, One):
        out[e1.label] = e2.label
        return
    if isinstance(e1, Neg):
        out[e1.label] = e2.label
        _expr_pairing(e1.arg, e2.arg, out)
        return
    if isinstance(e1, Lolli):
        out[e1.label] = e2.label
        _expr_pairing(e1.left, e2.left, out)
        _expr_pairing(e1.right, e2.right, out)
        return
    # tensor / with: sort both sides by shape and pair in order
    k1 = sorted((e1.left, e1.right), key=canonical_expr_string)
    k2 = sorted((e2.left, e2.right), key=canonical_expr_string)
    for c1, c2 in zip(k1, k2):
        _expr_pairing(c1, c2, out)


def cut_mirror(s: CombSequent, v: Label) -> dict[Label, Label]:
    """The vertex involution across the cut rooted at v."""
    split = _cut_split(move_sharing_subarena(s.base, v), v)
    if split is None:
        raise ValueError("%s is not a cut root" % (v,))
    fwd: dict[Label, Label] = {}
    _expr_pairing(split[0], split[1], fwd)
    return {**fwd, **{b: a for a, b in fwd.items()}}


def validate_sequent(s: CombSequent) -> Report:
    rep = validate(s.base)
    if not rep:
        return rep
    a = s.base
    for v in s.intens:
        if v not in a.carrier:
            return Report(False, "sequent-1", "%s not a vertex" % (v,))
        if a.carrier.depth(v) > 1:
            return Report(False, "sequent-1", "%s too deep" % (v,))
    # axiom 1: the intensionality is mult-fraternal and its parent (if any)
    # is switching
    if s.intens and not a.mult.is_fraternal(s.intens):
        return Report(False, "sequent-1", "intensionality not fraternal")
    parents = {a.mult.parent_of(v) for v in s.intens}
    par = parents.pop() if parents else None
    if par is not None and not a.is_switching(par):
        return Report(False, "sequent-1", "parent %s not switching" % (par,))
    # axiom 2: the subarena around each cut root is !^k (A -o A)
    for v in s.intens:
        try:
            if _cut_split(move_sharing_subarena(a, v), v) is None:
                return Report(False, "sequent-2",
                              "subarena at %s is not a cut" % (v,))
        except DecomposeError as err:
            return Report(False, "sequent-2", str(err))
    # axiom 3: additive and exponential closure into the intensionality
    for v in s.intens:
        for w in a.alpha2_partners(v):
            if w not in s.intens:
                return Report(False, "sequent-3",
                              "alpha2 partner %s escapes" % (w,))
        for V in a.exp.sets.values():
            if v in V and not V <= s.intens:
                return Report(False, "sequent-3",
                              "exp vertex %s escapes" % (sorted(V),))
    return Report(True)


def _tensor_fold(parts: list[Expr]) -> Expr:
    if not parts:
        return Top()
    out = parts[0]
    for p in parts[1:]:
        out = Tensor(out, p)
    return out


def _is_cut_expr(e: Expr) -> bool:
    if isinstance(e, Top):
        return True
    if isinstance(e, Bang):
        return _is_cut_expr(e.arg)
    if isinstance(e, (Tensor, With)):
        return _is_cut_expr(e.left) and _is_cut_expr(e.right)
    if isinstance(e, Lolli):
        return canonical_expr_string(_strip_bangs(e.left)) \
            == canonical_expr_string(_strip_bangs(e.right))
    if isinstance(e, Neg):
        return isinstance(e.arg, Top)
    return False


def build_sequent(gamma: list[Expr], cuts: list[Expr], b: Expr,
                  turnstiles: tuple[Label, Label] | None = None) -> CombSequent:
    for c in cuts:
        if not _is_cut_expr(c):
            raise ValueError("not a cut: %s" % canonical_expr_string(c))
    lab_in, lab_out = turnstiles or (None, None)
    under = Lolli(_tensor_fold(gamma),
                  Lolli(_tensor_fold(cuts), b, lab_out), lab_in)
    a = build(under)

    def cut_switches(c: Expr) -> set[Label]:
        if isinstance(c, Bang):
            return cut_switches(c.arg)
        if isinstance(c, (Tensor, With)):
            return cut_switches(c.left) | cut_switches(c.right)
        if isinstance(c, (Lolli, Neg)):
            return {c.label}
        return set()

    intens = set()
    for c in cuts:
        intens |= cut_switches(c)
    if intens - a.vertices:
        raise ValueError("cut switches must carry explicit identifiers")
    return CombSequent(a, frozenset(intens))


def decompose_sequent(s: CombSequent):
    """Recover (gamma, cuts, b) expressions from a sequent built in the
    two-turnstile form."""
    def as_lolli(x: Expr) -> Expr:
        # an implication into an empty codomain decomposes as a negation
        if isinstance(x, Neg):
            return Lolli(x.arg, Top(), x.label)
        return x

    e = as_lolli(decompose(s.base))
    if not isinstance(e, Lolli):
        raise DecomposeError("sequent not in the two-turnstile form")
    e = Lolli(e.left, as_lolli(e.right), e.label)
    if not isinstance(e.right, Lolli):
        raise DecomposeError("sequent not in the two-turnstile form")

    def flatten(x: Expr) -> list[Expr]:
        if isinstance(x, Top):
            return []
        if isinstance(x, Tensor):
            return flatten(x.left) + flatten(x.right)
        return [x]

    return flatten(e.left), flatten(e.right.left), e.right.right


# ---------------------------------------------------------------------------
# positions
# ---------------------------------------------------------------------------

def _mirror_violation(s: CombSequent, g: Arena, js: JustSeq) -> str | None:
    """Cut copycat: when an O-move right after a P-move answers in the
    opposite copy of a cut the P-move touched, it must be the P-move's
    mirror image across that cut.  Answers elsewhere (the same copy, another
    cut, no cut) carry no constraint."""
    if not s.intens:
        return None
    mirrors = {v: cut_mirror(s, v) for v in s.intens}

    def domside(v, x):
        w = g.carrier.parent_of(x)
        while w is not None:
            if w.core == v:
                return True
            w = g.carrier.parent_of(w)
        return False

    for i in range(1, len(js)):
        m, n = js.moves[i - 1], js.moves[i]
        if _polarity(g, m) != "P" or _polarity(g, n) != "O":
            continue
        for v, inv in mirrors.items():
            mc = [x for x in m.path if x.core in inv]
            nc = [x for x in n.path if x.core in inv]
            if not mc or not nc:
                continue
            if domside(v, mc[0]) == domside(v, nc[0]):
                continue
            image = set()
            for x in mc:
                core = inv[x.core]
                tags = tuple((inv.get(L(b), L(b)).base, j) for b, j in x.tags)
                image.add(Label(core.base, tags))
            if image != {x for x in n.path if x.core != v}:
                return "move %d is not the cut image of move %d" % (i + 1, i)
    return None


def check_position(g, s: JustSeq) -> PlayReport:
    seq = as_sequent(g)
    a = seq.base
    rep = check_justified(a, s)
    if not rep:
        return rep
    gf = grown(a, s.moves)
    # recursive alternation
    pols = [_polarity(gf, m) for m in s.moves]
    bad = _global_alternation(pols)
    if not bad:
        try:
            bad = _rec_alternation(
                a, [(m.path, pol, i, s.pointer[i - 1])
                    for i, (m, pol) in enumerate(zip(s.moves, pols), start=1)])
        except DecomposeError as err:
            bad = str(err)
    if bad:
        return PlayReport(False, "alternation", 0, bad)
    # joker: unit vertices are unplayable unless the exponential structure
    # covers them (units under a bang are duplicable and stay playable)
    banged = set().union(*a.exp.sets.values()) if a.exp.sets else set()
    for i, m in enumerate(s.moves, start=1):
        for x in m.path:
            if x.core in a.add0 and x.core not in banged:
                return PlayReport(False, "joker", i,
                                  "vertex %s has a unit core" % (x,))
    # visibility
    for i in range(1, len(s) + 1):
        j = s.pointer[i - 1]
        if j == 0:
            continue
        who = _polarity(gf, s.moves[i - 1])
        kept = _view_indices(gf, s, i - 1, "P" if who == "P" else "O")
        if j not in kept:
            return PlayReport(False, "visibility", i,
                              "justifier %d not in the %s-view" % (j, who))
    # sequent mirror condition
    bad = _mirror_violation(seq, gf, s)
    if bad:
        return PlayReport(False, "mirror", 0, bad)
    return OK


# ---------------------------------------------------------------------------
# position enumeration
# ---------------------------------------------------------------------------

def enumerate_positions(g, max_len: int) -> list[JustSeq]:
    if max_len > MAX_PLAY:
        raise ValueError("max_len above cap")
    seq = as_sequent(g)
    a = seq.base
    empty = JustSeq((), ())
    out = [empty]
    frontier = [empty]
    while frontier:
        nxt = []
        for s in frontier:
            if len(s) >= max_len:
                continue
            state = grown(a, s.moves)
            blocked = unavailable(state, s.moves)
            seen = set()
            for m in state.moves():
                key = tuple(v.core for v in m.path)
                if key in seen:
                    continue
                cs = candidates(state, m.core(), blocked)
                if not cs:
                    continue
                seen.add(key)
                cand = cs[0]
                for j in range(0, len(s) + 1):
                    ext = JustSeq(s.moves + (cand,), s.pointer + (j,))
                    if check_position(seq, ext):
                        nxt.append(ext)
        out.extend(nxt)
        frontier = nxt
    return out
