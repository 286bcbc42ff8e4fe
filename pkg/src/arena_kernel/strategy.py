"""P-view algorithms and the strategies they unfold to.

An algorithm is a finite set of triples (viewSet, o, p): when the opponent
plays (a copy of) o and the flattened view of the resulting odd position
(which chains back through o's justifier) contains viewSet, the strategy
answers with a copy of p.  Lookup picks the applicable
triple with the largest viewSet, so a triple with a smaller viewSet acts as
a default that more informed triples can override.

Unfolding an algorithm over a sequent produces the strategy it denotes: the
set of even-length positions reached by answering every legal opponent move
the algorithm covers.  The checks in `decide` work on the view closure
without ever materialising positions; `oracle_decide` re-derives the same
verdicts from the positions themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import itertools

from .forest import L, Label
from .arena import (
    Arena, Move, Expr, Top, One, Neg, Bang, Tensor, With, Lolli,
    build, decompose, expr_labels, canonical_expr_string,
)
from .play import (
    JustSeq, CombSequent, as_sequent, build_sequent, decompose_sequent,
    validate_sequent, check_position, check_justified, p_view, cut_mirror,
    _expr_pairing, _polarity, _view_indices,
)
from .dynamics import (
    MAX_PLAY, grown, unavailable, candidates, exponential_dynamics,
)


class AlgorithmError(Exception):
    pass


def _path(m: Move) -> tuple[Label, ...]:
    return tuple(v.core for v in m.path)


@dataclass(frozen=True)
class PViewAlgorithm:
    """Finite triples (viewSet, o, p), functional in (viewSet, o)."""
    triples: frozenset

    def __post_init__(self):
        object.__setattr__(self, "triples", frozenset(self.triples))
        seen = {}
        for V, o, p in self.triples:
            key = (frozenset(_path(m) for m in V), _path(o))
            if seen.setdefault(key, _path(p)) != _path(p):
                raise AlgorithmError("conflicting triples at %s" % (key,))

    def lookup(self, flat: frozenset, o_path: tuple) -> tuple | None:
        """Most specific applicable response: among triples whose viewSet is
        contained in the flattened view, the one with the largest viewSet."""
        best, best_n = None, -1
        for V, o, p in self.triples:
            if _path(o) != o_path:
                continue
            vs = frozenset(_path(m) for m in V)
            if not vs <= flat:
                continue
            if len(vs) > best_n:
                best, best_n = _path(p), len(vs)
            elif len(vs) == best_n and best != _path(p):
                raise AlgorithmError(
                    "ambiguous lookup for %s at %s" % (o_path, sorted(flat)))
        return best

    def __len__(self):
        return len(self.triples)


def alg(*triples) -> PViewAlgorithm:
    return PViewAlgorithm(frozenset(
        (frozenset(V), o, p) for V, o, p in triples))


@dataclass(frozen=True)
class StrategyTable:
    """A strategy given extensionally, as its set of even positions."""
    positions: frozenset

    def __post_init__(self):
        object.__setattr__(self, "positions", frozenset(self.positions))

    def maximal(self) -> list[JustSeq]:
        out = []
        for s in self.positions:
            if not any(t != s and t.prefix(len(s)) == s for t in self.positions):
                out.append(s)
        return sorted(out, key=lambda s: (len(s), str(s)))

    def __len__(self):
        return len(self.positions)


@dataclass(frozen=True)
class Verdict:
    total: bool
    innocent: bool
    noetherian: bool
    flatly_innocent: bool
    circular: bool
    linear: bool
    winning: bool
    linearly_winning: bool
    reasons: tuple = ()
    exhausted: bool = False


# ---------------------------------------------------------------------------
# position-level unfolding
# ---------------------------------------------------------------------------

def _extensions(seq: CombSequent, s: JustSeq) -> list[JustSeq]:
    """All legal one-move extensions of a position, canonical copies first."""
    a = seq.base
    state = grown(a, s.moves)
    blocked = unavailable(state, s.moves)
    seen = set()
    out = []
    for m in state.moves():
        core = tuple(v.core for v in m.path)
        if core in seen:
            continue
        seen.add(core)
        for cand in candidates(state, m.core(), blocked):
            found = False
            for j in range(len(s), -1, -1):
                ext = JustSeq(s.moves + (cand,), s.pointer + (j,))
                if check_position(seq, ext):
                    out.append(ext)
                    found = True
            if found:
                break  # further copies of the same core are redundant here
    return out


def _flat_key(seq: CombSequent, s: JustSeq) -> frozenset:
    """Flattened P-view of an even position: the sharp moves it retains."""
    v = p_view(seq.base, s)
    return frozenset(_path(m) for m in v.moves)


def _odd_key(seq: CombSequent, so: JustSeq) -> frozenset:
    """Lookup key for answering the last move of an odd position: the
    flattened view of the position, which chains through that move's
    justifier, minus the move itself."""
    v = p_view(seq.base, so)
    return frozenset(_path(m) for m in v.moves[:-1])


def unfold(f: PViewAlgorithm, g, s: JustSeq) -> JustSeq | None:
    """One unfolding step: the algorithm's answer to the last opponent move
    of the odd position s, or None when no triple applies.  Raises
    AlgorithmError when the prescribed answer cannot be played."""
    seq = as_sequent(g)
    if len(s) % 2 != 1:
        raise ValueError("response wanted on an odd position")
    key = _odd_key(seq, s)
    p = f.lookup(key, _path(s.moves[-1]))
    if p is None:
        return None
    for ext in _extensions(seq, s):
        if _path(ext.moves[-1]) == p:
            return ext
    raise AlgorithmError("answer %s not playable after %s" %
                         (".".join(map(str, p)), s))


def unfold_table(f: PViewAlgorithm, g, max_len: int = MAX_PLAY,
                 strict: bool = False) -> StrategyTable:
    """Bounded unfolding of an algorithm into its strategy table.  With
    strict=False an unplayable answer just stops that branch."""
    seq = as_sequent(g)
    empty = JustSeq((), ())
    table = {empty}
    frontier = [empty]
    while frontier:
        nxt = []
        for s in frontier:
            if len(s) >= max_len:
                continue
            for so in _extensions(seq, s):
                try:
                    t = unfold(f, seq, so)
                except AlgorithmError:
                    if strict:
                        raise
                    t = None
                if t is not None and t not in table:
                    table.add(t)
                    nxt.append(t)
        frontier = nxt
    return StrategyTable(frozenset(table))


# ---------------------------------------------------------------------------
# exemptions from linearity
# ---------------------------------------------------------------------------

def _joker_vertices(a: Arena) -> set[Label]:
    """Vertices some unit vertex hangs over: answers there are the
    opponent's to waste, so linearity does not count them."""
    out = set()
    for x in a.add0:
        for y in a.carrier.children(x):
            out.add(y)
            out |= a.carrier.descendants(y)
    return out


def _exp_vertices(a: Arena) -> set[Label]:
    """Vertices inside some of-course box (replayable through copies)."""
    out: set[Label] = set()
    for V in a.exp.sets.values():
        span = set(V)
        for d in V:
            span |= a.mult.descendants(d)
        span2 = set(span)
        for d in span:
            span2 |= a.carrier.descendants(d)
        out |= span2
    return out


def _linearity_exempt(a: Arena, p_path: tuple) -> bool:
    jok = _joker_vertices(a) | set(a.add0)
    expv = _exp_vertices(a)
    return any(x in jok for x in p_path) or any(x in expv for x in p_path)


def _reachable_moves(a: Arena) -> set[tuple]:
    """Sharp moves that can occur in some play: playable despite the unit
    veto, and justifiable through such moves."""
    banged = set().union(*a.exp.sets.values()) if a.exp.sets else set()
    ok = [m for m in a.moves()
          if not any(x in a.add0 and x not in banged for x in _path(m))]
    reach: set[tuple] = set()
    changed = True
    while changed:
        changed = False
        for m in ok:
            mp = _path(m)
            if mp in reach:
                continue
            if all(a.carrier.parent_of(x) is None for x in mp) \
                    or any(_sharp_parent(a, mp, q) for q in reach):
                reach.add(mp)
                changed = True
    return reach


# ---------------------------------------------------------------------------
# decision on the view closure
# ---------------------------------------------------------------------------

def _sharp_parent(a: Arena, child: tuple, parent: tuple) -> bool:
    """Does the move with path `parent` justify the one with path `child`?"""
    ext = set(child)
    return any(a.carrier.parent_of(y) in set(parent)
               for y in child if a.carrier.parent_of(y) not in ext)


def _layer_sets(a: Arena) -> list[frozenset[int]]:
    """Vertex-base sets of the components at every decomposition level
    (stopping at of-course boxes, whose copy threads are split per tag).
    Adjacent moves inside one such component must alternate polarity."""
    out: list[frozenset[int]] = []

    def bases(e: Expr) -> set[int]:
        return {x.base for x in expr_labels(e)}

    def go(e: Expr):
        if isinstance(e, (Top, One, Bang)):
            return
        if isinstance(e, Neg):
            out.append(frozenset(bases(e.arg)))
            go(e.arg)
        elif isinstance(e, (Tensor, With)):
            out.append(frozenset(bases(e.left)))
            out.append(frozenset(bases(e.right)))
            go(e.left)
            go(e.right)
        elif isinstance(e, Lolli):
            out.append(frozenset(bases(e.left)))
            out.append(frozenset(bases(e.right)) | {e.label.base})
            go(e.left)
            go(e.right)

    try:
        go(decompose(a))
    except Exception:
        return []
    return [s for s in out if s]


def decide(f: PViewAlgorithm, g, view_bound: int | None = None) -> Verdict:
    """Judge an algorithm by closing over its reachable P-views.

    A state is (consumed, view, layer polarities): the sharp vertices the
    play has used up, the current P-view as a tuple of sharp paths, and the
    polarity of the last move seen in each alternation layer.  Opponent
    moves extend a state either as fresh openings or below a proponent move
    of the view; the algorithm's answers extend the view and the
    consumption."""
    seq = as_sequent(g)
    a = seq.base
    sharp = a.moves()
    omoves = [m for m in sharp if m.polarity == "O"]
    is_initial = {_path(m): all(a.carrier.parent_of(x) is None
                                for x in _path(m)) for m in sharp}
    replayable = _exp_vertices(a)
    bound = view_bound if view_bound is not None else 2 * len(sharp) + 4
    mirrors = {v: cut_mirror(seq, v) for v in seq.intens}
    banged = set().union(*a.exp.sets.values()) if a.exp.sets else set()

    def playable(path: tuple) -> bool:
        return not any(x in a.add0 and x not in banged for x in path)

    def spawny(path: tuple) -> bool:
        # does the move carry a spawn root of its own, i.e. can it have
        # several copies under one occurrence of its justifier?
        return any(x in banged for x in path)

    def consumed_by(path: tuple) -> set:
        out = set()
        for x in path:
            if not a.is_switching(x):
                out.add(x)
            out |= set(a.alpha2_partners(x))
        return out

    def available(path: tuple, used: frozenset) -> bool:
        return all(x in replayable or x not in used for x in path)

    def mirror_ok(prev: tuple | None, o: tuple) -> bool:
        # an opponent answer in the opposite copy of a cut the previous
        # proponent move touched must be its mirror image
        if prev is None:
            return True
        for v, mir in mirrors.items():
            if not any(x in mir or x == v for x in prev):
                continue
            if not any(x in mir or x == v for x in o):
                continue
            image = [mir[x] for x in prev if x != v]
            if [x for x in o if x != v] != image:
                return False
        return True

    layers = _layer_sets(a)
    touch = {_path(m): tuple(i for i, vs in enumerate(layers)
                             if any(x.base in vs for x in m.path))
             for m in sharp}

    def bump(lp: tuple, path: tuple, pol: str) -> tuple:
        out = list(lp)
        for i in touch[path]:
            out[i] = pol
        return tuple(out)

    start = (frozenset(), (), (None,) * len(layers))
    states = {start}
    work = [start]
    fired: dict = {}        # sharp p path -> set of odd views it answers at
    holes: list = []        # totality failures
    reach_triples = set()
    exhausted = False
    circular = False

    while work:
        used, view, lastpol = work.pop()
        if len(view) > bound:
            exhausted = True
            continue
        prev = view[-1] if view else None
        odd = []
        for o in omoves:
            op = _path(o)
            if not playable(op) or not available(op, used):
                continue
            if not mirror_ok(prev, op):
                continue
            if is_initial[op]:
                # an opening has no justifier in any layer, so it is exempt
                odd.append((op, (op,), None))
            else:
                for k in range(1, len(view), 2):
                    if _sharp_parent(a, op, view[k]):
                        if not spawny(op) and op in view[k + 1:]:
                            continue    # the one copy under view[k] is taken
                        # two adjacent opponent moves in one layer are only
                        # fine when the justifier fell out of the layer
                        jm = view[k]
                        if any(lastpol[i] == "O" and i in touch[jm]
                               for i in touch[op]):
                            continue
                        odd.append((op, view[:k + 1] + (op,), jm))
        for op, oview, _jm in odd:
            flat = frozenset(oview[:-1])
            used2 = frozenset(used | consumed_by(op))
            lp_o = bump(lastpol, op, "O")

            def feasible(q: tuple) -> bool:
                if not (playable(q) and available(q, used2 | set(op))):
                    return False
                if any(lp_o[i] == "P" for i in touch[q]):
                    return False
                if is_initial[q]:
                    return True
                return any(_sharp_parent(a, q, oview[j])
                           and (spawny(q) or q not in oview[j + 1:])
                           for j in range(0, len(oview), 2))

            answerable = [q for q in (_path(m) for m in sharp
                                      if m.polarity == "P") if feasible(q)]
            if not answerable:
                continue    # nothing anyone could say: not a hole
            p = f.lookup(flat, op)
            if p is None:
                holes.append((flat, op))
                continue
            reach_triples.add((op, p))
            if p not in answerable:
                holes.append((flat, op))
                continue
            fired.setdefault(p, set()).add(oview)
            nxt = (frozenset(used2 | consumed_by(p)), oview + (p,),
                   bump(lp_o, p, "P"))
            if nxt not in states:
                states.add(nxt)
                work.append(nxt)
            # a view naming the same sharp answer twice is already a loop
            if p in oview[:-1]:
                circular = True

    if exhausted:
        circular = True
    total = not holes
    noeth = not circular
    linear = True
    reach = _reachable_moves(a)
    for m in sharp:
        if m.polarity != "P":
            continue
        mp = _path(m)
        if mp not in reach or _linearity_exempt(a, mp):
            continue
        if len(fired.get(mp, set())) != 1:
            linear = False
    reasons = tuple("no answer to %s at %s" % (".".join(map(str, o)),
                                               sorted(map(list, k)))
                    for k, o in holes[:4])
    return Verdict(total=total, innocent=True, noetherian=noeth,
                   flatly_innocent=noeth, circular=circular, linear=linear,
                   winning=total and noeth,
                   linearly_winning=total and noeth and linear,
                   reasons=reasons, exhausted=exhausted)


# ---------------------------------------------------------------------------
# decision on the positions themselves
# ---------------------------------------------------------------------------

def oracle_decide(f: PViewAlgorithm, g, max_len: int = 16) -> Verdict:
    """Same verdicts as `decide`, but read off a bounded unfolding of the
    actual positions.  Meant as a slow cross-check on small instances."""
    seq = as_sequent(g)
    a = seq.base
    sharp = a.moves()
    view_cap = 2 * len(sharp) + 4
    empty = JustSeq((), ())
    table = [empty]
    frontier = [empty]
    seen_sigs = {_sig(empty)}
    holes = []
    fired: dict = {}
    circular = False
    exhausted = False
    while frontier:
        nxt = []
        for s in frontier:
            if len(s) >= max_len:
                exhausted = True
                continue
            for so in _extensions(seq, s):
                op = _path(so.moves[-1])
                answers = _extensions(seq, so)
                if not answers:
                    continue    # nothing anyone could say: not a hole
                p = f.lookup(_odd_key(seq, so), op)
                if p is None:
                    holes.append((s, op))
                    continue
                t = None
                for ext in answers:
                    if _path(ext.moves[-1]) == p:
                        t = ext
                        break
                if t is None:
                    holes.append((s, op))
                    continue
                oview = p_view(a, so)
                fired.setdefault(p, set()).add(
                    (tuple(_path(m) for m in oview.moves), oview.pointer))
                tview = p_view(a, t)
                if len(tview) > view_cap:
                    circular = True
                    continue
                pv = [_path(m) for m in tview.moves]
                if pv.count(p) > 1:
                    circular = True
                if _sig(t) not in seen_sigs:
                    seen_sigs.add(_sig(t))
                    nxt.append(t)
        table.extend(nxt)
        frontier = nxt
    total = not holes
    noeth = not circular
    linear = True
    reach = _reachable_moves(a)
    for m in sharp:
        if m.polarity != "P":
            continue
        mp = _path(m)
        if mp not in reach or _linearity_exempt(a, mp):
            continue
        if len(fired.get(mp, set())) != 1:
            linear = False
    reasons = tuple("no answer to %s after %s" % (".".join(map(str, o)), s)
                    for s, o in holes[:4])
    return Verdict(total=total, innocent=True, noetherian=noeth,
                   flatly_innocent=noeth, circular=circular, linear=linear,
                   winning=total and noeth,
                   linearly_winning=total and noeth and linear,
                   reasons=reasons, exhausted=exhausted)


# ---------------------------------------------------------------------------
# tabulation: turn a response rule into an algorithm
# ---------------------------------------------------------------------------

def _sig(s: JustSeq) -> tuple:
    """A position's shape with copy tags erased: positions sharing it make
    the same sharp moves available."""
    return (tuple(_path(m) for m in s.moves), s.pointer)


def tabulate(g, rule, max_len: int = 16) -> PViewAlgorithm:
    """Drive `rule(flatView, oPath) -> (keyPaths, pPath) | None` over all
    positions of the sequent and collect the triples it uses."""
    seq = as_sequent(g)
    a = seq.base
    by_path = {_path(m): m for m in a.moves()}
    triples = {}
    empty = JustSeq((), ())
    frontier = [empty]
    seen_sigs = {_sig(empty)}
    while frontier:
        nxt = []
        for s in frontier:
            if len(s) >= max_len:
                continue
            for so in _extensions(seq, s):
                op = _path(so.moves[-1])
                res = rule(_odd_key(seq, so), op)
                if res is None:
                    continue
                key, p = res
                prev = triples.setdefault((frozenset(key), op), p)
                if prev != p:
                    raise AlgorithmError("rule is not functional at %s" % (op,))
                for ext in _extensions(seq, so):
                    if _path(ext.moves[-1]) == p:
                        if _sig(ext) not in seen_sigs:
                            seen_sigs.add(_sig(ext))
                            nxt.append(ext)
                        break
        frontier = nxt
    return PViewAlgorithm(frozenset(
        (frozenset(by_path[q] for q in V), by_path[o], by_path[p])
        for (V, o), p in triples.items()))


# ---------------------------------------------------------------------------
# label plumbing for the constructions
# ---------------------------------------------------------------------------

def _relabel_expr(e: Expr, fresh) -> tuple[Expr, dict]:
    """A copy of e with every identifier renamed through `fresh`."""
    lmap = {}

    def go(x: Expr) -> Expr:
        if isinstance(x, Top):
            return Top()
        if isinstance(x, One):
            lmap[x.label] = L(next(fresh))
            return One(lmap[x.label])
        if isinstance(x, Neg):
            lmap[x.label] = L(next(fresh))
            return Neg(go(x.arg), lmap[x.label])
        if isinstance(x, Bang):
            return Bang(go(x.arg))
        if isinstance(x, Lolli):
            lmap[x.label] = L(next(fresh))
            return Lolli(go(x.left), go(x.right), lmap[x.label])
        if isinstance(x, Tensor):
            return Tensor(go(x.left), go(x.right))
        if isinstance(x, With):
            return With(go(x.left), go(x.right))
        raise TypeError(x)

    return go(e), lmap


def _fresh_counter(*exprs: Expr):
    top = 0
    for e in exprs:
        for lab in expr_labels(e):
            top = max(top, lab.base)
    return itertools.count(top + 1)


def _turnstiles(seq: CombSequent) -> tuple[Label, Label]:
    e = decompose(seq.base)
    t_in = e.label
    inner = e.right if isinstance(e, Lolli) else e.arg
    t_out = inner.label
    return t_in, t_out


def _retarget(f: PViewAlgorithm, new_seq: CombSequent,
              structural_old: set, structural_new: set,
              lmap: dict) -> PViewAlgorithm:
    """Re-host an algorithm's triples on another sequent: strip the old
    structural vertices (turnstiles, cut switches), rename through lmap, and
    look the move up in the new base."""
    a = new_seq.base

    def tr(m: Move) -> Move:
        cores = [lmap.get(x, x) for x in _path(m) if x not in structural_old]
        new = a.move_of_vertex(cores[0])
        got = [x for x in _path(new) if x not in structural_new]
        if got != cores:
            raise AlgorithmError("move %s has no image" % (m,))
        return new

    return PViewAlgorithm(frozenset(
        (frozenset(tr(m) for m in V), tr(o), tr(p)) for V, o, p in f.triples))


def _require_valid(seq: CombSequent) -> CombSequent:
    rep = validate_sequent(seq)
    if not rep:
        raise AlgorithmError("bad sequent: %s %s" % (rep.axiom, rep.detail))
    return seq


# ---------------------------------------------------------------------------
# copycat and dereliction
# ---------------------------------------------------------------------------

def _mirror_rule(seq: CombSequent, pairing: dict):
    a = seq.base
    t_in, t_out = _turnstiles(seq)
    struct = {t_in, t_out}

    def rule(flat, op):
        cores = [pairing[x] for x in op if x not in struct]
        if not cores:
            return None     # a bare turnstile opening has no twin
        new = a.move_of_vertex(cores[0])
        if [x for x in _path(new) if x not in struct] != cores:
            return None
        return (), _path(new)

    return rule


def copycat(e) -> tuple[PViewAlgorithm, CombSequent]:
    """The copycat algorithm on a ⊣ ⊢ a: answer every move by its twin on
    the other side, pointing at the latest matching opening."""
    if isinstance(e, Arena):
        e = decompose(e)
    fresh = _fresh_counter(e)
    e0, _ = _relabel_expr(e, fresh)
    e1, _ = _relabel_expr(e, fresh)
    seq = _require_valid(build_sequent(
        [e0], [], e1, turnstiles=(L(next(fresh)), L(next(fresh)))))
    fwd: dict = {}
    _expr_pairing(e0, e1, fwd)
    pairing = {**fwd, **{b: a for a, b in fwd.items()}}
    return tabulate(seq, _mirror_rule(seq, pairing)), seq


def dereliction(e) -> tuple[PViewAlgorithm, CombSequent]:
    """Copycat from an of-coursed copy: !a ⊣ ⊢ a."""
    if isinstance(e, Arena):
        e = decompose(e)
    fresh = _fresh_counter(e)
    e0, _ = _relabel_expr(e, fresh)
    e1, _ = _relabel_expr(e, fresh)
    seq = _require_valid(build_sequent(
        [Bang(e0)], [], e1, turnstiles=(L(next(fresh)), L(next(fresh)))))
    fwd: dict = {}
    _expr_pairing(e0, e1, fwd)
    pairing = {**fwd, **{b: a for a, b in fwd.items()}}
    return tabulate(seq, _mirror_rule(seq, pairing)), seq


# ---------------------------------------------------------------------------
# constructions on algorithms
# ---------------------------------------------------------------------------

def par_compose(f: PViewAlgorithm, sf: CombSequent,
                g: PViewAlgorithm, sg: CombSequent
                ) -> tuple[PViewAlgorithm, CombSequent]:
    """Plug f's output formula into the last hypothesis of g, keeping the
    interface as an explicit cut between the two copies."""
    gF, cF, bF = decompose_sequent(sf)
    gG, cG, bG = decompose_sequent(sg)
    if not gG:
        raise AlgorithmError("nothing to compose into")
    iface = gG[-1]
    if canonical_expr_string(bF) != canonical_expr_string(iface):
        raise AlgorithmError("interface mismatch: %s vs %s" %
                             (canonical_expr_string(bF),
                              canonical_expr_string(iface)))
    fresh = _fresh_counter(decompose(sf.base))
    lmap: dict = {}
    gG2 = []
    for x in gG:
        x2, mm = _relabel_expr(x, fresh)
        lmap.update(mm)
        gG2.append(x2)
    cG2 = []
    for x in cG:
        x2, mm = _relabel_expr(x, fresh)
        lmap.update(mm)
        cG2.append(x2)
    bG2, mm = _relabel_expr(bG, fresh)
    lmap.update(mm)
    v = L(next(fresh))
    t1, t2 = L(next(fresh)), L(next(fresh))
    seq = _require_valid(build_sequent(
        gF + gG2[:-1],
        cF + [Lolli(bF, gG2[-1], v)] + cG2,
        bG2, turnstiles=(t1, t2)))
    in_f, out_f = _turnstiles(sf)
    in_g, out_g = _turnstiles(sg)
    struct_new = {t1, t2, v} | set(seq.intens)
    f2 = _retarget(f, seq, {in_f, out_f} | set(sf.intens),
                   struct_new, {})
    g2 = _retarget(g, seq, {in_g, out_g} | set(sg.intens),
                   struct_new, lmap)
    return PViewAlgorithm(f2.triples | g2.triples), seq


def tensor(f: PViewAlgorithm, sf: CombSequent,
           g: PViewAlgorithm, sg: CombSequent
           ) -> tuple[PViewAlgorithm, CombSequent]:
    """Run the two strategies side by side on the tensor of their outputs."""
    gF, cF, bF = decompose_sequent(sf)
    gG, cG, bG = decompose_sequent(sg)
    fresh = _fresh_counter(decompose(sf.base))
    lmap: dict = {}
    gG2, cG2 = [], []
    for src, dst in ((gG, gG2), (cG, cG2)):
        for x in src:
            x2, mm = _relabel_expr(x, fresh)
            lmap.update(mm)
            dst.append(x2)
    bG2, mm = _relabel_expr(bG, fresh)
    lmap.update(mm)
    t1, t2 = L(next(fresh)), L(next(fresh))
    seq = _require_valid(build_sequent(
        gF + gG2, cF + cG2, Tensor(bF, bG2), turnstiles=(t1, t2)))
    in_f, out_f = _turnstiles(sf)
    in_g, out_g = _turnstiles(sg)
    struct_new = {t1, t2} | set(seq.intens)
    f2 = _retarget(f, seq, {in_f, out_f} | set(sf.intens), struct_new, {})
    g2 = _retarget(g, seq, {in_g, out_g} | set(sg.intens), struct_new, lmap)
    return PViewAlgorithm(f2.triples | g2.triples), seq


def pairing(f: PViewAlgorithm, sf: CombSequent,
            g: PViewAlgorithm, sg: CombSequent
            ) -> tuple[PViewAlgorithm, CombSequent]:
    """⟨f, g⟩ on a shared hypothesis list, with-ing the cuts and outputs.
    Requires the two cut lists to be singletons (pad with ¬Top if needed)."""
    gF, cF, bF = decompose_sequent(sf)
    gG, cG, bG = decompose_sequent(sg)
    if len(cF) != 1 or len(cG) != 1:
        raise AlgorithmError("pairing wants singleton cut lists")
    if len(gF) != len(gG) or any(
            canonical_expr_string(x) != canonical_expr_string(y)
            for x, y in zip(gF, gG)):
        raise AlgorithmError("pairing wants a shared hypothesis list")
    fresh = _fresh_counter(decompose(sf.base), decompose(sg.base))
    lmap: dict = {}
    for x, y in zip(gF, gG):
        mm: dict = {}
        _expr_pairing(y, x, mm)
        lmap.update(mm)
    cG2, mm = _relabel_expr(cG[0], fresh)
    lmap.update(mm)
    bG2, mm = _relabel_expr(bG, fresh)
    lmap.update(mm)
    t1, t2 = L(next(fresh)), L(next(fresh))
    seq = _require_valid(build_sequent(
        gF, [With(cF[0], cG2)], With(bF, bG2), turnstiles=(t1, t2)))
    in_f, out_f = _turnstiles(sf)
    in_g, out_g = _turnstiles(sg)
    struct_new = {t1, t2} | set(seq.intens)
    f2 = _retarget(f, seq, {in_f, out_f} | set(sf.intens), struct_new, {})
    g2 = _retarget(g, seq, {in_g, out_g} | set(sg.intens), struct_new, lmap)
    return PViewAlgorithm(f2.triples | g2.triples), seq


def promotion(f: PViewAlgorithm, sf: CombSequent
              ) -> tuple[PViewAlgorithm, CombSequent]:
    """f†: with every hypothesis and cut of-coursed, of-course the output.
    Moves are untouched, only the replication discipline changes."""
    gF, cF, bF = decompose_sequent(sf)
    if not all(isinstance(x, Bang) for x in gF + cF):
        raise AlgorithmError("promotion wants of-coursed hypotheses and cuts")
    seq = _require_valid(build_sequent(
        gF, cF, Bang(bF), turnstiles=_turnstiles(sf)))
    struct = set(_turnstiles(sf)) | set(sf.intens)
    return _retarget(f, seq, struct, struct, {}), seq


def transpose(f: PViewAlgorithm, sf: CombSequent
              ) -> tuple[PViewAlgorithm, CombSequent]:
    """λ(f): move the last hypothesis into the output as its domain."""
    gF, cF, bF = decompose_sequent(sf)
    if not gF:
        raise AlgorithmError("nothing to transpose")
    fresh = _fresh_counter(decompose(sf.base))
    w = L(next(fresh))
    seq = _require_valid(build_sequent(
        gF[:-1], cF, Lolli(gF[-1], bF, w), turnstiles=_turnstiles(sf)))
    struct_old = set(_turnstiles(sf)) | set(sf.intens)
    return _retarget(f, seq, struct_old, struct_old | {w}, {}), seq


# ---------------------------------------------------------------------------
# hiding
# ---------------------------------------------------------------------------

def _replay(seq: CombSequent, cores: list, pointers: list) -> JustSeq:
    """Rebuild a position from sharp cores and pointers, letting the
    dynamics pick canonical copies."""
    s = JustSeq((), ())
    for core, j in zip(cores, pointers):
        for ext in _extensions(seq, s):
            if _path(ext.moves[-1]) == core and ext.pointer[-1] == j:
                s = ext
                break
        else:
            raise AlgorithmError("replay stuck at %s" % (core,))
    return s


def hide_big(f: PViewAlgorithm, g, fuel: int = 10000,
             max_len: int = 12) -> tuple[StrategyTable, CombSequent]:
    """Unfold f and keep only the moves outside the cuts, replaying the
    internal ping-pong the cut copycat forces.

    The visible side is validated position by position on the cut-free
    sequent; the interaction itself is tracked incrementally (it can run far
    past the play-length cap, which is what `fuel` is for)."""
    seq = as_sequent(g)
    a = seq.base
    gamma, cuts, b = decompose_sequent(seq)
    hidden = _require_valid(build_sequent(
        gamma, [], b, turnstiles=_turnstiles(seq)))
    internal = set()
    for c in cuts:
        internal |= set(expr_labels(c))

    def is_external(path: tuple) -> bool:
        return not any(x in internal for x in path)

    mirrors = {v: cut_mirror(seq, v) for v in seq.intens}

    class Inter:
        """One branch of the interaction."""
        __slots__ = ("moves", "ptrs", "state", "ext_of")

        def __init__(self, moves, ptrs, state, ext_of):
            self.moves = moves          # tuple[Move]
            self.ptrs = ptrs            # tuple[int]
            self.state = state          # grown arena
            self.ext_of = ext_of        # full 1-based index per ext index

    def play(it: Inter, cand: Move, j: int) -> Inter:
        return Inter(it.moves + (cand,), it.ptrs + (j,),
                     exponential_dynamics(it.state, cand), it.ext_of)

    def fit_copy(it: Inter, core_path: tuple, j: int) -> Move | None:
        """The freshest available copy of the sharp move hanging under the
        j-th occurrence (0 = an opening)."""
        blocked = unavailable(it.state, it.moves)
        core = Move(core_path, "O")
        cs = candidates(it.state, core, blocked)
        if j == 0:
            roots = it.state.carrier.roots
            fit = [c for c in cs if set(c.path) <= roots]
        else:
            prev = it.moves[j - 1]
            fit = [c for c in cs
                   if all(it.state.carrier.parent_of(y) in set(prev.path)
                          or it.state.carrier.parent_of(y) in set(c.path)
                          for y in c.path)]
        return fit[0] if fit else None

    def view_paths(it: Inter, upto: int) -> list[tuple]:
        s = JustSeq(it.moves[:upto], it.ptrs[:upto])
        kept = _view_indices(it.state, s, upto, "P")
        return [_path(it.moves[i - 1]) for i in kept]

    def justifier_for(it: Inter, p_path: tuple) -> int | None:
        if all(a.carrier.parent_of(x) is None for x in p_path):
            return 0
        s = JustSeq(it.moves, it.ptrs)
        for i in reversed(_view_indices(it.state, s, len(it.moves), "P")):
            if _sharp_parent(a, p_path, _path(it.moves[i - 1])):
                return i
        return None

    def forced_reply(it: Inter, p_path: tuple) -> Inter | None:
        hit = [v for v, mir in mirrors.items()
               if any(x in mir or x == v for x in p_path)]
        if not hit:
            return None
        mir = mirrors[hit[0]]
        first = next(x for x in p_path if x in mir)
        img = _path(a.move_of_vertex(mir[first]))
        j = len(it.moves)       # the forced answer reacts to the last move
        roots = {x for x in img if a.carrier.parent_of(x) not in set(img)}
        par = {a.carrier.parent_of(x) for x in roots}
        while j >= 1 and not (par & set(_path(it.moves[j - 1]))):
            j -= 1
        if j == 0 and not all(x is None for x in par):
            return None
        cand = fit_copy(it, img, j)
        return play(it, cand, j) if cand is not None else None

    empty_it = Inter((), (), a, ())
    empty = JustSeq((), ())
    out = {empty}
    work = [(empty, empty_it)]
    seen = {()}
    budget = fuel
    while work:
        ext, it = work.pop()
        if len(ext) >= max_len:
            continue
        for oext in _extensions(hidden, ext):
            ocore = _path(oext.moves[-1])
            jext = oext.pointer[-1]
            jfull = it.ext_of[jext - 1] if jext else 0
            ocand = fit_copy(it, ocore, jfull)
            if ocand is None:
                continue
            cur = play(it, ocand, jfull)
            cur.ext_of = it.ext_of + (len(cur.moves),)
            answer = None
            while True:
                key = frozenset(view_paths(cur, len(cur.moves))[:-1])
                p = f.lookup(key, _path(cur.moves[-1]))
                if p is None:
                    break
                j = justifier_for(cur, p)
                if j is None:
                    break
                cand = fit_copy(cur, p, j)
                if cand is None:
                    break
                cur = play(cur, cand, j)
                budget -= 1
                if budget < 0:
                    raise AlgorithmError("hiding ran out of fuel")
                if is_external(p):
                    cur.ext_of = cur.ext_of + (len(cur.moves),)
                    answer = p
                    break
                cur = forced_reply(cur, p)
                if cur is None:
                    break
                budget -= 1
                if budget < 0:
                    raise AlgorithmError("hiding ran out of fuel")
            if answer is None:
                continue
            # the visible half of the answer, validated on the hidden sequent
            pj_full = cur.ptrs[-1]
            pj_ext = cur.ext_of.index(pj_full) + 1 if pj_full else 0
            nxt = None
            for cand_ext in _extensions(hidden, oext):
                if _path(cand_ext.moves[-1]) == answer \
                        and cand_ext.pointer[-1] == pj_ext:
                    nxt = cand_ext
                    break
            if nxt is None:
                raise AlgorithmError("hidden answer %s is not a position"
                                     % ".".join(map(str, answer)))
            sig = _sig(nxt)
            if sig in seen:
                continue
            seen.add(sig)
            out.add(nxt)
            work.append((nxt, cur))
    return StrategyTable(frozenset(out)), hidden


def _align_table(t: StrategyTable, src: CombSequent, dst: CombSequent
                 ) -> StrategyTable:
    """Carry a table between sequents of the same shape by pairing their
    identifiers componentwise and replaying."""
    gS, cS, bS = decompose_sequent(src)
    gD, cD, bD = decompose_sequent(dst)
    if len(gS) != len(gD) or cS or cD:
        raise AlgorithmError("shapes do not match")
    lmap: dict = {}
    for x, y in zip(gS + [bS], gD + [bD]):
        if canonical_expr_string(x) != canonical_expr_string(y):
            raise AlgorithmError("shapes do not match")
        _expr_pairing(x, y, lmap)
    out = set()
    for s in t.positions:
        cores = [tuple(lmap.get(x, x) for x in _path(m)
                       if x not in set(_turnstiles(src)))
                 for m in s.moves]
        t_in, t_out = _turnstiles(dst)
        full = []
        for m, c in zip(s.moves, cores):
            if len(c) < len(m.path):          # an opening on the output side
                full.append((t_in, t_out) + c)
            else:
                full.append(c)
        out.add(_replay(dst, full, list(s.pointer)))
    return StrategyTable(frozenset(out))


def hiding_equiv(f1: PViewAlgorithm, g1, f2: PViewAlgorithm, g2,
                 fuel: int = 10000, max_len: int = 10) -> bool:
    """Do the two algorithms leave the same trace once their cuts are
    hidden?"""
    t1, h1 = hide_big(f1, as_sequent(g1), fuel=fuel, max_len=max_len)
    t2, h2 = hide_big(f2, as_sequent(g2), fuel=fuel, max_len=max_len)
    return _align_table(t1, h1, h2).positions == t2.positions
