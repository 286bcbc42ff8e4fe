import random

import pytest

from arena_kernel.arena import Bot, Lolli, Tensor, Top, build, isomorphic, \
    arena_canonical_string, parse_expr, random_expr
from arena_kernel.dynamics import exponential_dynamics
from arena_kernel.forest import L
from arena_kernel.play import (
    CombSequent,
    JustSeq,
    build_sequent,
    check_justified,
    check_position,
    cut_mirror,
    decompose_sequent,
    enumerate_positions,
    o_view,
    p_view,
    validate_sequent,
)

GOLDEN_SRC = "!One[8] -o[2] (!(One[3] & !Neg[1] (Top -o[6] !!Bot[7])) & Bot[5]) * Bot[4]"
X, Y, Z, S, T, U, V, W = (L(i) for i in range(1, 9))
X1, Z1, U1, V1 = (v.tagged((1, 1)) for v in (X, Z, U, V))
X2 = X.tagged((1, 2))


@pytest.fixture
def golden():
    return build(parse_expr(GOLDEN_SRC))


def mv(a, *path):
    for m in a.moves():
        if m.path == path:
            return m
    raise AssertionError("no move %s" % (path,))


def seq(a, *steps):
    """Each step is (justifier index, *vertex path); moves are looked up in
    the successively grown arena."""
    g = a
    moves, ptrs = [], []
    for j, *path in steps:
        m = mv(g, *path)
        moves.append(m)
        ptrs.append(j)
        g = exponential_dynamics(g, m)
    return JustSeq(tuple(moves), tuple(ptrs))


# ---------------------------------------------------------------------------
# justified sequences
# ---------------------------------------------------------------------------

def test_js_accepts_additive_interleavings(golden):
    assert check_justified(golden, seq(golden, (0, Y, T), (1, W), (0, Y, S)))
    assert check_justified(golden, seq(golden, (0, Y, T), (0, Y, S), (1, W)))


def test_js_accepts_copy_plays(golden):
    s3 = seq(golden, (0, Y, X), (1, W), (0, Y, Z1), (0, Y, X2))
    assert check_justified(golden, s3)
    s4 = seq(golden, (0, Y, X), (1, U, V), (0, Y, X1), (3, U1, V1))
    assert check_justified(golden, s4)


def test_js_rejects_consumed_vertices(golden):
    rep = check_justified(golden, seq(golden, (0, Y, T), (1, W), (0, Y, Z)))
    assert not rep and rep.axiom == "availability" and rep.index == 3
    rep = check_justified(golden, seq(golden, (0, Y, T), (0, Y, Z), (1, W)))
    assert not rep and rep.axiom == "availability" and rep.index == 2


def test_js_rejects_stale_untagged_replay(golden):
    rep = check_justified(golden,
                          seq(golden, (0, Y, X), (1, W), (0, Y, Z), (0, Y, X)))
    assert not rep and rep.axiom == "shortest-tag" and rep.index == 3
    rep = check_justified(golden,
                          seq(golden, (0, Y, X), (1, U, V), (0, Y, X), (3, U, V)))
    assert not rep and rep.axiom == "shortest-tag" and rep.index == 3


def test_js_pointer_axioms(golden):
    rep = check_justified(golden, seq(golden, (1, Y, T)))
    assert not rep and rep.axiom == "pointer"
    # a non-root move cannot be initial
    rep = check_justified(golden, seq(golden, (0, Y, T), (0, W)))
    assert not rep and rep.axiom == "pointer" and rep.index == 2
    # the justifier must hang the move below one of its vertices
    rep = check_justified(golden, seq(golden, (0, Y, T), (1, W), (2, Y, S)))
    assert not rep and rep.axiom == "pointer" and rep.index == 3


def test_js_pointer_length_mismatch(golden):
    bad = JustSeq((mv(golden, Y, T),), (0, 0))
    rep = check_justified(golden, bad)
    assert not rep and rep.axiom == "pointer"


# ---------------------------------------------------------------------------
# views
# ---------------------------------------------------------------------------

def test_view_of_empty(golden):
    assert p_view(golden, JustSeq((), ())) == JustSeq((), ())
    assert o_view(golden, JustSeq((), ())) == JustSeq((), ())


def test_view_two_moves(golden):
    s = seq(golden, (0, Y, X), (1, U, V))
    assert p_view(golden, s) == s
    assert o_view(golden, s) == s


def test_p_view_resets_at_initial(golden):
    s = seq(golden, (0, Y, T), (1, W), (0, Y, S))
    assert p_view(golden, s) == seq(golden, (0, Y, S))
    assert o_view(golden, s) == s


def test_p_view_erases_dead_tags(golden):
    s4 = seq(golden, (0, Y, X), (1, U, V), (0, Y, X1), (3, U1, V1))
    # the last two moves form the whole P-view; without the first two moves
    # in the history their copies were never spawned, so the view plays the
    # untagged originals
    assert p_view(golden, s4) == seq(golden, (0, Y, X), (1, U, V))
    assert o_view(golden, s4) == s4


# ---------------------------------------------------------------------------
# positions
# ---------------------------------------------------------------------------

def test_position_accepts_banged_unit(golden):
    assert check_position(golden, seq(golden, (0, Y, T), (1, W), (0, Y, S)))


def test_position_alternation(golden):
    rep = check_position(golden, seq(golden, (0, Y, T), (0, Y, S), (1, W)))
    assert not rep and rep.axiom == "alternation"
    rep = check_position(
        golden, seq(golden, (0, Y, X), (1, W), (0, Y, Z1), (0, Y, X2)))
    assert not rep and rep.axiom == "alternation"


def test_position_accepts_copy_dialogue(golden):
    s4 = seq(golden, (0, Y, X), (1, U, V), (0, Y, X1), (3, U1, V1))
    assert check_position(golden, s4)


def test_position_recursive_alternation():
    a = build(parse_expr("Bot[1] * Bot[2] -o[5] Bot[3] * Bot[4]"))
    s = seq(a, (0, L(5), L(4)), (1, L(2)), (0, L(5), L(3)), (3, L(1)))
    assert check_justified(a, s)
    rep = check_position(a, s)
    assert not rep and rep.axiom == "alternation"


def test_position_joker():
    a = build(parse_expr("One[1] -o[2] One[3]"))
    s = seq(a, (0, L(2), L(3)), (1, L(1)))
    assert check_justified(a, s)
    rep = check_position(a, s)
    assert not rep and rep.axiom == "joker" and rep.index == 1


VIS_SRC = "((!Bot[1] -o[2] Bot[3]) -o[4] (Bot[5] -o[6] Bot[7])) -o[8] Bot[9]"


def test_position_invisible_justifier():
    a = build(parse_expr(VIS_SRC))
    e1 = L(1).tagged((1, 1))
    good = seq(a, (0, L(8), L(9)), (1, L(4), L(6), L(7)), (2, L(2), L(3)),
               (3, L(1)), (2, L(5)))
    assert check_position(a, good)
    bad = seq(a, (0, L(8), L(9)), (1, L(4), L(6), L(7)), (2, L(2), L(3)),
              (3, L(1)), (2, L(5)), (3, e1))
    assert check_justified(a, bad)
    rep = check_position(a, bad)
    # the replayed copy answers a justifier that has dropped out of every
    # view; the copy-split of the domain also breaks down, which is what the
    # checker notices first
    assert not rep and rep.axiom in ("alternation", "visibility")


# ---------------------------------------------------------------------------
# combinatorial sequents
# ---------------------------------------------------------------------------

# a -o_b !((c -o_d !e) -o_f (g -o_h !i)) & (m & n -o_j p & q) -o_k l
SEQ_SRC = ("Bot[1] -o[2] "
           "!((Bot[3] -o[4] !Bot[5]) -o[6] (Bot[7] -o[8] !Bot[9]))"
           " & (Bot[13] & Bot[14] -o[10] Bot[11] & Bot[12]) -o[15] Bot[16]")


@pytest.fixture
def sq():
    return CombSequent(build(parse_expr(SEQ_SRC)), frozenset({L(6), L(10)}))


def test_sequent_validates(sq):
    assert validate_sequent(sq)


def test_sequent_mirror_pairing(sq):
    inv = cut_mirror(sq, L(6))
    assert inv[L(8)] == L(4) and inv[L(9)] == L(5) and inv[L(3)] == L(7)
    assert inv[L(4)] == L(8)
    inv = cut_mirror(sq, L(10))
    assert inv[L(13)] == L(11) and inv[L(14)] == L(12)


def test_sequent_rejects_deep_intensionality(sq):
    rep = validate_sequent(CombSequent(sq.base, frozenset({L(6), L(4)})))
    assert not rep and rep.axiom == "sequent-1"


def test_sequent_rejects_alpha2_escape(sq):
    rep = validate_sequent(CombSequent(sq.base, frozenset({L(6)})))
    assert not rep and rep.axiom == "sequent-3"


def test_sequent_small_example():
    good = build(parse_expr("(Bot[1] -o[2] Bot[3]) * (Top -o[4] Top) -o[5] Bot[6]"))
    assert validate_sequent(CombSequent(good, frozenset({L(2), L(4)})))
    bad = build(parse_expr("(Bot[1] -o[2] Bot[3] * (Top -o[4] Top)) -o[5] Bot[6]"))
    rep = validate_sequent(CombSequent(bad, frozenset({L(2), L(4)})))
    assert not rep and rep.axiom == "sequent-1"


def _seq_pos(sq, *steps):
    return seq(sq.base, *steps)


def test_sequent_position_copycat(sq):
    s = _seq_pos(sq, (0, L(2), L(15), L(16)), (1, L(6), L(8), L(9)),
                 (2, L(4), L(5)), (3, L(3)), (2, L(7)), (1, L(1)))
    assert check_position(sq, s)


def test_sequent_position_dropped_answer(sq):
    s = _seq_pos(sq, (0, L(2), L(15), L(16)), (1, L(6), L(8), L(9)),
                 (2, L(4), L(5)), (3, L(3)), (1, L(1)))
    rep = check_position(sq, s)
    assert not rep and rep.axiom == "alternation"


def test_sequent_position_wrong_mirror(sq):
    s = _seq_pos(sq, (0, L(2), L(15), L(16)), (1, L(10), L(11)), (2, L(14)))
    rep = check_position(sq, s)
    assert not rep and rep.axiom == "mirror"
    # answering with the paired vertex instead is fine
    s = _seq_pos(sq, (0, L(2), L(15), L(16)), (1, L(10), L(11)), (2, L(13)))
    assert check_position(sq, s)


def test_sequent_positions_need_valid_plain_position(sq):
    # anything rejected on the underlying arena stays rejected
    s = _seq_pos(sq, (0, L(2), L(15), L(16)), (1, L(3)))
    rep = check_position(sq, s)
    assert not rep and rep.axiom == "pointer"


# ---------------------------------------------------------------------------
# building and decomposing sequents
# ---------------------------------------------------------------------------

def test_build_sequent_empty():
    s = build_sequent([], [], Bot(1))
    assert s.intens == frozenset()
    assert isomorphic(s.base, build(parse_expr("Top -o Top -o Bot[1]")))


def test_build_sequent_collects_cut_switches():
    cut = parse_expr("(Bot[1] -o[2] Bot[3]) * (Top -o[4] Top)")
    s = build_sequent([Bot(7)], [cut], Bot(6))
    assert s.intens == frozenset({L(2), L(4)})
    assert validate_sequent(s)


def test_build_sequent_rejects_shape_mismatch():
    with pytest.raises(ValueError):
        build_sequent([], [parse_expr("Bot[1] -o[2] One[3]")], Bot(4))


def test_build_sequent_needs_cut_labels():
    with pytest.raises(ValueError):
        build_sequent([], [Lolli(Bot(1), Bot(2))], Bot(3))


def _fresh_copy(e, counter):
    from arena_kernel.arena import Bang, Neg, One, Top as TopE, With
    if isinstance(e, TopE):
        return TopE()
    if isinstance(e, One):
        return One(L(next(counter)))
    if isinstance(e, Neg):
        return Neg(_fresh_copy(e.arg, counter), L(next(counter)))
    if isinstance(e, Bang):
        return Bang(_fresh_copy(e.arg, counter))
    if isinstance(e, Tensor):
        return Tensor(_fresh_copy(e.left, counter), _fresh_copy(e.right, counter))
    if isinstance(e, With):
        return With(_fresh_copy(e.left, counter), _fresh_copy(e.right, counter))
    return Lolli(_fresh_copy(e.left, counter), _fresh_copy(e.right, counter),
                 L(next(counter)))


def _flat(e):
    if isinstance(e, Top):
        return []
    if isinstance(e, Tensor):
        return _flat(e.left) + _flat(e.right)
    return [e]


def test_build_decompose_sequent_round_trip():
    import itertools
    rng = random.Random(17)
    for _ in range(100):
        counter = itertools.count(1)
        gamma = [_fresh_copy(random_expr(rng, 4), counter)
                 for _ in range(rng.randint(0, 2))]
        cuts = []
        for _ in range(rng.randint(0, 2)):
            half = random_expr(rng, 3)
            cuts.append(Lolli(_fresh_copy(half, counter),
                              _fresh_copy(half, counter), L(next(counter))))
        b = _fresh_copy(random_expr(rng, 4), counter)
        s = build_sequent(gamma, cuts, b)
        assert validate_sequent(s), validate_sequent(s).detail
        g2, c2, b2 = decompose_sequent(s)

        # degenerate Top branches vanish when an expression is built, so
        # compare the arenas the expressions denote, not the expressions
        def canon(es):
            out = [arena_canonical_string(build(x))
                   for e in es for x in _flat(e)]
            return sorted(c for c in out if c != arena_canonical_string(build(Top())))

        assert canon(g2) == canon(gamma)
        assert canon(c2) == canon(cuts)
        assert arena_canonical_string(build(b2)) == arena_canonical_string(build(b))


# ---------------------------------------------------------------------------
# position enumeration
# ---------------------------------------------------------------------------

N_SRC = "!(Bot[1] -o[2] Bot[3]) * Bot[4] -o[5] Bot[6]"


def test_enumerate_trivial():
    assert enumerate_positions(build(Top()), 4) == [JustSeq((), ())]
    bot = build(Bot(1))
    got = enumerate_positions(bot, 4)
    assert len(got) == 2
    assert seq(bot, (0, L(1))) in got


def test_enumerate_counting_arena():
    a = build(parse_expr(N_SRC))
    q0, yes, q, no = (0, L(5), L(6)), (1, L(2), L(3)), (2, L(1)), (1, L(4))
    yes1 = (1, L(2).tagged((2, 1)), L(3).tagged((2, 1)))
    expected = {
        seq(a),
        seq(a, q0),
        seq(a, q0, yes),
        seq(a, q0, no),
        seq(a, q0, yes, q),
        seq(a, q0, yes, q, yes1),
        seq(a, q0, yes, q, (1, L(4))),
    }
    assert set(enumerate_positions(a, 4)) == expected


def test_enumerate_exponential_free_is_stable():
    a = build(parse_expr("Bot[1] * Bot[2] -o[5] Bot[3] * Bot[4]"))
    six = set(enumerate_positions(a, 6))
    eight = set(enumerate_positions(a, 8))
    assert six == eight


def test_views_of_positions_are_positions(golden):
    arenas = [
        (build(parse_expr(N_SRC)), 6),
        (build(parse_expr(VIS_SRC)), 5),
        (golden, 3),
    ]
    for a, depth in arenas:
        for s in enumerate_positions(a, depth):
            pv, ov = p_view(a, s), o_view(a, s)
            assert check_position(a, pv), "%s -> %s" % (s, pv)
            assert check_position(a, ov), "%s -> %s" % (s, ov)


def test_sequent_views_closure(sq):
    s = _seq_pos(sq, (0, L(2), L(15), L(16)), (1, L(6), L(8), L(9)),
                 (2, L(4), L(5)), (3, L(3)), (2, L(7)), (1, L(1)))
    assert check_position(sq, p_view(sq.base, s))
    assert check_position(sq, o_view(sq.base, s))
