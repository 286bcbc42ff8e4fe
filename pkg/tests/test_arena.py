import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from arena_kernel.arena import (
    Arena, Bang, Bot, ExpForest, Imp, Lolli, Neg, One, Par, Plus, Tensor, Top,
    TOP, With, arena_canonical_string, bang, build, decompose, isomorphic,
    parse_expr, random_expr, validate,
)
from arena_kernel.forest import L, RootedForest, forest_of_edges

X, Y, Z, S, T, U, V, W = (L(i) for i in range(1, 9))

GOLDEN_SRC = "!One[8] -o[2] (!(One[3] & !Neg[1] (Top -o[6] !!Bot[7])) & Bot[5]) * Bot[4]"


def golden_arena():
    return build(parse_expr(GOLDEN_SRC))


def exp_shape(a):
    """Serial-independent view of the exponential forest."""
    e = a.exp
    return sorted(
        (tuple(sorted(e.sets[i])),
         tuple(sorted(e.sets[e.parent[i]])) if i in e.parent else ())
        for i in e.sets
    )


def test_golden_carrier_and_mult():
    a = golden_arena()
    assert a.carrier == forest_of_edges((X, U), (X, V), (Y, W), isolated=[Z, S, T])
    assert a.mult == forest_of_edges((Y, X), (Y, Z), (Y, S), (Y, T), (U, V),
                                     isolated=[W])


def test_golden_additives():
    a = golden_arena()
    assert a.add0 == {Z, W}
    assert a.add2 == {frozenset(p) for p in [(X, Z), (X, T), (Z, T)]}


def test_golden_exponential():
    a = golden_arena()
    assert exp_shape(a) == sorted([
        ((X, Z), ()), ((X,), (X, Z)),
        ((V,), ()), ((V,), (V,)),
        ((W,), ()),
    ])


def test_golden_validates():
    assert validate(golden_arena())


def test_golden_moves():
    a = golden_arena()
    moves = {str(m): m.polarity for m in a.moves()}
    assert moves == {"2.1": "O", "2.3": "O", "2.4": "O", "2.5": "O",
                     "6.7": "P", "8": "P"}


def test_golden_switching():
    a = golden_arena()
    assert {v for v in a.vertices if a.is_switching(v)} == {Y, U}


def test_golden_decompose_round_trip():
    a = golden_arena()
    e = decompose(a)
    assert isomorphic(build(e), a)
    # and the exact expression has the right shape
    s = arena_canonical_string(a)
    assert s == "L(!(1),*(&(!(&(!(N(L(T,!(!(N(T)))))),1)),N(T)),N(T)))"


def test_bad_alpha2_rejected():
    a = golden_arena()
    bad = Arena(a.carrier, a.mult, a.add0,
                {frozenset(p) for p in [(X, Z), (Z, T), (S, T)]}, a.exp)
    rep = validate(bad)
    assert not rep
    assert rep.axiom.startswith("arena-")
    assert "1" in rep.axiom or "2" in rep.axiom


def test_bad_exp_rejected():
    a = golden_arena()
    bad = Arena(a.carrier, a.mult, a.add0, a.add2,
                ExpForest({1: frozenset({S, T})}))
    rep = validate(bad)
    assert not rep
    assert rep.axiom == "arena-3"


def test_structural_rejections():
    f = forest_of_edges((X, U))
    # mult vertices must equal carrier vertices
    assert validate(Arena(f, RootedForest({X}), (), ())).axiom == "multiplicative-1"
    # mult edges must join carrier siblings
    assert validate(Arena(f, f, (), ())).axiom == "multiplicative-2"
    iso2 = RootedForest({X, U})
    # alpha0 on a non-leaf
    assert validate(Arena(f, iso2, {X}, ())).axiom == "additive-0"
    ok = validate(Arena(f, iso2, {U}, ()))
    assert ok
    # alpha2 must join mult siblings
    g = RootedForest({X, U, Z})
    mu = forest_of_edges((X, U), isolated=[Z])
    bad = Arena(g, mu, (), {frozenset({U, Z})})
    assert validate(bad).axiom == "additive-2"
    # exp roots must be disjoint
    e = ExpForest({1: frozenset({X}), 2: frozenset({X})})
    assert validate(Arena(iso2, iso2, (), (), e)).axiom == "exponential"


def test_empty_arena():
    assert validate(TOP)
    assert TOP.size() == 0
    assert decompose(TOP) == Top()


def test_parse_precedence():
    e = parse_expr("One[1] * One[2] & One[3] -o One[4] -o One[5]")
    assert isinstance(e, Lolli)
    assert isinstance(e.right, Lolli)
    w = e.left
    assert isinstance(w, With) and isinstance(w.left, Tensor)


def test_parse_imp_sugar():
    e = parse_expr("One[1] => Bot[2]")
    assert e == Lolli(Bang(One(L(1))), Neg(Top(), L(2)))


def test_parse_errors():
    with pytest.raises(SyntaxError):
        parse_expr("One[1] *")
    with pytest.raises(SyntaxError):
        parse_expr("moo")
    with pytest.raises(ValueError):
        build(parse_expr("One[1] * One[1]"))


def test_derived_connectives_validate():
    for e in [Par(One(L(1)), Bot(2), 3, 4, 5),
              Plus(One(L(1)), Bot(2), 3, 4, 5),
              Imp(One(L(1)), Bot(2), 3)]:
        a = build(e)
        assert validate(a)
        assert isomorphic(build(decompose(a)), a)


SMALL = [
    "Top", "One[1]", "Bot[1]", "!One[1]", "!Bot[1]",
    "One[1] * One[2]", "One[1] & One[2]",
    "One[1] * Bot[2]", "One[1] & Bot[2]",
    "One[1] -o One[2]", "One[1] => One[2]",
    "Bot[1] -o Bot[2]", "Top -o One[1]",
    "Neg[1] One[2]", "Neg[1] Neg[2] Top", "!!One[1]",
    "!(One[1] * One[2])", "!One[1] * !One[2]",
    "!(One[1] & One[2])", "!One[1] & !One[2]",
]


def test_small_arenas_pairwise_distinct():
    arenas = [build(parse_expr(s)) for s in SMALL]
    for a in arenas:
        assert validate(a)
    for i, j in itertools.combinations(range(len(SMALL)), 2):
        assert not isomorphic(arenas[i], arenas[j]), (SMALL[i], SMALL[j])


# ---------------------------------------------------------------------------
# brute-force isomorphism oracle
# ---------------------------------------------------------------------------

def _exp_canon(e, f):
    def tree(i):
        return (tuple(sorted(f(v) for v in e.sets[i])),
                tuple(sorted(tree(c) for c in e.children(i))))
    return tuple(sorted(tree(r) for r in e.roots()))


def brute_iso(a, b):
    va, vb = sorted(a.vertices), sorted(b.vertices)
    if len(va) != len(vb):
        return False
    for perm in itertools.permutations(vb):
        f = dict(zip(va, perm))
        g = lambda v: f[v]
        if a.carrier.relabel(f) != b.carrier:
            continue
        if a.mult.relabel(f) != b.mult:
            continue
        if {g(v) for v in a.add0} != b.add0:
            continue
        if {frozenset(map(g, p)) for p in a.add2} != b.add2:
            continue
        if _exp_canon(a.exp, g) != _exp_canon(b.exp, lambda v: v):
            continue
        return True
    return False


ORACLE_SRCS = [
    "Top", "One[1]", "Bot[1]", "!One[1]", "One[1] * One[2]", "One[1] & One[2]",
    "One[1] -o One[2]", "Top -o One[1]", "Neg[1] One[2]", "!!Bot[1]",
    "!(One[1] * Bot[2])", "Bot[1] * One[2]", "One[2] & One[3]",
    "One[2] -o One[9]", "Bot[4]", "!One[7]",
]


def test_iso_matches_brute_force():
    arenas = [build(parse_expr(s)) for s in ORACLE_SRCS]
    for i in range(len(arenas)):
        for j in range(i, len(arenas)):
            a, b = arenas[i], arenas[j]
            if max(len(a.vertices), len(b.vertices)) > 5:
                continue
            assert isomorphic(a, b) == brute_iso(a, b), (ORACLE_SRCS[i], ORACLE_SRCS[j])


def test_iso_invariant_under_relabeling():
    rng = random.Random(7)
    for k in range(25):
        a = build(random_expr(rng, 8))
        shift = {v: L(v.base + 100) for v in a.vertices}
        assert isomorphic(a, a.relabel(shift))


def test_random_round_trips():
    rng = random.Random(42)
    for k in range(60):
        e = random_expr(rng, 10)
        a = build(e)
        assert validate(a), str(e)
        e2 = decompose(a)
        b = build(e2)
        assert isomorphic(a, b), str(e)
        assert arena_canonical_string(a) == arena_canonical_string(b)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_round_trip_property(seed):
    rng = random.Random(seed)
    e = random_expr(rng, 9)
    a = build(e)
    assert validate(a)
    assert isomorphic(build(decompose(a)), a)


def test_bang_is_idempotent_on_exp_root_set_only():
    a = build(parse_expr("One[1] * One[2]"))
    ba = bang(a)
    assert validate(ba)
    assert exp_shape(ba) == [((L(1), L(2)), ())]
    bba = bang(ba)
    assert exp_shape(bba) == sorted([((L(1), L(2)), ()),
                                     ((L(1), L(2)), (L(1), L(2)))])


def test_moves_cover_vertices_once():
    rng = random.Random(3)
    for _ in range(20):
        a = build(random_expr(rng, 10))
        moves = a.moves()
        ends = [m.path[-1] for m in moves]
        assert sorted(ends) == sorted(v for v in a.vertices if a.mult.is_leaf(v))
        assert {v for m in moves for v in m.path} == a.vertices
