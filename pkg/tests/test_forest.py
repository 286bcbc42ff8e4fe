import itertools

import pytest
from hypothesis import given, strategies as st

from arena_kernel.forest import (
    EMPTY_FOREST,
    L,
    Label,
    RootedForest,
    disjoint_union,
    enumerate_forests,
    forest_of_edges,
)

# the forest of the running multiplicative-structure example:
# x with children u, v; y with child w; z, s, t isolated roots
X, Y, Z, S, T, U, V, W = (L(i) for i in range(1, 9))
F_EX = forest_of_edges((X, U), (X, V), (Y, W), isolated=[Z, S, T])


def test_depth_roots_zero():
    for r in F_EX.roots:
        assert F_EX.depth(r) == 0


def test_depth_example():
    assert F_EX.depth(U) == 1


def test_depth_chain():
    a, b, c = L(1), L(2), L(3)
    f = forest_of_edges((a, b), (b, c))
    assert f.depth(c) == 2


def test_depth_unknown_vertex():
    with pytest.raises(KeyError):
        F_EX.depth(L(99))


def test_restrict_rooted_empty():
    assert F_EX.restrict_rooted(set()) == EMPTY_FOREST


def test_restrict_rooted_x():
    fx = F_EX.restrict_rooted({X})
    assert fx.vertices == {X, U, V}
    assert fx.roots == {X}


def test_restrict_rooted_identity():
    assert F_EX.restrict_rooted(F_EX.roots) == F_EX


def test_induced_identity():
    assert F_EX.induced(F_EX.vertices) == F_EX


def test_induced_chain_gap():
    a, b, c = L(1), L(2), L(3)
    f = forest_of_edges((a, b), (b, c))
    g = f.induced({a, c})
    assert g.roots == {a, c} and not g.parent


def test_induced_uvw():
    g = F_EX.induced({U, V, W})
    assert g.roots == {U, V, W}


def test_graft():
    s = L(9)
    assert RootedForest().graft(s).vertices == {s}
    g = RootedForest({L(1), L(2)}).graft(s)
    assert g.roots == {s} and g.children(s) == (L(1), L(2))
    with pytest.raises(ValueError):
        F_EX.graft(X)


def test_graft_depth_shift():
    g = F_EX.graft(L(9))
    for v in F_EX.vertices:
        assert g.depth(v) == F_EX.depth(v) + 1


def test_fraternal():
    assert not F_EX.is_fraternal(set())
    assert F_EX.is_fraternal({Z})
    assert F_EX.is_fraternal({X, Y, Z, S, T})
    assert F_EX.is_fraternal({U, V})
    assert not F_EX.is_fraternal({U, W})  # different parents


def test_disjoint_union_freshens():
    f = RootedForest({L(1)})
    g, ren = disjoint_union(f, f)
    assert len(g) == 2
    assert L(1) in g.vertices


def test_union_conflict():
    f = forest_of_edges((L(1), L(2)))
    g = forest_of_edges((L(3), L(2)))
    with pytest.raises(ValueError):
        f.union(g)


def test_descending_maximal_paths():
    paths = {tuple(p) for p in F_EX.descending_maximal_paths()}
    assert paths == {(X, U), (X, V), (Y, W), (Z,), (S,), (T,)}


def test_enumerate_counts():
    # number of rooted forests on exactly n vertices: 1, 1, 2, 4, 9, 20, 48
    by_n = {}
    for f in enumerate_forests(6):
        by_n.setdefault(len(f), []).append(f)
    counts = [len(by_n.get(n, [])) for n in range(7)]
    assert counts == [1, 1, 2, 4, 9, 20, 48]


def test_enumerate_cap():
    with pytest.raises(ValueError):
        list(enumerate_forests(20))


def test_enumerate_distinct_canonical():
    seen = set()
    for f in enumerate_forests(5):
        s = f.canonical_string()
        assert s not in seen
        seen.add(s)


def _random_forest(draw_parents):
    n = len(draw_parents) + 1
    parent = {}
    for i, p in enumerate(draw_parents, start=2):
        if p:
            parent[L(i)] = L((i - 2) % (i - 1) + 1 if p is True else p)
    return RootedForest({L(i) for i in range(1, n + 1)}, parent)


@st.composite
def forests(draw, max_n=7):
    n = draw(st.integers(min_value=0, max_value=max_n))
    parent = {}
    for i in range(2, n + 1):
        choice = draw(st.integers(min_value=0, max_value=i - 1))
        if choice:
            parent[L(i)] = L(choice)
    return RootedForest({L(i) for i in range(1, n + 1)}, parent)


@given(forests())
def test_canonical_is_isomorphism_invariant(f):
    # relabel by a reversal permutation; canonical strings must agree
    perm = {v: L(len(f) + 1 - v.base) for v in f.vertices}
    g = f.relabel(perm)
    assert f.canonical_string() == g.canonical_string()
    assert f.isomorphic(g)


def _brute_isomorphic(f, g):
    if len(f) != len(g):
        return False
    vs_f, vs_g = sorted(f.vertices), sorted(g.vertices)
    for perm in itertools.permutations(vs_g):
        m = dict(zip(vs_f, perm))
        if all(
            (m.get(f.parent_of(v)) if f.parent_of(v) else None) == g.parent_of(m[v])
            for v in vs_f
        ):
            return True
    return False


@given(forests(max_n=5), forests(max_n=5))
def test_canonical_matches_brute_force(f, g):
    assert f.isomorphic(g) == _brute_isomorphic(f, g)


def test_label_core_and_tags():
    v = L(3, (2, 1), (5, 2))
    assert v.core == L(3)
    assert str(v) == "3{2,1}{5,2}"
    assert v.tagged((1, 1)).tags[-1] == (1, 1)
