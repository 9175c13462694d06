from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import (EXK0_B3, LEFT_44, LEFT_44_B3, MINFTY_44_GAMMA, RIGHT_44,
                      RIGHT_44_B3)
from psl2skel.factorization import (B3, GAMMA, SL2_TAG, Factorization, IndexOutOfRange,
                                    TagMismatch, abelianization, compare, from_tree,
                                    global_conjugate, hurwitz_move, hurwitz_orbit,
                                    infinity_class, monodromy_at_infinity, monodromy_group,
                                    pi1_presentation, reduce_mod)
from psl2skel.group import SIGMA1, SIGMA2, SL2, Braid, Gamma, XY, normalize
from psl2skel.skeleton import (PointedSkeleton, act, is_xy_generated,
                               pointed_is_isomorphic)
from psl2skel.trees import MarkedTree, enumerate_classes, enumerate_marked, pseudo_tree

K0 = MarkedTree.from_sequence((2, 2))


def test_ex_k0_entries():
    for shift, expected in enumerate(EXK0_B3):
        f = from_tree(K0, shift, B3)
        assert f.entries == expected
    assert from_tree(K0, 0, B3).entries == (SIGMA2.conjugate(SIGMA1 ** -2), SIGMA2)


def test_eq_mg_minfty_and_groups():
    for k in range(5):
        for t in enumerate_marked(k):
            f = from_tree(t, 0, GAMMA)
            assert monodromy_at_infinity(f) == XY ** (-5 * k - 4)
            b = from_tree(t, 0, B3)
            m = monodromy_at_infinity(b)
            assert m == (SIGMA1 * SIGMA2) ** (3 * (k + 1)) * SIGMA1 ** (-5 * k - 4)
            assert m.degree == len(b)
            s = monodromy_at_infinity(from_tree(t, 0, SL2_TAG))
            assert s == -((-SL2(1, 1, 0, 1)) ** (-5 * k - 4))
            core = monodromy_group(f)
            assert is_xy_generated(core)
            p = pseudo_tree(t)
            assert pointed_is_isomorphic(core.completed(), p)


def test_shift_moves_base():
    t = MarkedTree.from_sequence((3, 4, 3, 4))
    p = pseudo_tree(t)
    for s in range(14):
        core = monodromy_group(from_tree(t, s, GAMMA)).completed()
        moved = PointedSkeleton(p.skeleton, act(p.skeleton, XY ** -s, p.base))
        assert pointed_is_isomorphic(core, moved)


def test_moves_and_errors():
    f = from_tree(MarkedTree.from_sequence((3, 3, 3)), 1, B3)
    g = hurwitz_move(hurwitz_move(f, 1), 1, -1)
    assert g == f
    with pytest.raises(IndexOutOfRange):
        hurwitz_move(f, 3)
    with pytest.raises(TagMismatch):
        compare(f, f.project())


def test_lift_project_roundtrip():
    for t in enumerate_marked(3):
        f = from_tree(t, 2, GAMMA)
        assert f.lift(B3).project() == f
        assert f.lift(SL2_TAG).project() == f
        assert hurwitz_move(f.lift(B3), 2).project() == hurwitz_move(f, 2)


def test_text_roundtrip_and_errors():
    for f in (LEFT_44, LEFT_44_B3, from_tree(K0, 1, SL2_TAG)):
        assert Factorization.parse(f.to_text()) == f
    with pytest.raises(ValueError, match="line 1"):
        Factorization.parse("XY; Y")
    with pytest.raises(ValueError, match="entry 2"):
        Factorization.parse("group=gamma\nXY; XQ")


def test_two_loop_pair():
    assert LEFT_44.lift(B3) == LEFT_44_B3 and RIGHT_44.lift(B3) == RIGHT_44_B3
    assert monodromy_at_infinity(LEFT_44) == monodromy_at_infinity(RIGHT_44) == MINFTY_44_GAMMA
    r = compare(LEFT_44, RIGHT_44)
    assert r.same_infinity and not r.conjugate_groups
    assert r.verdict == "not weakly equivalent"


def test_compare_ex_k0():
    a, b = (from_tree(K0, s, B3) for s in (0, 1))
    r = compare(a, b, lattices=True)
    assert r.same_infinity and r.conjugate_groups and not r.same_group_pointed
    assert r.lattice_fingerprints is True
    assert r.verdict.startswith("not strongly equivalent")
    assert compare(a, hurwitz_move(a, 1)).verdict == "indistinguishable by these invariants"


def test_k4_trees_pairwise_not_conjugate():
    fs = [from_tree(c.tree(), 0, GAMMA) for c in enumerate_classes(4)]
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            assert not compare(fs[i], fs[j]).conjugate_groups


def test_abelianization():
    assert abelianization(pi1_presentation(Factorization(B3, ()))) == [0, 0, 0]
    assert abelianization(pi1_presentation(Factorization(B3, (SIGMA1,)))) == [0, 0]
    for k in (2, 3, 4):
        for t in enumerate_marked(k):
            assert abelianization(pi1_presentation(from_tree(t, 0, B3))) == [0]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3), st.integers(0, 10 ** 6), st.lists(st.tuples(st.integers(1, 4), st.sampled_from([1, -1])),
                                                           max_size=8))
def test_strong_invariance(k, seed, moves):
    rng = random.Random(seed)
    t = rng.choice(list(enumerate_marked(k)))
    f = from_tree(t, rng.randrange(5 * k + 4), rng.choice([GAMMA, B3, SL2_TAG]))
    g = f
    for i, d in moves:
        if i < len(g):
            g = hurwitz_move(g, i, d)
    assert monodromy_at_infinity(g) == monodromy_at_infinity(f)
    assert pointed_is_isomorphic(monodromy_group(g), monodromy_group(f))
    assert g.is_simple()


@settings(max_examples=60, deadline=None)
@given(st.text(alphabet="XxY", max_size=10), st.integers(0, 3))
def test_weak_invariance(w, k):
    t = next(iter(enumerate_marked(k)))
    f = from_tree(t, 0, GAMMA)
    g = global_conjugate(f, normalize(w))
    assert infinity_class(g) == infinity_class(f)
    assert compare(f, g).conjugate_groups


def test_orbits_contain_start_and_are_start_independent():
    f = from_tree(MarkedTree.from_sequence((3, 3, 3)), 0, B3)
    start = reduce_mod(f, 7)
    r = hurwitz_orbit(start, 7)
    assert r.complete and r.size > 2 and r.minimum <= start
    other = reduce_mod(hurwitz_move(hurwitz_move(f, 1), 2), 7)
    r2 = hurwitz_orbit(other, 7, jobs=2)
    assert (r2.size, r2.fingerprint) == (r.size, r.fingerprint)
    capped = hurwitz_orbit(start, 7, cap=2)
    assert not capped.complete and capped.fingerprint == "incomplete"


def test_orbit_requires_signs():
    with pytest.raises(TagMismatch):
        reduce_mod(LEFT_44, 5)
