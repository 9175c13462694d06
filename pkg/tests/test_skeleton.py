from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psl2skel.group import Gamma, X, XY, Y, is_simple, normalize
from psl2skel.skeleton import (TRIANGLE, PointedSkeleton, Skeleton, SkeletonError, act,
                               automorphisms, canonical_code, core_membership, evaluate,
                               fiber_product, fold_subgroup, gamma_skeleton, index,
                               is_isomorphic, is_xy_generated, mirror, orbifold_decomposition,
                               pointed_is_isomorphic, pointed_morphism_exists, random_skeleton,
                               stabilizer_basis, validate, walk)
from psl2skel.trees import MarkedTree, pseudo_tree

words = st.text(alphabet="XxY", max_size=12)


def k0() -> PointedSkeleton:
    return pseudo_tree(MarkedTree.from_sequence((2, 2)))


def rebase(p: PointedSkeleton, e: int) -> PointedSkeleton:
    return PointedSkeleton(p.skeleton, e)


def test_validate():
    assert validate({"op": [0, 1, 2], "nx": [1, 2, 0], "kind": "3-regular"}) is not None
    assert validate({"op": [1, 0, 2], "nx": [1, 2, 0], "kind": "3-1"}) is None
    assert validate(k0().skeleton) is None
    with pytest.raises(SkeletonError):
        Skeleton((1, 2, 0), (1, 2, 0))


def test_action_basics():
    p = k0()
    s = p.skeleton
    for e in range(s.size):
        assert act(s, Gamma(), e) == e
        assert act(s, X ** 3, e) == e
    # the outer face of the k=0 pseudo-tree has 4 elements, the two monogons 1 each
    assert sorted(len(f) for f in s.faces()) == [1, 1, 4]
    assert len([e for e in range(s.size) if True]) == 6


@given(words, words)
def test_action_is_a_group_action(a, b):
    s = pseudo_tree(MarkedTree.from_sequence((3, 4, 3, 4))).skeleton
    g, h = normalize(a), normalize(b)
    for e in range(s.size):
        assert act(s, g * h, e) == act(s, g, act(s, h, e))


def test_evaluate_paths():
    assert evaluate([]).is_identity()
    assert evaluate(["nx", "op"] * 3) == XY ** 3
    # basis loop word evaluates to the inverse of a tree factorization entry
    n = 2
    w = ["nx", "op"] * n + ["nx", "op", "nx-1", "nx-1"] + ["op", "nx-1"] * n
    m = (XY ** n) * Gamma.parse("X^2YX^-1") * (XY ** -n)
    assert evaluate(w) == (XY ** n) * Gamma.parse("XYX^-1X^-1") * ((Y * X.inverse()) ** n)
    assert evaluate(w).inverse() == m


def test_walk_convention():
    s = k0().skeleton
    path = ["nx", "op", "nx-1"]
    for e in range(s.size):
        assert walk(s, e, path) == act(s, evaluate(path).inverse(), e)


def test_stabilizer_and_index_of_gamma():
    g = gamma_skeleton()
    basis = stabilizer_basis(g)
    assert set(basis) == {X, Y} or {b.word for b in basis} == {"X", "Y"}
    assert index(g) == 1
    assert orbifold_decomposition(g.skeleton) == (0, 1, 1)


def test_k0_stabilizer_generators():
    p = k0()
    basis = stabilizer_basis(p)
    assert len(basis) == 2 and all(is_simple(b) for b in basis)
    for b in basis:
        assert act(p.skeleton, b, p.base) == p.base


def test_pointed_morphisms():
    p = k0()
    assert pointed_is_isomorphic(p, p)
    assert pointed_morphism_exists(p, gamma_skeleton())
    moved = rebase(p, act(p.skeleton, XY, p.base))
    assert not pointed_is_isomorphic(p, moved)


def test_fiber_products():
    p = k0()
    assert pointed_is_isomorphic(fiber_product(p, p), p)
    assert pointed_is_isomorphic(fiber_product(p, gamma_skeleton()), p)
    q = rebase(p, act(p.skeleton, XY, p.base))
    prod = fiber_product(p, q)
    assert prod.size == 24
    # [G : H n K] is a multiple of both indices and at most their product
    assert prod.size % p.size == 0 and prod.size % q.size == 0
    assert prod.size <= p.size * q.size


def test_fold_torsion_and_trivial():
    c = fold_subgroup([X])
    assert c.skeleton.black() and not is_xy_generated(c)
    c0 = fold_subgroup([])
    assert c0.index() is None


def test_core_membership():
    p = k0()
    gens = stabilizer_basis(p)
    core = fold_subgroup(gens)
    for g in gens:
        assert core_membership(core, g)
    assert core_membership(core, gens[0] * gens[1])
    other = stabilizer_basis(rebase(p, act(p.skeleton, XY, p.base)))
    assert not all(core_membership(core, g) for g in other)


def test_random_roundtrip_fold_and_index():
    rng = random.Random(11)
    for _ in range(200):
        s = random_skeleton(rng.randint(1, 18), rng)
        p = PointedSkeleton(s, rng.randrange(s.size))
        gens = stabilizer_basis(p)
        for g in gens:
            assert act(s, g, p.base) == p.base
        core = fold_subgroup(gens)
        assert core.is_complete()
        assert pointed_is_isomorphic(core.completed(), p)
        assert index(p) == s.size


def _brute_iso(a: Skeleton, b: Skeleton) -> bool:
    if a.size != b.size:
        return False
    for perm in itertools.permutations(range(a.size)):
        if all(perm[a.nx[e]] == b.nx[perm[e]] and
               (a.op[e] == TRIANGLE and b.op[perm[e]] == TRIANGLE or
                a.op[e] != TRIANGLE and b.op[perm[e]] == perm[a.op[e]])
               for e in range(a.size)):
            return True
    return False


def test_canonical_code_against_brute_force():
    rng = random.Random(4)
    pool = [random_skeleton(rng.randint(1, 7), rng) for _ in range(60)]
    for a, b in itertools.combinations(pool[:25], 2):
        assert is_isomorphic(a, b) == _brute_iso(a, b)
    for s in pool:
        perm = list(range(s.size))
        rng.shuffle(perm)
        t = s.relabel(perm)
        assert canonical_code(s) == canonical_code(t)


def test_automorphisms_of_pseudo_trees():
    p = pseudo_tree(MarkedTree.from_sequence((3, 5, 3, 5, 3, 5)))
    assert len(automorphisms(p.skeleton)) == 3
    assert index(p) == 30


def test_mirror_is_involution():
    s = pseudo_tree(MarkedTree.from_sequence((3, 4, 4, 4, 3, 6))).skeleton
    assert is_isomorphic(mirror(mirror(s)), s)


@settings(max_examples=50)
@given(st.integers(min_value=1, max_value=30), st.integers(min_value=0, max_value=10 ** 6))
def test_three_regular_sizes(size, seed):
    rng = random.Random(seed)
    try:
        s = random_skeleton(size, rng, kind="3-regular")
    except SkeletonError:
        return
    assert s.size % 6 == 0
    assert len(stabilizer_basis(PointedSkeleton(s, 0))) == s.size // 6 + 1
