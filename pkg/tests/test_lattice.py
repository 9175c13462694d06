from __future__ import annotations

import random

import pytest

from psl2skel.factorization import SL2_TAG, from_tree, global_conjugate
from psl2skel.group import SL2
from psl2skel.intmat import det, mat_mul, transpose
from psl2skel.lattice import (IntLattice, Indefinite, RankTooLarge, build_form,
                              colored_lattice, coloring_fingerprints, complement_lattice,
                              inverse_move, isometric, named_lattice, reduce,
                              transcendental_lattice, transition_matrix)
from psl2skel.trees import enumerate_classes, enumerate_marked


def random_unimodular(n: int, rng: random.Random) -> list[list[int]]:
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i != j:
            c = rng.randint(-2, 2)
            m[i] = [x + c * y for x, y in zip(m[i], m[j])]
    return m


def test_build_form_small():
    assert build_form([]).ambient_rank == 0
    f = build_form([SL2(1, 1, 0, 1)])
    assert f.chi == ((0, 1), (0, 0))
    # q(x) = -det(x | M x) for x = (a, b): -(a (a + b) ... ) evaluated by hand
    for a in range(-3, 4):
        for b in range(-3, 4):
            mx = (a + b, b)
            assert f.qvalue((a, b)) == -(a * mx[1] - b * mx[0])
    assert f.parity_holds()


def test_parity_on_random_pairs():
    rng = random.Random(0)
    ts = list(enumerate_marked(3))
    for _ in range(20):
        e = list(from_tree(rng.choice(ts), rng.randrange(19), SL2_TAG).entries)
        form = build_form(e)
        assert form.parity_holds()
        n = form.ambient_rank
        for _ in range(50):
            x = [rng.randint(-9, 9) for _ in range(n)]
            y = [rng.randint(-9, 9) for _ in range(n)]
            s = [a + b for a, b in zip(x, y)]
            cx, cy = form.chi_of(x), form.chi_of(y)
            lhs = form.qvalue(s) - form.qvalue(x) - form.qvalue(y)
            assert (lhs - (cx[0] * cy[1] - cx[1] * cy[0])) % 2 == 0


def test_named_lattices():
    assert named_lattice("D", 0).rank == 0
    assert named_lattice("D", 2).gram == ((2, 0), (0, 2))
    assert isometric(IntLattice([[2, 0], [0, 2]]), named_lattice("D", 2))
    assert not isometric(named_lattice("D", 4), named_lattice("A", 4))
    assert named_lattice("D", 4).det == 4 and named_lattice("A", 4).det == 5
    with pytest.raises(Indefinite):
        isometric(IntLattice([[1, 0], [0, -1]]), IntLattice([[1, 0], [0, -1]]))
    with pytest.raises(RankTooLarge):
        isometric(named_lattice("A", 9), named_lattice("A", 9))


def test_isometry_under_base_change():
    rng = random.Random(5)
    for name, k in (("A", 3), ("D", 4), ("D", 5), ("A", 6), ("D", 8)):
        lat = named_lattice(name, k)
        u = random_unimodular(k, rng)
        moved = IntLattice(mat_mul(mat_mul(u, lat.gram), transpose(u)))
        assert isometric(lat, moved)
        assert reduce(moved).det == lat.det


def test_transcendental_lattices_small():
    for k in range(0, 9):
        c = enumerate_classes(k)[0]
        lat = transcendental_lattice(from_tree(c.tree(), 0, SL2_TAG))
        expect_rank = k if k % 2 == 0 else k - 1
        assert lat.rank == expect_rank
        if k % 2 == 0:
            assert isometric(lat, named_lattice("D", k))
        else:
            s = (k + 1) // 2
            assert isometric(lat, complement_lattice([3] * s + [1] * (s - 1)))


def test_rank_bookkeeping():
    from psl2skel.intmat import smith_invariants
    from psl2skel.lattice import kernel_gram
    for t in enumerate_marked(3):
        e = list(from_tree(t, 1, SL2_TAG).entries)
        form = build_form(e)
        k, g = kernel_gram(form)
        image_rank = len(smith_invariants([list(r) for r in form.chi]))
        radical = len(g) - len(smith_invariants(g))
        lat = transcendental_lattice(e)
        assert lat.rank + radical + image_rank == form.ambient_rank


def test_transition_map_and_conjugation():
    rng = random.Random(9)
    for _ in range(30):
        k = rng.randint(0, 4)
        e = list(from_tree(rng.choice(list(enumerate_marked(k))), 0, SL2_TAG).entries)
        i = rng.randint(1, len(e) - 1)
        p = transition_matrix(e, i)
        e2 = inverse_move(e, i)
        f, f2 = build_form(e), build_form(e2)
        assert abs(det(p)) == 1
        assert mat_mul([list(r) for r in f.chi], p) == [list(r) for r in f2.chi]
        pq = mat_mul(mat_mul(transpose(p), f.polar()), p)
        assert pq == f2.polar()
        n = len(p)
        for j in range(n):
            col = [p[a][j] for a in range(n)]
            assert f.qvalue(col) == f2.qvalue([int(a == j) for a in range(n)])


def test_colorings():
    for k in range(0, 6):
        fps = set()
        for c in enumerate_classes(k)[:4]:
            f = from_tree(c.tree(), 0, SL2_TAG).project()
            fps.update(coloring_fingerprints(f))
            plus = colored_lattice(f.entries, [1] * len(f))
            assert plus == transcendental_lattice(f.lift(SL2_TAG))
        assert len(fps) == 1
    g = from_tree(enumerate_classes(3)[0].tree(), 0, SL2_TAG)
    conj = global_conjugate(g.project(), g.project().entries[0])
    assert coloring_fingerprints(conj) == coloring_fingerprints(g)
