from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psl2skel.group import (SIGMA1, SIGMA2, SL2, Braid, CyclicWord, Gamma, NotSimple, X,
                            XY, Y, conjugator_to_xy, degree6, degree12, is_conjugate,
                            is_simple, lift_simple, matrix_to_gamma, normalize, to_matrix)

words = st.text(alphabet="XxY", max_size=20)


def sign_equal(a: SL2, b: SL2) -> bool:
    return a == b or a == -b


def test_relators():
    assert normalize("XXX").is_identity()
    assert normalize("YY").is_identity()
    assert normalize("XYYXX").is_identity()
    assert (X * X * X).is_identity()
    assert (XY * XY.inverse()).is_identity()
    assert (X * Gamma("x")).is_identity()


def test_power_and_matrix():
    g = XY ** 5
    assert g.word == "XY" * 5
    assert sign_equal(to_matrix(g), SL2(1, 5, 0, 1))
    assert sign_equal(to_matrix(XY), SL2(1, 1, 0, 1))
    assert sign_equal(to_matrix(X), SL2(-1, 1, -1, 0))
    assert sign_equal(to_matrix(Gamma()), SL2(1, 0, 0, 1))
    m = to_matrix(Y)
    assert m * m == SL2(-1, 0, 0, -1)


def test_parse_powers_and_errors():
    assert Gamma.parse("(XY)^-3YX") == (XY ** -3) * Y * X
    assert Gamma.parse("X^2 Y X^-1") == Gamma("xYx")
    with pytest.raises(ValueError, match="column"):
        Gamma.parse("X(Y")
    with pytest.raises(ValueError):
        Gamma.parse("XZ")


def test_degrees():
    assert degree6(XY) == 1
    assert degree12(SL2(-1, 0, 0, -1)) == 6
    assert Braid.parse("s1 s2 s1").degree == 3
    assert SIGMA1.degree == 1


def test_lift_simple():
    m, b = lift_simple(XY)
    assert m == SL2(1, 1, 0, 1) and b == SIGMA1
    assert lift_simple(Gamma.parse("X^2YX^2"))[1] == SIGMA2
    with pytest.raises(NotSimple):
        lift_simple(Gamma())


def test_conjugacy():
    assert not is_simple(XY ** 2)
    assert not is_conjugate(X, Gamma("x"))
    assert is_conjugate(Gamma("XYx"), Gamma("Y"))


@given(words)
def test_normalize_idempotent_and_matrix_roundtrip(w):
    g = normalize(w)
    assert normalize(g.word) == g
    assert matrix_to_gamma(to_matrix(g)) == g
    assert matrix_to_gamma(-to_matrix(g)) == g
    assert Gamma.parse(str(g)) == g


@given(words, words)
def test_matrix_is_homomorphism_up_to_sign(a, b):
    g, h = normalize(a), normalize(b)
    assert sign_equal(to_matrix(g * h), to_matrix(g) * to_matrix(h))
    assert (g * h) * g.inverse() == g * (h * g.inverse())


@given(words)
def test_random_conjugates_of_xy_are_simple(w):
    g = normalize(w)
    c = XY.conjugate(g)
    assert is_simple(c)
    h = conjugator_to_xy(c)
    assert XY.conjugate(h) == c
    m, b = lift_simple(c)
    assert m.trace() == 2 and degree12(m) == 1 and b.degree == 1
    assert b.image == c and b.to_sl2() == m


def test_normal_form_is_shortest():
    # every word of length <= 6 has a normal form no longer than any word for it
    best: dict[Gamma, int] = {}
    for n in range(7):
        for w in itertools.product("XxY", repeat=n):
            g = normalize(w)
            best.setdefault(g, n)
    for g, n in best.items():
        assert len(g) == n


def test_conjugacy_against_brute_force():
    elems = {normalize(w) for n in range(5) for w in itertools.product("XxY", repeat=n)}
    conj = [normalize(w) for n in range(7) for w in itertools.product("XxY", repeat=n)]
    elems = sorted(elems, key=lambda g: g.word)
    rng = random.Random(0)
    for g, h in (rng.sample(elems, 2) for _ in range(300)):
        brute = any(g.conjugate(c) == h for c in conj)
        assert is_conjugate(g, h) == brute, (g, h)
        assert (CyclicWord.of(g) == CyclicWord.of(h)) == brute


@settings(max_examples=200)
@given(st.lists(st.sampled_from([1, 2, -1, -2]), max_size=30))
def test_braid_words_roundtrip(w):
    b = Braid.from_word(w)
    assert Braid.from_word(b.word()) == b
    assert Braid.parse(str(b)) == b
    assert degree6(b.image) == b.degree % 6
    assert degree12(b.to_sl2()) == b.degree % 12


def test_braid_relation_and_center():
    assert SIGMA1 * SIGMA2 * SIGMA1 == SIGMA2 * SIGMA1 * SIGMA2
    delta2 = (SIGMA1 * SIGMA2) ** 3
    assert delta2.image.is_identity() and delta2.degree == 6
    # the kernel of B3 -> SL(2,Z) is generated by the square of this twist
    assert delta2.to_sl2() == SL2(-1, 0, 0, -1)
    assert (delta2 ** 2).to_sl2() == SL2(1, 0, 0, 1)
    assert (SIGMA1 * SIGMA2 * SIGMA1).to_sl2() ** 2 == SL2(-1, 0, 0, -1)
