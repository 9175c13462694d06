"""Worked examples shared by the tests."""

from __future__ import annotations

from psl2skel.factorization import B3, GAMMA, Factorization
from psl2skel.group import Braid, Gamma
from psl2skel.skeleton import CoreGraph, Skeleton, TRIANGLE

T = TRIANGLE

# the two length-2 factorizations with the same monodromy at infinity
LEFT_44 = Factorization(GAMMA, (Gamma.parse("(XY)(X^2YX^-1)(XY)^-1"),
                                Gamma.parse("(YXY)(X^2YX^-1)(YXY)^-1")))
RIGHT_44 = Factorization(GAMMA, (Gamma.parse("X^2YX^-1"),
                                 Gamma.parse("(YXYX^2Y)(X^2YX^-1)(YXYX^2Y)^-1")))
BETA = Braid.parse("s2 s1 s1 S2 s1")
LEFT_44_B3 = Factorization(B3, (Braid.parse("s1 s2 S1"), Braid.parse("s2 s1 s1 s1 s2 S1 S1 S1 S2")))
RIGHT_44_B3 = Factorization(B3, (Braid.parse("s2"), Braid.parse("s2").conjugate(BETA.inverse())))
MINFTY_44_GAMMA = Gamma.parse("YX(XY)^-3YX(XY)^-3")
MINFTY_44_B3 = Braid.parse("s2 s1 s1 s1 s2 S1") ** 2

# k = 0: the two factorizations and their B3 lifts
EXK0_B3 = (
    (Braid.parse("s1 s1 s2 S1 S1"), Braid.parse("s2")),
    (Braid.parse("s1 s2 S1"), Braid.parse("S1 s2 s1")),
)

# A generalized pseudo-tree with infinity distances (6, 9, 4): four loops
# joined by a tree, with white and black leaves and three open slots.
# Frozen here by hand so that the check does not depend on the builder.
GTREE_OP = (T, 1, 3, 2, 6, 7, 4, 5, T, 10, 9, 13, T, 11, 16, 19, 14, 18, 17, 15)
GTREE_NX = (2, 0, 1, 5, 3, 4, 6, 9, 7, 8, 12, 10, 11, 15, 13, 14, 17, 18, 16, 19)
GTREE = CoreGraph(Skeleton(GTREE_OP, GTREE_NX, "core"), 12)
GTREE_DISTANCES = (6, 9, 4)

# Table of T(k) and pointed counts for k = 0..10
TABLE_T = (1, 1, 1, 1, 4, 6, 19, 49, 150, 442, 1424)
TABLE_T_TILDE = (2, 3, 7, 19, 56, 174, 561, 1859, 6292, 21658, 75582)
