"""Skeletons, admissible trees and braid monodromy factorizations over PSL(2,Z)."""

from __future__ import annotations

from .group import SL2, Braid, CyclicWord, Gamma
from .skeleton import CoreGraph, PointedSkeleton, Skeleton
from .trees import MarkedTree, counts
from .factorization import Factorization, from_tree, hurwitz_move
from .lattice import IntLattice, transcendental_lattice

__version__ = "0.1.0"

__all__ = ["Gamma", "SL2", "Braid", "CyclicWord", "Skeleton", "PointedSkeleton", "CoreGraph",
           "MarkedTree", "counts", "Factorization", "from_tree", "hurwitz_move",
           "IntLattice", "transcendental_lattice"]
