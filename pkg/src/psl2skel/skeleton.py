"""
Finite Gamma-sets as ribbon graphs.

A skeleton is a finite set E = {0..n-1} with an involution ``op`` and a map
``nx`` of order three.  The modular group acts on the left by

    X -> nx^-1,   Y -> op,

so ``act(g, e)`` applies the letters of g from right to left.  Vertices are
nx-orbits, edges are op-orbits and regions are orbits of XY = nx^-1 op.

Fixed points of ``op`` are monovalent white vertices and fixed points of
``nx`` are monovalent black vertices.  Core graphs additionally allow
``op[e] == TRIANGLE``: an open slot standing for an infinite Farey branch.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .group import Gamma, X, Y

__all__ = [
    "TRIANGLE", "THREE_REGULAR", "THREE_ONE", "CORE",
    "Skeleton", "PointedSkeleton", "CoreGraph", "SkeletonError", "NotConnected",
    "act", "evaluate", "validate", "stabilizer_basis", "index",
    "orbifold_decomposition", "canonical_code", "is_isomorphic", "automorphisms",
    "pointed_is_isomorphic", "pointed_morphism_exists", "fiber_product",
    "fold_subgroup", "core_membership", "is_xy_generated", "mirror",
    "random_skeleton", "gamma_skeleton",
]

TRIANGLE = -1

THREE_REGULAR = "3-regular"
THREE_ONE = "3-1"
CORE = "core"
KINDS = (THREE_REGULAR, THREE_ONE, CORE)


class SkeletonError(ValueError):
    """A violated skeleton invariant."""


class NotConnected(SkeletonError):
    pass


@dataclass(frozen=True)
class Skeleton:
    """A pair (op, nx) of maps on {0..size-1}; op may hold TRIANGLE slots."""

    op: tuple[int, ...]
    nx: tuple[int, ...]
    kind: str = THREE_ONE
    _connected: list = field(default_factory=list, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "op", tuple(self.op))
        object.__setattr__(self, "nx", tuple(self.nx))
        problem = _violation(self)
        if problem:
            raise SkeletonError(problem)

    @property
    def size(self) -> int:
        return len(self.op)

    def __len__(self) -> int:
        return len(self.op)

    # -- structure ---------------------------------------------------------

    def nx_inv(self, e: int) -> int:
        return self.nx[self.nx[e]]

    def is_complete(self) -> bool:
        return TRIANGLE not in self.op

    def is_connected(self) -> bool:
        if not self._connected:
            self._connected.append(len(self.component(0)) == self.size if self.size else True)
        return self._connected[0]

    def component(self, start: int) -> list[int]:
        seen = {start}
        todo = [start]
        while todo:
            e = todo.pop()
            for f in (self.op[e], self.nx[e], self.nx_inv(e)):
                if f != TRIANGLE and f not in seen:
                    seen.add(f)
                    todo.append(f)
        return sorted(seen)

    def vertices(self) -> list[tuple[int, ...]]:
        """nx-orbits, each listed in nx order starting from its least element."""
        out, seen = [], set()
        for e in range(self.size):
            if e in seen:
                continue
            orb = [e]
            f = self.nx[e]
            while f != e:
                orb.append(f)
                f = self.nx[f]
            seen.update(orb)
            out.append(tuple(orb))
        return out

    def faces(self) -> list[tuple[int, ...]]:
        """Orbits of XY = nx^-1 op; TRIANGLE slots are treated as op-fixed."""
        out, seen = [], set()
        for e in range(self.size):
            if e in seen:
                continue
            orb = []
            f = e
            while f not in seen:
                seen.add(f)
                orb.append(f)
                f = self.xy(f)
            out.append(tuple(orb))
        return out

    def xy(self, e: int) -> int:
        o = self.op[e]
        return self.nx_inv(e if o == TRIANGLE else o)

    def labels(self) -> dict[int, str]:
        out = {}
        for e in range(self.size):
            if self.op[e] == TRIANGLE:
                out[e] = "triangle"
            elif self.op[e] == e:
                out[e] = "white"
            if self.nx[e] == e:
                # a black element with an open slot is reported as black
                out[e] = "black"
        return out

    def white(self) -> list[int]:
        return [e for e in range(self.size) if self.op[e] == e]

    def black(self) -> list[int]:
        return [e for e in range(self.size) if self.nx[e] == e]

    def triangles(self) -> list[int]:
        return [e for e in range(self.size) if self.op[e] == TRIANGLE]

    def relabel(self, perm: Sequence[int]) -> "Skeleton":
        """The skeleton with element e renamed perm[e]."""
        n = self.size
        op = [0] * n
        nx = [0] * n
        for e in range(n):
            o = self.op[e]
            op[perm[e]] = TRIANGLE if o == TRIANGLE else perm[o]
            nx[perm[e]] = perm[self.nx[e]]
        return Skeleton(tuple(op), tuple(nx), self.kind)

    def to_dict(self) -> dict:
        return {"size": self.size, "op": [None if o == TRIANGLE else o for o in self.op],
                "nx": list(self.nx), "kind": self.kind,
                "labels": {str(k): v for k, v in sorted(self.labels().items())}}


def _violation(s: Skeleton) -> str | None:
    n = len(s.op)
    if s.kind not in KINDS:
        return f"unknown kind {s.kind!r}"
    if len(s.nx) != n:
        return "op and nx have different sizes"
    if n == 0:
        return "empty skeleton"
    for e in range(n):
        o, x = s.op[e], s.nx[e]
        if not 0 <= x < n:
            return f"nx[{e}] = {x} out of range"
        if o == TRIANGLE:
            if s.kind != CORE:
                return f"open slot at {e} in a {s.kind} skeleton"
            continue
        if not 0 <= o < n:
            return f"op[{e}] = {o} out of range"
        if s.op[o] != e:
            return f"op is not an involution at {e}"
    for e in range(n):
        if s.nx[s.nx[s.nx[e]]] != e:
            return f"nx^3 is not the identity at {e}"
    if s.kind == THREE_REGULAR:
        for e in range(n):
            if s.op[e] == e:
                return f"op has a fixed point {e} in a 3-regular skeleton"
            if s.nx[e] == e:
                return f"nx has a fixed point {e} in a 3-regular skeleton"
    return None


def validate(s: Skeleton | dict) -> str | None:
    """Return None if the data forms a valid skeleton, else the first problem."""
    if isinstance(s, dict):
        try:
            Skeleton(s["op"], s["nx"], s.get("kind", THREE_ONE))
        except (SkeletonError, KeyError, TypeError) as exc:
            return str(exc)
        return None
    return _violation(s)


@dataclass(frozen=True)
class PointedSkeleton:
    skeleton: Skeleton
    base: int = 0

    def __post_init__(self):
        if not 0 <= self.base < self.skeleton.size:
            raise SkeletonError(f"base {self.base} out of range")

    @property
    def size(self) -> int:
        return self.skeleton.size

    def to_dict(self) -> dict:
        d = self.skeleton.to_dict()
        d["base"] = self.base
        return d


class CoreGraph(PointedSkeleton):
    """A pointed core: the compact part of a possibly infinite Gamma-set.

    The base element is kept even when it sits on a hair leading into an
    infinite branch; ``compact()`` drops the hair.
    """

    def is_complete(self) -> bool:
        return self.skeleton.is_complete()

    def index(self) -> int | None:
        """[Gamma : Stab base], or None for infinite index."""
        return self.skeleton.size if self.is_complete() else None

    def compact(self) -> Skeleton:
        return _prune(self.skeleton, keep=None)[0]

    def completed(self) -> PointedSkeleton:
        if not self.is_complete():
            raise SkeletonError("core has open slots; index is infinite")
        return PointedSkeleton(Skeleton(self.skeleton.op, self.skeleton.nx, _kind_of(self.skeleton)), self.base)


def _kind_of(s: Skeleton) -> str:
    if not s.is_complete():
        return CORE
    if s.white() or s.black():
        return THREE_ONE
    return THREE_REGULAR


def gamma_skeleton() -> PointedSkeleton:
    """The one-element skeleton Gamma/Gamma."""
    return PointedSkeleton(Skeleton((0,), (0,), THREE_ONE), 0)


# ---------------------------------------------------------------------------
# action and paths

def act(s: Skeleton, g: Gamma, e: int) -> int:
    """g . e; returns TRIANGLE if the path leaves the core through a slot."""
    for c in reversed(g.word):
        if c == "Y":
            e = s.op[e]
            if e == TRIANGLE:
                return TRIANGLE
        elif c == "X":
            e = s.nx_inv(e)
        else:
            e = s.nx[e]
    return e


_PATH_LETTER = {"op": "Y", "nx": "X", "nx-1": "x"}


def evaluate(path: Iterable[str]) -> Gamma:
    """val of a path given as steps ``op``, ``nx``, ``nx-1``."""
    from .group import normalize
    return normalize(_PATH_LETTER[step] for step in path)


def walk(s: Skeleton, start: int, path: Iterable[str]) -> int:
    """End point of a path; equals act((val path)^-1, start)."""
    e = start
    for step in path:
        if step == "op":
            e = s.op[e]
        elif step == "nx":
            e = s.nx[e]
        elif step == "nx-1":
            e = s.nx_inv(e)
        else:
            raise ValueError(f"unknown path step {step!r}")
        if e == TRIANGLE:
            return TRIANGLE
    return e


# ---------------------------------------------------------------------------
# stabilizers and index

def _transversal(s: Skeleton, base: int) -> tuple[dict[int, Gamma], list[tuple[int, int]]]:
    """Coset representatives t(e) with t(e) . base = e, plus tree op-pairs."""
    t: dict[int, Gamma] = {}
    tree: list[tuple[int, int]] = []
    todo: deque[int] = deque()

    def enter(e: int, g: Gamma) -> None:
        # label the whole vertex of e at once
        for _ in range(3):
            if e in t:
                break
            t[e] = g
            todo.append(e)
            e, g = s.nx_inv(e), X * g

    enter(base, Gamma())
    while todo:
        e = todo.popleft()
        o = s.op[e]
        if o != TRIANGLE and o not in t:
            tree.append((e, o))
            enter(o, Y * t[e])
    return t, tree


def stabilizer_basis(p: PointedSkeleton) -> list[Gamma]:
    """Free-product generators of Stab(base).

    Infinite-order generators come first (one per edge outside a spanning
    tree), then order-2 generators (white elements), then order-3 ones
    (black elements).
    """
    s = p.skeleton
    if not s.is_connected():
        raise NotConnected("skeleton is not connected")
    t, tree = _transversal(s, p.base)
    tree_pairs = {frozenset(pair) for pair in tree}
    free, order2, order3 = [], [], []
    for e in range(s.size):
        o = s.op[e]
        if o == TRIANGLE:
            pass
        elif o == e:
            order2.append(t[e].inverse() * Y * t[e])
        elif e < o and frozenset((e, o)) not in tree_pairs:
            free.append(t[o].inverse() * Y * t[e])
        if s.nx[e] == e:
            order3.append(t[e].inverse() * X * t[e])
    return free + order2 + order3


def orbifold_decomposition(s: Skeleton) -> tuple[int, int, int]:
    """(n0, n2, n3): free rank and numbers of order-2 and order-3 factors."""
    if not s.is_connected():
        raise NotConnected("skeleton is not connected")
    n2 = len(s.white())
    n3 = len(s.black())
    pairs = sum(1 for e in range(s.size) if s.op[e] not in (TRIANGLE, e) and e < s.op[e])
    n0 = pairs - len(s.vertices()) + 1
    return n0, n2, n3


def index(p: PointedSkeleton | Skeleton) -> int:
    """[Gamma : Stab], checked against 6 n0 + 3 n2 + 4 n3 - 6."""
    s = p.skeleton if isinstance(p, PointedSkeleton) else p
    if not s.is_complete():
        raise SkeletonError("infinite index: skeleton has open slots")
    n0, n2, n3 = orbifold_decomposition(s)
    if s.size != 6 * n0 + 3 * n2 + 4 * n3 - 6:
        raise AssertionError(f"index formula fails: {s.size} vs {(n0, n2, n3)}")
    return s.size


# ---------------------------------------------------------------------------
# canonical forms

def _code_from(s: Skeleton, start: int) -> tuple[tuple[int, ...], list[int]]:
    """Relabel by BFS from start, exploring op, nx, nx^2; return code and order."""
    label = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        e = order[i]
        i += 1
        for f in (s.op[e], s.nx[e], s.nx_inv(e)):
            if f != TRIANGLE and f not in label:
                label[f] = len(order)
                order.append(f)
    code = []
    for e in order:
        o = s.op[e]
        code.append(TRIANGLE if o == TRIANGLE else label[o])
        code.append(label[s.nx[e]])
    return tuple(code), order


def canonical_code(s: Skeleton | PointedSkeleton) -> str:
    """Relabeling-invariant code; pointed skeletons are coded from the base."""
    if isinstance(s, PointedSkeleton):
        code, _ = _code_from(s.skeleton, s.base)
        return _format_code(code)
    if not s.is_connected():
        raise NotConnected("skeleton is not connected")
    return _format_code(min(_code_from(s, e)[0] for e in range(s.size)))


def _format_code(code: tuple[int, ...]) -> str:
    return ".".join("t" if c == TRIANGLE else str(c) for c in code)


def is_isomorphic(a: Skeleton, b: Skeleton) -> bool:
    return a.size == b.size and canonical_code(a) == canonical_code(b)


def automorphisms(s: Skeleton) -> list[tuple[int, ...]]:
    """All automorphisms, as permutations of the elements."""
    if not s.is_connected():
        raise NotConnected("skeleton is not connected")
    ref, ref_order = _code_from(s, 0)
    out = []
    for e in range(s.size):
        code, order = _code_from(s, e)
        if code == ref:
            perm = [0] * s.size
            for a, b in zip(ref_order, order):
                perm[a] = b
            out.append(tuple(perm))
    return out


def mirror(s: Skeleton) -> Skeleton:
    """The orientation-reversed skeleton (nx replaced by nx^-1)."""
    return Skeleton(s.op, tuple(s.nx_inv(e) for e in range(s.size)), s.kind)


# ---------------------------------------------------------------------------
# morphisms and intersections

def pointed_morphism_exists(p1: PointedSkeleton, p2: PointedSkeleton) -> bool:
    """True iff Stab(p1) is contained in Stab(p2)."""
    return all(core_membership(p2, g) for g in stabilizer_basis(p1))


def pointed_is_isomorphic(p1: PointedSkeleton, p2: PointedSkeleton) -> bool:
    if p1.skeleton.is_complete() and p2.skeleton.is_complete():
        return canonical_code(p1) == canonical_code(p2)
    return pointed_morphism_exists(p1, p2) and pointed_morphism_exists(p2, p1)


def fiber_product(p1: PointedSkeleton, p2: PointedSkeleton) -> PointedSkeleton:
    """The component of (base1, base2) in the product; Stab = Stab1 & Stab2."""
    s1, s2 = p1.skeleton, p2.skeleton
    start = (p1.base, p2.base)
    ids = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        a, b = order[i]
        i += 1
        o1, o2 = s1.op[a], s2.op[b]
        for f in ((s1.nx[a], s2.nx[b]), (o1, o2)):
            if TRIANGLE in f:
                continue
            if f not in ids:
                ids[f] = len(order)
                order.append(f)
    op, nx = [], []
    for a, b in order:
        o1, o2 = s1.op[a], s2.op[b]
        op.append(TRIANGLE if TRIANGLE in (o1, o2) else ids[(o1, o2)])
        nx.append(ids[(s1.nx[a], s2.nx[b])])
    sk = Skeleton(op, nx, CORE)
    if sk.is_complete():
        return PointedSkeleton(Skeleton(op, nx, _kind_of(sk)), 0)
    return _normalize_pointed(sk, 0)


# ---------------------------------------------------------------------------
# folding

class _Folder:
    """Coincidence procedure on partial skeletons whose vertices are 3-cycles."""

    def __init__(self):
        self.parent: list[int] = []
        self.nx: list[int] = []
        self.op: list[int] = []
        self.pending: deque[tuple[int, int]] = deque()

    def new_vertex(self) -> int:
        e = len(self.parent)
        self.parent += [e, e + 1, e + 2]
        self.nx += [e + 1, e + 2, e]
        self.op += [TRIANGLE] * 3
        return e

    def find(self, e: int) -> int:
        root = e
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[e] != root:
            self.parent[e], e = root, self.parent[e]
        return root

    def get_nx(self, e: int) -> int:
        return self.find(self.nx[self.find(e)])

    def get_op(self, e: int) -> int:
        o = self.op[self.find(e)]
        return TRIANGLE if o == TRIANGLE else self.find(o)

    def merge(self, a: int, b: int) -> None:
        self.pending.append((a, b))
        while self.pending:
            a, b = self.pending.popleft()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if b < a:
                a, b = b, a
            self.parent[b] = a
            self.pending.append((self.nx[a], self.nx[b]))
            if self.op[a] == TRIANGLE:
                self.op[a] = self.op[b]
            elif self.op[b] != TRIANGLE:
                self.pending.append((self.op[a], self.op[b]))

    def trace(self, base: int, g: Gamma) -> int:
        """Follow g from base (rightmost letter first), growing the graph."""
        e = base
        for c in reversed(g.word):
            if c == "X":
                e = self.get_nx(self.get_nx(e))
            elif c == "x":
                e = self.get_nx(e)
            else:
                o = self.get_op(e)
                if o == TRIANGLE:
                    o = self.new_vertex()
                    self.op[e] = o
                    self.op[o] = e
                e = o
        return e

    def freeze(self, base: int) -> tuple[Skeleton, int]:
        reps = sorted({self.find(e) for e in range(len(self.parent))})
        ids = {r: i for i, r in enumerate(reps)}
        op = [TRIANGLE if self.get_op(r) == TRIANGLE else ids[self.get_op(r)] for r in reps]
        nx = [ids[self.get_nx(r)] for r in reps]
        return Skeleton(op, nx, CORE), ids[self.find(base)]


def fold_subgroup(words: Iterable[Gamma]) -> CoreGraph:
    """The pointed core of Gamma / <words>, based at the coset of 1."""
    f = _Folder()
    base = f.new_vertex()
    for g in words:
        end = f.trace(base, g)
        f.merge(end, base)
    sk, b = f.freeze(base)
    return _normalize_pointed(sk, b)


def _normalize_pointed(sk: Skeleton, base: int) -> CoreGraph:
    sk, ids = _prune(sk, keep=base)
    if sk.is_complete():
        sk = Skeleton(sk.op, sk.nx, _kind_of(sk))
    return CoreGraph(sk, ids[base])


def _prune(sk: Skeleton, keep: int | None) -> tuple[Skeleton, dict[int, int]]:
    """Remove trivalent vertices that are parts of infinite Farey branches.

    A vertex with three distinct elements, at least two open slots and the
    remaining element matched into another vertex is a branch point of a
    grafted tree; it is cut off and its neighbour gets an open slot.  The
    vertex holding ``keep`` is never removed.
    """
    op = list(sk.op)
    nx = sk.nx
    alive = [True] * sk.size
    changed = True
    while changed:
        changed = False
        for e in range(sk.size):
            if not alive[e] or nx[e] == e:
                continue
            vert = (e, nx[e], nx[nx[e]])
            if e != min(vert) or (keep is not None and keep in vert):
                continue
            open_ = [v for v in vert if op[v] == TRIANGLE]
            matched = [v for v in vert if op[v] != TRIANGLE]
            if len(open_) == 2 and op[matched[0]] not in vert:
                partner = op[matched[0]]
                op[partner] = TRIANGLE
                for v in vert:
                    alive[v] = False
                changed = True
    keep_ids = [e for e in range(sk.size) if alive[e]]
    ids = {e: i for i, e in enumerate(keep_ids)}
    new_op = [TRIANGLE if op[e] == TRIANGLE else ids[op[e]] for e in keep_ids]
    new_nx = [ids[nx[e]] for e in keep_ids]
    kind = sk.kind if TRIANGLE in new_op else _kind_of(Skeleton(new_op, new_nx, CORE))
    return Skeleton(new_op, new_nx, kind), ids


def core_membership(c: PointedSkeleton, g: Gamma) -> bool:
    """True iff g stabilizes the base of the completed Gamma-set.

    A reduced word that leaves through an open slot never comes back, so
    reaching a slot means non-membership.
    """
    return act(c.skeleton, g, c.base) == c.base


def is_xy_generated(c: PointedSkeleton | Skeleton) -> bool:
    """True iff the compact part has no monovalent white or black vertices."""
    sk = c.skeleton if isinstance(c, PointedSkeleton) else c
    sk = _prune(sk, keep=None)[0]
    return not sk.white() and not sk.black()


# ---------------------------------------------------------------------------
# random skeletons

def random_skeleton(size: int, rng: random.Random, *, kind: str = THREE_ONE,
                    max_tries: int = 10000) -> Skeleton:
    """A uniformly structured random connected skeleton with ``size`` elements."""
    for _ in range(max_tries):
        perm = list(range(size))
        rng.shuffle(perm)
        nx = list(range(size))
        i = 0
        while i < size:
            if kind == THREE_REGULAR or (size - i >= 3 and rng.random() < 0.75):
                if size - i < 3:
                    break
                a, b, c = perm[i:i + 3]
                nx[a], nx[b], nx[c] = b, c, a
                i += 3
            else:
                i += 1
        if i > size or (kind == THREE_REGULAR and i != size):
            continue
        rng.shuffle(perm)
        op = list(range(size))
        i = 0
        while i < size:
            if size - i >= 2 and (kind == THREE_REGULAR or rng.random() < 0.8):
                a, b = perm[i:i + 2]
                op[a], op[b] = b, a
                i += 2
            else:
                i += 1
        if kind == THREE_REGULAR and any(op[e] == e for e in range(size)):
            continue
        sk = Skeleton(op, nx, kind)
        if sk.is_connected():
            return sk
    raise SkeletonError(f"no connected skeleton of size {size} found")
