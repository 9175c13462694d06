"""
Admissible trees, pseudo-trees and their counts.

A marked admissible tree with k nodes is stored as the preorder bitstring of
its oriented rooted binary tree B: ``1`` for a node (followed by its left
and right subtrees) and ``0`` for a missing branch, i.e. a leaf.  The marked
leaf v1 hangs at the root of B; the remaining leaves v2..v_{k+2} are the
leaves of B from left to right.

The vertex distance m_i is the number of vertices on the tree path from v_i
to v_{i+1}, both ends included.  On a binary tree this is computed from

    a(leaf) = b(leaf) = 1,  a(node(L, R)) = a(L) + 1,  b(node(L, R)) = b(R) + 1,

where a (resp. b) counts the vertices on the leftmost (rightmost) descending
path.  The distance across node(L, R) is b(L) + 1 + a(R), m_1 = 1 + a(B) and
m_{k+2} = b(B) + 1.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

from .group import CyclicWord, Gamma, X, XY
from .skeleton import (CORE, TRIANGLE, CoreGraph, PointedSkeleton, Skeleton,
                       SkeletonError, _kind_of)

__all__ = [
    "catalan", "MarkedTree", "TreeClass", "GeneralizedTree", "Counts",
    "NotAdmissible", "NoTriangles",
    "enumerate_marked", "enumerate_classes", "tree_class", "counts", "counts_formula",
    "pseudo_tree", "base_points", "skeleton_distances",
    "generalized_pseudo_tree", "infinity_distances", "minfty_product",
    "fiber_type_summary", "real_curve_summary", "necklace_diagram", "parse_tree_literal",
]

LOOP, WHITE, BLACK, TRI = "L", "W", "B", "T"
LABELS = (LOOP, WHITE, BLACK, TRI)


class NotAdmissible(ValueError):
    pass


class NoTriangles(ValueError):
    pass


def catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


# ---------------------------------------------------------------------------
# marked trees

def _parse_bits(bits: str) -> tuple[int, list[int], int]:
    """Return (a, internal distances, b) of the binary tree ``bits``."""
    pos = 0

    def rec() -> tuple[int, list[int], int]:
        nonlocal pos
        if pos >= len(bits):
            raise ValueError(f"truncated tree code {bits!r}")
        c = bits[pos]
        pos += 1
        if c == "0":
            return 1, [], 1
        if c != "1":
            raise ValueError(f"bad character {c!r} in tree code")
        la, li, lb = rec()
        ra, ri, rb = rec()
        return la + 1, li + [lb + 1 + ra] + ri, rb + 1

    out = rec()
    if pos != len(bits):
        raise ValueError(f"trailing characters in tree code {bits!r}")
    return out


@dataclass(frozen=True, order=True)
class MarkedTree:
    """A marked admissible tree, as a preorder code of its binary tree."""

    bits: str

    def __post_init__(self):
        _parse_bits(self.bits)

    @property
    def k(self) -> int:
        return self.bits.count("1")

    @property
    def leaves(self) -> int:
        return self.k + 2

    def sequence(self) -> tuple[int, ...]:
        """The extended distance sequence (m_1, ..., m_{k+2})."""
        a, internal, b = _parse_bits(self.bits)
        return (1 + a, *internal, b + 1)

    @classmethod
    def from_sequence(cls, seq: Sequence[int]) -> "MarkedTree":
        """Reconstruct the tree from its extended sequence; ValueError if none."""
        seq = tuple(int(m) for m in seq)
        if len(seq) < 2:
            raise ValueError("a distance sequence has at least two entries")
        k = len(seq) - 2
        if sum(seq) != 5 * k + 4:
            raise ValueError(f"sum {sum(seq)} != 5k+4 = {5 * k + 4}")
        bits = _decode(seq[0] - 1, seq[1:-1], seq[-1] - 1)
        if bits is None:
            raise ValueError(f"{','.join(map(str, seq))} is not the sequence of a tree")
        return cls(bits)

    def __str__(self) -> str:
        return ",".join(map(str, self.sequence()))


@lru_cache(maxsize=None)
def _decode(a: int, internal: tuple[int, ...], b: int) -> str | None:
    if not internal:
        return "0" if a == 1 and b == 1 else None
    if a < 2 or b < 2:
        return None
    # node(L, R): try every split point of the internal distances
    for j, d in enumerate(internal):
        left, right = internal[:j], internal[j + 1:]
        for lb in range(1, d - 1):
            ra = d - 1 - lb
            lbits = _decode(a - 1, left, lb)
            if lbits is None:
                continue
            rbits = _decode(ra, right, b - 1)
            if rbits is not None:
                return "1" + lbits + rbits
    return None


def _trees(n: int) -> Iterator[str]:
    if n == 0:
        yield "0"
        return
    for i in range(n):
        for left in _trees(i):
            for right in _trees(n - 1 - i):
                yield "1" + left + right


def enumerate_marked(k: int) -> Iterator[MarkedTree]:
    """All C(k) marked admissible trees with k nodes, streamed."""
    if k < 0:
        raise ValueError("k must be non-negative")
    for bits in _trees(k):
        yield MarkedTree(bits)


def parse_tree_literal(text: str) -> tuple["MarkedTree", str | None]:
    """Parse ``3,4,4,4,3,6`` or ``b:110100...``, with optional ``!L L B T``."""
    text = text.strip()
    labels = None
    if "!" in text:
        text, lab = text.split("!", 1)
        labels = "".join(lab.split()).upper()
        text = text.strip()
    if text.startswith("b:"):
        tree = MarkedTree(text[2:])
    else:
        tree = MarkedTree.from_sequence(int(x) for x in text.replace(" ", "").split(","))
    if labels is not None and len(labels) != tree.leaves:
        raise ValueError(f"{len(labels)} labels for {tree.leaves} leaves")
    return tree, labels


# ---------------------------------------------------------------------------
# classes and counts

@dataclass(frozen=True, order=True)
class TreeClass:
    """An unmarked tree: minimal rotation of the extended sequence."""

    key: tuple[int, ...]
    aut_order: int

    @property
    def k(self) -> int:
        return len(self.key) - 2

    def tree(self) -> MarkedTree:
        return MarkedTree.from_sequence(self.key)

    def __str__(self) -> str:
        return ",".join(map(str, self.key))


def _rotation_data(seq: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    n = len(seq)
    rots = [seq[i:] + seq[:i] for i in range(n)]
    period = next(p for p in range(1, n + 1) if rots[p % n] == seq)
    return min(rots), n // period


def tree_class(t: MarkedTree) -> TreeClass:
    key, aut = _rotation_data(t.sequence())
    return TreeClass(key, aut)


def enumerate_classes(k: int) -> list[TreeClass]:
    """One TreeClass per isomorphism class of admissible trees with k nodes."""
    return sorted({tree_class(t) for t in enumerate_marked(k)})


@dataclass(frozen=True)
class Counts:
    k: int
    catalan: int
    T1: int
    T2: int
    T3: int

    @property
    def T(self) -> int:
        return self.T1 + self.T2 + self.T3

    @property
    def T_tilde(self) -> int:
        """Number of pointed classes: sum over classes of (5k+4)/|Aut|."""
        return (5 * self.k + 4) * (6 * self.T1 + 3 * self.T2 + 2 * self.T3) // 6

    def as_dict(self) -> dict:
        return {"k": self.k, "C": self.catalan, "T1": self.T1, "T2": self.T2,
                "T3": self.T3, "T": self.T, "T~": self.T_tilde}


def counts_formula(k: int) -> Counts:
    """Counts from the Catalan identities (used as an oracle)."""
    t2 = catalan(k // 2) if k % 2 == 0 else 0
    t3 = catalan((k - 1) // 3) if k % 3 == 1 else 0
    # sum T_i / i = C(k)/(k+2)
    num = 6 * catalan(k) - 3 * t2 * (k + 2) - 2 * t3 * (k + 2)
    t1, rem = divmod(num, 6 * (k + 2))
    if rem:
        raise ArithmeticError(f"non-integral T1 at k={k}")
    return Counts(k, catalan(k), t1, t2, t3)


# Fast streaming enumeration: binary trees as (internal distances, a, b).

_BYTE = [bytes([v]) for v in range(256)]
_MATERIALIZE = 13


@lru_cache(maxsize=None)
def _level(n: int) -> tuple[tuple[bytes, int, int], ...]:
    return tuple(_stream(n))


def _stream(n: int) -> Iterator[tuple[bytes, int, int]]:
    if n == 0:
        yield b"", 1, 1
        return
    for i in range(n):
        lefts = _level(i) if i <= _MATERIALIZE else _stream(i)
        for li, la, lb in lefts:
            j = n - 1 - i
            rights = _level(j) if j <= _MATERIALIZE else _stream(j)
            for ri, ra, rb in rights:
                yield li + _BYTE[lb + 1 + ra] + ri, la + 1, rb + 1


def _count_split(args: tuple[int, int, int, int]) -> tuple[int, int, int]:
    """Canonical-marking counts (by |Aut|) for root split (i, k-1-i), a slice of lefts."""
    k, i, start, stop = args
    n = k + 2
    j = k - 1 - i
    out = [0, 0, 0, 0]
    lefts = _level(i) if i <= _MATERIALIZE else tuple(_stream(i))
    rights = _level(j) if j <= _MATERIALIZE else tuple(_stream(j))
    rdata = [(ra, ri + _BYTE[rb + 2]) for ri, ra, rb in rights]
    rng = range(1, n)
    for li, la, lb in lefts[start:stop]:
        head = _BYTE[la + 2] + li
        first = la + 2
        lb1 = lb + 1
        for ra, rtail in rdata:
            seq = head + _BYTE[lb1 + ra] + rtail
            if min(seq) != first:
                continue
            d = seq + seq
            ok = True
            period = n
            for p in rng:
                r = d[p:p + n]
                if r < seq:
                    ok = False
                    break
                if r == seq and period == n:
                    period = p
            if ok:
                out[n // period] += 1
    return out[1], out[2], out[3]


def _split_tasks(k: int, chunks: int) -> list[tuple[int, int, int, int]]:
    tasks = []
    for i in range(k):
        size = catalan(i)
        step = max(1, -(-size // chunks))
        for start in range(0, size, step):
            tasks.append((k, i, start, min(size, start + step)))
    return tasks


def counts(k: int, jobs: int = 1) -> Counts:
    """T_1, T_2, T_3 by streaming all C(k) marked trees.

    A class with |Aut| = i has (k+2)/i distinct markings, exactly one of
    which has a rotation-minimal extended sequence; that marking is counted.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return Counts(0, 1, 0, 1, 0)  # (2,2): a rotation by one fixes it
    tasks = _split_tasks(k, max(1, jobs) * 4 if jobs > 1 else 1)
    if jobs > 1:
        with multiprocessing.get_context("fork").Pool(jobs) as pool:
            parts = pool.map(_count_split, tasks)
    else:
        parts = map(_count_split, tasks)
    t = [0, 0, 0]
    for part in parts:
        for a in range(3):
            t[a] += part[a]
    return Counts(k, catalan(k), t[0], t[1], t[2])


# ---------------------------------------------------------------------------
# skeletons of trees

@dataclass
class _Built:
    op: list[int]
    nx: list[int]
    ends: list[int | None]   # per leaf: its own end element (loop or black), else None
    slots: list[int | None]  # per leaf: the neighbouring node end


def _build(bits: str, labels: str) -> _Built:
    op: list[int] = []
    nx: list[int] = []
    ends: list[int | None] = []
    slots: list[int | None] = []

    def new(count: int) -> int:
        e = len(op)
        op.extend([TRIANGLE] * count)
        nx.extend(range(e, e + count))
        return e

    def leaf(label: str) -> int | str:
        ends.append(None)
        slots.append(None)
        if label == LOOP:
            t = new(3)
            nx[t], nx[t + 1], nx[t + 2] = t + 1, t + 2, t
            op[t + 1], op[t + 2] = t + 2, t + 1
            ends[-1] = t
            return t
        if label == BLACK:
            b = new(1)
            ends[-1] = b
            return b
        return label

    def connect(u: int | str, v: int | str, leaf_u: int | None, leaf_v: int | None) -> None:
        if isinstance(u, str) and isinstance(v, str):
            raise NotAdmissible("two open or white leaves joined by an edge")
        if isinstance(u, str):
            u, v, leaf_u, leaf_v = v, u, leaf_v, leaf_u
        if isinstance(v, str):
            op[u] = u if v == WHITE else TRIANGLE
            slots[leaf_v] = u
        else:
            op[u], op[v] = v, u
            if leaf_v is not None:
                slots[leaf_v] = u
            if leaf_u is not None:
                slots[leaf_u] = v

    pos = 0
    lab = iter(labels)

    def subtree() -> tuple[int | str, int | None]:
        # returns the end pointing to the parent and the leaf index if a leaf
        nonlocal pos
        c = bits[pos]
        pos += 1
        if c == "0":
            idx = len(ends)
            return leaf(next(lab)), idx
        p = new(3)
        a, b = p + 1, p + 2
        nx[p], nx[b], nx[a] = b, a, p
        left, li = subtree()
        connect(a, left, None, li)
        right, ri = subtree()
        connect(b, right, None, ri)
        return p, None

    first = leaf(next(lab))
    down, di = subtree()
    connect(first, down, 0, di)
    return _Built(op, nx, ends, slots)


def pseudo_tree(t: MarkedTree) -> PointedSkeleton:
    """The pseudo-tree of t, based at the tree end of the loop at v_{k+2}."""
    built = _build(t.bits, LOOP * t.leaves)
    sk = Skeleton(built.op, built.nx, "3-regular")
    return PointedSkeleton(sk, built.ends[-1])


def loop_ends(t: MarkedTree) -> list[int]:
    """Tree ends t_1..t_{k+2} of the loops, in the numbering of pseudo_tree."""
    return list(_build(t.bits, LOOP * t.leaves).ends)


def base_points(t: MarkedTree) -> list[int]:
    """The outer (5k+4)-gonal XY-orbit, starting at the standard base."""
    p = pseudo_tree(t)
    out = [p.base]
    e = p.skeleton.xy(p.base)
    while e != p.base:
        out.append(e)
        e = p.skeleton.xy(e)
    return out


def skeleton_distances(t: MarkedTree) -> tuple[int, ...]:
    """Distances read off the pseudo-tree: XY-steps from t_i to t_{i+1}."""
    p = pseudo_tree(t)
    ends = loop_ends(t)
    out = []
    for i in range(len(ends)):
        e, target, steps = ends[i], ends[(i + 1) % len(ends)], 0
        while True:
            e = p.skeleton.xy(e)
            steps += 1
            if e == target:
                break
        out.append(steps)
    return tuple(out)


# ---------------------------------------------------------------------------
# generalized pseudo-trees

@dataclass(frozen=True)
class GeneralizedTree:
    """A marked tree with a label L, W, B or T on each leaf v_1..v_{k+2}."""

    tree: MarkedTree
    labels: str

    def __post_init__(self):
        object.__setattr__(self, "labels", "".join(self.labels.split()).upper())
        if len(self.labels) != self.tree.leaves:
            raise ValueError(f"{len(self.labels)} labels for {self.tree.leaves} leaves")
        if set(self.labels) - set(LABELS):
            raise ValueError(f"labels must be among {LABELS}")
        problem = _admissibility(self.tree.bits, self.labels)
        if problem:
            raise NotAdmissible(problem)

    def count(self, label: str) -> int:
        return self.labels.count(label)


def _leaf_nodes(bits: str) -> list[int]:
    """For each leaf v_1..v_{k+2}, the preorder index of its node (-1: none)."""
    out = [0 if bits != "0" else -1]
    node_id = -1
    # open nodes with the number of children seen so far
    stack2: list[list[int]] = []
    for c in bits:
        if c == "1":
            node_id += 1
            if stack2:
                stack2[-1][1] += 1
            stack2.append([node_id, 0])
        else:
            if stack2:
                out.append(stack2[-1][0])
                stack2[-1][1] += 1
            else:
                out.append(-1)
        while stack2 and stack2[-1][1] == 2:
            stack2.pop()
    return out


def _admissibility(bits: str, labels: str) -> str | None:
    nodes = _leaf_nodes(bits)
    if bits == "0":
        if all(lab in (WHITE, TRI) for lab in labels):
            return "a nodeless tree needs a loop or black leaf"
        return None
    seen = set()
    for lab, node in zip(labels, nodes):
        if lab == TRI:
            if node in seen:
                return f"two open leaves at node {node}"
            seen.add(node)
    return None


def generalized_pseudo_tree(g: GeneralizedTree) -> PointedSkeleton:
    """The generalized pseudo-tree; a CoreGraph when some leaf is open."""
    built = _build(g.tree.bits, g.labels)
    base = built.ends[-1] if built.ends[-1] is not None else built.slots[-1]
    sk = Skeleton(built.op, built.nx, CORE)
    kind = _kind_of(sk)
    if kind == CORE:
        return CoreGraph(sk, base)
    return PointedSkeleton(Skeleton(built.op, built.nx, kind), base)


def infinity_distances(c: Skeleton | PointedSkeleton) -> tuple[int, ...]:
    """Distances between consecutive open slots along the boundary.

    Each distance is the number of XY-steps between two consecutive slots,
    an open slot acting as an op-fixed element.  The sequence starts at the
    lowest-numbered slot.
    """
    sk = c.skeleton if isinstance(c, PointedSkeleton) else c
    slots = sk.triangles()
    if not slots:
        raise NoTriangles("core has no open slots")
    out, e, steps = [], slots[0], 0
    slot_set = set(slots)
    visited = 0
    while True:
        e = sk.xy(e)
        steps += 1
        if e in slot_set:
            out.append(steps)
            visited += 1
            steps = 0
            if e == slots[0]:
                break
    if visited != len(slots):
        raise SkeletonError("open slots lie on more than one boundary component")
    return tuple(out)


def minfty_product(m: Sequence[int]) -> Gamma:
    """The right-to-left product of (XY)^(m_i - 1) X."""
    out = Gamma()
    for mi in m:
        out = (XY ** (mi - 1)) * X * out
    return out


def minfty_class(c: Skeleton | PointedSkeleton) -> CyclicWord:
    return CyclicWord.of(minfty_product(infinity_distances(c)))


# ---------------------------------------------------------------------------
# combinatorial summaries

@dataclass(frozen=True)
class FiberSummary:
    fibers: tuple[str, ...]
    chi: int
    outer: str

    def __str__(self) -> str:
        return " + ".join(self.fibers) + f"  (chi = {self.chi})"


def _multiplicity(fiber: str) -> int:
    fixed = {"IV*": 8, "III*": 9, "II*": 10, "II": 2, "III": 3, "IV": 4}
    if fiber in fixed:
        return fixed[fiber]
    star = fiber.endswith("*")
    p = int(fiber[1:].rstrip("*"))
    return p + (6 if star else 0)


def fiber_type_summary(g: GeneralizedTree, monogon_types: Sequence[str] | None = None) -> FiberSummary:
    """Singular fibers of the extremal surface of a finite generalized pseudo-tree.

    Monogons carry I1 unless overridden by ``monogon_types`` (entries ``I1``
    or ``I1*``); black and white leaves carry IV* and III*; the outer fiber
    type is then forced by the mod-12 condition on the Euler characteristic.
    """
    if g.count(TRI):
        raise NotAdmissible("fiber types need a finite skeleton (no open leaves)")
    k = g.tree.k
    nb, nw = g.count(BLACK), g.count(WHITE)
    loops = k + 2 - nb - nw
    mono = list(monogon_types) if monogon_types is not None else ["I1"] * loops
    if len(mono) != loops or set(mono) - {"I1", "I1*"}:
        raise ValueError(f"need {loops} monogon types among I1, I1*")
    starred = mono.count("I1*")
    s = 5 * k + 4 - nb - 2 * nw
    outer = f"I{s}" if (k + nb + nw + starred) % 2 else f"I{s}*"
    fibers = []
    plain = mono.count("I1")
    if plain:
        fibers.append(f"{plain}I1" if plain > 1 else "I1")
    if starred:
        fibers.append(f"{starred}I1*" if starred > 1 else "I1*")
    if nb:
        fibers.append(f"{nb}IV*" if nb > 1 else "IV*")
    if nw:
        fibers.append(f"{nw}III*" if nw > 1 else "III*")
    fibers.append(outer)
    chi = plain + 7 * starred + 8 * nb + 9 * nw + _multiplicity(outer)
    if chi % 12:
        raise AssertionError(f"Euler characteristic {chi} is not divisible by 12")
    # bookkeeping through the skeleton: |E| + 6t + 2 n_II + 3 n_III
    size = generalized_pseudo_tree(g).size
    t = starred + nb + nw + outer.endswith("*")
    if size + 6 * t + 2 * nb + 3 * nw != chi:
        raise AssertionError("Euler characteristic bookkeeping fails")
    return FiberSummary(tuple(fibers), chi, outer)


def real_curve_summary(g: GeneralizedTree) -> tuple[int, int, int]:
    """(Hirzebruch index, ovals, zigzags) of the ribbon curve of g."""
    if set(g.labels) - {LOOP, BLACK}:
        raise ValueError("real curves need labels L and B only")
    k, z = g.tree.k, g.count(BLACK)
    return 2 * k + 2 - z, 5 * k + 4 - z, z


def necklace_diagram(m: Sequence[int]) -> str:
    """Stone string read from m_z down to m_1, one block per pair."""
    if len(m) % 2:
        raise ValueError("the necklace needs an even number of zigzags")
    stones = []
    for i in range(len(m) // 2, 0, -1):
        even, odd = m[2 * i - 1], m[2 * i - 2]
        stones += [">"] + ["○"] * (even - 3) + ["<"] + ["□"] * (odd - 3)
    return "".join(stones)
