"""
Braid monodromy factorizations over PSL(2,Z), SL(2,Z) and B3.

A factorization is a finite sequence (m_1, ..., m_r).  The Hurwitz move at
position i replaces (m_i, m_{i+1}) by (m_i^-1 m_{i+1} m_i, m_i) and keeps
the monodromy at infinity m_r ... m_1 unchanged.
"""

from __future__ import annotations

import hashlib
import multiprocessing
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .group import (SIGMA1, SIGMA2, SL2, Braid, CyclicWord, Gamma, NotSimple,
                    XY, degree12, is_simple, matrix_to_gamma, normalize, to_matrix)
from .intmat import smith_invariants
from .skeleton import (CoreGraph, canonical_code, fold_subgroup,
                       pointed_is_isomorphic)
from .trees import MarkedTree

__all__ = [
    "GAMMA", "SL2_TAG", "B3", "Factorization", "TagMismatch", "IndexOutOfRange",
    "CapExceeded", "from_tree", "hurwitz_move", "global_conjugate",
    "monodromy_at_infinity", "monodromy_group", "compare", "CompareReport",
    "pi1_presentation", "abelianization", "reduce_mod", "hurwitz_orbit", "OrbitResult",
    "DEFAULT_CAP",
]

GAMMA, SL2_TAG, B3 = "gamma", "sl2", "b3"
TAGS = (GAMMA, SL2_TAG, B3)
DEFAULT_CAP = 10 ** 7


class TagMismatch(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


class CapExceeded(RuntimeError):
    pass


Element = Gamma | SL2 | Braid


def _identity(tag: str) -> Element:
    return {GAMMA: Gamma(), SL2_TAG: SL2(1, 0, 0, 1), B3: Braid(Gamma(), 0)}[tag]


@dataclass(frozen=True)
class Factorization:
    group: str
    entries: tuple

    def __post_init__(self):
        if self.group not in TAGS:
            raise ValueError(f"unknown group tag {self.group!r}")
        object.__setattr__(self, "entries", tuple(self.entries))
        kind = {GAMMA: Gamma, SL2_TAG: SL2, B3: Braid}[self.group]
        for m in self.entries:
            if not isinstance(m, kind):
                raise TypeError(f"entry {m!r} is not in group {self.group}")

    def __len__(self) -> int:
        return len(self.entries)

    def project(self) -> "Factorization":
        """The image in PSL(2,Z)."""
        return Factorization(GAMMA, tuple(_to_gamma(m) for m in self.entries))

    def lift(self, tag: str) -> "Factorization":
        """Simple lift of a simple factorization to SL(2,Z) or B3."""
        if tag == self.group:
            return self
        images = self.project().entries
        if tag == GAMMA:
            return self.project()
        for g in images:
            if not is_simple(g):
                raise NotSimple(f"{g} is not conjugate to XY")
        if tag == B3:
            return Factorization(B3, tuple(Braid(g, 1) for g in images))
        return Factorization(SL2_TAG, tuple(Braid(g, 1).to_sl2() for g in images))

    def is_simple(self) -> bool:
        if self.group == B3:
            return all(m.is_simple() for m in self.entries)
        if self.group == SL2_TAG:
            return all(m.trace() == 2 and is_simple(matrix_to_gamma(m)) for m in self.entries)
        return all(is_simple(m) for m in self.entries)

    def to_text(self) -> str:
        return f"group={self.group}\n" + ";\n".join(format_entry(m) for m in self.entries) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Factorization":
        """Parse ``group=gamma|sl2|b3`` followed by ``;``-separated entries."""
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines or not lines[0].startswith("group="):
            raise ValueError("line 1: missing header group=gamma|sl2|b3")
        tag = lines[0].split("=", 1)[1].strip().lower()
        if tag not in TAGS:
            raise ValueError(f"line 1: unknown group {tag!r}")
        body = " ".join(lines[1:])
        entries = []
        for col, chunk in enumerate(body.split(";"), 1):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                entries.append(parse_entry(tag, chunk))
            except ValueError as exc:
                raise ValueError(f"entry {col}: {exc}") from None
        return cls(tag, tuple(entries))


def parse_entry(tag: str, text: str) -> Element:
    if tag == GAMMA:
        return Gamma.parse(text)
    if tag == B3:
        return Braid.parse(text)
    nums = [int(x) for x in text.replace("[", " ").replace("]", " ").replace(",", " ").split()]
    if len(nums) != 4:
        raise ValueError(f"an SL(2,Z) entry needs 4 integers, got {text!r}")
    return SL2(*nums)


def format_entry(m: Element) -> str:
    if isinstance(m, SL2):
        return f"{m.a} {m.b} {m.c} {m.d}"
    return str(m)


def _to_gamma(m: Element) -> Gamma:
    if isinstance(m, Gamma):
        return m
    if isinstance(m, Braid):
        return m.image
    return matrix_to_gamma(m)


# ---------------------------------------------------------------------------
# construction and moves

def from_tree(t: MarkedTree, shift: int = 0, group: str = GAMMA) -> Factorization:
    """The factorization of the pseudo-tree of t with base moved ``shift`` steps.

    Entry i is (XY)^(n_i - s) (X^2 Y X^-1) (XY)^-(n_i - s) with
    n_i = m_i + ... + m_{k+1}; in B3 it is s1^(n_i - s) s2 s1^-(n_i - s).
    """
    seq = t.sequence()
    total = sum(seq)
    if not 0 <= shift < total:
        raise ValueError(f"shift must lie in [0, {total})")
    n = [sum(seq[i:-1]) for i in range(len(seq))]
    braids = tuple(SIGMA2.conjugate(SIGMA1 ** -(ni - shift)) for ni in n)
    return Factorization(B3, braids).lift(group) if group != B3 else Factorization(B3, braids)


def _check_index(f: Factorization, i: int) -> None:
    if not 1 <= i < len(f):
        raise IndexOutOfRange(f"move index {i} outside 1..{len(f) - 1}")


def hurwitz_move(f: Factorization, i: int, direction: int = 1) -> Factorization:
    """Move at positions (i, i+1), 1-based; direction -1 is the inverse move."""
    _check_index(f, i)
    e = list(f.entries)
    a, b = e[i - 1], e[i]
    if direction > 0:
        e[i - 1], e[i] = b.conjugate(a), a
    else:
        e[i - 1], e[i] = b, a.conjugate(b.inverse())
    return Factorization(f.group, tuple(e))


def global_conjugate(f: Factorization, g: Element) -> Factorization:
    """Replace every entry m by g^-1 m g."""
    return Factorization(f.group, tuple(m.conjugate(g) for m in f.entries))


def monodromy_at_infinity(f: Factorization) -> Element:
    """The product m_r ... m_1."""
    out = _identity(f.group)
    for m in f.entries:
        out = m * out
    return out


def infinity_class(f: Factorization) -> str:
    """A complete conjugacy invariant of m_infty in the value group."""
    m = monodromy_at_infinity(f)
    if isinstance(m, Gamma):
        return str(CyclicWord.of(m))
    if isinstance(m, Braid):
        return f"{CyclicWord.of(m.image)}@{m.degree}"
    return f"{CyclicWord.of(matrix_to_gamma(m))}@{degree12(m)}"


def monodromy_group(f: Factorization) -> CoreGraph:
    """The pointed core of the subgroup of PSL(2,Z) generated by the entries."""
    return fold_subgroup(f.project().entries)


def core_code(c: CoreGraph) -> str:
    """Code of the unpointed compact part: equal iff the groups are conjugate."""
    return canonical_code(c.compact())


# ---------------------------------------------------------------------------
# comparison

@dataclass
class CompareReport:
    same_infinity: bool
    conjugate_infinity: bool
    same_group_pointed: bool
    conjugate_groups: bool
    lattice_fingerprints: bool | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if not (self.conjugate_infinity and self.conjugate_groups) or self.lattice_fingerprints is False:
            return "not weakly equivalent"
        if not (self.same_infinity and self.same_group_pointed):
            return "not strongly equivalent; weakly indistinguishable by these invariants"
        return "indistinguishable by these invariants"

    def as_dict(self) -> dict:
        return {"same_infinity": self.same_infinity,
                "conjugate_infinity": self.conjugate_infinity,
                "same_group_pointed": self.same_group_pointed,
                "conjugate_groups": self.conjugate_groups,
                "lattice_fingerprints": self.lattice_fingerprints,
                "verdict": self.verdict, "notes": self.notes}


def compare(f1: Factorization, f2: Factorization, *, lattices: bool = False) -> CompareReport:
    """Necessary conditions for strong and weak Hurwitz equivalence."""
    if f1.group != f2.group:
        raise TagMismatch(f"{f1.group} vs {f2.group}")
    notes = []
    if len(f1) != len(f2):
        notes.append("lengths differ")
    c1, c2 = monodromy_group(f1), monodromy_group(f2)
    report = CompareReport(
        same_infinity=monodromy_at_infinity(f1) == monodromy_at_infinity(f2),
        conjugate_infinity=infinity_class(f1) == infinity_class(f2),
        same_group_pointed=pointed_is_isomorphic(c1, c2),
        conjugate_groups=core_code(c1) == core_code(c2),
        notes=notes,
    )
    if lattices and f1.is_simple() and f2.is_simple():
        from .lattice import coloring_fingerprints
        report.lattice_fingerprints = coloring_fingerprints(f1) == coloring_fingerprints(f2)
    return report


# ---------------------------------------------------------------------------
# fundamental group

FreeWord = tuple[int, ...]


def _free_reduce(word: Iterable[int]) -> FreeWord:
    out: list[int] = []
    for a in word:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def _free_inv(w: FreeWord) -> FreeWord:
    return tuple(-a for a in reversed(w))


def _artin(i: int, images: list[FreeWord]) -> list[FreeWord]:
    """Precompose with s_i: alpha_i -> alpha_i alpha_{i+1} alpha_i^-1, alpha_{i+1} -> alpha_i."""
    inv = i < 0
    i = abs(i)
    a, b = images[i - 1], images[i]
    out = list(images)
    if not inv:
        out[i - 1] = _free_reduce(a + b + _free_inv(a))
        out[i] = a
    else:
        # s_i^-1: alpha_i -> alpha_{i+1}, alpha_{i+1} -> alpha_{i+1}^-1 alpha_i alpha_{i+1}
        out[i - 1] = b
        out[i] = _free_reduce(_free_inv(b) + a + b)
    return out


def braid_action(b: Braid) -> list[FreeWord]:
    """Images of alpha_1, alpha_2, alpha_3 under the Artin action of b."""
    images = [(1,), (2,), (3,)]
    # b = s_{j1} ... s_{jn} acts as s_{j1}(s_{j2}(...)): substitute right to left
    for j in reversed(b.word()):
        images = _substitute(images, j)
    return images


def _substitute(images: list[FreeWord], j: int) -> list[FreeWord]:
    basic = _artin(j, [(1,), (2,), (3,)])
    out = []
    for w in images:
        word: list[int] = []
        for a in w:
            piece = basic[abs(a) - 1]
            word.extend(piece if a > 0 else _free_inv(piece))
        out.append(_free_reduce(word))
    return out


@dataclass(frozen=True)
class Presentation:
    generators: int
    relators: tuple[FreeWord, ...]

    def as_dict(self) -> dict:
        return {"generators": self.generators,
                "relators": [" ".join(f"a{a}" if a > 0 else f"A{-a}" for a in r) for r in self.relators]}


def pi1_presentation(f: Factorization) -> Presentation:
    """<alpha_1, alpha_2, alpha_3 | m_i(alpha_j) = alpha_j>."""
    if f.group != B3:
        f = f.lift(B3)
    rels = []
    for m in f.entries:
        images = braid_action(m)
        prod = _free_reduce(images[0] + images[1] + images[2])
        if prod != (1, 2, 3):
            raise AssertionError("Artin action does not preserve alpha_1 alpha_2 alpha_3")
        for j, w in enumerate(images, 1):
            r = _free_reduce(w + (-j,))
            if r:
                rels.append(r)
    return Presentation(3, tuple(rels))


def abelianization(p: Presentation) -> list[int]:
    """Invariant factors of the abelianization; 0 stands for a copy of Z."""
    rows = []
    for r in p.relators:
        v = [0] * p.generators
        for a in r:
            v[abs(a) - 1] += 1 if a > 0 else -1
        rows.append(v)
    if not rows:
        return [0] * p.generators
    inv = smith_invariants(rows)
    out = [d for d in inv if d != 1]
    out += [0] * (p.generators - len(inv))
    return out


# ---------------------------------------------------------------------------
# finite quotients

Mat = tuple[int, int, int, int]


def _mul(a: Mat, b: Mat, n: int) -> Mat:
    return ((a[0] * b[0] + a[1] * b[2]) % n, (a[0] * b[1] + a[1] * b[3]) % n,
            (a[2] * b[0] + a[3] * b[2]) % n, (a[2] * b[1] + a[3] * b[3]) % n)


def _inv(a: Mat, n: int) -> Mat:
    return (a[3] % n, -a[1] % n, -a[2] % n, a[0] % n)


def reduce_mod(f: Factorization, n: int) -> tuple[Mat, ...]:
    """Entries of the SL(2,Z) image reduced modulo n."""
    if n < 2:
        raise ValueError("modulus must be at least 2")
    if f.group == GAMMA:
        raise TagMismatch("reduce an sl2 or b3 factorization (a Gamma entry has no sign)")
    mats = f.entries if f.group == SL2_TAG else tuple(b.to_sl2() for b in f.entries)
    return tuple(m.reduce(n) for m in mats)


def _neighbours(state: tuple[Mat, ...], n: int) -> list[tuple[Mat, ...]]:
    out = []
    for i in range(len(state) - 1):
        a, b = state[i], state[i + 1]
        ai = _inv(a, n)
        fwd = list(state)
        fwd[i], fwd[i + 1] = _mul(_mul(ai, b, n), a, n), a
        out.append(tuple(fwd))
        bwd = list(state)
        bwd[i], bwd[i + 1] = b, _mul(_mul(b, a, n), _inv(b, n), n)
        out.append(tuple(bwd))
    return out


def _sl2_mod(n: int) -> list[Mat]:
    return [(a, b, c, d) for a in range(n) for b in range(n) for c in range(n) for d in range(n)
            if (a * d - b * c) % n == 1 % n]


def _weak_key(state: tuple[Mat, ...], n: int, group: list[Mat]) -> tuple[Mat, ...]:
    return min(tuple(_mul(_mul(_inv(g, n), m, n), g, n) for m in state) for g in group)


def _expand(args: tuple[list[tuple[Mat, ...]], int, list[Mat] | None]) -> list[tuple[Mat, ...]]:
    chunk, n, group = args
    out = []
    for s in chunk:
        for t in _neighbours(s, n):
            out.append(_weak_key(t, n, group) if group else t)
    return out


@dataclass(frozen=True)
class OrbitResult:
    size: int
    complete: bool
    fingerprint: str
    minimum: tuple

    def as_dict(self) -> dict:
        return {"size": self.size, "complete": self.complete, "fingerprint": self.fingerprint}


def default_cap() -> int:
    return int(os.environ.get("MM_CAP", DEFAULT_CAP))


def hurwitz_orbit(start: Sequence[Mat], n: int, *, cap: int | None = None, jobs: int = 1,
                  weak: bool = False) -> OrbitResult:
    """Breadth-first closure under moves and inverse moves over SL(2,Z/n).

    With ``weak`` the states are taken up to global conjugation (n <= 7).
    The fingerprint is a hash of the least state, so two orbits coincide
    iff their fingerprints do.
    """
    cap = default_cap() if cap is None else cap
    group = None
    if weak:
        if n > 7:
            raise ValueError("weak orbits are limited to n <= 7")
        group = _sl2_mod(n)
    s0 = tuple(tuple(x % n for x in m) for m in start)
    if group:
        s0 = _weak_key(s0, n, group)
    seen = {s0}
    frontier = [s0]
    complete = True
    pool = multiprocessing.get_context("fork").Pool(jobs) if jobs > 1 else None
    try:
        while frontier:
            if pool:
                size = -(-len(frontier) // jobs)
                chunks = [frontier[i:i + size] for i in range(0, len(frontier), size)]
                results = pool.map(_expand, [(c, n, group) for c in chunks])
            else:
                results = [_expand((frontier, n, group))]
            nxt = []
            for part in results:
                for t in part:
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
            frontier = nxt
            if len(seen) > cap:
                complete = False
                break
    finally:
        if pool:
            pool.close()
            pool.join()
    least = min(seen)
    digest = hashlib.sha256(repr((n, weak, least)).encode()).hexdigest()[:16]
    return OrbitResult(len(seen), complete, digest if complete else "incomplete", least)
