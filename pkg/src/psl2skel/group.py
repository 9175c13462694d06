"""
Exact arithmetic in the modular group PSL(2,Z), in SL(2,Z) and in the braid
group B3.

Elements of PSL(2,Z) = <X | X^3> * <Y | Y^2> are stored as reduced words in
the free product: strings over the letters ``X``, ``x`` (= X^-1 = X^2) and
``Y`` in which no two ``Y`` and no two X-letters are adjacent.  The empty
string is the identity.

    >>> g = Gamma("XY")
    >>> (g ** 5).word
    'XYXYXYXYXY'
    >>> to_matrix(g)
    SL2(a=1, b=1, c=0, d=1)
    >>> Gamma.parse("XXX").is_identity()
    True

Braids are stored as pairs (image in PSL(2,Z), degree); the kernel of
B3 -> PSL(2,Z) is the center, generated by (s1 s2)^3 of degree 6, so the
pair determines the braid.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable

__all__ = [
    "Gamma", "SL2", "Braid", "CyclicWord", "NotSimple",
    "normalize", "to_matrix", "matrix_to_gamma", "degree6", "degree12",
    "conjugacy_class", "is_conjugate", "is_simple", "lift_simple", "conjugator_to_xy",
    "X", "Y", "XY", "SIGMA1", "SIGMA2", "X_MATRIX", "Y_MATRIX",
]


class NotSimple(ValueError):
    """Raised when an element is required to be conjugate to XY and is not."""


# Exponent of an X-letter and the letter of a given nonzero exponent mod 3.
_XEXP = {"X": 1, "x": 2}
_XLET = {1: "X", 2: "x"}

# deg6: PSL(2,Z) -> Z/6 and deg12: SL(2,Z) -> Z/12.  The epimorphism
# B3 -> SL(2,Z), s1 -> XY, s2 -> X^2 Y X^-1 sends u = s2 s1 to -X^-1 and
# v = s2 s1^2 to -Y.  With deg u = 2, deg v = 3 and deg(-id) = deg(u^3) = 6:
#   deg12(X) = -2 + 6 = 4,  deg12(Y) = 3 + 6 = 9,  deg6 = deg12 mod 6.
DEG6 = {"X": 4, "x": 2, "Y": 3}
DEG12 = {"X": 4, "x": 8, "Y": 9}


class _WordParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str) -> ValueError:
        return ValueError(f"column {self.pos + 1}: {msg} in {self.text!r}")

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos] in " \t*.":
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> "Gamma":
        g = self.product()
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}")
        return g

    def product(self) -> "Gamma":
        g = Gamma()
        while self.peek() and self.peek() != ")":
            g = g * self.power()
        return g

    def power(self) -> "Gamma":
        c = self.peek()
        if c == "(":
            self.pos += 1
            g = self.product()
            if self.peek() != ")":
                raise self.error("missing ')'")
            self.pos += 1
        elif c in "XxYy1":
            self.pos += 1
            g = normalize(c) if c != "1" else Gamma()
        else:
            raise self.error(f"unexpected {c!r}")
        if self.peek() == "^":
            self.pos += 1
            start = self.pos
            if self.pos < len(self.text) and self.text[self.pos] in "+-":
                self.pos += 1
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            try:
                n = int(self.text[start:self.pos])
            except ValueError:
                raise self.error("bad exponent") from None
            g = g ** n
        return g


def normalize(raw: Iterable[str]) -> "Gamma":
    """Reduce a word over ``X``, ``x`` (X^-1) and ``Y`` to normal form.

    Any iterable of single letters is accepted; ``y`` is read as Y^-1 = Y.
    """
    out: list[str] = []
    for c in raw:
        if c in "Yy":
            if out and out[-1] == "Y":
                out.pop()
            else:
                out.append("Y")
        elif c in _XEXP:
            if out and out[-1] in _XEXP:
                e = (_XEXP[out.pop()] + _XEXP[c]) % 3
                if e:
                    out.append(_XLET[e])
            else:
                out.append(c)
        elif c.isspace() or c in "*.":
            continue
        else:
            raise ValueError(f"unexpected letter {c!r} in group word")
    return Gamma("".join(out))


def _join(a: str, b: str) -> str:
    # product of two normal forms: cancellation only happens at the junction
    i, j = len(a), 0
    while i and j < len(b):
        p, q = a[i - 1], b[j]
        if p == "Y" and q == "Y":
            i -= 1
            j += 1
        elif p != "Y" and q != "Y":
            e = (_XEXP[p] + _XEXP[q]) % 3
            i -= 1
            j += 1
            if e:
                return a[:i] + _XLET[e] + b[j:]
        else:
            break
    return a[:i] + b[j:]


@dataclass(frozen=True, order=True)
class Gamma:
    """An element of PSL(2,Z) in free-product normal form."""

    word: str = ""

    @classmethod
    def parse(cls, text: str) -> "Gamma":
        """Parse letters X, x, Y with parentheses and integer powers, e.g. ``(XY)^-3 YX``."""
        return _WordParser(text).parse()

    @classmethod
    def identity(cls) -> "Gamma":
        return cls("")

    def __mul__(self, other: "Gamma") -> "Gamma":
        if not isinstance(other, Gamma):
            return NotImplemented
        return Gamma(_join(self.word, other.word))

    def __pow__(self, n: int) -> "Gamma":
        base = self if n >= 0 else self.inverse()
        result = Gamma()
        for _ in range(abs(n)):
            result = result * base
        return result

    def inverse(self) -> "Gamma":
        return Gamma(self.word[::-1].translate(_SWAP_X))

    def conjugate(self, g: "Gamma") -> "Gamma":
        """Return g^-1 * self * g."""
        return g.inverse() * self * g

    def is_identity(self) -> bool:
        return not self.word

    def __len__(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return self.word or "1"


_SWAP_X = str.maketrans("Xx", "xX")

X = Gamma("X")
Y = Gamma("Y")
XY = Gamma("XY")


# ---------------------------------------------------------------------------
# SL(2,Z)

@dataclass(frozen=True)
class SL2:
    """A 2x2 integer matrix [[a, b], [c, d]] of determinant one."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self.rows()} is not 1")

    def __mul__(self, o: "SL2") -> "SL2":
        return SL2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                   self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def __neg__(self) -> "SL2":
        return SL2(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, n: int) -> "SL2":
        base = self if n >= 0 else self.inverse()
        result = SL2(1, 0, 0, 1)
        for _ in range(abs(n)):
            result = result * base
        return result

    def inverse(self) -> "SL2":
        return SL2(self.d, -self.b, -self.c, self.a)

    def conjugate(self, g: "SL2") -> "SL2":
        return g.inverse() * self * g

    def apply(self, v: tuple[int, int]) -> tuple[int, int]:
        return (self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1])

    def trace(self) -> int:
        return self.a + self.d

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def canonical_sign(self) -> "SL2":
        """The representative of {M, -M} whose first nonzero entry is positive."""
        for v in (self.a, self.b, self.c, self.d):
            if v:
                return self if v > 0 else -self
        raise AssertionError("zero matrix has determinant 0")

    def reduce(self, n: int) -> tuple[int, int, int, int]:
        return (self.a % n, self.b % n, self.c % n, self.d % n)

    def __str__(self) -> str:
        return f"[{self.a},{self.b};{self.c},{self.d}]"


ID_MATRIX = SL2(1, 0, 0, 1)
X_MATRIX = SL2(-1, 1, -1, 0)
# The source prints Y garbled; Y^2 = -id forces [[0,-1],[1,0]].
Y_MATRIX = SL2(0, -1, 1, 0)
_LETTER_MATRIX = {"X": X_MATRIX, "x": X_MATRIX * X_MATRIX, "Y": Y_MATRIX}


def _word_matrix(word: str) -> SL2:
    return reduce(lambda m, c: m * _LETTER_MATRIX[c], word, ID_MATRIX)


def to_matrix(g: Gamma) -> SL2:
    """The canonical lift of g: first nonzero entry positive."""
    return _word_matrix(g.word).canonical_sign()


def matrix_to_gamma(m: SL2) -> Gamma:
    """The image of m in PSL(2,Z); m and -m have the same image."""
    # Euclid with T = XY = [1,1;0,1] and S = Y: m = T^q1 S T^q2 S ... (±T^r)
    letters: list[str] = []
    a, b, c, d = m.a, m.b, m.c, m.d
    while c != 0:
        q = a // c
        letters.append("XY" * q if q >= 0 else "Yx" * (-q))
        a, b = a - q * c, b - q * d
        letters.append("Y")
        a, b, c, d = c, d, -a, -b
    # now m = ±[[±1, b], [0, ±1]] = ±T^(b/a)
    r = b * a
    letters.append("XY" * r if r >= 0 else "Yx" * (-r))
    return normalize("".join(letters))


def degree6(g: Gamma) -> int:
    return sum(DEG6[c] for c in g.word) % 6


def degree12(m: SL2) -> int:
    g = matrix_to_gamma(m)
    deg = sum(DEG12[c] for c in g.word)
    if _word_matrix(g.word) != m:
        deg += 6
    return deg % 12


# ---------------------------------------------------------------------------
# conjugacy

@dataclass(frozen=True, order=True)
class CyclicWord:
    """Conjugacy class of PSL(2,Z): cyclically reduced word, minimal rotation."""

    letters: str

    @classmethod
    def of(cls, g: Gamma) -> "CyclicWord":
        w = g.word
        while len(w) >= 2:
            p, q = w[0], w[-1]
            if p == "Y" and q == "Y":
                w = w[1:-1]
            elif p != "Y" and q != "Y":
                e = (_XEXP[p] + _XEXP[q]) % 3
                w = w[1:-1] + (_XLET[e] if e else "")
            else:
                break
        if len(w) <= 1:
            return cls(w)
        return cls(min(w[i:] + w[:i] for i in range(len(w))))

    def __str__(self) -> str:
        return self.letters or "1"


def conjugacy_class(g: Gamma) -> CyclicWord:
    return CyclicWord.of(g)


def is_conjugate(g: Gamma, h: Gamma) -> bool:
    return CyclicWord.of(g) == CyclicWord.of(h)


_XY_CLASS = CyclicWord.of(XY)


def is_simple(g: Gamma) -> bool:
    """True iff g is conjugate to XY in PSL(2,Z)."""
    return CyclicWord.of(g) == _XY_CLASS


def conjugator_to_xy(g: Gamma) -> Gamma:
    """Return h with g = h^-1 (XY) h; raises NotSimple otherwise."""
    # invariant: g = h^-1 cur h; conjugating by the first letter shortens cur
    cur, h = g, Gamma()
    while len(cur) > 2 and (cur.word[0] == "Y") == (cur.word[-1] == "Y"):
        p = Gamma(cur.word[0])
        cur = p.inverse() * cur * p
        h = p.inverse() * h
    if cur == XY:
        return h
    if cur == Gamma("YX"):
        # YX = Y (XY) Y
        return Y * h
    raise NotSimple(f"{g} is not conjugate to XY")


# ---------------------------------------------------------------------------
# B3

@dataclass(frozen=True)
class Braid:
    """A braid in B3, stored as its image in PSL(2,Z) and its degree."""

    image: Gamma
    degree: int

    def __post_init__(self):
        if (self.degree - degree6(self.image)) % 6:
            raise ValueError(f"degree {self.degree} incompatible with image {self.image}")

    @classmethod
    def parse(cls, text: str) -> "Braid":
        """Parse ``s1 s2 S1`` (capital letter = inverse generator)."""
        result = cls(Gamma(), 0)
        for tok in text.replace(",", " ").split():
            if tok in ("1", "e"):
                continue
            if tok not in _SIGMA_TOKENS:
                raise ValueError(f"unknown braid letter {tok!r}")
            result = result * _SIGMA_TOKENS[tok]
        return result

    @classmethod
    def from_word(cls, word: Iterable[int]) -> "Braid":
        """Braid from a word of nonzero ints: i = s_i, -i = s_i^-1."""
        gens = {1: SIGMA1, 2: SIGMA2, -1: SIGMA1.inverse(), -2: SIGMA2.inverse()}
        return reduce(lambda acc, i: acc * gens[i], word, cls(Gamma(), 0))

    def __mul__(self, o: "Braid") -> "Braid":
        return Braid(self.image * o.image, self.degree + o.degree)

    def __pow__(self, n: int) -> "Braid":
        return Braid(self.image ** n, self.degree * n)

    def inverse(self) -> "Braid":
        return Braid(self.image.inverse(), -self.degree)

    def conjugate(self, g: "Braid") -> "Braid":
        return g.inverse() * self * g

    def to_sl2(self) -> SL2:
        """The image in SL(2,Z): the lift of the image with matching deg12."""
        m = to_matrix(self.image)
        return m if degree12(m) == self.degree % 12 else -m

    def is_simple(self) -> bool:
        return self.degree == 1 and is_simple(self.image)

    def word(self) -> list[int]:
        """A short word in the Artin generators representing this braid."""
        table = _short_words()
        if self in table:
            return list(table[self])
        best = _chunked_word(self)
        if self.degree == 1 and is_simple(self.image):
            h = _letters_to_braid(conjugator_to_xy(self.image).word)
            conj = _free_reduce_ints(_inverse_word(h) + [1] + h)
            if len(conj) <= len(best):
                return conj
        return best

    def __str__(self) -> str:
        return " ".join(f"s{i}" if i > 0 else f"S{-i}" for i in self.word()) or "1"


SIGMA1 = Braid(XY, 1)
SIGMA2 = Braid(Gamma("xYx"), 1)
_SIGMA_TOKENS = {"s1": SIGMA1, "s2": SIGMA2,
                 "S1": SIGMA1.inverse(), "S2": SIGMA2.inverse()}
# u = s2 s1 maps to X^-1, v = s2 s1 s1 maps to Y; X lifts to u^-1
_LETTER_BRAID = {"x": [2, 1], "X": [-1, -2], "Y": [2, 1, 1]}
_LETTER_BRAID_DEG = {"x": 2, "X": -2, "Y": 3}


def _by_image() -> dict:
    """Image -> list of (degree, shortest word) over the short-word table."""
    if not _BY_IMAGE:
        for b, w in _short_words().items():
            _BY_IMAGE.setdefault(b.image.word, []).append((b.degree, w))
    return _BY_IMAGE


_BY_IMAGE: dict = {}


def _chunked_word(b: "Braid", piece: int = 8) -> list[int]:
    """Cut the image word into pieces, lift each from the table, fix the degree by twists.

    A dynamic program over (position, degree) minimizes the total length,
    counting 6 letters per full twist (s1 s2)^{+-3} needed at the end.
    """
    table = _by_image()
    word = b.image.word
    n = len(word)
    # best[j][deg] = (length, previous j, previous deg, piece word)
    best: list[dict] = [dict() for _ in range(n + 1)]
    best[0][0] = (0, -1, 0, ())
    for j in range(n):
        for deg, (cost, _, _, _) in list(best[j].items()):
            for j2 in range(j + 1, min(n, j + piece) + 1):
                for d, w in table.get(word[j:j2], ()):
                    key = deg + d
                    c = cost + len(w)
                    if key not in best[j2] or c < best[j2][key][0]:
                        best[j2][key] = (c, j, deg, w)
    final = min(best[n], key=lambda d: best[n][d][0] + abs(b.degree - d))
    pieces = []
    j, deg = n, final
    while j > 0:
        _, pj, pdeg, w = best[j][deg]
        pieces.append(list(w))
        j, deg = pj, pdeg
    out = [i for w in reversed(pieces) for i in w]
    twists = (b.degree - final) // 6
    delta2 = [1, 2] * 3 if twists > 0 else [-2, -1] * 3
    return _free_reduce_ints(out + delta2 * abs(twists))


def _letters_to_braid(word: str) -> list[int]:
    out: list[int] = []
    for c in word:
        out.extend(_LETTER_BRAID[c])
    return out


def _inverse_word(w: list[int]) -> list[int]:
    return [-i for i in reversed(w)]


def _free_reduce_ints(w: list[int]) -> list[int]:
    out: list[int] = []
    for i in w:
        if out and out[-1] == -i:
            out.pop()
        else:
            out.append(i)
    return out


_SHORT: dict = {}


def _short_words(max_len: int = 6) -> dict:
    """Shortest words for all braids of word length <= max_len."""
    if not _SHORT:
        gens = {1: SIGMA1, 2: SIGMA2, -1: SIGMA1.inverse(), -2: SIGMA2.inverse()}
        _SHORT[Braid(Gamma(), 0)] = ()
        layer = [((), Braid(Gamma(), 0))]
        for _ in range(max_len):
            nxt = []
            for w, b in layer:
                for i, g in gens.items():
                    if w and w[-1] == -i:
                        continue
                    c = b * g
                    if c not in _SHORT:
                        _SHORT[c] = w + (i,)
                        nxt.append((w + (i,), c))
            layer = nxt
    return _SHORT


def lift_simple(g: Gamma) -> tuple[SL2, Braid]:
    """The SL(2,Z) lift of trace 2 and the degree-one braid over g ~ XY."""
    if not is_simple(g):
        raise NotSimple(f"{g} is not conjugate to XY")
    m = to_matrix(g)
    if m.trace() != 2:
        m = -m
    return m, Braid(g, 1)
