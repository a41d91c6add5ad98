"""Word algebra for the fundamental group of a closed oriented surface.

The group of the genus-k surface is generated by 2k loops
a1, b1, ..., ak, bk subject to the single relation
[a1,b1]...[ak,bk] = 1.  Its abelianization is free abelian on the same
generators, and with a fixed orientation the intersection form becomes the
standard symplectic pairing a_i . b_i = +1, all other basis products 0.

Words are plain sequences of signed generators; nothing here attempts the
general word problem.  Two normal forms are provided: free reduction
(cancel adjacent inverse pairs) and the cyclic normal form used for free
homotopy classes (freely and cyclically reduced, canonical rotation).
All homology-level quantities are exact integers.

Text grammar: a word is a whitespace-separated list of tokens ``a<i>``,
``b<i>``, ``A<i>``, ``B<i>``, uppercase meaning inverse.  For example
``a1 b1 A1 B1`` is the genus-1 relator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import DimensionMismatch, ValidationError

FAMILY_A = "a"
FAMILY_B = "b"
FAMILIES = (FAMILY_A, FAMILY_B)

_TOKEN_RE = re.compile(r"([abAB])([1-9][0-9]*)$")


@dataclass(frozen=True)
class Letter:
    """A signed generator: family 'a' or 'b', 1-based handle index, exponent +-1."""

    family: str
    index: int
    exp: int = 1

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown generator family {self.family!r}")
        if self.index < 1:
            raise ValidationError(f"generator index must be >= 1, got {self.index}")
        if self.exp not in (1, -1):
            raise ValidationError(f"letter exponent must be +1 or -1, got {self.exp}")

    @property
    def inverse(self) -> "Letter":
        return Letter(self.family, self.index, -self.exp)

    def sort_key(self) -> tuple[int, int, int]:
        # a1 < a1^-1 < b1 < b1^-1 < a2 < ...
        return (self.index, 0 if self.family == FAMILY_A else 1, 0 if self.exp == 1 else 1)

    def __str__(self) -> str:
        name = self.family if self.exp == 1 else self.family.upper()
        return f"{name}{self.index}"


def parse_letter(token: str) -> Letter:
    m = _TOKEN_RE.match(token)
    if m is None:
        raise ValidationError(f"bad generator token {token!r}")
    sym, idx = m.groups()
    return Letter(sym.lower(), int(idx), 1 if sym.islower() else -1)


@dataclass(frozen=True)
class Word:
    """A finite, possibly unreduced sequence of letters.  The empty word is the identity."""

    letters: tuple[Letter, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        if n >= 0:
            return Word(self.letters * n)
        return self.inverse ** (-n)

    @property
    def inverse(self) -> "Word":
        return Word(tuple(l.inverse for l in reversed(self.letters)))

    @property
    def max_index(self) -> int:
        return max((l.index for l in self.letters), default=0)

    def exponent_sum(self, family: str, index: int) -> int:
        return sum(l.exp for l in self.letters if l.family == family and l.index == index)

    def __str__(self) -> str:
        return " ".join(str(l) for l in self.letters)


WordLike = Union[Word, "CyclicWord"]


def _letters(w: WordLike) -> tuple[Letter, ...]:
    return w.letters


def parse_word(text: str, genus: int | None = None) -> Word:
    """Parse the whitespace token grammar; reject indices above ``genus`` when given."""
    letters = []
    for token in text.split():
        letter = parse_letter(token)
        if genus is not None and letter.index > genus:
            raise ValidationError(
                f"letter {token!r} exceeds genus {genus}"
            )
        letters.append(letter)
    return Word(tuple(letters))


def format_word(w: WordLike) -> str:
    return " ".join(str(l) for l in _letters(w))


def free_reduce(w: Word) -> Word:
    """Cancel adjacent inverse pairs until none remain."""
    stack: list[Letter] = []
    for letter in w.letters:
        if stack and stack[-1] == letter.inverse:
            stack.pop()
        else:
            stack.append(letter)
    return Word(tuple(stack))


def _min_rotation(letters: tuple[Letter, ...]) -> tuple[Letter, ...]:
    if not letters:
        return letters
    keyed = [tuple(l.sort_key() for l in letters[i:] + letters[:i]) for i in range(len(letters))]
    best = min(range(len(letters)), key=lambda i: keyed[i])
    return letters[best:] + letters[:best]


@dataclass(frozen=True)
class CyclicWord:
    """A free homotopy class: freely and cyclically reduced word in canonical rotation.

    The canonical rotation is the lexicographically least one under the
    letter ordering a1 < a1^-1 < b1 < b1^-1 < a2 < ..., so equal classes
    compare and hash equal.
    """

    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        n = len(self.letters)
        for i, letter in enumerate(self.letters):
            if letter.inverse == self.letters[(i + 1) % n]:
                raise ValidationError("cyclic word is not cyclically reduced")
        if self.letters != _min_rotation(self.letters):
            raise ValidationError("cyclic word is not in canonical rotation")

    @property
    def word(self) -> Word:
        return Word(self.letters)

    @property
    def max_index(self) -> int:
        return max((l.index for l in self.letters), default=0)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return " ".join(str(l) for l in self.letters)


def cyclic_reduce(w: WordLike) -> CyclicWord:
    """Freely and cyclically reduce, then canonicalize the rotation.

    Conjugate inputs land on the same CyclicWord.
    """
    if isinstance(w, CyclicWord):
        return w
    reduced = free_reduce(w).letters
    lo, hi = 0, len(reduced)
    while hi - lo >= 2 and reduced[lo] == reduced[hi - 1].inverse:
        lo += 1
        hi -= 1
    return CyclicWord(_min_rotation(reduced[lo:hi]))


@dataclass(frozen=True)
class HomologyClass:
    """An integer homology class sum(m_i a_i) + sum(n_i b_i), stored exactly."""

    m: tuple[int, ...]
    n: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.m) != len(self.n):
            raise DimensionMismatch("m and n must have equal length")
        for v in self.m + self.n:
            if not isinstance(v, int):
                raise ValidationError(f"homology coefficients must be int, got {type(v).__name__}")

    @property
    def genus(self) -> int:
        return len(self.m)

    @property
    def is_zero(self) -> bool:
        return not any(self.m) and not any(self.n)

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        if other.genus != self.genus:
            raise DimensionMismatch("genus mismatch")
        return HomologyClass(
            tuple(x + y for x, y in zip(self.m, other.m)),
            tuple(x + y for x, y in zip(self.n, other.n)),
        )

    def __neg__(self) -> "HomologyClass":
        return HomologyClass(tuple(-x for x in self.m), tuple(-x for x in self.n))

    def __sub__(self, other: "HomologyClass") -> "HomologyClass":
        return self + (-other)

    def scaled(self, c: int) -> "HomologyClass":
        return HomologyClass(tuple(c * x for x in self.m), tuple(c * x for x in self.n))

    @classmethod
    def zero(cls, genus: int) -> "HomologyClass":
        return cls((0,) * genus, (0,) * genus)

    @classmethod
    def basis(cls, family: str, index: int, genus: int) -> "HomologyClass":
        if not 1 <= index <= genus:
            raise DimensionMismatch(f"basis index {index} out of range for genus {genus}")
        e = tuple(1 if i == index - 1 else 0 for i in range(genus))
        z = (0,) * genus
        return cls(e, z) if family == FAMILY_A else cls(z, e)


def pairing(u: HomologyClass, v: HomologyClass) -> int:
    """Symplectic intersection pairing: sum_i (u.m_i v.n_i - u.n_i v.m_i)."""
    if u.genus != v.genus:
        raise DimensionMismatch(f"genus mismatch: {u.genus} vs {v.genus}")
    return sum(um * vn - un * vm for um, un, vm, vn in zip(u.m, u.n, v.m, v.n))


@dataclass(frozen=True)
class Surface:
    """A closed oriented surface of genus k with a fixed orientation sign.

    ``orientation = -1`` models the oppositely oriented surface: every
    intersection pairing is negated, nothing else changes.
    """

    genus: int
    orientation: int = 1

    def __post_init__(self) -> None:
        if self.genus < 1:
            raise ValidationError(f"genus must be >= 1, got {self.genus}")
        if self.orientation not in (1, -1):
            raise ValidationError("orientation must be +1 or -1")

    def check_word(self, w: WordLike) -> None:
        for letter in _letters(w):
            if letter.index > self.genus:
                raise ValidationError(
                    f"letter {letter} exceeds genus {self.genus}"
                )

    def generator(self, family: str, index: int) -> Word:
        if not 1 <= index <= self.genus:
            raise ValidationError(f"generator index {index} out of range for genus {self.genus}")
        return Word((Letter(family, index),))

    def relator(self) -> Word:
        """The defining relation [a1,b1]...[ak,bk]."""
        letters: list[Letter] = []
        for i in range(1, self.genus + 1):
            a, b = Letter(FAMILY_A, i), Letter(FAMILY_B, i)
            letters += [a, b, a.inverse, b.inverse]
        return Word(tuple(letters))

    def parse(self, text: str) -> Word:
        return parse_word(text, genus=self.genus)

    def free_reduce(self, w: Word) -> Word:
        self.check_word(w)
        return free_reduce(w)

    def abelianize(self, w: WordLike) -> HomologyClass:
        """Exponent-sum image of the word in first homology."""
        self.check_word(w)
        m = [0] * self.genus
        n = [0] * self.genus
        for letter in _letters(w):
            (m if letter.family == FAMILY_A else n)[letter.index - 1] += letter.exp
        return HomologyClass(tuple(m), tuple(n))

    def basis_class(self, family: str, index: int) -> HomologyClass:
        return HomologyClass.basis(family, index, self.genus)

    def word_pairing(self, l: WordLike, g: WordLike) -> int:
        """Intersection number of two classes, via their abelianizations."""
        return self.orientation * pairing(self.abelianize(l), self.abelianize(g))

    def coefficients_via_pairing(self, l: WordLike) -> HomologyClass:
        """Recover the homology coefficients from pairings against the basis.

        m_i is the pairing with b_i and n_i the negated pairing with a_i;
        the result always equals ``abelianize(l)``.
        """
        m = tuple(
            self.orientation * self.word_pairing(l, self.generator(FAMILY_B, i))
            for i in range(1, self.genus + 1)
        )
        n = tuple(
            -self.orientation * self.word_pairing(l, self.generator(FAMILY_A, i))
            for i in range(1, self.genus + 1)
        )
        return HomologyClass(m, n)

    def is_homogeneous(self, g: WordLike, family: str, index: int) -> bool:
        """True when the letter and its inverse occur equally often in ``g``."""
        if not 1 <= index <= self.genus:
            raise ValidationError(f"index {index} out of range for genus {self.genus}")
        self.check_word(g)
        return Word(_letters(g)).exponent_sum(family, index) == 0

    def in_commutator_subgroup(self, g: WordLike) -> bool:
        """Homology-level membership test: true iff the class of ``g`` vanishes.

        Because the abelianization is free abelian on the 2k generators,
        this is exact, not merely necessary.
        """
        return self.abelianize(g).is_zero


def commutator(u: Word, v: Word) -> Word:
    return u * v * u.inverse * v.inverse
