"""Group presentations on b-family generators, with bounded simplification.

The simplifier applies two safe moves: free/cyclic reduction of relators
(dropping empty ones) and elimination of a generator that occurs exactly
once in some relator, substituting the solved expression everywhere.  Each
elimination counts as one move against the budget.  Reaching the empty
presentation certifies the trivial group; anything else is inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .surface import FAMILY_B, Letter, Word, cyclic_reduce, free_reduce

DEFAULT_MAX_MOVES = 64


@dataclass(frozen=True)
class Presentation:
    """Generators named b1..bk and one relator word per attached disc."""

    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self) -> None:
        names = set(self.generators)
        if len(names) != len(self.generators):
            raise ValidationError("duplicate generator names")
        for r in self.relators:
            for letter in r:
                if letter.family != FAMILY_B:
                    raise ValidationError(f"relator letter {letter} is not a b-generator")
                if str(Letter(FAMILY_B, letter.index)) not in names:
                    raise ValidationError(f"relator uses unknown generator b{letter.index}")

    def __str__(self) -> str:
        gens = ", ".join(self.generators)
        rels = ", ".join(str(r) if len(r) else "1" for r in self.relators)
        return f"< {gens} | {rels} >"


@dataclass(frozen=True)
class SimplificationResult:
    presentation: Presentation
    moves: int
    trivial: bool  # empty presentation reached: the group is certified trivial
    exhausted: bool  # budget ran out with eliminations still available


def _substitute(w: Word, index: int, replacement: Word) -> Word:
    out: list[Letter] = []
    for letter in w:
        if letter.index == index:
            body = replacement if letter.exp == 1 else replacement.inverse
            out.extend(body.letters)
        else:
            out.append(letter)
    return free_reduce(Word(tuple(out)))


def solve_single_occurrence(r: Word, index: int) -> Word | None:
    """If b_index occurs exactly once in the cyclic reduction of r, solve for it.

    The relator r = 1 then determines b_index as a word in the remaining
    generators; returns that word, or None when the occurrence count is not
    exactly one.
    """
    cyc = cyclic_reduce(r)
    letters = cyc.letters
    hits = [i for i, l in enumerate(letters) if l.index == index]
    if len(hits) != 1:
        return None
    i = hits[0]
    rotated = letters[i:] + letters[:i]  # starts with b_index^delta
    rest = Word(rotated[1:])
    # b^delta * rest = 1  =>  b = rest^-1 if delta = +1 else rest
    return rest.inverse if rotated[0].exp == 1 else rest


def simplify(p: Presentation, max_moves: int = DEFAULT_MAX_MOVES) -> SimplificationResult:
    """Eliminate generators while the budget lasts.

    The result is ``trivial=True`` only when all generators and relators
    are gone, which is an honest certificate; a non-trivial-looking
    remainder proves nothing.
    """
    gens = list(p.generators)
    relators = [cyclic_reduce(r).word for r in p.relators if len(cyclic_reduce(r))]
    moves = 0
    while moves < max_moves:
        progress = False
        for ri, r in enumerate(relators):
            for name in gens:
                index = int(name[1:])
                solved = solve_single_occurrence(r, index)
                if solved is None:
                    continue
                gens.remove(name)
                rest = [
                    cyclic_reduce(_substitute(other, index, solved)).word
                    for oi, other in enumerate(relators)
                    if oi != ri
                ]
                relators = [w for w in rest if len(w)]
                moves += 1
                progress = True
                break
            if progress:
                break
        if not progress:
            return SimplificationResult(
                Presentation(tuple(gens), tuple(relators)), moves, not gens and not relators, False
            )
    exhausted = _has_elimination(gens, relators)
    return SimplificationResult(
        Presentation(tuple(gens), tuple(relators)), moves, not gens and not relators, exhausted
    )


def _has_elimination(gens: list[str], relators: list[Word]) -> bool:
    return any(
        solve_single_occurrence(r, int(name[1:])) is not None
        for r in relators
        for name in gens
    )
