"""Shared helpers: random generators and independent oracles.

The oracles here deliberately avoid the production code paths they check:
``pairing_by_expansion`` expands the bilinear form over a basis product
table, and Smith-form expectations in the tests come from sympy or hand
computation.
"""

from __future__ import annotations

import random

from heegaard.arrangement import (
    OWNER_M,
    OWNER_MP,
    Arc,
    CurveArrangement,
    canonical_torus_arrangement,
    wiggled,
)
from heegaard.basis import CurveSystem
from heegaard.surface import FAMILY_A, FAMILY_B, HomologyClass, Letter, Word

ALL_LETTERS = {
    genus: [
        Letter(fam, idx, exp)
        for idx in range(1, genus + 1)
        for fam in (FAMILY_A, FAMILY_B)
        for exp in (1, -1)
    ]
    for genus in (1, 2, 3)
}


def random_word(rng: random.Random, genus: int, max_len: int = 12) -> Word:
    n = rng.randrange(max_len + 1)
    return Word(tuple(rng.choice(ALL_LETTERS[genus]) for _ in range(n)))


def random_class(rng: random.Random, genus: int, bound: int = 5) -> HomologyClass:
    return HomologyClass(
        tuple(rng.randint(-bound, bound) for _ in range(genus)),
        tuple(rng.randint(-bound, bound) for _ in range(genus)),
    )


def pairing_by_expansion(u: HomologyClass, v: HomologyClass) -> int:
    """Independent oracle: expand bilinearly over the basis product table."""
    k = u.genus
    table = {}
    for i in range(k):
        table[("a", i, "b", i)] = 1
        table[("b", i, "a", i)] = -1

    def coeffs(cls):
        for i in range(k):
            yield ("a", i), cls.m[i]
            yield ("b", i), cls.n[i]

    total = 0
    for (fu, iu), cu in coeffs(u):
        for (fv, iv), cv in coeffs(v):
            total += cu * cv * table.get((fu, iu, fv, iv), 0)
    return total


def _transvection(x: HomologyClass, v: HomologyClass) -> HomologyClass:
    return x + v.scaled(pairing_by_expansion(x, v))


def random_symplectic_system(
    rng: random.Random, genus: int, steps: int = 4, bound: int = 10
) -> CurveSystem:
    """Standard basis pushed through random symplectic transvections.

    Transvections preserve the pairing exactly; small transvection vectors
    and a retry loop keep all coordinates within ``bound``.
    """
    while True:
        std = CurveSystem.standard(genus)
        classes = list(std.alpha + std.beta)
        for _ in range(steps):
            v = HomologyClass(
                tuple(rng.randint(-1, 1) for _ in range(genus)),
                tuple(rng.randint(-1, 1) for _ in range(genus)),
            )
            classes = [_transvection(x, v) for x in classes]
        if all(abs(c) <= bound for x in classes for c in x.m + x.n):
            return CurveSystem(tuple(classes[:genus]), tuple(classes[genus:]))


def contractible_poke() -> CurveArrangement:
    """A straight M loop plus a contractible M circle poking across Mp.

    The circle meets the straight Mp loop twice with opposite signs (v1, v2)
    and together with the straight M loop (crossing v0) keeps the complement
    cellular.  The two halves of the circle bound a mirror pair of bigons;
    removing either frees the circle into a free loop, leaving the straight
    one-crossing picture.
    """
    signs = {0: 1, 1: -1, 2: 1}
    arcs = {
        0: Arc(OWNER_M, (0, 0), (0, 2)),  # the straight M loop
        1: Arc(OWNER_M, (2, 0), (1, 0)),  # right half of the circle
        2: Arc(OWNER_M, (1, 2), (2, 2)),  # left half of the circle
        3: Arc(OWNER_MP, (2, 1), (1, 3)),  # Mp segment inside the circle
        4: Arc(OWNER_MP, (1, 1), (0, 3)),
        5: Arc(OWNER_MP, (0, 1), (2, 3)),
    }
    return CurveArrangement(
        genus=1, signs=signs, arcs=arcs, free_loops={OWNER_M: 0, OWNER_MP: 0}
    )


FIXTURE_CLASS_PAIRS = [
    ((1, 0), (0, 1)),
    ((2, 1), (1, 1)),
    ((3, 2), (1, -1)),
    ((1, 0), (1, 2)),
    ((0, 1), (3, 1)),
]


def fixture_arrangements(seed: int = 20260809, count: int = 20) -> list[CurveArrangement]:
    """Seeded non-minimal arrangements obtained by random finger moves."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        u, v = FIXTURE_CLASS_PAIRS[len(out) % len(FIXTURE_CLASS_PAIRS)]
        base = canonical_torus_arrangement(u, v)
        out.append(wiggled(base, moves=1 + rng.randrange(4), rng=rng))
    return out
