"""Heegaard diagrams and their stepwise reduction.

A genus-k diagram carries two systems of k disjoint curves on the splitting
surface: the alpha curves bound discs on one side, the theta curves on the
other.  Curves are stored as free homotopy classes (cyclic words); the
alpha system defaults to the canonical generators a_1..a_k and most
reduction machinery requires that normal form.

The homology pairing matrix M[i][j] = theta_i . alpha_j drives everything:
its Smith normal form presents first homology of the glued 3-manifold, and
when M is a signed permutation the diagram carries a cancellation
certificate (sigma, eps).  A certified pair can be destabilized, dropping
the genus by one; iterating either reaches the genus-0 diagram of the
3-sphere or gets stuck.  A stuck verdict is a diagnostic, never a proof of
nontriviality.

Geometric checks: when embedded arrangements for (theta_i, alpha_j) pairs
are available (supplied explicitly, or derived automatically for words
supported on a single handle), destabilization is additionally verified by
reducing each pair to minimal position and demanding one crossing with the
matched alpha curve and zero with all others.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

from . import intlinalg
from .arrangement import OWNER_M, OWNER_MP, CurveArrangement
from .errors import (
    DimensionMismatch,
    MissingDataError,
    NotCertifiedError,
    StructureError,
    ValidationError,
)
from .presentation import (
    DEFAULT_MAX_MOVES,
    Presentation,
    SimplificationResult,
    simplify,
    solve_single_occurrence,
)
from .surface import (
    FAMILY_A,
    FAMILY_B,
    CyclicWord,
    Letter,
    Surface,
    Word,
    cyclic_reduce,
    free_reduce,
)

PAIRING_CONVENTION = "theta_dot_alpha"


def canonical_alpha(genus: int) -> tuple[CyclicWord, ...]:
    return tuple(CyclicWord((Letter(FAMILY_A, i),)) for i in range(1, genus + 1))


@dataclass(frozen=True)
class HeegaardDiagram:
    """Genus, theta curves, alpha curves and optional embedded pair data.

    ``embedded`` maps 0-indexed ``(i, j)`` to an arrangement of theta_i
    (family M) against alpha_j (family Mp).  Genus 0 is the diagram of the
    3-sphere.
    """

    genus: int
    theta: tuple[CyclicWord, ...]
    alpha: tuple[CyclicWord, ...] = ()
    embedded: Mapping[tuple[int, int], CurveArrangement] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.genus < 0:
            raise ValidationError("genus must be >= 0")
        if not self.alpha:
            object.__setattr__(self, "alpha", canonical_alpha(self.genus))

    @property
    def surface(self) -> Surface:
        if self.genus == 0:
            raise StructureError("the genus-0 diagram has no splitting surface words")
        return Surface(self.genus)

    @property
    def p_labels(self) -> tuple[str, ...]:
        return tuple(f"p{i}" for i in range(1, self.genus + 1))

    @property
    def q_labels(self) -> tuple[str, ...]:
        return tuple(f"q{i}" for i in range(1, self.genus + 1))

    def has_canonical_alpha(self) -> bool:
        return self.alpha == canonical_alpha(self.genus)

    def validate(self) -> list[str]:
        issues: list[str] = []
        if len(self.theta) != self.genus:
            issues.append(f"expected {self.genus} theta curves, got {len(self.theta)}")
        if len(self.alpha) != self.genus:
            issues.append(f"expected {self.genus} alpha curves, got {len(self.alpha)}")
        if issues:
            return issues
        if self.genus == 0:
            if self.embedded:
                issues.append("genus-0 diagram cannot carry embedded pair data")
            return issues
        surf = self.surface
        for name, fam in (("alpha", self.alpha), ("theta", self.theta)):
            for idx, w in enumerate(fam, start=1):
                if w.max_index > self.genus:
                    issues.append(f"{name} {idx} uses letters beyond genus {self.genus}")
        if issues:
            return issues
        for name, fam in (("alpha", self.alpha), ("theta", self.theta)):
            for i in range(self.genus):
                for j in range(i + 1, self.genus):
                    v = surf.word_pairing(fam[i], fam[j])
                    if v != 0:
                        issues.append(
                            f"{name} curves {i + 1} and {j + 1} have intersection number {v};"
                            " a disjoint family must pair to zero"
                        )
        for (i, j), arr in sorted(self.embedded.items()):
            tag = f"embedded pair ({i + 1},{j + 1})"
            if not (0 <= i < self.genus and 0 <= j < self.genus):
                issues.append(f"{tag}: index out of range")
                continue
            bad = arr.validate()
            if bad:
                issues.append(f"{tag}: " + "; ".join(str(v) for v in bad))
                continue
            want = surf.word_pairing(self.theta[i], self.alpha[j])
            got = arr.signed_sum()
            if got != want:
                issues.append(
                    f"{tag}: algebraic crossing sum {got} does not match word pairing {want}"
                )
        return issues

    def require_valid(self) -> None:
        issues = self.validate()
        if issues:
            raise ValidationError("; ".join(issues))


# -- projections and presentations ----------------------------------------


def alpha_deletion_projection(w: Word) -> Word:
    """Kill every a-letter, keep the b-letters in order, freely reduce.

    This is the image of a surface word in the handlebody whose discs are
    bounded by the alpha curves.
    """
    return free_reduce(Word(tuple(l for l in w if l.family == FAMILY_B)))


def pi1_presentation(d: HeegaardDiagram) -> Presentation:
    """Fundamental group of the glued manifold: one b-generator and one
    projected theta relator per handle."""
    gens = tuple(f"b{i}" for i in range(1, d.genus + 1))
    relators = tuple(alpha_deletion_projection(t.word) for t in d.theta)
    return Presentation(gens, relators)


def simplified_pi1(d: HeegaardDiagram, max_moves: int = DEFAULT_MAX_MOVES) -> SimplificationResult:
    return simplify(pi1_presentation(d), max_moves=max_moves)


# -- homology --------------------------------------------------------------


@dataclass(frozen=True)
class PairingMatrix:
    """M[i][j] = theta_i . alpha_j, exact integers, k x k."""

    entries: intlinalg.IntMatrix
    convention: str = PAIRING_CONVENTION

    @property
    def k(self) -> int:
        return len(self.entries)


def _half_basis_check(d: HeegaardDiagram) -> None:
    """A non-canonical alpha system must still be half of a symplectic basis."""
    if d.has_canonical_alpha() or d.genus == 0:
        return
    surf = d.surface
    rows = []
    for w in d.alpha:
        cls = surf.abelianize(w)
        rows.append(cls.m + cls.n)
    factors = intlinalg.smith_invariant_factors(rows)
    if any(f != 1 for f in factors):
        raise StructureError(
            "alpha system is not half of a symplectic basis"
            f" (invariant factors {list(factors)})"
        )


def h1_matrix(d: HeegaardDiagram) -> PairingMatrix:
    """Pairing matrix of the diagram (convention theta_i . alpha_j)."""
    if d.genus == 0:
        return PairingMatrix(())
    _half_basis_check(d)
    surf = d.surface
    entries = tuple(
        tuple(surf.word_pairing(t, a) for a in d.alpha) for t in d.theta
    )
    return PairingMatrix(entries)


def h1_group(d: HeegaardDiagram) -> tuple[int, ...]:
    """Invariant factors of first homology (1s kept, 0s mean free rank)."""
    m = h1_matrix(d)
    if m.k == 0:
        return ()
    return intlinalg.smith_invariant_factors(m.entries)


# -- cancellation certificates ----------------------------------------------


@dataclass(frozen=True)
class CancellationCertificate:
    """sigma, eps with M[i][sigma[i]] = eps_i = +-1 and zeros elsewhere.

    ``sigma`` is 0-indexed.  ``geometric`` is set only after the embedded
    disjointness check has passed.
    """

    sigma: tuple[int, ...]
    eps: tuple[int, ...]
    geometric: bool = False


def cancellation_certificate(d: HeegaardDiagram) -> Optional[CancellationCertificate]:
    """The signed-permutation certificate of the pairing matrix, if any."""
    m = h1_matrix(d)
    found = intlinalg.signed_permutation(m.entries)
    if found is None:
        return None
    sigma, eps = found
    return CancellationCertificate(sigma, eps, geometric=False)


def _single_handle_chart(
    d: HeegaardDiagram, i: int, j: int
) -> Optional[CurveArrangement]:
    """Derive an embedded chart for (theta_i, alpha_j) from words alone.

    Possible exactly when alpha is canonical and theta_i uses the letters
    of a single handle: the pair then lives in one handle's torus chart (or
    in disjoint handles, giving a crossing-free picture).
    """
    from .arrangement import canonical_torus_arrangement

    if not d.has_canonical_alpha():
        return None
    word = d.theta[i]
    support = {l.index for l in word.letters}
    if len(support) > 1:
        return None
    disjoint = CurveArrangement(
        genus=1, signs={}, arcs={}, free_loops={OWNER_M: 1, OWNER_MP: 1}
    )
    if not support:
        return disjoint
    handle = support.pop()
    if handle != j + 1:
        return disjoint
    surf = d.surface
    cls = surf.abelianize(word)
    u = (cls.m[handle - 1], cls.n[handle - 1])
    if u == (0, 0):
        # a homologically trivial curve has no canonical straight picture
        return None
    return canonical_torus_arrangement(u, (1, 0))


def pairwise_degrees(d: HeegaardDiagram) -> dict[tuple[int, int], int]:
    """Geometric intersection degree of every (theta_i, alpha_j) pair.

    Uses explicit embedded data when present, otherwise single-handle
    charts; raises MissingDataError naming the first pair that has neither.
    """
    out: dict[tuple[int, int], int] = {}
    for i in range(d.genus):
        for j in range(d.genus):
            arr = d.embedded.get((i, j))
            if arr is None:
                arr = _single_handle_chart(d, i, j)
            if arr is None:
                raise MissingDataError(
                    f"no embedded arrangement for pair (theta {i + 1}, alpha {j + 1})"
                )
            reduced, _ = arr.minimal_position()
            out[(i, j)] = reduced.crossing_count
    return out


def geometric_disjointness(
    d: HeegaardDiagram, cert: CancellationCertificate
) -> CancellationCertificate:
    """Verify the certificate geometrically.

    Reduces every pair to minimal position; the flag is set iff each
    theta_i meets its matched alpha curve exactly once and all others not
    at all.
    """
    degrees = pairwise_degrees(d)
    ok = all(
        degrees[(i, j)] == (1 if j == cert.sigma[i] else 0)
        for i in range(d.genus)
        for j in range(d.genus)
    )
    return replace(cert, geometric=ok)


# -- destabilization ---------------------------------------------------------


def _rewrite(w: Word, handle: int, substitution: Word) -> CyclicWord:
    """Delete a_handle letters, splice the substitution for b_handle, renumber."""
    out: list[Letter] = []
    for letter in w:
        if letter.index == handle:
            if letter.family == FAMILY_A:
                continue
            body = substitution if letter.exp == 1 else substitution.inverse
            out.extend(body.letters)
        else:
            out.append(letter)
    renumbered = tuple(
        Letter(l.family, l.index - 1 if l.index > handle else l.index, l.exp) for l in out
    )
    return cyclic_reduce(Word(renumbered))


def destabilize(
    d: HeegaardDiagram,
    i: int,
    cert: CancellationCertificate,
    *,
    require_geometric: bool = True,
    max_moves: int = DEFAULT_MAX_MOVES,
) -> HeegaardDiagram:
    """Cancel the pair (theta_i, alpha_sigma(i)) and drop the genus by one.

    The remaining theta words lose their a-letters on the cancelled handle
    and have b_handle replaced by the expression the cancelled relator
    forces; handles above the cancelled one are renumbered down.  Embedded
    data survives only for pairs whose theta word was untouched.  Raises
    unless the certificate matches the diagram (and, by default, has been
    geometrically verified).
    """
    if not d.has_canonical_alpha():
        raise StructureError("destabilization requires the canonical alpha system")
    if not 0 <= i < d.genus:
        raise DimensionMismatch(f"theta index {i} out of range")
    fresh = cancellation_certificate(d)
    if fresh is None or fresh.sigma != cert.sigma or fresh.eps != cert.eps:
        raise NotCertifiedError("certificate does not match the diagram")
    if require_geometric and not cert.geometric:
        raise NotCertifiedError(
            "certificate lacks geometric verification; "
            "run geometric_disjointness or pass require_geometric=False"
        )
    handle = cert.sigma[i] + 1
    relator = alpha_deletion_projection(d.theta[i].word)
    solved = solve_single_occurrence(relator, handle)
    if solved is None:
        solved = _search_literal_form(d, i, handle, max_moves)
    if solved is None:
        raise StructureError(
            f"cancelled relator does not literally expose b{handle}"
            f" within {max_moves} moves"
        )

    new_theta = []
    untouched = []
    for t in range(d.genus):
        if t == i:
            continue
        word = d.theta[t].word
        if all(l.index != handle for l in word):
            untouched.append(t)
        new_theta.append(_rewrite(word, handle, solved))

    new_embedded: dict[tuple[int, int], CurveArrangement] = {}
    for (t, j), arr in d.embedded.items():
        if t == i or j == handle - 1 or t not in untouched:
            continue
        t2 = t - 1 if t > i else t
        j2 = j - 1 if j > handle - 1 else j
        new_embedded[(t2, j2)] = arr

    return HeegaardDiagram(
        genus=d.genus - 1,
        theta=tuple(new_theta),
        alpha=canonical_alpha(d.genus - 1),
        embedded=new_embedded,
    )


def _search_literal_form(
    d: HeegaardDiagram, i: int, handle: int, max_moves: int
) -> Optional[Word]:
    """Bounded search for a product with other relators exposing b_handle once.

    Multiplying the cancelled relator by conjugates of the other projected
    relators does not change the group; a small breadth-first search tries
    to reach a form with a single b_handle occurrence.  Returns the solved
    substitution word or None.
    """
    factors: list[Word] = []
    for t in range(d.genus):
        if t == i:
            continue
        other = cyclic_reduce(alpha_deletion_projection(d.theta[t].word)).word
        for k in range(len(other)):
            rotated = Word(other.letters[k:] + other.letters[:k])
            factors.extend((rotated, rotated.inverse))
    start = cyclic_reduce(alpha_deletion_projection(d.theta[i].word)).word
    frontier = [start]
    seen = {cyclic_reduce(start)}
    moves = 0
    while frontier and moves < max_moves:
        nxt: list[Word] = []
        for w in frontier:
            for factor in factors:
                moves += 1
                candidate = cyclic_reduce(w * factor)
                if candidate in seen:
                    continue
                seen.add(candidate)
                solved = solve_single_occurrence(candidate.word, handle)
                if solved is not None:
                    return solved
                nxt.append(candidate.word)
                if moves >= max_moves:
                    return None
        frontier = nxt
    return None


# -- full reduction -----------------------------------------------------------


@dataclass(frozen=True)
class ReductionStep:
    genus_before: int
    theta_index: int  # 1-indexed position of the cancelled theta curve
    alpha_index: int  # 1-indexed matched alpha curve
    sign: int
    geometric_verified: bool


@dataclass(frozen=True)
class ReductionReport:
    verdict: str  # "trivial-diagram" | "stuck"
    steps: tuple[ReductionStep, ...]
    warnings: tuple[str, ...]
    final_genus: int
    h1_factors: tuple[int, ...]
    stuck_reason: Optional[str] = None
    matrix: Optional[intlinalg.IntMatrix] = None


STUCK_DISCLAIMER = "a stuck verdict is a heuristic outcome, not a proof of nontriviality"


def full_reduction(
    d: HeegaardDiagram, max_moves: int = DEFAULT_MAX_MOVES
) -> ReductionReport:
    """Iterate certificate, geometric check, destabilize until genus 0 or stuck.

    Missing embedded data downgrades a step to word-level cancellation and
    is recorded as a warning; a failing geometric check or an unsolvable
    relator stops the reduction.
    """
    current = d
    steps: list[ReductionStep] = []
    warnings: list[str] = []
    while current.genus > 0:
        cert = cancellation_certificate(current)
        if cert is None:
            m = h1_matrix(current)
            return ReductionReport(
                "stuck",
                tuple(steps),
                tuple(warnings + [STUCK_DISCLAIMER]),
                current.genus,
                h1_group(current),
                stuck_reason="no cancellation certificate: pairing matrix is not a signed permutation",
                matrix=m.entries,
            )
        step_no = len(steps) + 1
        try:
            cert = geometric_disjointness(current, cert)
            if not cert.geometric:
                degrees = pairwise_degrees(current)
                offending = sorted(
                    (i + 1, j + 1, deg)
                    for (i, j), deg in degrees.items()
                    if deg != (1 if j == cert.sigma[i] else 0)
                )
                return ReductionReport(
                    "stuck",
                    tuple(steps),
                    tuple(warnings + [STUCK_DISCLAIMER]),
                    current.genus,
                    h1_group(current),
                    stuck_reason=f"geometric disjointness failed at pairs {offending}",
                    matrix=h1_matrix(current).entries,
                )
        except MissingDataError as exc:
            warnings.append(f"step {step_no}: {exc}; cancelling at word level")
        try:
            nxt = destabilize(
                current, 0, cert, require_geometric=False, max_moves=max_moves
            )
        except StructureError as exc:
            return ReductionReport(
                "stuck",
                tuple(steps),
                tuple(warnings + [STUCK_DISCLAIMER]),
                current.genus,
                h1_group(current),
                stuck_reason=str(exc),
                matrix=h1_matrix(current).entries,
            )
        steps.append(
            ReductionStep(
                genus_before=current.genus,
                theta_index=1,
                alpha_index=cert.sigma[0] + 1,
                sign=cert.eps[0],
                geometric_verified=cert.geometric,
            )
        )
        current = nxt
    return ReductionReport(
        "trivial-diagram", tuple(steps), tuple(warnings), 0, ()
    )
