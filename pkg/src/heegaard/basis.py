"""Change of basis between generator systems of a surface, at homology level.

A curve system is a symplectic-like basis of first homology: k "alpha"
classes and k dual "beta" classes.  Re-expressing one system in another
yields a 2k x 2k unimodular transition matrix whose four k x k blocks are
built from pairings.  The block layout is fixed as

    [ theta^T.beta  -theta^T.alpha ]
    [ gamma^T.beta  -gamma^T.alpha ]

for the target system (theta, gamma) expressed in the source (alpha, beta).

An orientation-reversing gluing of the surface to itself negates every
pairing; the image of a curve system under such a map is therefore a valid
system whose Gram matrix is the negated standard form.  Both signs are
accepted wherever a system is consumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import intlinalg
from .errors import DimensionMismatch, StructureError
from .surface import FAMILY_A, FAMILY_B, HomologyClass, pairing


@dataclass(frozen=True)
class CurveSystem:
    """Two dual families of homology classes (alpha_i, beta_i) of equal genus."""

    alpha: tuple[HomologyClass, ...]
    beta: tuple[HomologyClass, ...]

    def __post_init__(self) -> None:
        if len(self.alpha) != len(self.beta):
            raise DimensionMismatch("alpha and beta families must have equal size")
        genera = {c.genus for c in self.alpha + self.beta}
        if len(genera) > 1:
            raise DimensionMismatch("mixed genus in curve system")

    @property
    def genus(self) -> int:
        return len(self.alpha)

    @classmethod
    def standard(cls, genus: int) -> "CurveSystem":
        return cls(
            tuple(HomologyClass.basis(FAMILY_A, i, genus) for i in range(1, genus + 1)),
            tuple(HomologyClass.basis(FAMILY_B, i, genus) for i in range(1, genus + 1)),
        )

    def gram_sign(self) -> int:
        """+1 for the standard symplectic Gram matrix, -1 for its negation.

        Raises StructureError for anything else.
        """
        k = self.genus
        sign = 0
        fams = self.alpha + self.beta

        def expected(i: int, j: int) -> int:
            # standard form: alpha_i . beta_i = +1, everything else 0
            if i < k and j == i + k:
                return 1
            if j < k and i == j + k:
                return -1
            return 0

        for i in range(2 * k):
            for j in range(2 * k):
                want = expected(i, j)
                got = pairing(fams[i], fams[j])
                if want == 0:
                    if got != 0:
                        raise StructureError(
                            f"system is not symplectic: basis pairing ({i},{j}) = {got}, expected 0"
                        )
                else:
                    if got not in (want, -want):
                        raise StructureError(
                            f"system is not symplectic: basis pairing ({i},{j}) = {got}"
                        )
                    s = got // want
                    if sign == 0:
                        sign = s
                    elif sign != s:
                        raise StructureError("system mixes both Gram signs")
        return sign if sign else 1

    def stack(self) -> intlinalg.IntMatrix:
        """Coordinates of alpha_1..alpha_k, beta_1..beta_k as rows (m then n parts)."""
        return tuple(c.m + c.n for c in self.alpha + self.beta)


@dataclass(frozen=True)
class TransitionMatrix:
    """A 2k x 2k integer change-of-basis matrix in the fixed block layout."""

    entries: intlinalg.IntMatrix

    def __post_init__(self) -> None:
        n = len(self.entries)
        if n % 2 or any(len(row) != n for row in self.entries):
            raise DimensionMismatch("transition matrix must be square of even size")

    @property
    def k(self) -> int:
        return len(self.entries) // 2

    def det(self) -> int:
        return intlinalg.det(self.entries)

    def block(self, row: int, col: int) -> intlinalg.IntMatrix:
        """One of the four k x k blocks, indexed 0/1 by row and column."""
        k = self.k
        return tuple(
            tuple(self.entries[row * k + i][col * k + j] for j in range(k)) for i in range(k)
        )


def transition_matrix(frm: CurveSystem, to: CurveSystem) -> TransitionMatrix:
    """Express ``to`` in terms of ``frm`` at homology level.

    Row i of the result holds the coordinates of to.alpha[i] in the basis
    (frm.alpha, frm.beta), rows k..2k-1 those of to.beta[i].  Requires both
    systems to have a (+-)standard Gram matrix; applying the result to the
    stacked coordinates of ``frm`` reproduces ``to`` exactly, and the
    determinant is +-1.
    """
    if frm.genus != to.genus:
        raise DimensionMismatch("genus mismatch between systems")
    s = frm.gram_sign()
    to.gram_sign()
    k = frm.genus
    rows = []
    for c in to.alpha + to.beta:
        left = [s * pairing(c, frm.beta[j]) for j in range(k)]
        right = [-s * pairing(c, frm.alpha[j]) for j in range(k)]
        rows.append(tuple(left + right))
    h = TransitionMatrix(tuple(rows))
    d = h.det()
    if d not in (1, -1):
        raise StructureError(f"transition matrix is not unimodular (det {d})")
    return h


def verify_inverse_pair(h: TransitionMatrix, h_inv: TransitionMatrix) -> bool:
    """True iff the product of the two matrices is the identity."""
    if h.k != h_inv.k:
        raise DimensionMismatch("transition matrices of different size")
    return intlinalg.mat_mul(h.entries, h_inv.entries) == intlinalg.identity(2 * h.k)


def is_block_antidiagonal(h: TransitionMatrix) -> bool:
    """True iff the theta^T.beta and gamma^T.alpha blocks both vanish."""
    zero = tuple((0,) * h.k for _ in range(h.k))
    return h.block(0, 0) == zero and h.block(1, 1) == zero


def certificate_form(
    h: TransitionMatrix,
) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Signed-permutation shape of the -theta^T.alpha block.

    Requires a block-antidiagonal matrix; returns 0-indexed ``(sigma, eps)``
    when row i of the block has a single nonzero entry eps_i = +-1 in
    column sigma_i, None otherwise.
    """
    if not is_block_antidiagonal(h):
        raise StructureError("certificate form needs a block-antidiagonal matrix")
    return intlinalg.signed_permutation(h.block(0, 1))


@dataclass(frozen=True)
class GluingMap:
    """Homology action of a surface self-map, as images of the canonical basis.

    ``images`` lists the classes of a_1..a_k followed by b_1..b_k.  A
    reversing map negates the pairing of every pair of classes.
    """

    images: tuple[HomologyClass, ...]
    reversing: bool = True

    def __post_init__(self) -> None:
        if len(self.images) % 2:
            raise DimensionMismatch("need images for all 2k basis classes")

    @property
    def genus(self) -> int:
        return len(self.images) // 2

    def apply(self, cls: HomologyClass) -> HomologyClass:
        if cls.genus != self.genus:
            raise DimensionMismatch("class genus does not match gluing map")
        out = HomologyClass.zero(self.genus)
        for coeff, image in zip(cls.m + cls.n, self.images):
            if coeff:
                out = out + image.scaled(coeff)
        return out

    def check(self) -> None:
        """Verify the pushforward sign on all basis pairs."""
        want = -1 if self.reversing else 1
        k = self.genus
        basis = [HomologyClass.basis(FAMILY_A, i, k) for i in range(1, k + 1)] + [
            HomologyClass.basis(FAMILY_B, i, k) for i in range(1, k + 1)
        ]
        for i, u in enumerate(basis):
            for j, v in enumerate(basis):
                if pairing(self.apply(u), self.apply(v)) != want * pairing(u, v):
                    raise StructureError(
                        f"gluing map does not scale the pairing by {want} on basis pair ({i},{j})"
                    )

    def image_system(self) -> CurveSystem:
        """The curve system (h(a_1)..h(a_k); h(b_1)..h(b_k))."""
        k = self.genus
        return CurveSystem(self.images[:k], self.images[k:])
