import random

import pytest

from conftest import random_symplectic_system
from heegaard.basis import (
    CurveSystem,
    GluingMap,
    TransitionMatrix,
    certificate_form,
    is_block_antidiagonal,
    transition_matrix,
    verify_inverse_pair,
)
from heegaard.errors import StructureError
from heegaard.intlinalg import identity, mat_mul
from heegaard.surface import HomologyClass, pairing


def cls(m, n):
    return HomologyClass(tuple(m), tuple(n))


def blocks_by_expansion(frm: CurveSystem, to: CurveSystem):
    """Independent oracle: evaluate the four pairing blocks directly."""
    k = frm.genus
    theta, gamma = to.alpha, to.beta
    tb = [[pairing(theta[i], frm.beta[j]) for j in range(k)] for i in range(k)]
    ta = [[-pairing(theta[i], frm.alpha[j]) for j in range(k)] for i in range(k)]
    gb = [[pairing(gamma[i], frm.beta[j]) for j in range(k)] for i in range(k)]
    ga = [[-pairing(gamma[i], frm.alpha[j]) for j in range(k)] for i in range(k)]
    return tuple(
        tuple(tb[i] + ta[i]) for i in range(k)
    ) + tuple(tuple(gb[i] + ga[i]) for i in range(k))


def test_standard_system_gram():
    assert CurveSystem.standard(3).gram_sign() == 1


def test_identity_change_of_basis():
    std = CurveSystem.standard(2)
    assert transition_matrix(std, std).entries == identity(4)


def test_swap_system_blocks_match_expansion_oracle():
    # theta_i = b_i, gamma_i = a_i: a valid system with negated Gram
    std = CurveSystem.standard(2)
    swapped = CurveSystem(std.beta, std.alpha)
    assert swapped.gram_sign() == -1
    h = transition_matrix(std, swapped)
    assert h.entries == blocks_by_expansion(std, swapped)
    zero = ((0, 0), (0, 0))
    e = ((1, 0), (0, 1))
    assert h.block(0, 0) == zero and h.block(1, 1) == zero
    assert h.block(0, 1) == e and h.block(1, 0) == e


def test_genus1_swap_with_sign_is_unimodular():
    std = CurveSystem.standard(1)
    to = CurveSystem((std.beta[0],), (-std.alpha[0],))
    assert to.gram_sign() == 1
    h = transition_matrix(std, to)
    assert h.entries == ((0, 1), (-1, 0))
    assert h.det() in (1, -1)
    h_inv = transition_matrix(to, std)
    assert verify_inverse_pair(h, h_inv)


def test_non_symplectic_system_rejected():
    bad = CurveSystem((cls([2], [0]),), (cls([0], [1]),))
    with pytest.raises(StructureError):
        transition_matrix(CurveSystem.standard(1), bad)


def test_verify_inverse_pair_cases():
    e = TransitionMatrix(identity(2))
    assert verify_inverse_pair(e, e)
    shear = TransitionMatrix(((1, 1), (0, 1)))
    assert not verify_inverse_pair(shear, shear)


def test_block_antidiagonal_detection():
    std = CurveSystem.standard(2)
    swapped = CurveSystem(std.beta, std.alpha)
    assert is_block_antidiagonal(transition_matrix(std, swapped))
    assert not is_block_antidiagonal(TransitionMatrix(identity(4)))


def test_block_antidiagonal_dense_false():
    # the transvection along a1 + b1 sends (a1, b1) to (2a1 + b1, -a1)
    dense = CurveSystem((cls([2], [1]),), (cls([-1], [0]),))
    h = transition_matrix(CurveSystem.standard(1), dense)
    assert h.entries == ((2, 1), (-1, 0))
    assert abs(h.det()) == 1
    assert not is_block_antidiagonal(h)


def test_certificate_form_identity_pattern():
    std = CurveSystem.standard(2)
    # theta_i = b_i, gamma_i = -a_i gives -theta^T.alpha = E
    to = CurveSystem(std.beta, tuple(-a for a in std.alpha))
    h = transition_matrix(std, to)
    assert certificate_form(h) == ((0, 1), (1, 1))


def test_certificate_form_permuted_mixed_signs():
    std = CurveSystem.standard(2)
    b1, b2 = std.beta
    a1, a2 = std.alpha
    # theta_1 = b2, theta_2 = -b1; duals gamma_1 = -a2, gamma_2 = a1
    to = CurveSystem((b2, -b1), (-a2, a1))
    h = transition_matrix(std, to)
    sigma, eps = certificate_form(h)
    assert sigma == (1, 0)
    assert eps == (1, -1)


def test_certificate_form_rejects_non_permutation():
    h = TransitionMatrix(
        (
            (0, 0, 1, 1),
            (0, 0, 0, 1),
            (1, 1, 0, 0),
            (0, 1, 0, 0),
        )
    )
    assert is_block_antidiagonal(h)
    assert certificate_form(h) is None


def test_certificate_form_requires_antidiagonal():
    with pytest.raises(StructureError):
        certificate_form(TransitionMatrix(identity(4)))


def test_round_trip_random_systems():
    rng = random.Random(11)
    for _ in range(30):
        genus = rng.randint(1, 3)
        a = random_symplectic_system(rng, genus)
        b = random_symplectic_system(rng, genus)
        h_ab = transition_matrix(a, b)
        h_ba = transition_matrix(b, a)
        assert mat_mul(h_ab.entries, h_ba.entries) == identity(2 * genus)
        assert abs(h_ab.det()) == 1


def test_round_trip_mixed_gram_signs():
    std = CurveSystem.standard(1)
    swapped = CurveSystem(std.beta, std.alpha)  # Gram sign -1
    h1 = transition_matrix(std, swapped)
    h2 = transition_matrix(swapped, std)
    assert mat_mul(h1.entries, h2.entries) == identity(2)


# -- gluing maps -----------------------------------------------------------------


def test_gluing_map_swap_is_reversing():
    a1 = HomologyClass((1,), (0,))
    b1 = HomologyClass((0,), (1,))
    h = GluingMap(images=(b1, a1), reversing=True)
    h.check()
    assert h.apply(a1) == b1
    assert h.image_system().gram_sign() == -1


def test_gluing_map_pushforward_negates_pairing():
    rng = random.Random(12)
    k = 2
    std = CurveSystem.standard(k)
    h = GluingMap(images=std.beta + std.alpha, reversing=True)
    h.check()
    for _ in range(30):
        u = HomologyClass(
            tuple(rng.randint(-4, 4) for _ in range(k)),
            tuple(rng.randint(-4, 4) for _ in range(k)),
        )
        v = HomologyClass(
            tuple(rng.randint(-4, 4) for _ in range(k)),
            tuple(rng.randint(-4, 4) for _ in range(k)),
        )
        assert pairing(h.apply(u), h.apply(v)) == -pairing(u, v)


def test_gluing_map_identity_not_reversing():
    std = CurveSystem.standard(1)
    ident = GluingMap(images=std.alpha + std.beta, reversing=False)
    ident.check()
    with pytest.raises(StructureError):
        GluingMap(images=std.alpha + std.beta, reversing=True).check()


def test_gluing_to_certificate_pipeline():
    # an orientation-reversing gluing sending a1 -> b2, a2 -> -b1 (with the
    # forced duals) produces a block-antidiagonal transition matrix whose
    # certificate is the permuted, mixed-sign pattern
    std = CurveSystem.standard(2)
    a1, a2 = std.alpha
    b1, b2 = std.beta
    h = GluingMap(images=(b2, -b1, a2, -a1), reversing=True)
    h.check()
    system = h.image_system()
    assert system.gram_sign() == -1
    hm = transition_matrix(std, system)
    assert abs(hm.det()) == 1
    assert is_block_antidiagonal(hm)
    assert certificate_form(hm) == ((1, 0), (1, -1))
    assert verify_inverse_pair(hm, transition_matrix(system, std))
