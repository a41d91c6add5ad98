import pytest

from heegaard.errors import ValidationError
from heegaard.presentation import Presentation, simplify
from heegaard.surface import format_word, parse_word


def pres(gens, relator_texts):
    return Presentation(tuple(gens), tuple(parse_word(t) for t in relator_texts))


def test_presentation_rejects_a_letters():
    with pytest.raises(ValidationError):
        pres(["b1"], ["a1"])


def test_presentation_rejects_unknown_generator():
    with pytest.raises(ValidationError):
        pres(["b1"], ["b2"])


def test_simplify_standard_is_trivial():
    result = simplify(pres(["b1", "b2"], ["b1", "b2"]))
    assert result.trivial
    assert result.presentation.generators == ()
    assert result.presentation.relators == ()
    assert result.moves == 2


def test_simplify_lens_is_stuck():
    result = simplify(pres(["b1"], ["b1 b1 b1"]))
    assert not result.trivial
    assert not result.exhausted
    assert result.presentation.generators == ("b1",)
    assert format_word(result.presentation.relators[0]) == "b1 b1 b1"


def test_simplify_substitutes_through_other_relators():
    # b1 = b2^-1 from the first relator; the second becomes trivial
    result = simplify(pres(["b1", "b2"], ["b1 b2", "b1 b2"]))
    assert not result.trivial
    assert result.presentation.generators == ("b2",)
    assert result.presentation.relators == ()


def test_simplify_chain_elimination():
    # b2 = b1^-1, then b1 dies against the second relator
    result = simplify(pres(["b1", "b2"], ["b1 b2", "b1"]))
    assert result.trivial


def test_simplify_respects_budget():
    result = simplify(pres(["b1", "b2"], ["b1", "b2"]), max_moves=1)
    assert not result.trivial
    assert result.moves == 1
    assert result.exhausted


def test_simplify_empty_presentation():
    result = simplify(Presentation((), ()))
    assert result.trivial
    assert result.moves == 0


def test_simplify_conjugated_relator():
    # cyclic reduction exposes the generator even through conjugation
    result = simplify(pres(["b1", "b2"], ["b2 b1 B2", "b2"]))
    assert result.trivial
