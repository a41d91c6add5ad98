from fractions import Fraction

import pytest

from heegaard.diagram import full_reduction, h1_group
from heegaard.errors import PreconditionError, StructureError, ValidationError
from heegaard.morse import (
    CriticalPoint,
    MorseProgram,
    cancel_01_pair,
    cancel_23_pair,
    euler_characteristic,
    middle_genus,
    reverse,
    self_index,
    to_heegaard,
)
from heegaard.surface import parse_word


def cp(pid, index, level=None):
    return CriticalPoint(pid, index, Fraction(index if level is None else level))


def closed(points, hints=()):
    return MorseProgram(points=tuple(points), hints=frozenset(frozenset(h) for h in hints))


def sphere_program(k):
    points = [cp("o1", 0)]
    points += [cp(f"p{i}", 1) for i in range(1, k + 1)]
    points += [cp(f"q{i}", 2) for i in range(1, k + 1)]
    points.append(cp("r1", 3))
    return closed(points)


def test_critical_point_validation():
    with pytest.raises(ValidationError):
        CriticalPoint("x", 4, Fraction(0))
    with pytest.raises(ValidationError):
        CriticalPoint("bad id", 1, Fraction(1))


def test_self_index_sorts_and_levels():
    prog = closed([cp("r", 3, Fraction(1, 10)), cp("o", 0, 2)])
    out = self_index(prog)
    assert [p.id for p in out.points] == ["o", "r"]
    assert [p.level for p in out.points] == [Fraction(0), Fraction(3)]
    assert out.self_indexed


def test_self_index_idempotent_and_stable():
    prog = self_index(sphere_program(3))
    again = self_index(prog)
    assert again == prog
    assert [p.id for p in prog.points if p.index == 1] == ["p1", "p2", "p3"]


def test_self_index_preserves_index_multiset():
    prog = closed([cp("a", 2, 9), cp("b", 1, 7), cp("o", 0, 5), cp("r", 3, 1)])
    out = self_index(prog)
    assert sorted(p.index for p in out.points) == sorted(p.index for p in prog.points)


def test_euler_characteristic_cases():
    assert euler_characteristic(closed([cp("o", 0), cp("r", 3)])) == 0
    for k in range(11):
        assert euler_characteristic(sphere_program(k)) == 0
    unbalanced = closed([cp("o", 0), cp("p", 1), cp("r", 3)])
    assert euler_characteristic(unbalanced) == -1 + 0 + 0  # 1 - 1 - 1


def test_euler_characteristic_rejects_boundary():
    prog = MorseProgram(points=(cp("o", 0), cp("p", 1)), boundary_upper=1)
    with pytest.raises(StructureError):
        euler_characteristic(prog)


def test_closed_program_needs_extremal_points():
    prog = closed([cp("o", 0), cp("p", 1)])
    assert any("index-3" in msg for msg in prog.validate())


def test_cancel_01_pair():
    prog = closed(
        [cp("o1", 0), cp("o2", 0), cp("p1", 1), cp("r1", 3)], hints=[("o2", "p1")]
    )
    out = cancel_01_pair(prog, "o2", "p1")
    assert sorted(p.id for p in out.points) == ["o1", "r1"]
    assert euler_characteristic(out) == euler_characteristic(prog)


def test_cancel_01_requires_hint_and_indices():
    prog = closed([cp("o1", 0), cp("o2", 0), cp("p1", 1), cp("r1", 3)])
    with pytest.raises(PreconditionError):
        cancel_01_pair(prog, "o2", "p1")  # no hint
    hinted = closed([cp("o", 0), cp("r", 3)], hints=[("o", "r")])
    with pytest.raises(PreconditionError):
        cancel_01_pair(hinted, "o", "r")  # wrong indices


def test_cancel_23_pair_mirrors_01():
    prog = closed(
        [cp("o1", 0), cp("q1", 2), cp("r1", 3), cp("r2", 3)], hints=[("q1", "r2")]
    )
    out = cancel_23_pair(prog, "q1", "r2")
    assert sorted(p.id for p in out.points) == ["o1", "r1"]
    assert euler_characteristic(out) == 0


def test_cancel_23_equals_reversed_cancel_01():
    prog = closed(
        [cp("o1", 0), cp("q1", 2), cp("r1", 3), cp("r2", 3)], hints=[("q1", "r2")]
    )
    direct = cancel_23_pair(prog, "q1", "r2")
    mirrored = reverse(cancel_01_pair(reverse(prog), "r2", "q1"))
    assert direct == mirrored


def test_reverse_involution():
    prog = self_index(sphere_program(2))
    assert reverse(reverse(prog)) == prog
    assert sorted(p.index for p in reverse(prog).points) == sorted(
        3 - p.index for p in prog.points
    )


def test_middle_genus():
    assert middle_genus(self_index(sphere_program(2))) == 2
    assert middle_genus(self_index(closed([cp("o", 0), cp("r", 3)]))) == 0


def test_middle_genus_rejects_chi_violation():
    prog = self_index(closed([cp("o", 0), cp("p", 1), cp("r", 3)]))
    with pytest.raises(StructureError):
        middle_genus(prog)


def test_middle_genus_preconditions():
    with pytest.raises(PreconditionError):
        middle_genus(sphere_program(1))  # not self-indexed
    two_tops = self_index(closed([cp("o", 0), cp("r1", 3), cp("r2", 3), cp("q", 2)]))
    with pytest.raises(PreconditionError):
        middle_genus(two_tops)


def test_to_heegaard_standard():
    prog = self_index(sphere_program(1))
    d = to_heegaard(prog, [parse_word("b1")])
    assert d.genus == 1
    assert full_reduction(d).verdict == "trivial-diagram"


def test_to_heegaard_genus0():
    prog = self_index(closed([cp("o", 0), cp("r", 3)]))
    d = to_heegaard(prog, [])
    assert d.genus == 0


def test_to_heegaard_lens_stuck():
    prog = self_index(sphere_program(1))
    d = to_heegaard(prog, [parse_word("b1 b1 b1")])
    assert h1_group(d) == (3,)
    assert full_reduction(d).verdict == "stuck"


def test_to_heegaard_word_count_mismatch():
    prog = self_index(sphere_program(2))
    with pytest.raises(ValidationError):
        to_heegaard(prog, [parse_word("b1")])


def test_to_heegaard_word_genus_mismatch():
    prog = self_index(sphere_program(1))
    with pytest.raises(ValidationError):
        to_heegaard(prog, [parse_word("b2")])
