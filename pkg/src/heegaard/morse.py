"""Symbolic handle bookkeeping for Morse functions on closed 3-manifolds.

A program is a list of critical points with indices 0..3 and exact rational
levels, plus optional attachment hints.  A hint pairs an index-0 with an
index-1 point (or, mirrored, index-2 with index-3) whose attaching spheres
meet in a single point; it is input data certifying that the pair may be
cancelled.  Nothing three-dimensional is computed here: gradient flows live
outside the model, so cancellation legality rests entirely on the hints.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from .diagram import HeegaardDiagram
from .errors import PreconditionError, StructureError, ValidationError
from .surface import CyclicWord, Word, cyclic_reduce


@dataclass(frozen=True)
class CriticalPoint:
    id: str
    index: int
    level: Fraction

    def __post_init__(self) -> None:
        if not 0 <= self.index <= 3:
            raise ValidationError(f"critical point index must be 0..3, got {self.index}")
        if not self.id or any(c.isspace() for c in self.id):
            raise ValidationError(f"bad critical point id {self.id!r}")
        if not isinstance(self.level, Fraction):
            object.__setattr__(self, "level", Fraction(self.level))


@dataclass(frozen=True)
class MorseProgram:
    """Ordered critical points of a Morse function, with optional hints.

    ``boundary_lower``/``boundary_upper`` are None for a closed manifold,
    otherwise the genus of the boundary surface.
    """

    points: tuple[CriticalPoint, ...]
    hints: frozenset[frozenset[str]] = field(default_factory=frozenset)
    boundary_lower: Optional[int] = None
    boundary_upper: Optional[int] = None
    self_indexed: bool = False

    @property
    def closed(self) -> bool:
        return self.boundary_lower is None and self.boundary_upper is None

    def count(self, index: int) -> int:
        return sum(1 for p in self.points if p.index == index)

    def point(self, pid: str) -> CriticalPoint:
        for p in self.points:
            if p.id == pid:
                return p
        raise ValidationError(f"no critical point named {pid!r}")

    def validate(self) -> list[str]:
        issues = []
        ids = [p.id for p in self.points]
        if len(set(ids)) != len(ids):
            issues.append("duplicate critical point ids")
        if self.self_indexed:
            for p in self.points:
                if p.level != p.index:
                    issues.append(f"self-indexed program but {p.id} has level {p.level}")
        if self.closed and self.points:
            if self.count(0) == 0 or self.count(3) == 0:
                issues.append(
                    "a nonempty closed program needs at least one index-0"
                    " and one index-3 point"
                )
        for pair in self.hints:
            for pid in pair:
                if pid not in ids:
                    issues.append(f"hint references unknown point {pid!r}")
        return issues

    def require_valid(self) -> None:
        issues = self.validate()
        if issues:
            raise ValidationError("; ".join(issues))


def self_index(prog: MorseProgram) -> MorseProgram:
    """Sort by index (stable) and set every level equal to its index."""
    ordered = sorted(enumerate(prog.points), key=lambda kv: (kv[1].index, kv[0]))
    points = tuple(replace(p, level=Fraction(p.index)) for _, p in ordered)
    return replace(prog, points=points, self_indexed=True)


def euler_characteristic(prog: MorseProgram) -> int:
    """Alternating sum over indices; defined here only for closed programs."""
    if not prog.closed:
        raise StructureError("Euler characteristic is only computed for closed programs")
    return sum((-1) ** p.index for p in prog.points)


def reverse(prog: MorseProgram) -> MorseProgram:
    """Turn the function upside down: index and level map to 3 minus themselves."""
    points = tuple(
        replace(p, index=3 - p.index, level=Fraction(3) - p.level) for p in prog.points
    )
    return replace(
        prog,
        points=points,
        boundary_lower=prog.boundary_upper,
        boundary_upper=prog.boundary_lower,
    )


def cancel_01_pair(prog: MorseProgram, o: str, p: str) -> MorseProgram:
    """Remove an index-0/index-1 pair whose one-point intersection is hinted."""
    po, pp = prog.point(o), prog.point(p)
    if po.index != 0 or pp.index != 1:
        raise PreconditionError(
            f"cancel_01_pair needs indices (0,1), got ({po.index},{pp.index})"
        )
    if frozenset((o, p)) not in prog.hints:
        raise PreconditionError(
            f"cancellation of ({o},{p}) is not certified by an attachment hint"
        )
    points = tuple(q for q in prog.points if q.id not in (o, p))
    hints = frozenset(h for h in prog.hints if o not in h and p not in h)
    return replace(prog, points=points, hints=hints)


def cancel_23_pair(prog: MorseProgram, q: str, r: str) -> MorseProgram:
    """Mirror of cancel_01_pair, realized on the reversed program."""
    pq, pr = prog.point(q), prog.point(r)
    if pq.index != 2 or pr.index != 3:
        raise PreconditionError(
            f"cancel_23_pair needs indices (2,3), got ({pq.index},{pr.index})"
        )
    return reverse(cancel_01_pair(reverse(prog), r, q))


def middle_genus(prog: MorseProgram) -> int:
    """Genus of the middle level surface of a self-indexed closed program.

    Needs exactly one index-0 and one index-3 point; the index-1 and
    index-2 counts must agree, otherwise the Euler characteristic of a
    closed 3-manifold could not vanish.
    """
    if not prog.self_indexed:
        raise PreconditionError("middle_genus needs a self-indexed program")
    if not prog.closed:
        raise PreconditionError("middle_genus needs a closed program")
    if prog.count(0) != 1 or prog.count(3) != 1:
        raise PreconditionError(
            "middle_genus needs exactly one index-0 and one index-3 point"
        )
    n1, n2 = prog.count(1), prog.count(2)
    if n1 != n2:
        raise StructureError(
            f"{n1} index-1 but {n2} index-2 points: the Euler characteristic"
            " of a closed 3-manifold must vanish"
        )
    return n1


def to_heegaard(prog: MorseProgram, theta: Sequence[Word | CyclicWord]) -> HeegaardDiagram:
    """Build the diagram of the middle surface; alpha curves are canonical.

    ``theta`` supplies the attaching words of the index-2 points.  Further
    analysis (homology, certificates, reduction) is the diagram module's
    job.
    """
    genus = middle_genus(prog)
    if len(theta) != genus:
        raise ValidationError(f"expected {genus} theta words, got {len(theta)}")
    words = tuple(cyclic_reduce(w) if isinstance(w, Word) else w for w in theta)
    for w in words:
        if w.max_index > genus:
            raise ValidationError(
                f"theta word {w} uses letters beyond the middle genus {genus}"
            )
    return HeegaardDiagram(genus=genus, theta=words)
