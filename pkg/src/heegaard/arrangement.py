"""Transversal two-family curve arrangements on closed oriented surfaces.

An arrangement is a combinatorial map: crossings (vertices) carry the
counterclockwise cyclic order of their four incident arc-ends, arcs are
directed curve segments between consecutive crossings, and faces are
recovered by tracing.  One family is called ``M``, the other ``Mp``; each
family is a disjoint union of embedded closed curves, and all crossings
are transversal M-vs-Mp crossings, so the four arc-ends at a vertex
alternate owners.

Slots
-----
Each crossing has four slots, numbered 0..3 counterclockwise.  An arc
record stores, for both of its ends, the (crossing, slot) pair it occupies;
the slot of the arriving end is where the strand enters, the slot of the
leaving end is where it exits.  Strands pass straight through, so the two
ends of the same owner sit at opposite slots.

The stored crossing sign must agree with the sign derived from the cyclic
order: the crossing is +1 when, walking counterclockwise from the slot
where M exits, the next slot is where Mp exits.

Closed components without crossings cannot be represented by arcs and are
tracked only as per-family counts (``free_loops``).  Faces are traced from
the crossing graph alone, so the Euler check V - E + F = 2 - 2k constrains
arrangements to be cellular away from free loops.

Bigons
------
A face bounded by exactly one arc of each owner whose two corners carry
opposite signs is a bigon; removing it cancels the two corner crossings and
never changes the algebraic crossing sum.  ``minimal_position`` removes
bigons until none remain.  That a bigon-free configuration realizes the
minimal geometric intersection number is a standard fact (the bigon
criterion) which this module adopts; the torus closed form |ad - bc| is
implemented independently and used as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd
from typing import Callable, Mapping, Optional, Sequence

from .errors import PreconditionError, ValidationError

OWNER_M = "M"
OWNER_MP = "Mp"
OWNERS = (OWNER_M, OWNER_MP)

END_FROM = "from"
END_TO = "to"

Dart = tuple[int, int]  # (arc id, +1 forward / -1 backward)
SlotRef = tuple[int, int]  # (crossing id, slot 0..3)


@dataclass(frozen=True)
class Arc:
    owner: str
    start: SlotRef  # the arc leaves this slot
    end: SlotRef  # the arc arrives into this slot


@dataclass(frozen=True)
class Violation:
    invariant: str
    element: str
    detail: str

    def __str__(self) -> str:
        return f"{self.invariant} [{self.element}]: {self.detail}"


@dataclass(frozen=True)
class Bigon:
    face: int
    arcs: tuple[int, int]  # (M arc, Mp arc)
    corners: tuple[int, int]  # crossing ids, opposite signs


@dataclass(frozen=True)
class RemovalStep:
    corners: tuple[int, int]
    arcs: tuple[int, int]
    crossings_after: int


@dataclass(frozen=True)
class CurveArrangement:
    genus: int
    signs: Mapping[int, int]
    arcs: Mapping[int, Arc]
    free_loops: Mapping[str, int] = field(default_factory=lambda: {OWNER_M: 0, OWNER_MP: 0})

    # -- basic views ---------------------------------------------------

    @property
    def crossing_count(self) -> int:
        return len(self.signs)

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    def signed_sum(self) -> int:
        """Algebraic crossing number of M against Mp."""
        return sum(self.signs.values())

    def slot_table(self) -> dict[SlotRef, tuple[int, str]]:
        """Map (crossing, slot) -> (arc id, "from"|"to").  Assumes validity."""
        table: dict[SlotRef, tuple[int, str]] = {}
        for aid, arc in self.arcs.items():
            table[arc.start] = (aid, END_FROM)
            table[arc.end] = (aid, END_TO)
        return table

    # -- faces ---------------------------------------------------------

    def _next_dart(self, d: Dart, table: Mapping[SlotRef, tuple[int, str]]) -> Dart:
        aid, direction = d
        arc = self.arcs[aid]
        v, s = arc.end if direction == 1 else arc.start
        occupant, kind = table[(v, (s + 1) % 4)]
        return (occupant, 1 if kind == END_FROM else -1)

    def faces(self) -> list[list[Dart]]:
        """Face boundaries as dart cycles, in deterministic trace order."""
        table = self.slot_table()
        seen: set[Dart] = set()
        out: list[list[Dart]] = []
        for aid in sorted(self.arcs):
            for direction in (1, -1):
                start = (aid, direction)
                if start in seen:
                    continue
                cycle = []
                d = start
                while d not in seen:
                    seen.add(d)
                    cycle.append(d)
                    d = self._next_dart(d, table)
                out.append(cycle)
        return out

    def euler_characteristic(self) -> int:
        return self.crossing_count - self.arc_count + len(self.faces())

    # -- validation ------------------------------------------------------

    def validate(self) -> list[Violation]:
        """Check every structural invariant; empty list means the arrangement is valid."""
        bad: list[Violation] = []
        if self.genus < 1:
            bad.append(Violation("genus", "arrangement", f"genus must be >= 1, got {self.genus}"))
        for owner, count in self.free_loops.items():
            if owner not in OWNERS:
                bad.append(Violation("free-loops", owner, "unknown family"))
            elif count < 0:
                bad.append(Violation("free-loops", owner, f"negative count {count}"))
        for cid, sign in self.signs.items():
            if sign not in (1, -1):
                bad.append(Violation("sign-range", f"crossing {cid}", f"sign {sign} not +-1"))

        table: dict[SlotRef, tuple[int, str]] = {}
        structural = False
        for aid, arc in sorted(self.arcs.items()):
            if arc.owner not in OWNERS:
                bad.append(Violation("owner", f"arc {aid}", f"unknown owner {arc.owner!r}"))
                structural = True
            for ref, kind in ((arc.start, END_FROM), (arc.end, END_TO)):
                v, s = ref
                if v not in self.signs:
                    bad.append(Violation("arc-endpoint", f"arc {aid}", f"unknown crossing {v}"))
                    structural = True
                    continue
                if not 0 <= s <= 3:
                    bad.append(Violation("arc-endpoint", f"arc {aid}", f"slot {s} out of range"))
                    structural = True
                    continue
                if ref in table:
                    bad.append(
                        Violation("slot-conflict", f"crossing {v} slot {s}", "occupied twice")
                    )
                    structural = True
                else:
                    table[ref] = (aid, kind)
        if structural:
            return bad

        for cid in sorted(self.signs):
            ends = []
            for s in range(4):
                occ = table.get((cid, s))
                if occ is None:
                    bad.append(Violation("valence", f"crossing {cid}", f"slot {s} empty"))
                else:
                    ends.append((s, self.arcs[occ[0]].owner, occ[1]))
            if len(ends) != 4:
                continue
            owners = [o for _, o, _ in ends]
            if owners[0] != owners[2] or owners[1] != owners[3] or owners[0] == owners[1]:
                bad.append(
                    Violation(
                        "transversality",
                        f"crossing {cid}",
                        f"arc-end owners {owners} do not alternate",
                    )
                )
                continue
            per_owner_kinds = {OWNER_M: [], OWNER_MP: []}
            for s, o, kind in ends:
                per_owner_kinds[o].append(kind)
            if any(sorted(kinds) != [END_FROM, END_TO] for kinds in per_owner_kinds.values()):
                bad.append(
                    Violation(
                        "strand-through",
                        f"crossing {cid}",
                        "each family must enter once and leave once",
                    )
                )
                continue
            m_out = next(s for s, o, kind in ends if o == OWNER_M and kind == END_FROM)
            _, nbr_owner, nbr_kind = ends[(m_out + 1) % 4]
            derived = 1 if (nbr_owner == OWNER_MP and nbr_kind == END_FROM) else -1
            if derived != self.signs[cid]:
                bad.append(
                    Violation(
                        "sign-consistency",
                        f"crossing {cid}",
                        f"stored sign {self.signs[cid]} but cyclic order gives {derived}",
                    )
                )
        if bad:
            return bad

        chi = self.euler_characteristic()
        if chi != 2 - 2 * self.genus:
            bad.append(
                Violation(
                    "euler",
                    "arrangement",
                    f"V - E + F = {chi}, expected {2 - 2 * self.genus} for genus {self.genus}",
                )
            )
        return bad

    def require_valid(self) -> None:
        bad = self.validate()
        if bad:
            raise ValidationError("; ".join(str(v) for v in bad))

    # -- bigons ----------------------------------------------------------

    def find_bigons(self) -> list[Bigon]:
        """All bigon faces, in face-trace order.

        A two-dart face automatically has one dart per owner (consecutive
        slots alternate owners); it is a bigon exactly when the corner
        signs are opposite.
        """
        out = []
        for idx, cycle in enumerate(self.faces()):
            if len(cycle) != 2:
                continue
            (a1, d1), (a2, d2) = cycle
            arc1, arc2 = self.arcs[a1], self.arcs[a2]
            corner1 = (arc1.end if d1 == 1 else arc1.start)[0]
            corner2 = (arc2.end if d2 == 1 else arc2.start)[0]
            if self.signs[corner1] + self.signs[corner2] != 0:
                continue
            if arc1.owner == OWNER_M:
                arcs, corners = (a1, a2), (corner1, corner2)
            else:
                arcs, corners = (a2, a1), (corner2, corner1)
            out.append(Bigon(idx, arcs, corners))
        return out

    def _merge_family(
        self,
        bigon_arc: int,
        table: Mapping[SlotRef, tuple[int, str]],
    ) -> tuple[list[int], Optional[Arc], bool]:
        """Plan the family-side surgery for one bigon arc.

        Returns (arcs to delete, merged replacement arc or None, became free loop).
        """
        arc = self.arcs[bigon_arc]
        owner = arc.owner
        v_from, v_to = arc.start[0], arc.end[0]

        def owner_end(vertex: int, kind: str) -> int:
            for s in range(4):
                aid, k = table[(vertex, s)]
                if self.arcs[aid].owner == owner and k == kind:
                    return aid
            raise AssertionError("valid arrangement must have one end per owner and kind")

        upstream = owner_end(v_from, END_TO)  # arrives where the bigon arc leaves
        downstream = owner_end(v_to, END_FROM)  # leaves where the bigon arc arrives
        if upstream == downstream:
            # the whole curve met Mp only at the two cancelled corners
            return [bigon_arc, upstream], None, True
        merged = Arc(owner, self.arcs[upstream].start, self.arcs[downstream].end)
        return [bigon_arc, upstream, downstream], merged, False

    def remove_bigon(self, b: Bigon) -> "CurveArrangement":
        """Cancel the two corner crossings of a bigon.

        The two curves involved are rerouted past each other; each family
        either gains one merged arc or, if the curve carried no other
        crossings, one free loop.  Raises PreconditionError if ``b`` is not
        a current bigon of this arrangement.
        """
        current = {
            (frozenset(x.arcs), frozenset(x.corners)) for x in self.find_bigons()
        }
        if (frozenset(b.arcs), frozenset(b.corners)) not in current:
            raise PreconditionError(f"stale bigon: {b} is not a bigon of this arrangement")

        table = self.slot_table()
        next_id = max(self.arcs, default=-1) + 1
        dead: set[int] = set()
        new_arcs: dict[int, Arc] = dict(self.arcs)
        loops = dict(self.free_loops)
        for bigon_arc in b.arcs:
            delete, merged, loop = self._merge_family(bigon_arc, table)
            dead.update(delete)
            if loop:
                loops[self.arcs[bigon_arc].owner] += 1
            else:
                new_arcs[next_id] = merged
                next_id += 1
        for aid in dead:
            del new_arcs[aid]
        signs = {cid: s for cid, s in self.signs.items() if cid not in b.corners}
        return replace(self, signs=signs, arcs=new_arcs, free_loops=loops)

    def minimal_position(
        self,
        choose: Optional[Callable[[list[Bigon]], Bigon]] = None,
    ) -> tuple["CurveArrangement", list[RemovalStep]]:
        """Remove bigons until none remain.

        ``choose`` picks which bigon to remove next (default: first in
        face-trace order; the final crossing count does not depend on the
        choice).  Returns the reduced arrangement and the removal trace;
        the final crossing count is the geometric intersection degree of
        the two families.
        """
        arr = self
        trace: list[RemovalStep] = []
        while True:
            bigons = arr.find_bigons()
            if not bigons:
                return arr, trace
            b = bigons[0] if choose is None else choose(bigons)
            arr = arr.remove_bigon(b)
            trace.append(RemovalStep(b.corners, b.arcs, arr.crossing_count))


# -- torus constructions -------------------------------------------------


def geometric_intersection_torus(u: Sequence[int], v: Sequence[int]) -> int:
    """Minimal crossing number of torus classes (a,b) and (c,d): |ad - bc|."""
    (a, b), (c, d) = u, v
    return abs(a * d - b * c)


def _primitive(vec: Sequence[int]) -> tuple[tuple[int, int], int]:
    a, b = vec
    g = gcd(a, b)
    if g == 0:
        raise ValidationError("torus class must be nonzero")
    return (a // g, b // g), g


def _bezout(p: int, q: int) -> tuple[int, int]:
    """(x, y) with x*p + y*q = 1 for coprime (p, q)."""
    old_r, r = p, q
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_s, s = s, old_s - quo * s
        old_t, t = t, old_t - quo * t
    if old_r == -1:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def _unimodular_complement(p: int, q: int) -> tuple[int, int]:
    """Some (x, y) with p*y - q*x = 1, for primitive (p, q)."""
    s, t = _bezout(p, q)
    return (-t, s)


def canonical_torus_arrangement(
    u: Sequence[int], v: Sequence[int]
) -> CurveArrangement:
    """Straight-geodesic arrangement of two torus classes.

    Each class (a, b) is drawn as gcd(a, b) parallel closed geodesics of
    the primitive slope; family offsets are chosen so all curves are
    embedded and intersections are transversal double points.  Straight
    representatives carry no bigons, so the crossing count is already
    |ad - bc|; proportional classes give disjoint free loops.
    """
    (up, g1) = _primitive(u)
    (vp, g2) = _primitive(v)
    d = up[0] * vp[1] - up[1] * vp[0]

    if d == 0:
        return CurveArrangement(
            genus=1, signs={}, arcs={}, free_loops={OWNER_M: g1, OWNER_MP: g2}
        )

    w1 = _unimodular_complement(*up)
    w2 = _unimodular_complement(*vp)
    shift = Fraction(1, 2 * g1 * g2)  # keeps the two families' offsets distinct
    offsets_m = [
        (Fraction(i, g1) * w1[0], Fraction(i, g1) * w1[1]) for i in range(g1)
    ]
    offsets_mp = [
        ((Fraction(j, g2) + shift) * w2[0], (Fraction(j, g2) + shift) * w2[1])
        for j in range(g2)
    ]

    sign = 1 if d > 0 else -1
    # slot layout shared by every crossing (all tangents are parallel):
    # counterclockwise from the M exit direction we meet the Mp exit iff d > 0
    if d > 0:
        slot_of = {("M", END_FROM): 0, ("Mp", END_FROM): 1, ("M", END_TO): 2, ("Mp", END_TO): 3}
    else:
        slot_of = {("M", END_FROM): 0, ("Mp", END_TO): 1, ("M", END_TO): 2, ("Mp", END_FROM): 3}

    # coefficients with cx*vp[0] + cy*vp[1] = 1, to read off the Mp parameter
    cx, cy = _bezout(vp[0], vp[1])

    crossings_by_m: dict[int, list[tuple[Fraction, int]]] = {i: [] for i in range(g1)}
    crossings_by_mp: dict[int, list[tuple[Fraction, int]]] = {j: [] for j in range(g2)}
    signs: dict[int, int] = {}
    cid = 0
    for i, om in enumerate(offsets_m):
        for j, omp in enumerate(offsets_mp):
            # along M_i, crossings with the Mp_j geodesic family sit at the
            # parameters t where det(vp, om + t*up - omp) is an integer
            f0 = vp[0] * (om[1] - omp[1]) - vp[1] * (om[0] - omp[0])
            for n in range(abs(d)):
                t = Fraction(f0 - n, d) % 1
                px = (om[0] + t * up[0]) % 1
                py = (om[1] + t * up[1]) % 1
                s = (cx * (px - omp[0]) + cy * (py - omp[1])) % 1
                signs[cid] = sign
                crossings_by_m[i].append((t, cid))
                crossings_by_mp[j].append((s, cid))
                cid += 1

    arcs: dict[int, Arc] = {}
    aid = 0
    for owner, chains in ((OWNER_M, crossings_by_m), (OWNER_MP, crossings_by_mp)):
        for _, chain in sorted(chains.items()):
            chain.sort()
            r = len(chain)
            for idx in range(r):
                here = chain[idx][1]
                after = chain[(idx + 1) % r][1]
                arcs[aid] = Arc(
                    owner,
                    (here, slot_of[(owner, END_FROM)]),
                    (after, slot_of[(owner, END_TO)]),
                )
                aid += 1

    return CurveArrangement(genus=1, signs=signs, arcs=arcs, free_loops={OWNER_M: 0, OWNER_MP: 0})


# -- finger move (inverse bigon) ------------------------------------------


def finger_move(arr: CurveArrangement, da: Dart, db: Dart) -> CurveArrangement:
    """Push the strand under dart ``da`` across the strand under ``db``.

    Both darts must lie on the same face and belong to arcs of different
    owners.  The move is the inverse of a bigon removal: it adds two new
    opposite-sign crossings and a bigon between them, leaving every curve's
    homology class unchanged.  Used to build non-minimal test and demo
    configurations.
    """
    face = None
    for cycle in arr.faces():
        if da in cycle and db in cycle:
            face = cycle
            break
    if face is None:
        raise PreconditionError("darts do not share a face")
    arc_a, arc_b = arr.arcs[da[0]], arr.arcs[db[0]]
    if arc_a.owner == arc_b.owner:
        raise PreconditionError("finger move needs darts of different owners")

    x = max(arr.signs, default=-1) + 1
    y = x + 1
    # local picture: da runs "east" with the face to its south, db runs
    # "west" with the face to its north; the finger dips south across db,
    # crossing it at x (west flank) and y (east flank).  Slots are listed
    # E,N,W,S = 0..3.  The strands' true directions at x depend on whether
    # the darts are the forward or backward sides of their arcs, which
    # flips the crossing sign accordingly.
    sign_x = -da[1] * db[1] if arc_a.owner == OWNER_M else da[1] * db[1]
    signs = dict(arr.signs)
    signs[x] = sign_x
    signs[y] = -sign_x

    aid = max(arr.arcs, default=-1) + 1
    a1, amid, a2, b1, bmid, b2 = range(aid, aid + 6)
    arcs = dict(arr.arcs)
    del arcs[da[0]]
    del arcs[db[0]]

    E, N, W, S = 0, 1, 2, 3
    if da[1] == 1:  # arc A flows east in the picture
        arcs[a1] = Arc(arc_a.owner, arc_a.start, (x, N))
        arcs[amid] = Arc(arc_a.owner, (x, S), (y, S))
        arcs[a2] = Arc(arc_a.owner, (y, N), arc_a.end)
    else:  # arc A flows west
        arcs[a1] = Arc(arc_a.owner, arc_a.start, (y, N))
        arcs[amid] = Arc(arc_a.owner, (y, S), (x, S))
        arcs[a2] = Arc(arc_a.owner, (x, N), arc_a.end)
    if db[1] == 1:  # arc B flows west in the picture
        arcs[b1] = Arc(arc_b.owner, arc_b.start, (y, E))
        arcs[bmid] = Arc(arc_b.owner, (y, W), (x, E))
        arcs[b2] = Arc(arc_b.owner, (x, W), arc_b.end)
    else:  # arc B flows east
        arcs[b1] = Arc(arc_b.owner, arc_b.start, (x, W))
        arcs[bmid] = Arc(arc_b.owner, (x, E), (y, W))
        arcs[b2] = Arc(arc_b.owner, (y, E), arc_b.end)

    return replace(arr, signs=signs, arcs=arcs)


def wiggled(
    arr: CurveArrangement,
    moves: int,
    rng,
) -> CurveArrangement:
    """Apply ``moves`` random finger moves (for fixtures and demos)."""
    for _ in range(moves):
        faces = arr.faces()
        candidates = []
        for cycle in faces:
            ms = [d for d in cycle if arr.arcs[d[0]].owner == OWNER_M]
            mps = [d for d in cycle if arr.arcs[d[0]].owner == OWNER_MP]
            if ms and mps:
                candidates.append((cycle, ms, mps))
        if not candidates:
            raise PreconditionError("no face admits a finger move")
        cycle, ms, mps = candidates[rng.randrange(len(candidates))]
        da = ms[rng.randrange(len(ms))]
        db = mps[rng.randrange(len(mps))]
        if rng.random() < 0.5:
            da, db = db, da
        arr = finger_move(arr, da, db)
    return arr
