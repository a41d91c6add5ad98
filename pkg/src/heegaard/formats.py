"""Parsers and serializers for the three on-disk formats.

``.arr``   arrangement JSON (the same schema travels over the service API)
``.hd``    Heegaard diagram text: ``genus k``, ``alpha i: <word>``,
           ``theta i: <word>``, optional ``embed i j: <path>`` lines
``.morse`` Morse program text: ``crit <id> index=<0..3> level=<rational>``
           and ``hint <id> <id>`` lines

Blank lines and ``#`` comments are allowed in the text formats.  Serializers
emit keys and records in a fixed order so identical data produces identical
bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from .arrangement import OWNER_M, OWNER_MP, Arc, CurveArrangement
from .diagram import HeegaardDiagram, canonical_alpha
from .errors import ValidationError
from .morse import CriticalPoint, MorseProgram
from .surface import Word, cyclic_reduce, format_word, parse_word

_END_KINDS = ("from", "to")


# -- arrangements (.arr JSON) ------------------------------------------------


def arrangement_from_dict(data: Mapping[str, Any]) -> CurveArrangement:
    try:
        genus = int(data["genus"])
        signs = {int(c["id"]): int(c["sign"]) for c in data["crossings"]}
        arcs = {}
        for rec in data["arcs"]:
            arcs[int(rec["id"])] = Arc(
                owner=str(rec["owner"]),
                start=(int(rec["from"][0]), int(rec["from"][1])),
                end=(int(rec["to"][0]), int(rec["to"][1])),
            )
        loops_in = data.get("free_loops", {})
        free_loops = {
            OWNER_M: int(loops_in.get(OWNER_M, 0)),
            OWNER_MP: int(loops_in.get(OWNER_MP, 0)),
        }
    except (KeyError, TypeError, IndexError) as exc:
        raise ValidationError(f"malformed arrangement: {exc!r}") from exc
    arr = CurveArrangement(genus=genus, signs=signs, arcs=arcs, free_loops=free_loops)
    _check_cyclic_ends(arr, data["crossings"])
    return arr


def _check_cyclic_ends(arr: CurveArrangement, crossings: list[Mapping[str, Any]]) -> None:
    """The redundant cyclic_ends field, when present, must match the arcs."""
    table = arr.slot_table()
    for rec in crossings:
        ends = rec.get("cyclic_ends")
        if ends is None:
            continue
        cid = int(rec["id"])
        if len(ends) != 4:
            raise ValidationError(f"crossing {cid}: cyclic_ends must list 4 arc-ends")
        for slot, ref in enumerate(ends):
            aid, kind = int(ref[0]), str(ref[1])
            if kind not in _END_KINDS:
                raise ValidationError(f"crossing {cid} slot {slot}: bad end kind {kind!r}")
            if table.get((cid, slot)) != (aid, kind):
                raise ValidationError(
                    f"crossing {cid} slot {slot}: cyclic_ends disagrees with arc records"
                )


def arrangement_to_dict(arr: CurveArrangement) -> dict[str, Any]:
    table = arr.slot_table()
    crossings = []
    for cid in sorted(arr.signs):
        ends = [list(table[(cid, s)]) for s in range(4)]
        crossings.append({"id": cid, "sign": arr.signs[cid], "cyclic_ends": ends})
    arcs = []
    for aid in sorted(arr.arcs):
        arc = arr.arcs[aid]
        arcs.append(
            {"id": aid, "owner": arc.owner, "from": list(arc.start), "to": list(arc.end)}
        )
    return {
        "genus": arr.genus,
        "crossings": crossings,
        "arcs": arcs,
        "free_loops": {OWNER_M: arr.free_loops[OWNER_M], OWNER_MP: arr.free_loops[OWNER_MP]},
    }


def loads_arrangement(text: str) -> CurveArrangement:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"not valid JSON: {exc}") from exc
    return arrangement_from_dict(data)


def dumps_arrangement(arr: CurveArrangement) -> str:
    return json.dumps(arrangement_to_dict(arr), sort_keys=True, indent=2) + "\n"


# -- diagrams (.hd text) ------------------------------------------------------


@dataclass(frozen=True)
class DiagramFile:
    """Parsed .hd content; embed entries are unresolved file paths."""

    genus: int
    alpha: dict[int, Word] = field(default_factory=dict)  # 1-indexed
    theta: dict[int, Word] = field(default_factory=dict)
    embeds: dict[tuple[int, int], str] = field(default_factory=dict)


def _meaningful_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((no, line))
    return out


def parse_diagram_file(text: str) -> DiagramFile:
    lines = _meaningful_lines(text)
    if not lines:
        raise ValidationError("empty diagram file")
    no, first = lines[0]
    parts = first.split()
    if len(parts) != 2 or parts[0] != "genus" or not parts[1].isdigit():
        raise ValidationError(f"line {no}: expected 'genus <k>', got {first!r}")
    genus = int(parts[1])
    df = DiagramFile(genus=genus)
    for no, line in lines[1:]:
        head, _, rest = line.partition(":")
        fields = head.split()
        if not fields:
            raise ValidationError(f"line {no}: cannot parse {line!r}")
        kind = fields[0]
        try:
            if kind in ("alpha", "theta") and len(fields) == 2:
                idx = int(fields[1])
                if not 1 <= idx <= genus:
                    raise ValidationError(f"line {no}: index {idx} out of range 1..{genus}")
                target = df.alpha if kind == "alpha" else df.theta
                if idx in target:
                    raise ValidationError(f"line {no}: duplicate {kind} {idx}")
                target[idx] = parse_word(rest, genus=genus)
            elif kind == "embed" and len(fields) == 3:
                i, j = int(fields[1]), int(fields[2])
                if not (1 <= i <= genus and 1 <= j <= genus):
                    raise ValidationError(f"line {no}: embed indices out of range")
                path = rest.strip()
                if not path:
                    raise ValidationError(f"line {no}: embed line needs a file path")
                df.embeds[(i, j)] = path
            else:
                raise ValidationError(f"line {no}: unrecognized line {line!r}")
        except ValueError as exc:
            raise ValidationError(f"line {no}: {exc}") from exc
    missing = [i for i in range(1, genus + 1) if i not in df.theta]
    if missing:
        raise ValidationError(f"missing theta lines for indices {missing}")
    if df.alpha and len(df.alpha) != genus:
        raise ValidationError(
            "alpha lines must be given for all indices or omitted entirely"
        )
    return df


def build_diagram(
    df: DiagramFile,
    arrangements: Mapping[tuple[int, int], CurveArrangement] | None = None,
) -> HeegaardDiagram:
    """Turn parsed file content into a diagram; ``arrangements`` resolves embeds."""
    arrangements = arrangements or {}
    unresolved = set(df.embeds) - set(arrangements)
    if unresolved:
        raise ValidationError(f"unresolved embed entries: {sorted(unresolved)}")
    theta = tuple(cyclic_reduce(df.theta[i]) for i in range(1, df.genus + 1))
    if df.alpha:
        alpha = tuple(cyclic_reduce(df.alpha[i]) for i in range(1, df.genus + 1))
    else:
        alpha = canonical_alpha(df.genus)
    embedded = {(i - 1, j - 1): arrangements[(i, j)] for (i, j) in df.embeds}
    return HeegaardDiagram(genus=df.genus, theta=theta, alpha=alpha, embedded=embedded)


def format_diagram(d: HeegaardDiagram) -> str:
    lines = [f"genus {d.genus}"]
    for i, w in enumerate(d.alpha, start=1):
        lines.append(f"alpha {i}: {format_word(w)}")
    for i, w in enumerate(d.theta, start=1):
        lines.append(f"theta {i}: {format_word(w)}")
    return "\n".join(lines) + "\n"


# -- Morse programs (.morse text) ----------------------------------------------


def parse_morse_file(text: str) -> MorseProgram:
    points: list[CriticalPoint] = []
    hints: set[frozenset[str]] = set()
    for no, line in _meaningful_lines(text):
        fields = line.split()
        if fields[0] == "crit" and len(fields) == 4:
            pid = fields[1]
            try:
                index = int(_expect_kv(fields[2], "index", no))
                level = Fraction(_expect_kv(fields[3], "level", no))
            except (ValueError, ZeroDivisionError) as exc:
                raise ValidationError(f"line {no}: {exc}") from exc
            points.append(CriticalPoint(pid, index, level))
        elif fields[0] == "hint" and len(fields) == 3:
            if fields[1] == fields[2]:
                raise ValidationError(f"line {no}: hint must pair two distinct points")
            hints.add(frozenset(fields[1:3]))
        else:
            raise ValidationError(f"line {no}: unrecognized line {line!r}")
    prog = MorseProgram(points=tuple(points), hints=frozenset(hints))
    issues = prog.validate()
    if issues:
        raise ValidationError("; ".join(issues))
    return prog


def _expect_kv(token: str, key: str, no: int) -> str:
    k, _, v = token.partition("=")
    if k != key or not v:
        raise ValidationError(f"line {no}: expected {key}=<value>, got {token!r}")
    return v


def format_morse(prog: MorseProgram) -> str:
    lines = []
    for p in prog.points:
        level = str(p.level) if p.level.denominator != 1 else str(p.level.numerator)
        lines.append(f"crit {p.id} index={p.index} level={level}")
    for pair in sorted(tuple(sorted(h)) for h in prog.hints):
        lines.append(f"hint {pair[0]} {pair[1]}")
    return "\n".join(lines) + "\n"
