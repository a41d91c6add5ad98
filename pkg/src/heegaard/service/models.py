"""Request and response schemas for the compute service.

The arrangement schema is byte-compatible with the ``.arr`` file format, so
clients can post file contents directly.  Diagrams travel as word strings in
the shared token grammar, with embedded arrangements inlined (the ``.hd``
file format references them by path; the CLI resolves paths before calling
the service).
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from .. import formats
from ..arrangement import CurveArrangement
from ..diagram import HeegaardDiagram
from ..errors import ValidationError
from ..morse import MorseProgram
from ..surface import cyclic_reduce, format_word, parse_word


class ArcModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    id: int
    owner: Literal["M", "Mp"]
    from_: tuple[int, int] = Field(alias="from")
    to: tuple[int, int]


class CrossingModel(BaseModel):
    id: int
    sign: Literal[1, -1]
    cyclic_ends: Optional[list[tuple[int, Literal["from", "to"]]]] = None


class ArrangementModel(BaseModel):
    genus: int
    crossings: list[CrossingModel]
    arcs: list[ArcModel]
    free_loops: dict[str, int] = Field(default_factory=lambda: {"M": 0, "Mp": 0})

    def to_core(self) -> CurveArrangement:
        return formats.arrangement_from_dict(self.model_dump(by_alias=True))

    @classmethod
    def from_core(cls, arr: CurveArrangement) -> "ArrangementModel":
        return cls.model_validate(formats.arrangement_to_dict(arr))


class ViolationModel(BaseModel):
    invariant: str
    element: str
    detail: str


class ArrangementRequest(BaseModel):
    arrangement: ArrangementModel


class ArrangementValidationResponse(BaseModel):
    ok: bool
    violations: list[ViolationModel]


class RemovalStepModel(BaseModel):
    corners: tuple[int, int]
    arcs: tuple[int, int]
    crossings_after: int


class ReduceArrangementResponse(BaseModel):
    initial_crossings: int
    final_crossings: int
    degree: int
    steps: list[RemovalStepModel]
    arrangement: ArrangementModel


class ArrangementInvariantsResponse(BaseModel):
    crossings: int
    signed_sum: int
    degree: int
    free_loops: dict[str, int]
    euler_characteristic: int
    genus: int


class EmbeddedPairModel(BaseModel):
    i: int = Field(ge=1, description="1-indexed theta curve")
    j: int = Field(ge=1, description="1-indexed alpha curve")
    arrangement: ArrangementModel


class DiagramModel(BaseModel):
    genus: int = Field(ge=0)
    theta: list[str]
    alpha: Optional[list[str]] = None
    embedded: list[EmbeddedPairModel] = Field(default_factory=list)

    def to_core(self) -> HeegaardDiagram:
        theta = tuple(cyclic_reduce(parse_word(w, genus=self.genus)) for w in self.theta)
        if self.alpha is not None:
            alpha = tuple(cyclic_reduce(parse_word(w, genus=self.genus)) for w in self.alpha)
        else:
            alpha = ()
        embedded = {}
        for pair in self.embedded:
            key = (pair.i - 1, pair.j - 1)
            if key in embedded:
                raise ValidationError(f"duplicate embedded pair ({pair.i},{pair.j})")
            embedded[key] = pair.arrangement.to_core()
        return HeegaardDiagram(genus=self.genus, theta=theta, alpha=alpha, embedded=embedded)

    @classmethod
    def from_core(cls, d: HeegaardDiagram) -> "DiagramModel":
        return cls(
            genus=d.genus,
            theta=[format_word(w) for w in d.theta],
            alpha=[format_word(w) for w in d.alpha],
            embedded=[
                EmbeddedPairModel(
                    i=i + 1, j=j + 1, arrangement=ArrangementModel.from_core(arr)
                )
                for (i, j), arr in sorted(d.embedded.items())
            ],
        )


class DiagramRequest(BaseModel):
    diagram: DiagramModel


class DiagramValidationResponse(BaseModel):
    ok: bool
    issues: list[str]


class Pi1Request(BaseModel):
    diagram: DiagramModel
    max_tietze: int = Field(default=64, ge=0)


class Pi1Response(BaseModel):
    generators: list[str]
    relators: list[str]
    simplified_generators: list[str]
    simplified_relators: list[str]
    tietze_moves: int
    trivial: bool
    budget_exhausted: bool


class HomologyResponse(BaseModel):
    matrix: list[list[int]]
    convention: str
    invariant_factors: list[int]
    group: str


class CertificateModel(BaseModel):
    sigma: list[int]  # 1-indexed: theta_i is matched with alpha_sigma[i]
    eps: list[int]
    geometric: bool


class CancelResponse(BaseModel):
    certificate: Optional[CertificateModel]
    degrees: Optional[dict[str, int]] = None  # "i,j" -> minimal crossing count
    warnings: list[str] = Field(default_factory=list)


class ReductionStepModel(BaseModel):
    genus_before: int
    theta_index: int
    alpha_index: int
    sign: int
    geometric_verified: bool


class ReduceDiagramRequest(BaseModel):
    diagram: DiagramModel
    max_tietze: int = Field(default=64, ge=0)


class ReduceDiagramResponse(BaseModel):
    verdict: Literal["trivial-diagram", "stuck"]
    steps: list[ReductionStepModel]
    warnings: list[str]
    final_genus: int
    h1_factors: list[int]
    h1_group: str
    stuck_reason: Optional[str] = None
    matrix: Optional[list[list[int]]] = None


class CriticalPointModel(BaseModel):
    id: str
    index: int = Field(ge=0, le=3)
    level: str  # exact rational, e.g. "3" or "5/2"


class MorseProgramModel(BaseModel):
    points: list[CriticalPointModel]
    hints: list[tuple[str, str]] = Field(default_factory=list)
    self_indexed: bool = False

    def to_core(self) -> MorseProgram:
        text_lines = [
            f"crit {p.id} index={p.index} level={p.level}" for p in self.points
        ] + [f"hint {a} {b}" for a, b in self.hints]
        prog = formats.parse_morse_file("\n".join(text_lines) + "\n")
        if self.self_indexed:
            from dataclasses import replace

            prog = replace(prog, self_indexed=True)
            prog.require_valid()
        return prog

    @classmethod
    def from_core(cls, prog: MorseProgram) -> "MorseProgramModel":
        return cls(
            points=[
                CriticalPointModel(id=p.id, index=p.index, level=str(p.level))
                for p in prog.points
            ],
            hints=sorted(tuple(sorted(h)) for h in prog.hints),
            self_indexed=prog.self_indexed,
        )


class MorseRequest(BaseModel):
    program: MorseProgramModel


class MorseProgramResponse(BaseModel):
    program: MorseProgramModel


class ChiResponse(BaseModel):
    chi: int


class MorseCancelRequest(BaseModel):
    program: MorseProgramModel
    first: str
    second: str


class MorseToHeegaardRequest(BaseModel):
    program: MorseProgramModel
    theta: list[str]
    max_tietze: int = Field(default=64, ge=0)
    reduce: bool = True


class MorseToHeegaardResponse(BaseModel):
    genus: int
    diagram: DiagramModel
    assumptions: list[str] = Field(default_factory=list)
    reduction: Optional[ReduceDiagramResponse] = None


class ErrorResponse(BaseModel):
    error: str
    kind: str
