"""FastAPI application exposing the compute operations.

Every endpoint is a pure function from a request model to a response
model; the CLI calls these handlers directly when no server is configured,
so all business logic stays here and in the core package.  Domain errors
map to HTTP 422 with the error kind in the body.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..diagram import (
    cancellation_certificate,
    full_reduction,
    geometric_disjointness,
    h1_matrix,
    h1_group,
    pairwise_degrees,
    pi1_presentation,
    simplified_pi1,
)
from ..errors import HeegaardError, MissingDataError, ValidationError
from ..intlinalg import abelian_group_name
from ..morse import (
    cancel_01_pair,
    cancel_23_pair,
    euler_characteristic,
    middle_genus,
    self_index,
    to_heegaard,
)
from ..surface import format_word, parse_word
from . import models

app = FastAPI(
    title="heegaard",
    version=__version__,
    description=(
        "Intersection theory for curves on closed oriented surfaces and "
        "stepwise reduction of Heegaard diagrams"
    ),
)


@app.exception_handler(HeegaardError)
async def _domain_error(request: Request, exc: HeegaardError) -> JSONResponse:
    return JSONResponse(
        status_code=422,
        content=models.ErrorResponse(error=str(exc), kind=type(exc).__name__).model_dump(),
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


# -- arrangements -------------------------------------------------------------


@app.post("/arrangement/validate", response_model=models.ArrangementValidationResponse)
def validate_arrangement(
    req: models.ArrangementRequest,
) -> models.ArrangementValidationResponse:
    arr = req.arrangement.to_core()
    violations = arr.validate()
    return models.ArrangementValidationResponse(
        ok=not violations,
        violations=[
            models.ViolationModel(invariant=v.invariant, element=v.element, detail=v.detail)
            for v in violations
        ],
    )


@app.post("/arrangement/invariants", response_model=models.ArrangementInvariantsResponse)
def arrangement_invariants(
    req: models.ArrangementRequest,
) -> models.ArrangementInvariantsResponse:
    arr = req.arrangement.to_core()
    arr.require_valid()
    reduced, _ = arr.minimal_position()
    return models.ArrangementInvariantsResponse(
        crossings=arr.crossing_count,
        signed_sum=arr.signed_sum(),
        degree=reduced.crossing_count,
        free_loops=dict(arr.free_loops),
        euler_characteristic=arr.euler_characteristic(),
        genus=arr.genus,
    )


@app.post("/arrangement/reduce", response_model=models.ReduceArrangementResponse)
def reduce_arrangement(req: models.ArrangementRequest) -> models.ReduceArrangementResponse:
    arr = req.arrangement.to_core()
    arr.require_valid()
    reduced, trace = arr.minimal_position()
    return models.ReduceArrangementResponse(
        initial_crossings=arr.crossing_count,
        final_crossings=reduced.crossing_count,
        degree=reduced.crossing_count,
        steps=[
            models.RemovalStepModel(
                corners=s.corners, arcs=s.arcs, crossings_after=s.crossings_after
            )
            for s in trace
        ],
        arrangement=models.ArrangementModel.from_core(reduced),
    )


# -- diagrams ------------------------------------------------------------------


@app.post("/diagram/validate", response_model=models.DiagramValidationResponse)
def validate_diagram(req: models.DiagramRequest) -> models.DiagramValidationResponse:
    d = req.diagram.to_core()
    issues = d.validate()
    return models.DiagramValidationResponse(ok=not issues, issues=issues)


@app.post("/diagram/pi1", response_model=models.Pi1Response)
def diagram_pi1(req: models.Pi1Request) -> models.Pi1Response:
    d = req.diagram.to_core()
    d.require_valid()
    pres = pi1_presentation(d)
    sim = simplified_pi1(d, max_moves=req.max_tietze)
    return models.Pi1Response(
        generators=list(pres.generators),
        relators=[format_word(r) for r in pres.relators],
        simplified_generators=list(sim.presentation.generators),
        simplified_relators=[format_word(r) for r in sim.presentation.relators],
        tietze_moves=sim.moves,
        trivial=sim.trivial,
        budget_exhausted=sim.exhausted,
    )


@app.post("/diagram/homology", response_model=models.HomologyResponse)
def diagram_homology(req: models.DiagramRequest) -> models.HomologyResponse:
    d = req.diagram.to_core()
    d.require_valid()
    m = h1_matrix(d)
    factors = h1_group(d)
    return models.HomologyResponse(
        matrix=[list(r) for r in m.entries],
        convention=m.convention,
        invariant_factors=list(factors),
        group=abelian_group_name(factors),
    )


@app.post("/diagram/cancel", response_model=models.CancelResponse)
def diagram_cancel(req: models.DiagramRequest) -> models.CancelResponse:
    d = req.diagram.to_core()
    d.require_valid()
    cert = cancellation_certificate(d)
    if cert is None:
        return models.CancelResponse(
            certificate=None,
            warnings=["pairing matrix is not a signed permutation"],
        )
    warnings: list[str] = []
    degrees = None
    try:
        cert = geometric_disjointness(d, cert)
        degrees = {
            f"{i + 1},{j + 1}": deg for (i, j), deg in sorted(pairwise_degrees(d).items())
        }
    except MissingDataError as exc:
        warnings.append(f"{exc}; geometric check skipped")
    return models.CancelResponse(
        certificate=models.CertificateModel(
            sigma=[s + 1 for s in cert.sigma], eps=list(cert.eps), geometric=cert.geometric
        ),
        degrees=degrees,
        warnings=warnings,
    )


def _reduction_response(report) -> models.ReduceDiagramResponse:
    return models.ReduceDiagramResponse(
        verdict=report.verdict,
        steps=[
            models.ReductionStepModel(
                genus_before=s.genus_before,
                theta_index=s.theta_index,
                alpha_index=s.alpha_index,
                sign=s.sign,
                geometric_verified=s.geometric_verified,
            )
            for s in report.steps
        ],
        warnings=list(report.warnings),
        final_genus=report.final_genus,
        h1_factors=list(report.h1_factors),
        h1_group=abelian_group_name(report.h1_factors),
        stuck_reason=report.stuck_reason,
        matrix=[list(r) for r in report.matrix] if report.matrix is not None else None,
    )


@app.post("/diagram/reduce", response_model=models.ReduceDiagramResponse)
def reduce_diagram(req: models.ReduceDiagramRequest) -> models.ReduceDiagramResponse:
    d = req.diagram.to_core()
    d.require_valid()
    return _reduction_response(full_reduction(d, max_moves=req.max_tietze))


# -- Morse programs --------------------------------------------------------------


@app.post("/morse/validate", response_model=models.DiagramValidationResponse)
def validate_morse(req: models.MorseRequest) -> models.DiagramValidationResponse:
    prog = req.program.to_core()
    issues = prog.validate()
    return models.DiagramValidationResponse(ok=not issues, issues=issues)


@app.post("/morse/self-index", response_model=models.MorseProgramResponse)
def morse_self_index(req: models.MorseRequest) -> models.MorseProgramResponse:
    prog = req.program.to_core()
    return models.MorseProgramResponse(program=models.MorseProgramModel.from_core(self_index(prog)))


@app.post("/morse/chi", response_model=models.ChiResponse)
def morse_chi(req: models.MorseRequest) -> models.ChiResponse:
    return models.ChiResponse(chi=euler_characteristic(req.program.to_core()))


@app.post("/morse/cancel", response_model=models.MorseProgramResponse)
def morse_cancel(req: models.MorseCancelRequest) -> models.MorseProgramResponse:
    prog = req.program.to_core()
    a, b = prog.point(req.first), prog.point(req.second)
    if {a.index, b.index} == {0, 1}:
        o, p = (a, b) if a.index == 0 else (b, a)
        out = cancel_01_pair(prog, o.id, p.id)
    elif {a.index, b.index} == {2, 3}:
        q, r = (a, b) if a.index == 2 else (b, a)
        out = cancel_23_pair(prog, q.id, r.id)
    else:
        raise ValidationError(
            f"cannot cancel indices ({a.index},{b.index}); need a 0/1 or 2/3 pair"
        )
    return models.MorseProgramResponse(program=models.MorseProgramModel.from_core(out))


@app.post("/morse/to-heegaard", response_model=models.MorseToHeegaardResponse)
def morse_to_heegaard(req: models.MorseToHeegaardRequest) -> models.MorseToHeegaardResponse:
    prog = req.program.to_core()
    prog = self_index(prog)
    genus = middle_genus(prog)
    theta = [parse_word(w, genus=genus) for w in req.theta]
    d = to_heegaard(prog, theta)
    reduction = None
    if req.reduce:
        reduction = _reduction_response(full_reduction(d, max_moves=req.max_tietze))
    return models.MorseToHeegaardResponse(
        genus=genus,
        diagram=models.DiagramModel.from_core(d),
        assumptions=[
            "the middle level surface is assumed connected; the symbolic"
            " program cannot verify this"
        ],
        reduction=reduction,
    )
