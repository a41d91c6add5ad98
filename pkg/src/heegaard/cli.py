"""Command-line front end.

Every command parses local files, builds the same request models the HTTP
API accepts, and dispatches either in-process (default) or to a running
server (``--server URL``).  Reports are deterministic: identical inputs and
flags produce byte-identical JSON.

Exit codes: 0 for ok or trivial-diagram, 1 for a stuck reduction, 2 for
invalid input.
"""

from __future__ import annotations

import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Optional, TypeVar

import click
import httpx
from pydantic import BaseModel, ValidationError as PydanticValidationError

from . import __version__, formats
from .errors import HeegaardError, ValidationError
from .service import app as service_app
from .service import models as m
from .surface import format_word

R = TypeVar("R", bound=BaseModel)

EXIT_OK = 0
EXIT_STUCK = 1
EXIT_INVALID = 2


class Client:
    """Dispatches requests in-process or over HTTP, transparently."""

    def __init__(self, server: Optional[str]):
        self.server = server

    def call(self, path: str, handler: Callable[..., R], request: BaseModel, response_type: type[R]) -> R:
        if self.server is None:
            return handler(request)
        url = self.server.rstrip("/") + path
        try:
            resp = httpx.post(
                url, json=request.model_dump(by_alias=True, mode="json"), timeout=300.0
            )
            if resp.status_code == 422:
                body = resp.json()
                raise ValidationError(body.get("error", resp.text))
            resp.raise_for_status()
        except httpx.HTTPError as exc:
            raise HeegaardError(f"server request failed: {exc}") from exc
        return response_type.model_validate(resp.json())


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _envelope(command: str, paths: list[Path], results: Any, verdict: str, warnings: list[str]) -> dict:
    return {
        "command": command,
        "inputs": [{"path": str(p), "sha256": _sha256(p)} for p in paths],
        "results": results,
        "verdict": verdict,
        "warnings": warnings,
    }


def _emit(env: dict, as_json: bool, human: Callable[[], None]) -> int:
    if as_json:
        click.echo(json.dumps(env, sort_keys=True, indent=2))
    else:
        human()
        if env["warnings"]:
            for w in env["warnings"]:
                click.echo(f"warning: {w}")
        click.echo(f"verdict: {env['verdict']}")
    return {"ok": EXIT_OK, "trivial-diagram": EXIT_OK, "stuck": EXIT_STUCK}.get(
        env["verdict"], EXIT_INVALID
    )


def _fail(command: str, paths: list[Path], message: str, as_json: bool) -> int:
    env = {
        "command": command,
        "inputs": [
            {"path": str(p), "sha256": _sha256(p) if p.is_file() else None} for p in paths
        ],
        "results": {"error": message},
        "verdict": "invalid-input",
        "warnings": [],
    }
    if as_json:
        click.echo(json.dumps(env, sort_keys=True, indent=2))
    else:
        click.echo(f"error: {message}", err=True)
        click.echo("verdict: invalid-input")
    return EXIT_INVALID


def _load_arrangement_model(path: Path) -> m.ArrangementModel:
    arr = formats.loads_arrangement(path.read_text())
    return m.ArrangementModel.from_core(arr)


def _load_diagram_model(path: Path) -> m.DiagramModel:
    df = formats.parse_diagram_file(path.read_text())
    embedded = []
    for (i, j), rel in sorted(df.embeds.items()):
        target = (path.parent / rel).resolve()
        if not target.is_file():
            raise ValidationError(f"embed {i} {j}: file not found: {rel}")
        arr = formats.loads_arrangement(target.read_text())
        embedded.append(
            m.EmbeddedPairModel(i=i, j=j, arrangement=m.ArrangementModel.from_core(arr))
        )
    return m.DiagramModel(
        genus=df.genus,
        theta=[format_word(df.theta[i]) for i in range(1, df.genus + 1)],
        alpha=(
            [format_word(df.alpha[i]) for i in range(1, df.genus + 1)] if df.alpha else None
        ),
        embedded=embedded,
    )


def _load_morse_model(path: Path) -> m.MorseProgramModel:
    return m.MorseProgramModel.from_core(formats.parse_morse_file(path.read_text()))


def _write_trace(path: Optional[str], records: list[dict]) -> None:
    if path is None:
        return
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


server_option = click.option("--server", default=None, help="URL of a running service; default is in-process.")
json_option = click.option("--json", "as_json", is_flag=True, help="Emit the machine-readable report.")


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Curves on surfaces and Heegaard diagram reduction."""


# -- validate ------------------------------------------------------------------


def _validate_one(client: Client, path: Path) -> tuple[bool, list[str]]:
    suffix = path.suffix
    if suffix == ".arr":
        req = m.ArrangementRequest(arrangement=_load_arrangement_model(path))
        resp = client.call(
            "/arrangement/validate",
            service_app.validate_arrangement,
            req,
            m.ArrangementValidationResponse,
        )
        return resp.ok, [str(v.invariant) + f" [{v.element}]: {v.detail}" for v in resp.violations]
    if suffix == ".hd":
        req = m.DiagramRequest(diagram=_load_diagram_model(path))
        resp = client.call(
            "/diagram/validate", service_app.validate_diagram, req, m.DiagramValidationResponse
        )
        return resp.ok, resp.issues
    if suffix == ".morse":
        req = m.MorseRequest(program=_load_morse_model(path))
        resp = client.call(
            "/morse/validate", service_app.validate_morse, req, m.DiagramValidationResponse
        )
        return resp.ok, resp.issues
    raise ValidationError(f"unknown file extension {suffix!r} (expected .arr, .hd or .morse)")


@main.command()
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--jobs", default=1, show_default=True, help="Parallel workers for many files.")
@json_option
@server_option
def validate(files: tuple[Path, ...], jobs: int, as_json: bool, server: Optional[str]) -> None:
    """Check .arr/.hd/.morse files against all structural invariants.

    Directory arguments are expanded to the recognized files they contain.
    """
    client = Client(server)
    paths: list[Path] = []
    for entry in files:
        if entry.is_dir():
            paths.extend(
                sorted(p for p in entry.iterdir() if p.suffix in (".arr", ".hd", ".morse"))
            )
        else:
            paths.append(entry)

    def run(path: Path):
        try:
            ok, issues = _validate_one(client, path)
            return {"path": str(path), "ok": ok, "issues": issues}
        except (HeegaardError, PydanticValidationError, OSError) as exc:
            return {"path": str(path), "ok": False, "issues": [str(exc)]}

    if jobs > 1 and len(paths) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, paths))
    else:
        results = [run(p) for p in paths]
    all_ok = all(r["ok"] for r in results)
    env = _envelope(
        "validate", paths, {"files": results}, "ok" if all_ok else "invalid-input", []
    )

    def human() -> None:
        for r in results:
            click.echo(f"{r['path']}: {'ok' if r['ok'] else 'INVALID'}")
            for issue in r["issues"]:
                click.echo(f"  - {issue}")

    sys.exit(_emit(env, as_json, human))


# -- arrangement commands ---------------------------------------------------------


@main.command()
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@json_option
@server_option
def invariants(file: Path, as_json: bool, server: Optional[str]) -> None:
    """Crossing count, algebraic sum, and minimal-position degree of an arrangement."""
    try:
        req = m.ArrangementRequest(arrangement=_load_arrangement_model(file))
        resp = Client(server).call(
            "/arrangement/invariants",
            service_app.arrangement_invariants,
            req,
            m.ArrangementInvariantsResponse,
        )
    except (HeegaardError, PydanticValidationError) as exc:
        sys.exit(_fail("invariants", [file], str(exc), as_json))
    env = _envelope("invariants", [file], resp.model_dump(mode="json"), "ok", [])

    def human() -> None:
        click.echo(f"crossings:      {resp.crossings}")
        click.echo(f"algebraic sum:  {resp.signed_sum}")
        click.echo(f"degree d:       {resp.degree}")
        click.echo(f"free loops:     M={resp.free_loops['M']} Mp={resp.free_loops['Mp']}")
        click.echo(f"V - E + F:      {resp.euler_characteristic} (genus {resp.genus})")

    sys.exit(_emit(env, as_json, human))


@main.command()
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.option("--trace", "trace_path", default=None, help="Write one JSON line per bigon removal.")
@click.option("-o", "--output", default=None, help="Write the reduced arrangement to this .arr file.")
@json_option
@server_option
def reduce(file: Path, trace_path: Optional[str], output: Optional[str], as_json: bool, server: Optional[str]) -> None:
    """Remove bigons from an arrangement until it is in minimal position."""
    try:
        req = m.ArrangementRequest(arrangement=_load_arrangement_model(file))
        resp = Client(server).call(
            "/arrangement/reduce", service_app.reduce_arrangement, req, m.ReduceArrangementResponse
        )
    except (HeegaardError, PydanticValidationError) as exc:
        sys.exit(_fail("reduce", [file], str(exc), as_json))
    _write_trace(trace_path, [s.model_dump(mode="json") for s in resp.steps])
    if output is not None:
        Path(output).write_text(formats.dumps_arrangement(resp.arrangement.to_core()))
    env = _envelope("reduce", [file], resp.model_dump(mode="json"), "ok", [])

    def human() -> None:
        click.echo(
            f"{resp.initial_crossings} crossings -> {resp.final_crossings} after "
            f"{len(resp.steps)} bigon removal(s); degree d = {resp.degree}"
        )

    sys.exit(_emit(env, as_json, human))


# -- diagram commands ---------------------------------------------------------------


@main.command()
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.option("--max-tietze", default=64, show_default=True, help="Simplification move budget.")
@json_option
@server_option
def pi1(file: Path, max_tietze: int, as_json: bool, server: Optional[str]) -> None:
    """Fundamental group presentation of the glued manifold, with simplification."""
    try:
        req = m.Pi1Request(diagram=_load_diagram_model(file), max_tietze=max_tietze)
        resp = Client(server).call("/diagram/pi1", service_app.diagram_pi1, req, m.Pi1Response)
    except (HeegaardError, PydanticValidationError) as exc:
        sys.exit(_fail("pi1", [file], str(exc), as_json))
    env = _envelope("pi1", [file], resp.model_dump(mode="json"), "ok", [])

    def human() -> None:
        rels = ", ".join(r if r else "1" for r in resp.relators) or "-"
        click.echo(f"presentation: < {', '.join(resp.generators) or '-'} | {rels} >")
        srels = ", ".join(r if r else "1" for r in resp.simplified_relators) or "-"
        click.echo(
            f"simplified:   < {', '.join(resp.simplified_generators) or '-'} | {srels} >"
            f" after {resp.tietze_moves} move(s)"
        )
        click.echo(f"trivial:      {'yes' if resp.trivial else 'not certified'}")

    sys.exit(_emit(env, as_json, human))


@main.command()
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@json_option
@server_option
def homology(file: Path, as_json: bool, server: Optional[str]) -> None:
    """Pairing matrix and first homology invariant factors."""
    try:
        req = m.DiagramRequest(diagram=_load_diagram_model(file))
        resp = Client(server).call(
            "/diagram/homology", service_app.diagram_homology, req, m.HomologyResponse
        )
    except (HeegaardError, PydanticValidationError) as exc:
        sys.exit(_fail("homology", [file], str(exc), as_json))
    env = _envelope("homology", [file], resp.model_dump(mode="json"), "ok", [])

    def human() -> None:
        click.echo(f"pairing matrix ({resp.convention}):")
        for row in resp.matrix:
            click.echo("  " + " ".join(f"{v:4d}" for v in row))
        click.echo(f"invariant factors: {resp.invariant_factors}")
        click.echo(f"H1 = {resp.group}")

    sys.exit(_emit(env, as_json, human))


@main.command()
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@json_option
@server_option
def cancel(file: Path, as_json: bool, server: Optional[str]) -> None:
    """Cancellation certificate and geometric disjointness check."""
    try:
        req = m.DiagramRequest(diagram=_load_diagram_model(file))
        resp = Client(server).call(
            "/diagram/cancel", service_app.diagram_cancel, req, m.CancelResponse
        )
    except (HeegaardError, PydanticValidationError) as exc:
        sys.exit(_fail("cancel", [file], str(exc), as_json))
    env = _envelope("cancel", [file], resp.model_dump(mode="json"), "ok", list(resp.warnings))

    def human() -> None:
        if resp.certificate is None:
            click.echo("no cancellation certificate (matrix is not a signed permutation)")
        else:
            c = resp.certificate
            click.echo(f"sigma: {c.sigma}  eps: {c.eps}  geometric: {c.geometric}")
            if resp.degrees:
                pretty = ", ".join(f"d({k}) = {v}" for k, v in sorted(resp.degrees.items()))
                click.echo(f"pair degrees: {pretty}")

    sys.exit(_emit(env, as_json, human))


@main.command(name="reduce-diagram")
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.option("--max-tietze", default=64, show_default=True, help="Word-level cancellation budget.")
@click.option("--trace", "trace_path", default=None, help="Write one JSON line per destabilization.")
@json_option
@server_option
def reduce_diagram(
    file: Path, max_tietze: int, trace_path: Optional[str], as_json: bool, server: Optional[str]
) -> None:
    """Destabilize a diagram step by step toward the genus-0 diagram."""
    try:
        req = m.ReduceDiagramRequest(diagram=_load_diagram_model(file), max_tietze=max_tietze)
        resp = Client(server).call(
            "/diagram/reduce", service_app.reduce_diagram, req, m.ReduceDiagramResponse
        )
    except (HeegaardError, PydanticValidationError) as exc:
        sys.exit(_fail("reduce-diagram", [file], str(exc), as_json))
    _write_trace(trace_path, [s.model_dump(mode="json") for s in resp.steps])
    env = _envelope(
        "reduce-diagram", [file], resp.model_dump(mode="json"), resp.verdict, list(resp.warnings)
    )

    def human() -> None:
        for n, s in enumerate(resp.steps, start=1):
            geo = "geometric" if s.geometric_verified else "word-level"
            click.echo(
                f"step {n}: genus {s.genus_before} -> {s.genus_before - 1}, cancelled "
                f"(theta {s.theta_index}, alpha {s.alpha_index}), sign {s.sign:+d} [{geo}]"
            )
        if resp.verdict == "stuck":
            click.echo(f"stuck: {resp.stuck_reason}")
            click.echo(f"H1 = {resp.h1_group} (invariant factors {resp.h1_factors})")
        else:
            click.echo(f"reduced to the genus-0 diagram in {len(resp.steps)} step(s)")

    sys.exit(_emit(env, as_json, human))


# -- morse commands ------------------------------------------------------------------


@main.group()
def morse() -> None:
    """Operations on Morse critical-point programs."""


@morse.command(name="self-index")
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.option("-o", "--output", default=None, help="Write the self-indexed program here.")
@json_option
@server_option
def morse_self_index(file: Path, output: Optional[str], as_json: bool, server: Optional[str]) -> None:
    """Sort points by index and set every level equal to its index."""
    try:
        req = m.MorseRequest(program=_load_morse_model(file))
        resp = Client(server).call(
            "/morse/self-index", service_app.morse_self_index, req, m.MorseProgramResponse
        )
    except (HeegaardError, PydanticValidationError) as exc:
        sys.exit(_fail("morse self-index", [file], str(exc), as_json))
    text = formats.format_morse(resp.program.to_core())
    if output is not None:
        Path(output).write_text(text)
    env = _envelope("morse self-index", [file], resp.model_dump(mode="json"), "ok", [])
    sys.exit(_emit(env, as_json, lambda: click.echo(text, nl=False)))


@morse.command(name="chi")
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@json_option
@server_option
def morse_chi(file: Path, as_json: bool, server: Optional[str]) -> None:
    """Euler characteristic of a closed program."""
    try:
        req = m.MorseRequest(program=_load_morse_model(file))
        resp = Client(server).call("/morse/chi", service_app.morse_chi, req, m.ChiResponse)
    except (HeegaardError, PydanticValidationError) as exc:
        sys.exit(_fail("morse chi", [file], str(exc), as_json))
    env = _envelope("morse chi", [file], resp.model_dump(mode="json"), "ok", [])
    sys.exit(_emit(env, as_json, lambda: click.echo(f"chi = {resp.chi}")))


@morse.command(name="cancel")
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.argument("first")
@click.argument("second")
@click.option("-o", "--output", default=None, help="Write the cancelled program here.")
@json_option
@server_option
def morse_cancel(
    file: Path, first: str, second: str, output: Optional[str], as_json: bool, server: Optional[str]
) -> None:
    """Cancel a hinted index-0/1 or 2/3 pair of critical points."""
    try:
        req = m.MorseCancelRequest(program=_load_morse_model(file), first=first, second=second)
        resp = Client(server).call(
            "/morse/cancel", service_app.morse_cancel, req, m.MorseProgramResponse
        )
    except (HeegaardError, PydanticValidationError) as exc:
        sys.exit(_fail("morse cancel", [file], str(exc), as_json))
    text = formats.format_morse(resp.program.to_core())
    if output is not None:
        Path(output).write_text(text)
    env = _envelope("morse cancel", [file], resp.model_dump(mode="json"), "ok", [])
    sys.exit(_emit(env, as_json, lambda: click.echo(text, nl=False)))


@morse.command(name="to-heegaard")
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.option("--theta", "theta_file", required=True, type=click.Path(exists=True, path_type=Path),
              help="Text file with one theta word per line.")
@click.option("--max-tietze", default=64, show_default=True)
@click.option("--no-reduce", is_flag=True, help="Only build the diagram, skip full reduction.")
@json_option
@server_option
def morse_to_heegaard(
    file: Path, theta_file: Path, max_tietze: int, no_reduce: bool, as_json: bool, server: Optional[str]
) -> None:
    """Build the middle-surface diagram of a program and reduce it."""
    try:
        theta = [
            line.split("#", 1)[0].strip()
            for line in theta_file.read_text().splitlines()
        ]
        theta = [t for t in theta if t]
        req = m.MorseToHeegaardRequest(
            program=_load_morse_model(file), theta=theta, max_tietze=max_tietze, reduce=not no_reduce
        )
        resp = Client(server).call(
            "/morse/to-heegaard", service_app.morse_to_heegaard, req, m.MorseToHeegaardResponse
        )
    except (HeegaardError, PydanticValidationError) as exc:
        sys.exit(_fail("morse to-heegaard", [file, theta_file], str(exc), as_json))
    verdict = "ok" if resp.reduction is None else resp.reduction.verdict
    warnings = [] if resp.reduction is None else list(resp.reduction.warnings)
    env = _envelope(
        "morse to-heegaard", [file, theta_file], resp.model_dump(mode="json"), verdict, warnings
    )

    def human() -> None:
        click.echo(f"middle genus: {resp.genus}")
        if resp.reduction is not None:
            r = resp.reduction
            if r.verdict == "stuck":
                click.echo(f"stuck: {r.stuck_reason}; H1 = {r.h1_group}")
            else:
                click.echo(f"reduced to genus 0 in {len(r.steps)} step(s)")

    sys.exit(_emit(env, as_json, human))


# -- server ----------------------------------------------------------------------------


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run(service_app.app, host=host, port=port)


@main.command(name="openapi")
def openapi() -> None:
    """Print the service's OpenAPI schema."""
    click.echo(json.dumps(service_app.app.openapi(), sort_keys=True, indent=2))


if __name__ == "__main__":
    main()
