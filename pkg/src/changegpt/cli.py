"""Command line gateway: one-shot questions, batch evaluation, the HTTP
server, tool listing and demo-suite generation.

Exit codes: 2 bad arguments, 3 image errors, 4 backend errors, 5 dataset
errors.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Optional

import click

from .backends import Backend, LiveBackend, ScriptedBackend
from .evalharness.dataset import DatasetError, load_dataset
from .evalharness.runner import make_scripted_runner, prepare_session, run_eval
from .navigator.loop import BackendFailure, run_query
from .navigator.session import Session, TickClock
from .raster.png import BadImage
from .raster.types import CropRegion, DimensionMismatch, OutOfBounds
from .toolkit.fixtures import FixtureStore
from .toolkit.tools import build_default_registry

EXIT_BAD_ARGS = 2
EXIT_IMAGE_ERROR = 3
EXIT_BACKEND_ERROR = 4
EXIT_DATASET_ERROR = 5


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _registry(fixtures: Optional[str]):
    store = FixtureStore(fixtures) if fixtures else None
    return build_default_registry(fixtures=store).freeze()


def _parse_backend(selector: str) -> tuple[str, Optional[Path]]:
    if selector == "http":
        return "http", None
    if selector.startswith("scripted:"):
        return "scripted", Path(selector.split(":", 1)[1])
    _fail(EXIT_BAD_ARGS, f"backend selector must be 'http' or 'scripted:<path>', got {selector!r}")
    raise AssertionError  # unreachable


def _make_backend(kind: str, path: Optional[Path]) -> Backend:
    if kind == "scripted":
        try:
            return ScriptedBackend.from_file(path)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            _fail(EXIT_BAD_ARGS, f"cannot load script {path}: {exc}")
    try:
        return LiveBackend.from_env()
    except Exception as exc:
        _fail(EXIT_BACKEND_ERROR, str(exc))
    raise AssertionError  # unreachable


@click.group()
def main() -> None:
    """Query-driven change analysis over bi-temporal image pairs."""


@main.command()
@click.argument("pre", type=click.Path(path_type=Path))
@click.argument("cur", type=click.Path(path_type=Path))
@click.argument("question")
@click.option("--crop", "crop_text", default=None, help="Crop region X,Y,W,H applied before asking.")
@click.option("--crop-target", type=click.Choice(["pre", "cur", "both"]), default="both")
@click.option("--backend", "backend_selector", default="http", show_default=True,
              help="'scripted:<file>' or 'http'.")
@click.option("--fixtures", type=click.Path(path_type=Path), default=None,
              help="Fixture directory backing the stub tools.")
@click.option("--trace-out", type=click.Path(path_type=Path), default=Path("trace.json"),
              show_default=True)
@click.option("--max-steps", default=12, show_default=True)
def ask(pre: Path, cur: Path, question: str, crop_text: Optional[str], crop_target: str,
        backend_selector: str, fixtures: Optional[Path], trace_out: Path, max_steps: int) -> None:
    """Ask one question about the PRE/CUR image pair."""
    kind, script = _parse_backend(backend_selector)
    backend = _make_backend(kind, script)
    registry = _registry(fixtures)

    region = None
    if crop_text is not None:
        try:
            x, y, w, h = (int(v) for v in crop_text.split(","))
            region = CropRegion(x, y, w, h)
        except (ValueError, OutOfBounds) as exc:
            _fail(EXIT_BAD_ARGS, f"bad crop spec {crop_text!r}: {exc}")

    session = Session(clock=TickClock() if kind == "scripted" else None)
    try:
        pre_record = session.register_image(pre.read_bytes(), "pre")
        session.register_image(cur.read_bytes(), "cur", pair_id=pre_record.link_id)
    except OSError as exc:
        _fail(EXIT_IMAGE_ERROR, f"cannot read image: {exc}")
    except (BadImage, DimensionMismatch) as exc:
        _fail(EXIT_IMAGE_ERROR, str(exc))

    if region is not None:
        try:
            for record in list(session.records()):
                if (record.is_pre and crop_target in ("pre", "both")) or (
                    record.is_cur and crop_target in ("cur", "both")
                ):
                    session.crop_and_register(record.self_id, region)
        except OutOfBounds as exc:
            _fail(EXIT_BAD_ARGS, f"crop out of bounds: {exc}")

    try:
        answer, trace = run_query(session, question, backend, registry, max_steps=max_steps)
    except BackendFailure as exc:
        trace_out.write_text(exc.trace.to_json())
        _fail(EXIT_BACKEND_ERROR, str(exc))
        raise AssertionError  # unreachable
    trace_out.write_text(trace.to_json())
    click.echo(answer)
    click.echo(f"trace written to {trace_out}", err=True)


@main.command("eval")
@click.argument("dataset", type=click.Path(path_type=Path))
@click.option("--backend", "backend_selector", default=None,
              help="'scripted:<scripts dir>' (default: <dataset dir>/scripts) or 'http'.")
@click.option("--fixtures", type=click.Path(path_type=Path), default=None,
              help="Fixture directory (default: <dataset dir>/fixtures).")
@click.option("--report", "report_path", type=click.Path(path_type=Path), default=None,
              help="Where to write the report (default: eval_report.<fmt>).")
@click.option("--format", "report_format", type=click.Choice(["json", "md"]), default="json",
              show_default=True)
@click.option("--max-steps", default=12, show_default=True)
def eval_command(dataset: Path, backend_selector: Optional[str], fixtures: Optional[Path],
                 report_path: Optional[Path], report_format: str, max_steps: int) -> None:
    """Evaluate the agent over a question DATASET (JSON Lines)."""
    root = dataset.parent
    if backend_selector is None:
        backend_selector = f"scripted:{root / 'scripts'}"
    if fixtures is None and (root / "fixtures").exists():
        fixtures = root / "fixtures"
    registry = _registry(fixtures)

    try:
        questions = load_dataset(dataset)
    except DatasetError as exc:
        _fail(EXIT_DATASET_ERROR, str(exc))
        raise AssertionError  # unreachable

    kind, path = _parse_backend(backend_selector)
    if kind == "scripted":
        runner = make_scripted_runner(path, registry, root, max_steps=max_steps)
    else:
        live = _make_backend("http", None)

        def runner(question):
            session = Session()
            prepare_session(session, question, root)
            return run_query(session, question.text, live, registry, max_steps=max_steps)

    try:
        report = run_eval(questions, runner, registry)
    except DatasetError as exc:
        _fail(EXIT_DATASET_ERROR, str(exc))
        raise AssertionError  # unreachable

    if report_path is None:
        report_path = Path(f"eval_report.{report_format}")
    report_path.write_text(report.to_json() if report_format == "json" else report.to_markdown())
    click.echo(report.summary_line())
    click.echo(f"report written to {report_path}", err=True)


@main.command()
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--fixtures", type=click.Path(path_type=Path), default=None)
@click.option("--backend", "backend_selector", default="http", show_default=True,
              help="'scripted:<file>' (replayed per query) or 'http'.")
@click.option("--static", "static_dir", type=click.Path(path_type=Path), default=None,
              help="Directory of built UI assets to serve under /ui.")
@click.option("--persist", "persist_dir", type=click.Path(path_type=Path), default=None,
              help="Directory for session persistence across restarts.")
def serve(port: int, host: str, fixtures: Optional[Path], backend_selector: str,
          static_dir: Optional[Path], persist_dir: Optional[Path]) -> None:
    """Run the HTTP gateway."""
    import uvicorn

    from .server import create_app

    kind, script = _parse_backend(backend_selector)
    app = create_app(
        registry=_registry(fixtures),
        backend_selector=kind,
        script_path=script,
        static_dir=static_dir,
        persist_dir=persist_dir,
    )
    uvicorn.run(app, host=host, port=port)


@main.group()
def tools() -> None:
    """Inspect the toolkit."""


@tools.command("list")
def tools_list() -> None:
    """List the registered tools."""
    registry = _registry(None)
    for name in registry.names():
        spec = registry.get(name)
        click.echo(f"{spec.name:25s} [{spec.backing:6s}] {spec.description}")
        click.echo(f"{'':25s} input: {spec.arg_grammar}")


@main.command()
@click.argument("out_dir", type=click.Path(path_type=Path))
def fixtures(out_dir: Path) -> None:
    """Build the bundled 20-question demo suite (plus its fault variant)."""
    from .evalharness.fixture_suite import build_suite

    dataset = build_suite(out_dir)
    click.echo(f"demo suite written to {out_dir}")
    click.echo(f"evaluate with: changegpt eval {dataset}")


if __name__ == "__main__":
    main()
