"""Command-line interface: catalog validation, advising, planning,
benchmarking, and serving. Every subcommand has a machine-readable --json
mode. Usage errors exit 2, pipeline errors exit 1."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .bench import load_suite, run_benchmark
from .catalog import load_catalog, load_students, validate_integrity
from .errors import AdvisorError
from .gateway import make_backend
from .service import AdvisorEngine, ServiceConfig, build_engine, load_config
from .terms import parse_term


def _fail(exc: AdvisorError) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


def _engine(catalog_path: str, students_path: str, backend: str, current_term: str | None) -> AdvisorEngine:
    config = ServiceConfig(
        catalog_path=catalog_path,
        students_path=students_path,
        backend=backend,
        current_term=current_term,
    )
    return build_engine(config)


_catalog_opt = click.option(
    "--catalog", "catalog_path", default="fixtures/catalog.json", show_default=True,
    help="Catalog file.",
)
_students_opt = click.option(
    "--students", "students_path", default="fixtures/students.json", show_default=True,
    help="Student profiles file.",
)
_backend_opt = click.option(
    "--backend", type=click.Choice(["stub", "remote"]), default="stub", show_default=True,
)
_term_opt = click.option("--current-term", default=None, help='Reference term, e.g. "Fall 2025".')
_json_opt = click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")


@click.group()
def main() -> None:
    """Catalog-grounded degree advising toolkit."""


@main.group()
def catalog() -> None:
    """Catalog maintenance commands."""


@catalog.command("validate")
@click.argument("path", type=click.Path())
@_json_opt
def catalog_validate(path: str, as_json: bool) -> None:
    """Check every structural invariant of a catalog file."""
    try:
        loaded = load_catalog(path, strict=False)
    except AdvisorError as exc:
        _fail(exc)
    report = validate_integrity(loaded)
    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2))
    else:
        for f in report.findings:
            click.echo(f"{f.rule}: {f.key} ({f.detail})")
        click.echo(f"{len(report.findings)} finding(s) in {path}")
    if not report.ok:
        sys.exit(1)


@main.command()
@click.option("--query", "-q", required=True, help="Advising question.")
@click.option("--student", "-s", "student_id", required=True)
@_catalog_opt
@_students_opt
@_backend_opt
@_term_opt
@_json_opt
def advise(query: str, student_id: str, catalog_path: str, students_path: str,
           backend: str, current_term: str | None, as_json: bool) -> None:
    """Run one query through the full pipeline."""
    try:
        engine = _engine(catalog_path, students_path, backend, current_term)
        response = engine.advise(query, student_id)
    except AdvisorError as exc:
        _fail(exc)
    if as_json:
        click.echo(json.dumps(response.to_dict(), indent=2))
        return
    click.echo(f"intent: {response.intent.value}   fallback: {response.fallback}")
    if response.certified:
        click.echo(f"certified: {', '.join(sorted(response.certified))}")
    click.echo(response.response)
    if response.plan:
        click.echo("plan:")
        for block in response.plan.blocks:
            flags = f"  [{','.join(block.flags)}]" if block.flags else ""
            click.echo(f"  {block.term}: {' '.join(block.courses)} ({block.credits} cr){flags}")
    click.echo(f"provenance: {response.provenance_ref}")


@main.command()
@click.option("--student", "-s", "student_id", default=None)
@click.option("--program", "-p", "program_id", default=None)
@click.option("--taken", multiple=True, help="Completed course id (repeatable).")
@click.option("--cap", type=int, default=None, help="Per-term credit cap.")
@click.option("--start", default=None, help='Start term, e.g. "Fall-2025".')
@click.option("--min-courses", type=int, default=None)
@_catalog_opt
@_students_opt
@_term_opt
@_json_opt
def plan(student_id: str | None, program_id: str | None, taken: tuple[str, ...],
         cap: int | None, start: str | None, min_courses: int | None,
         catalog_path: str, students_path: str, current_term: str | None, as_json: bool) -> None:
    """Compute a prerequisite-compliant roadmap."""
    try:
        engine = _engine(catalog_path, students_path, "stub", current_term)
        taken_set: set[str] = set(taken)
        if student_id:
            profile = engine.student(student_id)
            program_id = program_id or profile.program_id
            if not taken:
                taken_set = set(profile.taken)
        if not program_id:
            raise AdvisorError("either --student or --program is required")
        start_term = parse_term(start) if start else None
        if start_term is None and student_id:
            start_term = engine.reference_term(engine.student(student_id))
        roadmap = engine.plan_for(
            program_id, frozenset(taken_set),
            credit_cap=cap, start=start_term, min_courses_per_term=min_courses,
        )
    except AdvisorError as exc:
        _fail(exc)
    if as_json:
        click.echo(json.dumps(roadmap.to_dict(), indent=2))
        return
    for block in roadmap.blocks:
        flags = f"  [{','.join(block.flags)}]" if block.flags else ""
        click.echo(f"{block.term}: {' '.join(block.courses)} ({block.credits} cr){flags}")
    click.echo(f"{len(roadmap.blocks)} term(s), {len(roadmap.covered)} course(s)")


@main.group()
def bench() -> None:
    """Benchmark commands."""


@bench.command("run")
@click.option("--suite", "suite_path", default="fixtures/bench_suite.json", show_default=True)
@click.option("--mode", type=click.Choice(["grounded", "baseline"]), default="grounded", show_default=True)
@click.option("--runs", type=int, default=5, show_default=True)
@_catalog_opt
@_students_opt
@_backend_opt
@_term_opt
@_json_opt
@click.option("--out", "out_path", default=None, help="Write the JSON report here.")
def bench_run(suite_path: str, mode: str, runs: int, catalog_path: str, students_path: str,
              backend: str, current_term: str | None, as_json: bool, out_path: str | None) -> None:
    """Run the query suite and print the metrics report."""
    try:
        engine = _engine(catalog_path, students_path, backend, current_term)
        suite = load_suite(suite_path)
        summary = run_benchmark(suite, engine, runs=runs, mode=mode)
    except AdvisorError as exc:
        _fail(exc)
    if out_path:
        Path(out_path).write_text(summary.to_json() + "\n", encoding="utf-8")
    if as_json:
        click.echo(summary.to_json())
    else:
        click.echo(summary.render_table())


@main.command()
@click.option("--config", "config_path", default=None, help="Service config file.")
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@_catalog_opt
@_students_opt
@_backend_opt
@_term_opt
def serve(config_path: str | None, host: str | None, port: int | None,
          catalog_path: str, students_path: str, backend: str, current_term: str | None) -> None:
    """Start the HTTP service."""
    import uvicorn

    from .webapp import create_app

    try:
        config = load_config(config_path)
        if catalog_path != "fixtures/catalog.json" or not config_path:
            config = ServiceConfig(
                **{**config.__dict__, "catalog_path": catalog_path, "students_path": students_path,
                   "backend": backend, "current_term": current_term or config.current_term}
            )
        engine = build_engine(config)
    except AdvisorError as exc:
        _fail(exc)
    uvicorn.run(create_app(engine), host=host or config.host, port=port or config.port)


if __name__ == "__main__":
    main()
