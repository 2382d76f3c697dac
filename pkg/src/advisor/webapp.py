"""HTTP surface over the advising engine.

JSON endpoints under /api, documented in docs/api/v1.md. The catalog is
shared immutably across requests; provenance appends are serialized by
the store itself.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .catalog import catalog_checksum
from .errors import AdvisorError, InfeasiblePlan, UnknownProgram, UnknownStudent
from .gateway import DIRECTIVE_VERSION
from .service import AdvisorEngine
from .terms import parse_term

API_VERSION = "v1"


class AdviseRequest(BaseModel):
    text: str = Field(min_length=1)
    student_id: str = Field(min_length=1)


class PlanRequest(BaseModel):
    program_id: str | None = None
    student_id: str | None = None
    taken: list[str] | None = None
    credit_cap: int | None = Field(default=None, ge=1)
    start: str | None = None
    min_courses_per_term: int | None = Field(default=None, ge=1)


def create_app(engine: AdvisorEngine) -> FastAPI:
    app = FastAPI(title="course-advisor", version=API_VERSION)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/api/health")
    def health() -> dict:
        return {
            "status": "ok",
            "api_version": API_VERSION,
            "catalog_checksum": catalog_checksum(engine.catalog),
            "courses": len(engine.catalog.courses),
            "programs": len(engine.catalog.programs),
            "students": len(engine.students),
            "backend": engine.backend.identity,
            "directive_version": DIRECTIVE_VERSION,
        }

    @app.post("/api/advise")
    def advise(payload: AdviseRequest) -> dict:
        try:
            return engine.advise(payload.text, payload.student_id).to_dict()
        except UnknownStudent as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except AdvisorError as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc

    @app.get("/api/provenance/{ref}")
    def provenance(ref: str) -> dict:
        record = engine.provenance.get(ref)
        if record is None:
            raise HTTPException(status_code=404, detail=f"no provenance record {ref!r}")
        return {"ref": ref, "record": record}

    @app.get("/api/catalog/courses")
    def courses() -> list[dict]:
        return [
            {
                "id": c.id,
                "title": c.title,
                "credits": c.credits,
                "department": c.department,
                "level": c.level,
                "description": c.description,
                "terms_offered": sorted(c.terms_offered),
                "skills": sorted(c.skills),
                "prerequisites": list(engine.catalog.prereqs_of(c.id)),
            }
            for c in engine.catalog.courses
        ]

    @app.get("/api/catalog/programs")
    def programs() -> list[dict]:
        return [
            {
                "id": p.id,
                "name": p.name,
                "degree_type": p.degree_type.value,
                "courses": list(engine.catalog.members_of(p.id)),
            }
            for p in engine.catalog.programs
        ]

    @app.get("/api/students")
    def students() -> list[dict]:
        return [
            {
                "id": s.id,
                "program_id": s.program_id,
                "taken": sorted(s.taken),
                "start_term": str(s.start_term),
            }
            for s in sorted(engine.students.values(), key=lambda s: s.id)
        ]

    @app.post("/api/plan")
    def plan(payload: PlanRequest) -> dict:
        program_id = payload.program_id
        taken: set[str] = set(payload.taken or [])
        if payload.student_id:
            try:
                profile = engine.student(payload.student_id)
            except UnknownStudent as exc:
                raise HTTPException(status_code=404, detail=str(exc)) from exc
            program_id = program_id or profile.program_id
            if payload.taken is None:
                taken = set(profile.taken)
        if not program_id:
            raise HTTPException(status_code=400, detail="program_id or student_id is required")
        try:
            roadmap = engine.plan_for(
                program_id,
                frozenset(taken),
                credit_cap=payload.credit_cap,
                start=parse_term(payload.start) if payload.start else None,
                min_courses_per_term=payload.min_courses_per_term,
            )
        except UnknownProgram as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except InfeasiblePlan as exc:
            raise HTTPException(
                status_code=409,
                detail={"error": "InfeasiblePlan", "message": str(exc), "stuck": list(exc.stuck)},
            ) from exc
        except AdvisorError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return roadmap.to_dict()

    return app
