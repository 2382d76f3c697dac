"""End-to-end advising pipeline with per-call provenance.

Every advise call runs query understanding, candidate filtering, rule
validation, optional roadmap planning, prompt assembly, and generation,
and appends one immutable provenance record capturing the filter spec,
the rule trace, the exact prompt, and generation metadata. Out-of-scope
queries and empty certified sets short-circuit to a fixed fallback
response without touching the generation backend.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping

from .catalog import Catalog, StudentProfile, load_catalog, load_students
from .errors import (
    AdvisorError,
    EmptyEvidence,
    ParseError,
    PipelineError,
    UnknownStudent,
)
from .gateway import (
    DecodingParams,
    DegradedStubBackend,
    GenerationRequest,
    GenerationResult,
    GeneratorBackend,
    StubBackend,
    generate,
    make_backend,
)
from .nlu import AdvisingIntent, IntentLexicon, ParsedQuery, SkillTable, parse_query
from .planner import PlannerConfig, Roadmap, plan_roadmap
from .prompting import (
    FootprintLog,
    build_evidence,
    build_frame,
    empty_prompt,
    render_prompt,
)
from .routing import FilterSpec, filter_candidates
from .rules import certify_candidates
from .terms import TermLabel, parse_term, successor

FALLBACK_RESPONSE = (
    "I don't have enough verified academic data to help with that request. "
    "Please bring it to your program advisor; I can only make recommendations "
    "that are certified against the course catalog."
)

DEFAULT_CREDIT_CAP = 12


@dataclass(frozen=True)
class AdvisingResponse:
    query_id: str
    intent: AdvisingIntent
    think: str
    response: str
    fallback: bool
    plan: Roadmap | None
    certified: frozenset[str]
    provenance_ref: str
    prompt_tokens: int
    n_retrieved: int
    stage_latencies: Mapping[str, float]

    def to_dict(self) -> dict:
        return {
            "query_id": self.query_id,
            "intent": self.intent.value,
            "think": self.think,
            "response": self.response,
            "fallback": self.fallback,
            "plan": self.plan.to_dict() if self.plan else None,
            "certified": sorted(self.certified),
            "provenance_ref": self.provenance_ref,
            "prompt_tokens": self.prompt_tokens,
            "n_retrieved": self.n_retrieved,
            "stage_latencies": dict(self.stage_latencies),
        }


class ProvenanceStore:
    """Append-only record log with content-hash refs.

    Backed by a JSONL file when given a path, in-memory otherwise. Records
    are immutable once written and retrievable by ref.
    """

    def __init__(self, path: str | Path | None = None):
        self._path = Path(path) if path else None
        self._records: dict[str, dict] = {}
        self._order: list[str] = []
        self._lock = threading.Lock()
        if self._path and self._path.exists():
            for line in self._path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    entry = json.loads(line)
                    self._records[entry["ref"]] = entry["record"]
                    self._order.append(entry["ref"])

    def append(self, record: dict) -> str:
        canonical = json.dumps(record, sort_keys=True, separators=(",", ":"))
        ref = hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]
        with self._lock:
            if ref not in self._records:
                self._records[ref] = record
                self._order.append(ref)
                if self._path:
                    with self._path.open("a", encoding="utf-8") as fh:
                        fh.write(json.dumps({"ref": ref, "record": record}) + "\n")
        return ref

    def get(self, ref: str) -> dict | None:
        with self._lock:
            return self._records.get(ref)

    def refs(self) -> tuple[str, ...]:
        with self._lock:
            return tuple(self._order)


class _StageTimer:
    def __init__(self):
        self.latencies: dict[str, float] = {}
        self._t0 = time.perf_counter()

    def mark(self, stage: str) -> None:
        now = time.perf_counter()
        self.latencies[stage] = now - self._t0
        self._t0 = now


@dataclass(frozen=True)
class ServiceConfig:
    catalog_path: str = "fixtures/catalog.json"
    students_path: str = "fixtures/students.json"
    backend: str = "stub"
    endpoint: str | None = None
    model: str | None = None
    credential_env: str | None = None
    current_term: str | None = None
    provenance_path: str | None = None
    footprint_path: str | None = None
    credit_cap: int = DEFAULT_CREDIT_CAP
    port: int = 8000
    host: str = "127.0.0.1"


def load_config(path: str | Path | None = None, env: Mapping[str, str] | None = None) -> ServiceConfig:
    """Read the service config file, then apply ADVISOR_* env overrides."""
    import os

    env = env if env is not None else os.environ
    data: dict = {}
    if path:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    overrides = {
        "catalog_path": env.get("ADVISOR_CATALOG"),
        "students_path": env.get("ADVISOR_STUDENTS"),
        "backend": env.get("ADVISOR_BACKEND"),
        "endpoint": env.get("ADVISOR_ENDPOINT"),
        "model": env.get("ADVISOR_MODEL"),
        "credential_env": env.get("ADVISOR_CREDENTIAL_ENV"),
        "current_term": env.get("ADVISOR_CURRENT_TERM"),
        "provenance_path": env.get("ADVISOR_PROVENANCE"),
        "port": int(env["ADVISOR_PORT"]) if env.get("ADVISOR_PORT") else None,
        "host": env.get("ADVISOR_HOST"),
    }
    merged = {**data, **{k: v for k, v in overrides.items() if v is not None}}
    known = {f for f in ServiceConfig.__dataclass_fields__}
    return ServiceConfig(**{k: v for k, v in merged.items() if k in known})


class AdvisorEngine:
    """The full pipeline behind the CLI, the web service, and the benchmark."""

    def __init__(
        self,
        catalog: Catalog,
        students: Mapping[str, StudentProfile],
        backend: GeneratorBackend | None = None,
        *,
        baseline_backend: GeneratorBackend | None = None,
        lexicon: IntentLexicon | None = None,
        skill_table: SkillTable | None = None,
        current_term: TermLabel | None = None,
        provenance: ProvenanceStore | None = None,
        footprint_log: FootprintLog | None = None,
        decoding: DecodingParams | None = None,
        credit_cap: int = DEFAULT_CREDIT_CAP,
    ):
        self.catalog = catalog
        self.students = dict(students)
        self.backend = backend or StubBackend()
        self.baseline_backend = baseline_backend or DegradedStubBackend()
        self.lexicon = lexicon
        self.skill_table = skill_table
        self.current_term = current_term
        self.provenance = provenance or ProvenanceStore()
        self.footprint_log = footprint_log or FootprintLog()
        self.decoding = decoding or DecodingParams()
        self.credit_cap = credit_cap

    # -- helpers ---------------------------------------------------------

    def student(self, student_id: str) -> StudentProfile:
        try:
            return self.students[student_id]
        except KeyError:
            raise UnknownStudent(f"unknown student {student_id!r}") from None

    def reference_term(self, profile: StudentProfile) -> TermLabel:
        """Service current term when configured, else the term after the
        latest one recorded on the profile."""
        if self.current_term:
            return self.current_term
        return successor(profile.start_term, self.catalog.calendar)

    def _query_id(self, text: str, student_id: str) -> str:
        digest = hashlib.sha256(f"{student_id}\n{text}".encode("utf-8")).hexdigest()[:10]
        return f"q-{digest}"

    # -- pipeline ----------------------------------------------------------

    def advise(self, query_text: str, student_id: str, *, query_id: str | None = None) -> AdvisingResponse:
        profile = self.student(student_id)
        qid = query_id or self._query_id(query_text, student_id)
        timer = _StageTimer()
        total_start = time.perf_counter()
        record: dict = {
            "query_id": qid,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "student_id": student_id,
        }

        reference = self.reference_term(profile)
        parsed = parse_query(query_text, self.catalog, reference, self.lexicon, self.skill_table)
        timer.mark("nlu")
        record["parsed_query"] = parsed.to_dict()

        if parsed.intent is AdvisingIntent.OUT_OF_SCOPE:
            return self._fallback_response(qid, parsed, record, timer, total_start)

        stage = "filter"
        try:
            entities = parsed.entities
            target_term = entities.term or successor(reference, self.catalog.calendar)
            # Long-term plans cover the whole remainder of the program, so
            # neither a skill mention nor a single season narrows the pool.
            long_term = parsed.intent is AdvisingIntent.LONG_TERM
            spec = FilterSpec(
                program_id=profile.program_id,
                skill_filter=(
                    frozenset(entities.expanded_skills)
                    if entities.expanded_skills and not long_term
                    else None
                ),
                term_filter=None if long_term else target_term.season,
                exclude=profile.taken,
            )
            candidates = filter_candidates(self.catalog, spec)
            timer.mark("filter")
            record["filter_spec"] = spec.to_dict()
            record["candidates"] = sorted(candidates.course_ids)

            stage = "certify"
            verdict = certify_candidates(self.catalog, candidates, profile.taken, target_term)
            timer.mark("certify")
            record["rule_trace"] = verdict.trace.to_dict()
            record["certified"] = sorted(verdict.certified)

            plan: Roadmap | None = None
            if long_term:
                stage = "plan"
                config = PlannerConfig(
                    start=target_term,
                    credit_cap=entities.credit_cap or self.credit_cap,
                    calendar=self.catalog.calendar,
                )
                plan = plan_roadmap(self.catalog, profile.program_id, profile.taken, config)
                timer.mark("plan")
                record["plan"] = plan.to_dict()

            stage = "prompt"
            try:
                evidence = build_evidence(verdict, self.catalog, profile, parsed)
            except EmptyEvidence:
                return self._fallback_response(qid, parsed, record, timer, total_start)
            frame = build_frame(parsed, profile, self.catalog.program(profile.program_id))
            prompt = render_prompt(evidence, frame, query_id=qid)
            timer.mark("prompt")
            record["prompt"] = prompt.to_dict()
            record["frame"] = frame.to_dict()
            self.footprint_log.append(qid, prompt.n_retrieved, prompt.token_count)

            stage = "generate"
            request = GenerationRequest(prompt_body=prompt.body, decoding=self.decoding)
            result = generate(request, self.backend)
            timer.mark("generate")
            record["generation"] = {
                "backend": self.backend.identity,
                "decoding": self.decoding.to_dict(),
                "latency": result.latency,
                "fallback": result.fallback,
            }
        except AdvisorError as exc:
            record["error"] = {"stage": stage, "message": str(exc)}
            record["stage_latencies"] = timer.latencies
            self.provenance.append(record)
            raise PipelineError(stage, exc) from exc

        timer.latencies["total"] = time.perf_counter() - total_start
        record["stage_latencies"] = timer.latencies
        ref = self.provenance.append(record)
        return AdvisingResponse(
            query_id=qid,
            intent=parsed.intent,
            think=result.think,
            response=result.response if not result.fallback else FALLBACK_RESPONSE,
            fallback=result.fallback,
            plan=None if result.fallback else plan,
            certified=frozenset() if result.fallback else verdict.certified,
            provenance_ref=ref,
            prompt_tokens=prompt.token_count,
            n_retrieved=prompt.n_retrieved,
            stage_latencies=timer.latencies,
        )

    def _fallback_response(
        self,
        qid: str,
        parsed: ParsedQuery,
        record: dict,
        timer: _StageTimer,
        total_start: float,
    ) -> AdvisingResponse:
        """Early exit: zero-length prompt, no backend call."""
        prompt = empty_prompt(qid)
        self.footprint_log.append(qid, 0, 0)
        record["prompt"] = prompt.to_dict()
        timer.latencies["total"] = time.perf_counter() - total_start
        record["stage_latencies"] = timer.latencies
        ref = self.provenance.append(record)
        return AdvisingResponse(
            query_id=qid,
            intent=parsed.intent,
            think="",
            response=FALLBACK_RESPONSE,
            fallback=True,
            plan=None,
            certified=frozenset(),
            provenance_ref=ref,
            prompt_tokens=0,
            n_retrieved=0,
            stage_latencies=timer.latencies,
        )

    def baseline_respond(self, query_text: str, *, query_id: str | None = None) -> GenerationResult:
        """Send the raw query to the baseline backend with no retrieval and
        no symbolic validation; used by the benchmark's baseline mode."""
        request = GenerationRequest(prompt_body=query_text, decoding=self.decoding)
        return generate(request, self.baseline_backend)

    def plan_for(
        self,
        program_id: str,
        taken: frozenset[str] | set[str],
        *,
        credit_cap: int | None = None,
        start: TermLabel | None = None,
        min_courses_per_term: int | None = None,
    ) -> Roadmap:
        config = PlannerConfig(
            start=start or self.current_term or TermLabel(self.catalog.calendar[0], 2025),
            credit_cap=credit_cap or self.credit_cap,
            min_courses_per_term=min_courses_per_term or 3,
            calendar=self.catalog.calendar,
        )
        return plan_roadmap(self.catalog, program_id, frozenset(taken), config)


def build_engine(config: ServiceConfig, backend: GeneratorBackend | None = None) -> AdvisorEngine:
    catalog = load_catalog(config.catalog_path)
    students = load_students(config.students_path, catalog)
    if backend is None:
        if config.backend == "remote":
            if not config.endpoint:
                raise ParseError("remote backend requires an endpoint")
            backend = make_backend(
                "remote",
                endpoint=config.endpoint,
                model=config.model,
                credential_env=config.credential_env,
            )
        else:
            backend = make_backend(config.backend)
    return AdvisorEngine(
        catalog=catalog,
        students=students,
        backend=backend,
        current_term=parse_term(config.current_term) if config.current_term else None,
        provenance=ProvenanceStore(config.provenance_path),
        footprint_log=FootprintLog(config.footprint_path),
        credit_cap=config.credit_cap,
    )
