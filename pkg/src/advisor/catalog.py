"""Normalized curricular knowledge base: record types, loading, validation, queries.

The store is a single JSON document loaded into immutable records. Every
record is keyed (courses by code, programs by id, memberships by
(program, course), relation edges by (course, related)), so keyed lookups
are functional and referential integrity can be checked mechanically.
The catalog never changes after load and is safe to share across threads.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import IntegrityError, ParseError, UnknownCourse, UnknownProgram
from .terms import DEFAULT_CALENDAR, TermLabel, normalize_season, parse_term

# Course codes: 2-4 uppercase letters followed by 4 digits. Overridable per
# catalog file through the "course_code_pattern" header.
DEFAULT_CODE_PATTERN = r"[A-Z]{2,4}[0-9]{4}"


class DegreeType(str, Enum):
    MAJOR = "Major"
    MINOR = "Minor"
    CERTIFICATE = "Certificate"


class EdgeKind(str, Enum):
    PREREQUISITE = "Prerequisite"
    COREQUISITE = "Corequisite"
    ALTERNATIVE = "Alternative"


@dataclass(frozen=True)
class Course:
    id: str
    title: str
    credits: int
    department: str
    level: int
    description: str
    terms_offered: frozenset[str]
    skills: frozenset[str]


@dataclass(frozen=True)
class Program:
    id: str
    name: str
    degree_type: DegreeType


@dataclass(frozen=True)
class ProgramCourse:
    program_id: str
    course_id: str
    is_core: bool
    recommended_year: int

    @property
    def key(self) -> tuple[str, str]:
        return (self.program_id, self.course_id)


@dataclass(frozen=True)
class PrereqEdge:
    """Directed relation row.

    For kind=Prerequisite, ``related_id`` must be completed before
    ``course_id``. For kind=Alternative, ``course_id`` may substitute
    ``related_id`` wherever the latter is required. Corequisite edges are
    stored directed but evaluated symmetrically by the rule engine.
    """

    course_id: str
    related_id: str
    kind: EdgeKind

    @property
    def key(self) -> tuple[str, str]:
        return (self.course_id, self.related_id)


@dataclass(frozen=True)
class StudentProfile:
    id: str
    program_id: str
    taken: frozenset[str]
    start_term: TermLabel


@dataclass(frozen=True)
class Finding:
    """One integrity violation: the rule broken, the record key, and detail."""

    rule: str
    key: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    @property
    def ok(self) -> bool:
        return not self.findings

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "findings": [
                {"rule": f.rule, "key": f.key, "detail": f.detail} for f in self.findings
            ],
        }


@dataclass(frozen=True)
class Catalog:
    courses: tuple[Course, ...]
    programs: tuple[Program, ...]
    program_courses: tuple[ProgramCourse, ...]
    prereq_edges: tuple[PrereqEdge, ...]
    code_pattern: str = DEFAULT_CODE_PATTERN
    calendar: tuple[str, ...] = DEFAULT_CALENDAR

    # -- keyed lookups -------------------------------------------------

    @cached_property
    def course_index(self) -> dict[str, Course]:
        return {c.id: c for c in self.courses}

    @cached_property
    def program_index(self) -> dict[str, Program]:
        return {p.id: p for p in self.programs}

    @cached_property
    def membership_index(self) -> dict[tuple[str, str], ProgramCourse]:
        return {pc.key: pc for pc in self.program_courses}

    def has_course(self, course_id: str) -> bool:
        return course_id in self.course_index

    def course(self, course_id: str) -> Course:
        try:
            return self.course_index[course_id]
        except KeyError:
            raise UnknownCourse(f"unknown course {course_id!r}") from None

    def program(self, program_id: str) -> Program:
        try:
            return self.program_index[program_id]
        except KeyError:
            raise UnknownProgram(f"unknown program {program_id!r}") from None

    def members_of(self, program_id: str) -> tuple[str, ...]:
        self.program(program_id)
        return self._members.get(program_id, ())

    def membership(self, program_id: str, course_id: str) -> ProgramCourse | None:
        return self.membership_index.get((program_id, course_id))

    @cached_property
    def _members(self) -> dict[str, tuple[str, ...]]:
        acc: dict[str, list[str]] = {}
        for pc in self.program_courses:
            acc.setdefault(pc.program_id, []).append(pc.course_id)
        return {pid: tuple(sorted(cids)) for pid, cids in acc.items()}

    # -- relation edges ------------------------------------------------

    @cached_property
    def _prereqs(self) -> dict[str, tuple[str, ...]]:
        acc: dict[str, list[str]] = {}
        for e in self.prereq_edges:
            if e.kind is EdgeKind.PREREQUISITE:
                acc.setdefault(e.course_id, []).append(e.related_id)
        return {cid: tuple(sorted(ps)) for cid, ps in acc.items()}

    @cached_property
    def _dependents(self) -> dict[str, tuple[str, ...]]:
        acc: dict[str, list[str]] = {}
        for e in self.prereq_edges:
            if e.kind is EdgeKind.PREREQUISITE:
                acc.setdefault(e.related_id, []).append(e.course_id)
        return {cid: tuple(sorted(ds)) for cid, ds in acc.items()}

    @cached_property
    def _coreqs(self) -> dict[str, tuple[str, ...]]:
        # Symmetric view: co-enrollment is mutual regardless of stored direction.
        acc: dict[str, set[str]] = {}
        for e in self.prereq_edges:
            if e.kind is EdgeKind.COREQUISITE:
                acc.setdefault(e.course_id, set()).add(e.related_id)
                acc.setdefault(e.related_id, set()).add(e.course_id)
        return {cid: tuple(sorted(ps)) for cid, ps in acc.items()}

    @cached_property
    def _alternatives(self) -> dict[str, tuple[str, ...]]:
        # alternatives_of(X): courses that may substitute X.
        acc: dict[str, list[str]] = {}
        for e in self.prereq_edges:
            if e.kind is EdgeKind.ALTERNATIVE:
                acc.setdefault(e.related_id, []).append(e.course_id)
        return {cid: tuple(sorted(alts)) for cid, alts in acc.items()}

    def prereqs_of(self, course_id: str) -> tuple[str, ...]:
        return self._prereqs.get(course_id, ())

    def dependents_of(self, course_id: str) -> tuple[str, ...]:
        return self._dependents.get(course_id, ())

    def coreq_partners(self, course_id: str) -> tuple[str, ...]:
        return self._coreqs.get(course_id, ())

    def alternatives_of(self, course_id: str) -> tuple[str, ...]:
        return self._alternatives.get(course_id, ())

    @cached_property
    def skill_vocabulary(self) -> frozenset[str]:
        return frozenset(s for c in self.courses for s in c.skills)


# ---------------------------------------------------------------------------
# Parsing


def _require(record: Mapping, key: str, ctx: str):
    if key not in record:
        raise ParseError(f"{ctx}: missing required field {key!r}")
    return record[key]


def _as_str(value, ctx: str) -> str:
    if not isinstance(value, str) or not value.strip():
        raise ParseError(f"{ctx}: expected a non-empty string, got {value!r}")
    return value.strip()


def _as_int(value, ctx: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{ctx}: expected an integer, got {value!r}")
    return value


def _as_list(value, ctx: str) -> list:
    if not isinstance(value, list):
        raise ParseError(f"{ctx}: expected an array, got {type(value).__name__}")
    return value


def _parse_course(record: Mapping, i: int) -> Course:
    ctx = f"courses[{i}]"
    cid = _as_str(_require(record, "id", ctx), ctx + ".id")
    title = _as_str(_require(record, "title", ctx), ctx + ".title")
    credits = _as_int(_require(record, "credits", ctx), ctx + ".credits")
    m = re.match(r"([A-Za-z]+)(\d+)", cid)
    default_dept = m.group(1) if m else cid
    default_level = int(m.group(2)[0]) if m else 0
    department = _as_str(record.get("department", default_dept), ctx + ".department")
    level = _as_int(record.get("level", default_level), ctx + ".level")
    description = record.get("description", "")
    if not isinstance(description, str):
        raise ParseError(f"{ctx}.description: expected a string")
    terms = record.get("terms_offered")
    if terms is None:
        offered = frozenset(DEFAULT_CALENDAR)
    else:
        offered = frozenset(normalize_season(_as_str(t, ctx + ".terms_offered")) for t in _as_list(terms, ctx + ".terms_offered"))
    skills = frozenset(
        _as_str(s, ctx + ".skills").lower() for s in _as_list(record.get("skills", []), ctx + ".skills")
    )
    return Course(cid, title, credits, department, level, description, offered, skills)


def _parse_enum(enum_cls, value, ctx: str):
    try:
        return enum_cls(str(value).strip().capitalize())
    except ValueError:
        allowed = [e.value for e in enum_cls]
        raise ParseError(f"{ctx}: {value!r} not one of {allowed}") from None


def parse_catalog(data: Mapping) -> Catalog:
    """Build a Catalog from a parsed JSON document. No integrity checks here;
    run validate_integrity (or use load_catalog) for those."""
    if not isinstance(data, Mapping):
        raise ParseError("catalog document must be a JSON object")
    code_pattern = data.get("course_code_pattern", DEFAULT_CODE_PATTERN)
    if not isinstance(code_pattern, str):
        raise ParseError("course_code_pattern must be a string")
    calendar = tuple(
        normalize_season(_as_str(s, "calendar")) for s in _as_list(data.get("calendar", list(DEFAULT_CALENDAR)), "calendar")
    )
    courses = tuple(
        sorted(
            (_parse_course(r, i) for i, r in enumerate(_as_list(data.get("courses", []), "courses"))),
            key=lambda c: c.id,
        )
    )
    programs = []
    for i, r in enumerate(_as_list(data.get("programs", []), "programs")):
        ctx = f"programs[{i}]"
        programs.append(
            Program(
                _as_str(_require(r, "id", ctx), ctx + ".id"),
                _as_str(_require(r, "name", ctx), ctx + ".name"),
                _parse_enum(DegreeType, _require(r, "degree_type", ctx), ctx + ".degree_type"),
            )
        )
    memberships = []
    for i, r in enumerate(_as_list(data.get("program_courses", []), "program_courses")):
        ctx = f"program_courses[{i}]"
        memberships.append(
            ProgramCourse(
                _as_str(_require(r, "program_id", ctx), ctx + ".program_id"),
                _as_str(_require(r, "course_id", ctx), ctx + ".course_id"),
                bool(r.get("is_core", False)),
                _as_int(r.get("recommended_year", 1), ctx + ".recommended_year"),
            )
        )
    edges = []
    for i, r in enumerate(_as_list(data.get("prereq_edges", []), "prereq_edges")):
        ctx = f"prereq_edges[{i}]"
        edges.append(
            PrereqEdge(
                _as_str(_require(r, "course_id", ctx), ctx + ".course_id"),
                _as_str(_require(r, "related_id", ctx), ctx + ".related_id"),
                _parse_enum(EdgeKind, _require(r, "kind", ctx), ctx + ".kind"),
            )
        )
    return Catalog(
        courses=courses,
        programs=tuple(sorted(programs, key=lambda p: p.id)),
        program_courses=tuple(sorted(memberships, key=lambda pc: pc.key)),
        prereq_edges=tuple(sorted(edges, key=lambda e: (e.course_id, e.related_id, e.kind.value))),
        code_pattern=code_pattern,
        calendar=calendar,
    )


def load_catalog(path: str | Path, strict: bool = True) -> Catalog:
    """Load and validate a catalog file.

    Raises ParseError on malformed input and, when strict, IntegrityError
    when any invariant is violated. Loading is deterministic: records are
    held in sorted-key order.
    """
    path = Path(path)
    if not path.exists():
        raise ParseError(f"catalog file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    catalog = parse_catalog(data)
    if strict:
        report = validate_integrity(catalog)
        if not report.ok:
            raise IntegrityError(report.findings)
    return catalog


# ---------------------------------------------------------------------------
# Integrity validation


def _duplicates(keys: Iterable) -> list:
    seen: dict = {}
    for k in keys:
        seen[k] = seen.get(k, 0) + 1
    return [k for k, n in sorted(seen.items()) if n > 1]


def validate_integrity(catalog: Catalog) -> ValidationReport:
    """Check every structural invariant. Findings are data, not failures."""
    findings: list[Finding] = []
    code_re = re.compile(f"^{catalog.code_pattern}$")
    course_ids = {c.id for c in catalog.courses}

    for dup in _duplicates(c.id for c in catalog.courses):
        findings.append(Finding("duplicate-key", dup, "course id appears more than once"))
    for c in catalog.courses:
        if not code_re.match(c.id):
            findings.append(Finding("bad-course-id", c.id, f"does not match pattern {catalog.code_pattern}"))
        if c.credits < 1:
            findings.append(Finding("bad-credits", c.id, f"credits must be >= 1, got {c.credits}"))
        if not c.terms_offered:
            findings.append(Finding("empty-terms", c.id, "terms_offered must be non-empty"))
        for season in sorted(c.terms_offered - set(catalog.calendar)):
            findings.append(Finding("unknown-season", c.id, f"offered in {season}, outside calendar {list(catalog.calendar)}"))

    for dup in _duplicates(p.id for p in catalog.programs):
        findings.append(Finding("duplicate-key", dup, "program id appears more than once"))
    program_ids = {p.id for p in catalog.programs}

    for dup in _duplicates(pc.key for pc in catalog.program_courses):
        findings.append(Finding("duplicate-key", f"{dup[0]}/{dup[1]}", "duplicate (program_id, course_id) row"))
    for pc in catalog.program_courses:
        key = f"{pc.program_id}/{pc.course_id}"
        if pc.program_id not in program_ids:
            findings.append(Finding("dangling-reference", key, f"unknown program {pc.program_id}"))
        if pc.course_id not in course_ids:
            findings.append(Finding("dangling-reference", key, f"unknown course {pc.course_id}"))
        if not 1 <= pc.recommended_year <= 5:
            findings.append(Finding("bad-recommended-year", key, f"recommended_year {pc.recommended_year} outside 1-5"))

    for dup in _duplicates(e.key for e in catalog.prereq_edges):
        findings.append(Finding("duplicate-key", f"{dup[0]}->{dup[1]}", "duplicate (course_id, related_id) edge"))
    for e in catalog.prereq_edges:
        key = f"{e.course_id}->{e.related_id}"
        if e.course_id == e.related_id:
            findings.append(Finding("self-reference", key, "course related to itself"))
        if e.course_id not in course_ids:
            findings.append(Finding("dangling-reference", key, f"unknown course {e.course_id}"))
        if e.related_id not in course_ids:
            findings.append(Finding("dangling-reference", key, f"unknown course {e.related_id}"))

    for cycle in prereq_cycles(catalog):
        findings.append(
            Finding("prerequisite-cycle", " -> ".join(cycle), "prerequisite subgraph must be acyclic")
        )
    return ValidationReport(tuple(findings))


def prereq_cycles(catalog: Catalog) -> list[list[str]]:
    """All cycles in the Prerequisite subgraph, each an ordered course list.

    Empty for a valid catalog. Distinct cycles are reported once, rotated so
    the smallest course id leads.
    """
    known = {c.id for c in catalog.courses}
    graph: dict[str, list[str]] = {cid: [] for cid in sorted(known)}
    for e in catalog.prereq_edges:
        if e.kind is EdgeKind.PREREQUISITE and e.course_id in known and e.related_id in known:
            graph[e.course_id].append(e.related_id)
    for neighbors in graph.values():
        neighbors.sort()

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {v: WHITE for v in graph}
    cycles: list[list[str]] = []
    seen_keys: set[tuple[str, ...]] = set()

    def visit(start: str) -> None:
        stack: list[tuple[str, int]] = [(start, 0)]
        path = [start]
        color[start] = GRAY
        while stack:
            node, idx = stack[-1]
            if idx < len(graph[node]):
                stack[-1] = (node, idx + 1)
                nxt = graph[node][idx]
                if color[nxt] == GRAY:
                    cycle = path[path.index(nxt):]
                    pivot = cycle.index(min(cycle))
                    key = tuple(cycle[pivot:] + cycle[:pivot])
                    if key not in seen_keys:
                        seen_keys.add(key)
                        cycles.append(list(key))
                elif color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, 0))
                    path.append(nxt)
            else:
                color[node] = BLACK
                stack.pop()
                path.pop()

    for vertex in graph:
        if color[vertex] == WHITE:
            visit(vertex)
    return cycles


# ---------------------------------------------------------------------------
# Graph queries


def prereq_closure(catalog: Catalog, course_id: str) -> frozenset[str]:
    """Transitive closure over Prerequisite edges, excluding the course itself."""
    catalog.course(course_id)
    out: set[str] = set()
    frontier = list(catalog.prereqs_of(course_id))
    while frontier:
        cur = frontier.pop()
        if cur in out:
            continue
        out.add(cur)
        frontier.extend(catalog.prereqs_of(cur))
    return frozenset(out)


def direct_dependents(catalog: Catalog, course_id: str, scope: Iterable[str]) -> frozenset[str]:
    """Members of ``scope`` that list ``course_id`` as a direct prerequisite."""
    catalog.course(course_id)
    scope_set = set(scope)
    return frozenset(d for d in catalog.dependents_of(course_id) if d in scope_set)


# ---------------------------------------------------------------------------
# Serialization


def catalog_to_dict(catalog: Catalog) -> dict:
    return {
        "course_code_pattern": catalog.code_pattern,
        "calendar": list(catalog.calendar),
        "courses": [
            {
                "id": c.id,
                "title": c.title,
                "credits": c.credits,
                "department": c.department,
                "level": c.level,
                "description": c.description,
                "terms_offered": sorted(c.terms_offered),
                "skills": sorted(c.skills),
            }
            for c in sorted(catalog.courses, key=lambda c: c.id)
        ],
        "programs": [
            {"id": p.id, "name": p.name, "degree_type": p.degree_type.value}
            for p in sorted(catalog.programs, key=lambda p: p.id)
        ],
        "program_courses": [
            {
                "program_id": pc.program_id,
                "course_id": pc.course_id,
                "is_core": pc.is_core,
                "recommended_year": pc.recommended_year,
            }
            for pc in sorted(catalog.program_courses, key=lambda pc: pc.key)
        ],
        "prereq_edges": [
            {"course_id": e.course_id, "related_id": e.related_id, "kind": e.kind.value}
            for e in sorted(catalog.prereq_edges, key=lambda e: (e.course_id, e.related_id, e.kind.value))
        ],
    }


def dump_catalog(catalog: Catalog, path: str | Path) -> None:
    Path(path).write_text(json.dumps(catalog_to_dict(catalog), indent=2) + "\n", encoding="utf-8")


def catalog_checksum(catalog: Catalog) -> str:
    canonical = json.dumps(catalog_to_dict(catalog), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# Student profiles


def parse_students(data: Mapping, catalog: Catalog) -> tuple[StudentProfile, ...]:
    if not isinstance(data, Mapping):
        raise ParseError("student document must be a JSON object")
    findings: list[Finding] = []
    profiles: list[StudentProfile] = []
    rows = _as_list(data.get("students", []), "students")
    for i, r in enumerate(rows):
        ctx = f"students[{i}]"
        sid = _as_str(_require(r, "id", ctx), ctx + ".id")
        pid = _as_str(_require(r, "program_id", ctx), ctx + ".program_id")
        taken = frozenset(_as_str(c, ctx + ".taken") for c in _as_list(r.get("taken", []), ctx + ".taken"))
        start = parse_term(_as_str(_require(r, "start_term", ctx), ctx + ".start_term"))
        if pid not in catalog.program_index:
            findings.append(Finding("dangling-reference", sid, f"unknown program {pid}"))
        for cid in sorted(taken):
            if not catalog.has_course(cid):
                findings.append(Finding("dangling-reference", sid, f"unknown course {cid}"))
        profiles.append(StudentProfile(sid, pid, taken, start))
    for dup in _duplicates(p.id for p in profiles):
        findings.append(Finding("duplicate-key", dup, "student id appears more than once"))
    if findings:
        raise IntegrityError(findings)
    return tuple(sorted(profiles, key=lambda p: p.id))


def load_students(path: str | Path, catalog: Catalog) -> dict[str, StudentProfile]:
    path = Path(path)
    if not path.exists():
        raise ParseError(f"student file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    return {p.id: p for p in parse_students(data, catalog)}
