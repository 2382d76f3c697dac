"""Deterministic candidate trimming ahead of rule validation.

One fixed filter shape: program membership intersected with optional
skill, season, and per-course credit guards, minus the taken list. Each
optional guard is disabled when absent. Output is a set, so duplicates
are impossible by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .catalog import Catalog
from .errors import ParseError
from .terms import normalize_season


@dataclass(frozen=True)
class FilterSpec:
    program_id: str
    skill_filter: frozenset[str] | None = None
    term_filter: str | None = None
    max_course_credits: int | None = None
    exclude: frozenset[str] = frozenset()
    conjunctive_skills: bool = False

    def __post_init__(self):
        if self.skill_filter is not None:
            if not self.skill_filter:
                raise ParseError("skill_filter must be non-empty when present")
            object.__setattr__(self, "skill_filter", frozenset(s.lower() for s in self.skill_filter))
        if self.term_filter is not None:
            object.__setattr__(self, "term_filter", normalize_season(self.term_filter))
        if self.max_course_credits is not None and self.max_course_credits < 1:
            raise ParseError("max_course_credits must be positive when present")
        object.__setattr__(self, "exclude", frozenset(self.exclude))

    def to_dict(self) -> dict:
        return {
            "program_id": self.program_id,
            "skill_filter": sorted(self.skill_filter) if self.skill_filter is not None else None,
            "term_filter": self.term_filter,
            "max_course_credits": self.max_course_credits,
            "exclude": sorted(self.exclude),
            "conjunctive_skills": self.conjunctive_skills,
        }


@dataclass(frozen=True)
class CandidateSet:
    course_ids: frozenset[str]
    spec: FilterSpec


def filter_candidates(catalog: Catalog, spec: FilterSpec) -> CandidateSet:
    """Apply the filter predicate over the program's membership rows."""
    members = catalog.members_of(spec.program_id)
    out: set[str] = set()
    for cid in members:
        if cid in spec.exclude:
            continue
        course = catalog.course(cid)
        if spec.skill_filter is not None:
            if spec.conjunctive_skills:
                if not spec.skill_filter <= course.skills:
                    continue
            elif not spec.skill_filter & course.skills:
                continue
        if spec.term_filter is not None and spec.term_filter not in course.terms_offered:
            continue
        if spec.max_course_credits is not None and course.credits > spec.max_course_credits:
            continue
        out.add(cid)
    return CandidateSet(course_ids=frozenset(out), spec=spec)
