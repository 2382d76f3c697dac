"""Evidence serialization and prompt assembly.

Certified facts become a fixed five-section prompt body: the raw query,
the completion history, one fact entry per certified course, prerequisite
chains for certified courses that have them, and a Who/What/When/Where/
Why/How frame. Rendering is byte-stable so prompts can be replayed and
diffed from provenance.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .catalog import Catalog, Program, StudentProfile
from .errors import EmptyEvidence, ParseError
from .nlu import ParsedQuery, goal_phrase
from .planner import unlock_weight
from .rules import Verdict

SECTION_QUERY = "### STUDENT_QUERY"
SECTION_HISTORY = "### STUDENT_HISTORY"
SECTION_FACT = "### COURSE_FACT"
SECTION_CHAIN = "### PREREQ_CHAIN"
SECTION_FRAME = "### 5W1H FRAME"

HOW_STATEMENT = "using the vetted courses above"


@dataclass(frozen=True)
class CourseFact:
    id: str
    name: str
    credits: int
    description: str


@dataclass(frozen=True)
class EvidenceBundle:
    student_query: str
    history: tuple[str, ...]
    course_facts: tuple[CourseFact, ...]
    prereq_chain: tuple[tuple[str, tuple[str, ...]], ...]


@dataclass(frozen=True)
class FiveWOneH:
    who: str
    what: str
    when: str
    where: str
    why: str
    how: str

    def to_dict(self) -> dict:
        return {
            "who": self.who,
            "what": self.what,
            "when": self.when,
            "where": self.where,
            "why": self.why,
            "how": self.how,
        }


@dataclass(frozen=True)
class PromptBundle:
    body: str
    token_count: int
    n_retrieved: int
    query_id: str = ""

    def to_dict(self) -> dict:
        return {
            "body": self.body,
            "token_count": self.token_count,
            "n_retrieved": self.n_retrieved,
            "query_id": self.query_id,
        }


def count_tokens(text: str) -> int:
    """Default tokenizer: maximal runs of non-whitespace characters."""
    return len(text.split())


def build_evidence(
    certified: Verdict,
    catalog: Catalog,
    profile: StudentProfile,
    query: ParsedQuery,
) -> EvidenceBundle:
    """Serialize certified courses as evidence.

    Facts are ordered by descending unlock weight (within the student's
    remaining program courses) then ascending id; chains list each
    certified course with direct prerequisites, higher course codes first.
    """
    if not certified.certified:
        raise EmptyEvidence("no certified course to serialize")
    members = catalog.members_of(profile.program_id)
    need = frozenset(c for c in members if c not in profile.taken)
    ordered = sorted(
        certified.certified, key=lambda c: (-unlock_weight(catalog, c, need), c)
    )
    facts = tuple(
        CourseFact(
            id=c.id, name=c.title, credits=c.credits, description=c.description
        )
        for c in (catalog.course(cid) for cid in ordered)
    )
    chains = tuple(
        (cid, tuple(sorted(catalog.prereqs_of(cid), reverse=True)))
        for cid in ordered
        if catalog.prereqs_of(cid)
    )
    return EvidenceBundle(
        student_query=query.raw_text,
        history=tuple(sorted(profile.taken)),
        course_facts=facts,
        prereq_chain=chains,
    )


def build_frame(
    query: ParsedQuery,
    profile: StudentProfile,
    program: Program,
) -> FiveWOneH:
    """Populate the six frame fields from verified inputs only.

    When no skills were extracted the rationale repeats the goal phrase,
    because an empty Why reads as missing data under the grounding
    contract.
    """
    goal = goal_phrase(query.raw_text)
    entities = query.entities
    why = ", ".join(entities.expanded_skills) if entities.expanded_skills else goal
    return FiveWOneH(
        who=program.name,
        what=goal,
        when=str(entities.term) if entities.term else "n/a",
        where=entities.program_hint or "n/a",
        why=why,
        how=HOW_STATEMENT,
    )


def _fact_entry(fact: CourseFact) -> str:
    return (
        f"id = {fact.id} name = {fact.name} credits = {fact.credits} "
        f"description = '{fact.description}'"
    )


def render_prompt(evidence: EvidenceBundle, frame: FiveWOneH, query_id: str = "") -> PromptBundle:
    """Render the five-section body. The chain section is omitted when no
    certified course has prerequisites. Identical inputs give identical
    bytes."""
    if not evidence.course_facts:
        raise EmptyEvidence("evidence bundle has no course facts")
    lines = [
        f"{SECTION_QUERY} '{evidence.student_query}'",
        f"{SECTION_HISTORY} {' '.join(evidence.history)}".rstrip(),
        f"{SECTION_FACT} " + " ".join(_fact_entry(f) for f in evidence.course_facts),
    ]
    if evidence.prereq_chain:
        chains = " ".join(f"{cid} <- {', '.join(ps)}" for cid, ps in evidence.prereq_chain)
        lines.append(f"{SECTION_CHAIN} {chains}")
    lines.append(
        f"{SECTION_FRAME} Who: {frame.who} What: {frame.what} When: {frame.when} "
        f"Where: {frame.where} Why: {frame.why} How: {frame.how}"
    )
    body = "\n".join(lines)
    return PromptBundle(
        body=body,
        token_count=count_tokens(body),
        n_retrieved=len(evidence.course_facts),
        query_id=query_id,
    )


def empty_prompt(query_id: str = "") -> PromptBundle:
    """Zero-length prompt for early-exit paths (out of scope, no evidence)."""
    return PromptBundle(body="", token_count=0, n_retrieved=0, query_id=query_id)


def serialize_full_catalog(catalog: Catalog) -> str:
    """Every course rendered as a fact entry; the no-retrieval worst case."""
    entries = " ".join(
        _fact_entry(CourseFact(c.id, c.title, c.credits, c.description))
        for c in sorted(catalog.courses, key=lambda c: c.id)
    )
    return f"{SECTION_FACT} {entries}"


def footprint_ratio(prompt_tokens: int, full_catalog_tokens: int) -> float:
    """Prompt size as a fraction of serializing the whole catalog."""
    if full_catalog_tokens <= 0:
        raise ParseError("full_catalog_tokens must be positive")
    return prompt_tokens / full_catalog_tokens


class FootprintLog:
    """Append-only ⟨query_id, n_retrieved, token_count⟩ log, one JSON line
    per inference call. In-memory unless given a path."""

    def __init__(self, path: str | Path | None = None):
        self._path = Path(path) if path else None
        self._entries: list[dict] = []
        self._lock = threading.Lock()
        if self._path and self._path.exists():
            for line in self._path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    self._entries.append(json.loads(line))

    def append(self, query_id: str, n_retrieved: int, token_count: int) -> None:
        entry = {"query_id": query_id, "n_retrieved": n_retrieved, "token_count": token_count}
        with self._lock:
            self._entries.append(entry)
            if self._path:
                with self._path.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(entry) + "\n")

    def entries(self) -> tuple[dict, ...]:
        with self._lock:
            return tuple(self._entries)
