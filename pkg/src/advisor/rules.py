"""Hard academic rules over candidate sets and proposed selections.

Four rule families: prerequisites, co-requisites, credit caps, and term
availability. Every check appends a trace entry so a verdict can be
audited fact by fact. Co-requisite edges are evaluated symmetrically; a
taken Alternative of a prerequisite satisfies that prerequisite, and
alternatives do not chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .catalog import Catalog, prereq_cycles
from .errors import ParseError
from .routing import CandidateSet
from .terms import TermLabel

PASS = "Pass"
FAIL = "Fail"

RULE_PREREQ = "prerequisite"
RULE_COREQ = "corequisite"
RULE_CREDIT_CAP = "credit-cap"
RULE_TERM = "term-availability"


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    subject: str
    verdict: str
    facts: tuple[str, ...]

    def __post_init__(self):
        if self.verdict not in (PASS, FAIL):
            raise ParseError(f"bad verdict {self.verdict!r}")
        if self.verdict == FAIL and not self.facts:
            raise ParseError("a Fail entry must cite at least one fact")

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "subject": self.subject,
            "verdict": self.verdict,
            "facts": list(self.facts),
        }


@dataclass(frozen=True)
class RuleTrace:
    entries: tuple[TraceEntry, ...]

    def failures(self) -> tuple[TraceEntry, ...]:
        return tuple(e for e in self.entries if e.verdict == FAIL)

    def to_dict(self) -> dict:
        return {"entries": [e.to_dict() for e in self.entries]}


@dataclass(frozen=True)
class Verdict:
    ok: bool
    trace: RuleTrace
    certified: frozenset[str]


def _prereqs_ok(catalog: Catalog, course_id: str, taken: frozenset[str] | set[str]) -> bool:
    """Trace-free fast path used by the planner's inner loops."""
    for p in catalog.prereqs_of(course_id):
        if p in taken:
            continue
        if not any(a in taken for a in catalog.alternatives_of(p)):
            return False
    return True


def prereqs_met(catalog: Catalog, course_id: str, taken: Iterable[str]) -> tuple[bool, RuleTrace]:
    """True iff every direct prerequisite is completed or substituted by a
    completed Alternative. The trace cites each prerequisite checked."""
    catalog.course(course_id)
    taken_set = set(taken)
    entries: list[TraceEntry] = []
    ok = True
    prereqs = catalog.prereqs_of(course_id)
    if not prereqs:
        entries.append(TraceEntry(RULE_PREREQ, course_id, PASS, (f"{course_id} has no prerequisites",)))
    for p in prereqs:
        if p in taken_set:
            entries.append(TraceEntry(RULE_PREREQ, course_id, PASS, (f"{p} completed",)))
            continue
        taken_alts = sorted(a for a in catalog.alternatives_of(p) if a in taken_set)
        if taken_alts:
            entries.append(
                TraceEntry(RULE_PREREQ, course_id, PASS, (f"{p} satisfied by completed alternative {taken_alts[0]}",))
            )
        else:
            ok = False
            entries.append(
                TraceEntry(RULE_PREREQ, course_id, FAIL, (f"{p} missing from completed set", f"no completed alternative for {p}"))
            )
    return ok, RuleTrace(tuple(entries))


def certify_candidates(
    catalog: Catalog,
    candidates: CandidateSet,
    taken: Iterable[str],
    term: TermLabel,
) -> Verdict:
    """Retain candidates whose prerequisites are met and that run in the
    requested term. Co-requisite pairing is a selection-time rule, so a
    candidate whose partner sits outside the set is kept and annotated."""
    taken_set = set(taken)
    entries: list[TraceEntry] = []
    certified: set[str] = set()
    for cid in sorted(candidates.course_ids):
        ok_prereq, trace = prereqs_met(catalog, cid, taken_set)
        entries.extend(trace.entries)
        course = catalog.course(cid)
        offered = term.season in course.terms_offered
        entries.append(
            TraceEntry(
                RULE_TERM,
                cid,
                PASS if offered else FAIL,
                (f"{cid} offered in {term.season}",)
                if offered
                else (f"{cid} not offered in {term.season}; offered in {', '.join(sorted(course.terms_offered))}",),
            )
        )
        for partner in catalog.coreq_partners(cid):
            if partner not in candidates.course_ids and partner not in taken_set:
                entries.append(
                    TraceEntry(
                        RULE_COREQ,
                        cid,
                        PASS,
                        (f"{cid} pairs with {partner}; pairing is enforced when a selection is validated",),
                    )
                )
        if ok_prereq and offered:
            certified.add(cid)
    trace = RuleTrace(tuple(entries))
    return Verdict(ok=not trace.failures(), trace=trace, certified=frozenset(certified))


def validate_selection(
    catalog: Catalog,
    pick: Iterable[str],
    taken: Iterable[str],
    cap: int,
    term: TermLabel,
) -> Verdict:
    """Validate a concrete term selection against all four rule families.

    The credit cap applies to the pick alone (caps are per term, not
    cumulative); the trace carries a cap entry per course so every course's
    audit row covers all four families.
    """
    pick_set = set(pick)
    if not pick_set:
        raise ParseError("pick must be non-empty")
    taken_set = set(taken)
    total = sum(catalog.course(c).credits for c in pick_set)
    cap_ok = total <= cap
    entries: list[TraceEntry] = []
    per_course_ok: dict[str, bool] = {}
    for cid in sorted(pick_set):
        ok = True
        ok_prereq, trace = prereqs_met(catalog, cid, taken_set)
        entries.extend(trace.entries)
        ok &= ok_prereq

        partners = catalog.coreq_partners(cid)
        if not partners:
            entries.append(TraceEntry(RULE_COREQ, cid, PASS, (f"{cid} has no co-requisites",)))
        for partner in partners:
            paired = partner in pick_set or partner in taken_set
            ok &= paired
            entries.append(
                TraceEntry(
                    RULE_COREQ,
                    cid,
                    PASS if paired else FAIL,
                    (f"co-requisite {partner} scheduled with or completed before {cid}",)
                    if paired
                    else (f"co-requisite {partner} is neither in this selection nor completed",),
                )
            )

        course = catalog.course(cid)
        offered = term.season in course.terms_offered
        ok &= offered
        entries.append(
            TraceEntry(
                RULE_TERM,
                cid,
                PASS if offered else FAIL,
                (f"{cid} offered in {term.season}",)
                if offered
                else (f"{cid} not offered in {term.season}; offered in {', '.join(sorted(course.terms_offered))}",),
            )
        )

        ok &= cap_ok
        entries.append(
            TraceEntry(
                RULE_CREDIT_CAP,
                cid,
                PASS if cap_ok else FAIL,
                (f"selection totals {total} credit hours against cap {cap}",),
            )
        )
        per_course_ok[cid] = ok
    trace = RuleTrace(tuple(entries))
    certified = frozenset(c for c, ok in per_course_ok.items() if ok)
    return Verdict(ok=not trace.failures(), trace=trace, certified=certified)


def detect_cycles(catalog: Catalog) -> list[list[str]]:
    """Cycles in the Prerequisite subgraph; empty for valid catalogs."""
    return prereq_cycles(catalog)
