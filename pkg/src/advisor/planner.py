"""Greedy prerequisite-aware roadmap construction.

Each term the planner takes the eligible remainder of the program, ranks
it by unlock weight (how many still-needed courses a candidate directly
unlocks), and packs highest-weight courses under the term's credit cap.
When nothing is eligible it schedules eligible prerequisite unlockers for
the neediest remaining course instead; those unlockers may live outside
the program. Co-requisite partners ride along with whatever pulls them
in, whole clusters are trimmed when augmentation busts the cap, and
low-id eligible leftovers pad a term up to the per-term course minimum.

Every committed block must pass selection validation against the taken
set as of that block. The two sanctioned exceptions carry flags:
``overflow`` when no single eligible cluster fits the cap (the block is
committed anyway rather than stalling), and ``unlock`` for blocks built
from out-of-need prerequisite unlockers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .catalog import Catalog, direct_dependents, prereq_cycles
from .errors import InfeasiblePlan, UnknownCourse
from .rules import _prereqs_ok
from .terms import DEFAULT_CALENDAR, TermLabel, successor


@dataclass(frozen=True)
class PlannerConfig:
    start: TermLabel
    credit_cap: int | Callable[[TermLabel], int] = 12
    min_courses_per_term: int = 3
    calendar: tuple[str, ...] = DEFAULT_CALENDAR
    max_terms: int = 24
    transitive_unlock_weight: bool = False

    def __post_init__(self):
        if self.min_courses_per_term < 1:
            raise InfeasiblePlan("min_courses_per_term must be >= 1")
        if self.max_terms < 1:
            raise InfeasiblePlan("max_terms must be >= 1")

    def cap_for(self, term: TermLabel) -> int:
        cap = self.credit_cap(term) if callable(self.credit_cap) else self.credit_cap
        if cap < 0:
            raise InfeasiblePlan(f"credit cap for {term} is negative")
        return cap


@dataclass(frozen=True)
class SemesterBlock:
    term: TermLabel
    courses: tuple[str, ...]
    credits: int
    flags: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "term": str(self.term),
            "courses": list(self.courses),
            "credits": self.credits,
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class Roadmap:
    blocks: tuple[SemesterBlock, ...]
    covered: frozenset[str]

    def to_dict(self) -> dict:
        return {
            "blocks": [b.to_dict() for b in self.blocks],
            "covered": sorted(self.covered),
        }


def unlock_weight(catalog: Catalog, course_id: str, need: Iterable[str], transitive: bool = False) -> int:
    """Number of still-needed courses this one directly unlocks.

    With ``transitive`` the count covers all needed descendants instead of
    direct dependents only.
    """
    need_set = set(need)
    if not transitive:
        return len(direct_dependents(catalog, course_id, need_set))
    catalog.course(course_id)
    seen: set[str] = set()
    frontier = [course_id]
    while frontier:
        cur = frontier.pop()
        for d in catalog.dependents_of(cur):
            if d not in seen:
                seen.add(d)
                frontier.append(d)
    return len(seen & need_set)


def eligible_set(catalog: Catalog, need: Iterable[str], taken: Iterable[str]) -> frozenset[str]:
    """Needed courses whose prerequisites are already satisfied."""
    taken_set = frozenset(taken)
    return frozenset(c for c in need if _prereqs_ok(catalog, c, taken_set))


def greedy_pack(catalog: Catalog, elig: Iterable[str], need: Iterable[str], cap: int) -> frozenset[str]:
    """Pack eligible courses under the cap, highest unlock weight first,
    ascending id on ties. If nothing fits and candidates exist, the first
    ranked course is returned alone; callers flag that block as overflow.
    """
    need_set = frozenset(need)
    ranked = sorted(elig, key=lambda c: (-unlock_weight(catalog, c, need_set), c))
    pick: set[str] = set()
    total = 0
    for cid in ranked:
        credits = catalog.course(cid).credits
        if total + credits <= cap:
            pick.add(cid)
            total += credits
    if not pick and ranked:
        return frozenset({ranked[0]})
    return frozenset(pick)


# ---------------------------------------------------------------------------
# Term selection internals


def _credits(catalog: Catalog, courses: Iterable[str]) -> int:
    return sum(catalog.course(c).credits for c in courses)


def _coreq_cluster(catalog: Catalog, seed: Iterable[str], taken: set[str]) -> set[str]:
    """Close a pick over untaken co-requisite partners (chains included)."""
    cluster = set(seed)
    frontier = list(cluster)
    while frontier:
        cur = frontier.pop()
        for partner in catalog.coreq_partners(cur):
            if partner not in cluster and partner not in taken and catalog.has_course(partner):
                cluster.add(partner)
                frontier.append(partner)
    return cluster


def _cluster_ok(catalog: Catalog, cluster: Iterable[str], taken: set[str], season: str) -> bool:
    frozen_taken = frozenset(taken)
    return all(
        _prereqs_ok(catalog, c, frozen_taken) and season in catalog.course(c).terms_offered
        for c in cluster
    )


def _partition_clusters(catalog: Catalog, pick: set[str]) -> list[set[str]]:
    """Connected components of the pick under the co-requisite relation."""
    remaining = set(pick)
    clusters: list[set[str]] = []
    while remaining:
        seed = min(remaining)
        component = {seed}
        frontier = [seed]
        while frontier:
            cur = frontier.pop()
            for partner in catalog.coreq_partners(cur):
                if partner in remaining and partner not in component:
                    component.add(partner)
                    frontier.append(partner)
        clusters.append(component)
        remaining -= component
    return clusters


def _recommended_year(catalog: Catalog, program_id: str, course_id: str) -> int:
    row = catalog.membership(program_id, course_id)
    return row.recommended_year if row else 9


def _requirement_closure(catalog: Catalog, seed: str) -> dict[str, int]:
    """BFS depths over prerequisites and co-requisite partners of ``seed``."""
    depth = {seed: 0}
    queue = [seed]
    while queue:
        cur = queue.pop(0)
        for nxt in tuple(catalog.prereqs_of(cur)) + tuple(catalog.coreq_partners(cur)):
            if nxt not in depth and catalog.has_course(nxt):
                depth[nxt] = depth[cur] + 1
                queue.append(nxt)
    depth.pop(seed, None)
    return depth


def _unlocker_pick(
    catalog: Catalog, seed: str, taken: set[str], cap: int, season: str
) -> tuple[set[str], bool]:
    """Schedule eligible unlockers for ``seed``: requirement-closure members
    whose own prerequisites are met, packed nearest-first up to the cap.

    Returns (pick, overflow); overflow means even the nearest cluster
    exceeds the cap and is committed anyway.
    """
    depth = _requirement_closure(catalog, seed)
    frozen_taken = frozenset(taken)
    ordered = [
        c
        for c in sorted(depth, key=lambda c: (depth[c], c))
        if c not in taken and _prereqs_ok(catalog, c, frozen_taken)
    ]
    clusters: list[set[str]] = []
    seen: set[str] = set()
    for cid in ordered:
        if cid in seen:
            continue
        cluster = _coreq_cluster(catalog, {cid}, taken)
        seen |= cluster
        if _cluster_ok(catalog, cluster, taken, season):
            clusters.append(cluster)
    if not clusters:
        return set(), False
    pick: set[str] = set()
    total = 0
    for cluster in clusters:
        extra = cluster - pick
        credits = _credits(catalog, extra)
        if total + credits <= cap:
            pick |= extra
            total += credits
    if not pick:
        # Nearest cluster exceeds the cap on its own; commit it flagged.
        return set(clusters[0]), True
    return pick, False


def _augment_unlockers(
    catalog: Catalog, pick: set[str], need: set[str], taken: set[str], cap: int, season: str
) -> tuple[set[str], bool]:
    """Fill remaining cap headroom with eligible missing prerequisites of
    still-blocked needed courses, ranked by how many needed courses each
    one directly unlocks. An already-satisfied prerequisite (completed, or
    substituted by a completed Alternative) is never re-added.

    Returns the grown pick and whether any added course lies outside
    ``need`` (an out-of-program unlocker, flagged upstream).
    """
    total = _credits(catalog, pick)
    if total >= cap:
        return pick, False
    frozen_taken = frozenset(taken)
    candidates: set[str] = set()
    for cid in sorted(need):
        if cid in pick or _prereqs_ok(catalog, cid, frozen_taken):
            continue
        for p in catalog.prereqs_of(cid):
            if p in taken or p in pick or not catalog.has_course(p):
                continue
            if any(a in taken for a in catalog.alternatives_of(p)):
                continue
            if _prereqs_ok(catalog, p, frozen_taken):
                candidates.add(p)
    added_outside = False
    ordered = sorted(
        candidates, key=lambda p: (-len(direct_dependents(catalog, p, need)), p)
    )
    for p in ordered:
        if p in pick:
            continue
        cluster = _coreq_cluster(catalog, {p}, taken) - pick
        if not cluster or not _cluster_ok(catalog, cluster, taken, season):
            continue
        extra = _credits(catalog, cluster)
        if total + extra <= cap:
            pick |= cluster
            total += extra
            added_outside = added_outside or any(c not in need for c in cluster)
    return pick, added_outside


def _any_schedulable_later(catalog: Catalog, need: set[str], taken: set[str], calendar) -> bool:
    """True when some untaken course relevant to the program (a needed
    course or anything in its requirement closure) has met prerequisites
    and a season in the calendar where its whole co-requisite cluster
    runs; waiting for that season can then make progress."""
    frozen_taken = frozenset(taken)
    pool: set[str] = set(need)
    for cid in need:
        pool.update(_requirement_closure(catalog, cid))
    for cid in sorted(pool):
        if cid in taken or not _prereqs_ok(catalog, cid, frozen_taken):
            continue
        cluster = _coreq_cluster(catalog, {cid}, taken)
        if not all(_prereqs_ok(catalog, c, frozen_taken) for c in cluster):
            continue
        for season in calendar:
            if all(season in catalog.course(c).terms_offered for c in cluster):
                return True
    return False


def _select_term(
    catalog: Catalog,
    need: set[str],
    taken: set[str],
    cap: int,
    term: TermLabel,
    config: PlannerConfig,
    program_id: str,
) -> tuple[set[str], tuple[str, ...], bool]:
    """One term's pick. Returns (pick, flags, blocked_by_season)."""
    season = term.season
    frozen_taken = frozenset(taken)
    elig = eligible_set(catalog, need, frozen_taken)
    sched = {c for c in elig if season in catalog.course(c).terms_offered}
    weight_of = lambda c: unlock_weight(catalog, c, need, config.transitive_unlock_weight)
    flags: list[str] = []
    pick: set[str] = set()
    unlockers_used = False

    if sched:
        pick = set(greedy_pack(catalog, frozenset(sched), frozenset(need), cap))
        pick = _coreq_cluster(catalog, pick, taken)
        # Co-requisite closure can drag in partners whose own prerequisites
        # are unmet or that are off-season; such clusters cannot run now.
        valid: set[str] = set()
        for cluster in _partition_clusters(catalog, pick):
            if _cluster_ok(catalog, cluster, taken, season):
                valid |= cluster
        pick = valid
        if not pick:
            for cid in sorted(sched, key=lambda c: (-weight_of(c), c)):
                cluster = _coreq_cluster(catalog, {cid}, taken)
                if _cluster_ok(catalog, cluster, taken, season):
                    pick = cluster
                    break

    if not pick and need:
        seed = min(need, key=lambda c: (_recommended_year(catalog, program_id, c), c))
        pick, overflow = _unlocker_pick(catalog, seed, taken, cap, season)
        if pick:
            unlockers_used = True
            if overflow:
                flags.append("overflow")

    if _credits(catalog, pick) <= cap:
        pick, added_outside = _augment_unlockers(catalog, pick, need, taken, cap, season)
        unlockers_used = unlockers_used or added_outside

    if not pick:
        blocked_by_season = _any_schedulable_later(catalog, need, taken, config.calendar)
        return set(), (), blocked_by_season
    if unlockers_used:
        flags.append("unlock")

    # Trim whole clusters while over cap; a lone over-cap cluster is
    # committed with the overflow flag instead of being split.
    clusters = _partition_clusters(catalog, pick)
    total = _credits(catalog, pick)
    while total > cap and len(clusters) > 1:
        ordered = sorted(clusters, key=lambda cl: tuple(sorted(cl)), reverse=True)
        drop = min(ordered, key=lambda cl: sum(weight_of(c) for c in cl if c in need))
        clusters.remove(drop)
        pick -= drop
        total = _credits(catalog, pick)
    if total > cap and "overflow" not in flags:
        flags.append("overflow")

    # Pad up to the per-term minimum with lowest-id eligible leftovers that
    # still fit; the minimum is waived when no valid leftover fits.
    if len(pick) < config.min_courses_per_term:
        for cid in sorted(sched - pick):
            if len(pick) >= config.min_courses_per_term:
                break
            cluster = _coreq_cluster(catalog, {cid}, taken) - pick
            if not cluster or not _cluster_ok(catalog, cluster, taken, season):
                continue
            extra = _credits(catalog, cluster)
            if total + extra <= cap:
                pick |= cluster
                total += extra
    return pick, tuple(sorted(flags)), False


def plan_roadmap(
    catalog: Catalog,
    program_id: str,
    taken: Iterable[str],
    config: PlannerConfig,
) -> Roadmap:
    """Cover all remaining program courses across successive terms.

    A program course already substituted by a completed Alternative does
    not re-enter the plan. Raises InfeasiblePlan naming the stuck courses
    when a term cannot schedule anything and waiting for another season
    cannot help, or when the term budget runs out.
    """
    cycles = prereq_cycles(catalog)
    if cycles:
        raise InfeasiblePlan(
            "prerequisite graph contains cycles", stuck={c for cycle in cycles for c in cycle}
        )
    members = catalog.members_of(program_id)
    taken_now = set(taken)

    def satisfied(cid: str) -> bool:
        return cid in taken_now or any(a in taken_now for a in catalog.alternatives_of(cid))

    need = {c for c in members if not satisfied(c)}
    if need:
        min_credit = min(catalog.course(c).credits for c in need)
        if config.cap_for(config.start) < min_credit:
            raise InfeasiblePlan(
                f"credit cap {config.cap_for(config.start)} is below the smallest "
                f"remaining course credit value {min_credit}",
                stuck=need,
            )

    blocks: list[SemesterBlock] = []
    term = config.start
    terms_used = 0
    consecutive_skips = 0
    while need:
        if terms_used >= config.max_terms:
            raise InfeasiblePlan(f"plan exceeds {config.max_terms} terms", stuck=need)
        cap = config.cap_for(term)
        pick, flags, blocked_by_season = _select_term(
            catalog, need, taken_now, cap, term, config, program_id
        )
        if not pick:
            if blocked_by_season and consecutive_skips < len(config.calendar):
                consecutive_skips += 1
                terms_used += 1
                term = successor(term, config.calendar)
                continue
            raise InfeasiblePlan("no schedulable courses remain", stuck=need)
        consecutive_skips = 0
        blocks.append(
            SemesterBlock(
                term=term,
                courses=tuple(sorted(pick)),
                credits=_credits(catalog, pick),
                flags=flags,
            )
        )
        taken_now |= pick
        need = {c for c in need if not satisfied(c)}
        term = successor(term, config.calendar)
        terms_used += 1
    covered = frozenset(c for b in blocks for c in b.courses)
    return Roadmap(blocks=tuple(blocks), covered=covered)
