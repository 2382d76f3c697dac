"""Independent brute-force oracles.

Every function here re-derives its answer from raw record rows with the
most literal algorithm available (fixpoint expansion, exhaustive scans,
recursive DFS, breadth-first search over schedules), deliberately not
sharing code paths with the package's indexed implementations.
"""

from __future__ import annotations

import itertools
from collections import deque

from advisor.catalog import Catalog
from advisor.terms import successor


def edge_rows(catalog: Catalog) -> list[dict]:
    return [
        {"course_id": e.course_id, "related_id": e.related_id, "kind": e.kind.value}
        for e in catalog.prereq_edges
    ]


def _prereq_map(edges: list[dict]) -> dict[str, set[str]]:
    out: dict[str, set[str]] = {}
    for e in edges:
        if e["kind"] == "Prerequisite":
            out.setdefault(e["course_id"], set()).add(e["related_id"])
    return out


def _alt_map(edges: list[dict]) -> dict[str, set[str]]:
    out: dict[str, set[str]] = {}
    for e in edges:
        if e["kind"] == "Alternative":
            out.setdefault(e["related_id"], set()).add(e["course_id"])
    return out


def _coreq_map(edges: list[dict]) -> dict[str, set[str]]:
    out: dict[str, set[str]] = {}
    for e in edges:
        if e["kind"] == "Corequisite":
            out.setdefault(e["course_id"], set()).add(e["related_id"])
            out.setdefault(e["related_id"], set()).add(e["course_id"])
    return out


def oracle_closure(edges: list[dict], course: str) -> set[str]:
    """Repeated edge expansion to fixpoint."""
    direct = _prereq_map(edges)
    closure = set(direct.get(course, set()))
    changed = True
    while changed:
        changed = False
        for c in list(closure):
            for p in direct.get(c, ()):
                if p not in closure:
                    closure.add(p)
                    changed = True
    return closure


def oracle_dependents(edges: list[dict], course: str, scope: set[str]) -> set[str]:
    return {
        e["course_id"]
        for e in edges
        if e["kind"] == "Prerequisite" and e["related_id"] == course and e["course_id"] in scope
    }


def oracle_prereqs_met(edges: list[dict], course: str, taken: set[str]) -> bool:
    alts = _alt_map(edges)
    for e in edges:
        if e["kind"] == "Prerequisite" and e["course_id"] == course:
            p = e["related_id"]
            if p in taken:
                continue
            if any(a in taken for a in alts.get(p, ())):
                continue
            return False
    return True


def oracle_filter(catalog: Catalog, spec) -> set[str]:
    """Exhaustive predicate scan over all courses and membership rows."""
    member_rows = {(pc.program_id, pc.course_id) for pc in catalog.program_courses}
    out = set()
    for course in catalog.courses:
        if (spec.program_id, course.id) not in member_rows:
            continue
        if course.id in spec.exclude:
            continue
        if spec.skill_filter is not None:
            if spec.conjunctive_skills:
                if not set(spec.skill_filter) <= set(course.skills):
                    continue
            elif not set(spec.skill_filter) & set(course.skills):
                continue
        if spec.term_filter is not None and spec.term_filter not in course.terms_offered:
            continue
        if spec.max_course_credits is not None and course.credits > spec.max_course_credits:
            continue
        out.add(course.id)
    return out


def oracle_certify(catalog: Catalog, candidates: set[str], taken: set[str], season: str) -> set[str]:
    edges = edge_rows(catalog)
    offered = {c.id: set(c.terms_offered) for c in catalog.courses}
    return {
        c for c in candidates if oracle_prereqs_met(edges, c, taken) and season in offered[c]
    }


def oracle_selection_ok(
    catalog: Catalog, pick: set[str], taken: set[str], cap: int, season: str
) -> bool:
    edges = edge_rows(catalog)
    offered = {c.id: set(c.terms_offered) for c in catalog.courses}
    credits = {c.id: c.credits for c in catalog.courses}
    coreqs = _coreq_map(edges)
    if sum(credits[c] for c in pick) > cap:
        return False
    for c in pick:
        if not oracle_prereqs_met(edges, c, taken):
            return False
        if season not in offered[c]:
            return False
        for partner in coreqs.get(c, ()):
            if partner not in pick and partner not in taken:
                return False
    return True


def oracle_has_cycle(edges: list[dict], nodes: set[str]) -> bool:
    """Recursive depth-first search with colors."""
    graph = {n: set() for n in nodes}
    for e in edges:
        if e["kind"] == "Prerequisite" and e["course_id"] in nodes and e["related_id"] in nodes:
            graph[e["course_id"]].add(e["related_id"])
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in nodes}

    def dfs(n: str) -> bool:
        color[n] = GRAY
        for m in graph[n]:
            if color[m] == GRAY:
                return True
            if color[m] == WHITE and dfs(m):
                return True
        color[n] = BLACK
        return False

    return any(color[n] == WHITE and dfs(n) for n in sorted(nodes))


def is_cycle(edges: list[dict], cycle: list[str]) -> bool:
    """Each consecutive pair (and the wrap) must be a Prerequisite edge."""
    pairs = {(e["course_id"], e["related_id"]) for e in edges if e["kind"] == "Prerequisite"}
    n = len(cycle)
    return n >= 2 and all((cycle[i], cycle[(i + 1) % n]) in pairs for i in range(n))


def best_pack(weights: dict[str, int], credits: dict[str, int], cap: int) -> set[str]:
    """Exhaustive subset search maximizing total weight under the cap.

    Ties prefer larger subsets and then the lexicographically smallest
    sorted id tuple, matching the greedy tie order on uniform-credit
    instances (the packer adds every course that still fits).
    """
    ids = sorted(weights)
    best_key: tuple[int, int] | None = None
    best_combo: tuple[str, ...] = ()
    for r in range(len(ids) + 1):
        for combo in itertools.combinations(ids, r):
            if sum(credits[c] for c in combo) > cap:
                continue
            key = (sum(weights[c] for c in combo), len(combo))
            if best_key is None or key > best_key or (key == best_key and combo < best_combo):
                best_key = key
                best_combo = combo
    return set(best_combo)


def min_horizon(
    catalog: Catalog,
    program_id: str,
    taken: set[str],
    cap: int,
    start,
    max_depth: int = 16,
) -> int | None:
    """Breadth-first search over term assignments for the minimum number of
    terms (including forced idle terms) that covers the program."""
    edges = edge_rows(catalog)
    prereqs = _prereq_map(edges)
    coreqs = _coreq_map(edges)
    alts = _alt_map(edges)
    offered = {c.id: set(c.terms_offered) for c in catalog.courses}
    credits = {c.id: c.credits for c in catalog.courses}
    members = set(catalog.members_of(program_id))
    calendar = catalog.calendar

    universe = set(members)
    frontier = list(members)
    while frontier:
        c = frontier.pop()
        for n in prereqs.get(c, set()) | coreqs.get(c, set()):
            if n in offered and n not in universe:
                universe.add(n)
                frontier.append(n)

    def satisfied(c: str, have: frozenset[str]) -> bool:
        return c in have or any(a in have for a in alts.get(c, ()))

    def done(have: frozenset[str]) -> bool:
        return all(satisfied(m, have) for m in members)

    def moves(have: frozenset[str], season: str) -> list[frozenset[str]]:
        open_courses = [
            c
            for c in sorted(universe)
            if c not in have
            and season in offered[c]
            and all(p in have or any(a in have for a in alts.get(p, ())) for p in prereqs.get(c, ()))
        ]
        clusters: list[frozenset[str]] = []
        seen: set[str] = set()
        for c in open_courses:
            if c in seen:
                continue
            cluster = {c}
            queue = [c]
            while queue:
                cur = queue.pop()
                for p in coreqs.get(cur, ()):
                    if p not in cluster and p not in have:
                        cluster.add(p)
                        queue.append(p)
            seen |= cluster
            if all(x in open_courses for x in cluster):
                clusters.append(frozenset(cluster))
        out: list[frozenset[str]] = [frozenset()]
        for r in range(1, len(clusters) + 1):
            for combo in itertools.combinations(clusters, r):
                merged = frozenset().union(*combo)
                if sum(credits[c] for c in merged) <= cap:
                    out.append(merged)
        return out

    initial = frozenset(taken)
    if done(initial):
        return 0
    queue = deque([(initial, start, 0)])
    visited = {(initial, start.season)}
    while queue:
        have, term, depth = queue.popleft()
        if depth >= max_depth:
            continue
        for move in moves(have, term.season):
            nxt = have | move
            if done(nxt):
                return depth + 1
            nxt_term = successor(term, calendar)
            key = (nxt, nxt_term.season)
            if key not in visited:
                visited.add(key)
                queue.append((nxt, nxt_term, depth + 1))
    return None
