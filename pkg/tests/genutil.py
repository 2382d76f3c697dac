"""Seeded random generators for catalogs, filter specs, and rule cases."""

from __future__ import annotations

import random

from advisor.catalog import Catalog, parse_catalog, validate_integrity
from advisor.routing import FilterSpec

SKILL_POOL = ["systems", "theory", "ai", "data", "web", "security"]
DEPTS = ["AAA", "BBB", "CCD", "DDE"]
SEASON_CHOICES = [("Fall", "Spring"), ("Fall", "Spring"), ("Fall", "Spring"), ("Fall",), ("Spring",)]


def random_catalog(
    rng: random.Random,
    n_courses: int | None = None,
    with_coreqs: bool = True,
    with_alternatives: bool = True,
    membership_ratio: float | None = None,
) -> Catalog:
    n = n_courses if n_courses is not None else rng.randint(3, 20)
    ids = [f"{DEPTS[i % len(DEPTS)]}{1000 + i}" for i in range(n)]
    courses = []
    for i, cid in enumerate(ids):
        courses.append(
            {
                "id": cid,
                "title": f"Course {i}",
                "credits": rng.randint(1, 4),
                "description": f"Synthetic course number {i}.",
                "terms_offered": list(rng.choice(SEASON_CHOICES)),
                "skills": rng.sample(SKILL_POOL, rng.randint(0, 2)),
            }
        )
    used_pairs: set[tuple[str, str]] = set()
    edges = []
    for j in range(n):
        for i in range(j):
            if rng.random() < 2.0 / max(n, 1):
                edges.append({"course_id": ids[j], "related_id": ids[i], "kind": "Prerequisite"})
                used_pairs.add((ids[j], ids[i]))
    if with_coreqs and n >= 4:
        for _ in range(rng.randint(0, max(1, n // 8))):
            a, b = rng.sample(ids, 2)
            if (a, b) not in used_pairs and (b, a) not in used_pairs:
                edges.append({"course_id": a, "related_id": b, "kind": "Corequisite"})
                used_pairs.add((a, b))
    if with_alternatives and n >= 4:
        for _ in range(rng.randint(0, max(1, n // 8))):
            a, b = rng.sample(ids, 2)
            if (a, b) not in used_pairs and (b, a) not in used_pairs:
                edges.append({"course_id": a, "related_id": b, "kind": "Alternative"})
                used_pairs.add((a, b))
    ratio = membership_ratio if membership_ratio is not None else rng.uniform(0.6, 1.0)
    member_ids = rng.sample(ids, max(1, int(n * ratio)))
    data = {
        "courses": courses,
        "programs": [{"id": "PROG", "name": "Synthetic Program", "degree_type": "Major"}],
        "program_courses": [
            {"program_id": "PROG", "course_id": cid, "is_core": rng.random() < 0.5,
             "recommended_year": rng.randint(1, 5)}
            for cid in member_ids
        ],
        "prereq_edges": edges,
    }
    catalog = parse_catalog(data)
    assert validate_integrity(catalog).ok, "generator must produce valid catalogs"
    return catalog


def random_taken(rng: random.Random, catalog: Catalog, downward_closed: bool = True) -> frozenset[str]:
    ids = [c.id for c in catalog.courses]
    if not downward_closed:
        return frozenset(c for c in ids if rng.random() < 0.3)
    taken: set[str] = set()
    for cid in ids:  # index order respects the generator's edge direction
        if all(p in taken for p in catalog.prereqs_of(cid)) and rng.random() < 0.35:
            taken.add(cid)
    return frozenset(taken)


def random_spec(rng: random.Random, catalog: Catalog, program_id: str = "PROG") -> FilterSpec:
    skills = None
    if rng.random() < 0.5:
        skills = frozenset(rng.sample(SKILL_POOL, rng.randint(1, 3)))
    term = rng.choice([None, "Fall", "Spring"])
    ceiling = rng.choice([None, None, rng.randint(1, 4)])
    ids = [c.id for c in catalog.courses]
    exclude = frozenset(c for c in ids if rng.random() < 0.25)
    return FilterSpec(
        program_id=program_id,
        skill_filter=skills,
        term_filter=term,
        max_course_credits=ceiling,
        exclude=exclude,
        conjunctive_skills=rng.random() < 0.15,
    )
