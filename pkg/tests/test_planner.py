from __future__ import annotations

import json
import random

import pytest

from advisor.catalog import parse_catalog
from advisor.errors import InfeasiblePlan
from advisor.planner import (
    PlannerConfig,
    eligible_set,
    greedy_pack,
    plan_roadmap,
    unlock_weight,
)
from advisor.rules import validate_selection
from advisor.terms import TermLabel, term_span

from .oracles import best_pack, min_horizon

FALL25 = TermLabel("Fall", 2025)


def _chain_catalog():
    # CCC3000 has no prerequisites; BBB2000 requires it; AAA1000 requires BBB2000
    return parse_catalog(
        {
            "courses": [
                {"id": "AAA1000", "title": "A", "credits": 3},
                {"id": "BBB2000", "title": "B", "credits": 3},
                {"id": "CCC3000", "title": "C", "credits": 3},
            ],
            "programs": [{"id": "P1", "name": "P", "degree_type": "Major"}],
            "program_courses": [
                {"program_id": "P1", "course_id": c} for c in ("AAA1000", "BBB2000", "CCC3000")
            ],
            "prereq_edges": [
                {"course_id": "AAA1000", "related_id": "BBB2000", "kind": "Prerequisite"},
                {"course_id": "BBB2000", "related_id": "CCC3000", "kind": "Prerequisite"},
            ],
        }
    )


def _diamond_catalog():
    return parse_catalog(
        {
            "courses": [{"id": f"AAA{1000 + i}", "title": str(i), "credits": 3} for i in range(4)],
            "programs": [{"id": "P1", "name": "P", "degree_type": "Major"}],
            "program_courses": [{"program_id": "P1", "course_id": f"AAA{1000 + i}"} for i in range(4)],
            "prereq_edges": [
                {"course_id": "AAA1001", "related_id": "AAA1000", "kind": "Prerequisite"},
                {"course_id": "AAA1002", "related_id": "AAA1000", "kind": "Prerequisite"},
                {"course_id": "AAA1003", "related_id": "AAA1001", "kind": "Prerequisite"},
                {"course_id": "AAA1003", "related_id": "AAA1002", "kind": "Prerequisite"},
            ],
        }
    )


def test_unlock_weight_examples(listing_catalog, catalog):
    assert unlock_weight(listing_catalog, "GHI3030", {"MLA4100"}) == 1
    assert unlock_weight(listing_catalog, "DST3300", {"MLA4100"}) == 0
    cat = _diamond_catalog()
    assert unlock_weight(cat, "AAA1000", {"AAA1001", "AAA1002", "AAA1003"}) == 2


def test_unlock_weight_transitive_mode():
    cat = _chain_catalog()
    need = {"AAA1000", "BBB2000"}
    assert unlock_weight(cat, "CCC3000", need) == 1
    assert unlock_weight(cat, "CCC3000", need, transitive=True) == 2


def test_eligible_set_no_prereqs():
    cat = _diamond_catalog()
    need = frozenset({"AAA1000"})
    assert eligible_set(cat, need, frozenset()) == need


def test_eligible_set_chain_root_only():
    cat = _chain_catalog()
    got = eligible_set(cat, frozenset({"AAA1000", "BBB2000", "CCC3000"}), frozenset())
    assert got == {"CCC3000"}


def test_eligible_set_golden(listing_catalog):
    got = eligible_set(
        listing_catalog,
        frozenset({"MLA4100", "DST3300"}),
        frozenset({"ABC1010", "DEF2020", "GHI3030"}),
    )
    assert got == {"MLA4100", "DST3300"}


def test_greedy_pack_prefers_weight():
    cat = _diamond_catalog()
    # AAA1000 unlocks two needed courses; everything is 3 credits
    need = frozenset({"AAA1000", "AAA1001", "AAA1002", "AAA1003"})
    elig = frozenset({"AAA1000", "AAA1001"})
    got = greedy_pack(cat, elig, need, cap=3)
    weights = {c: unlock_weight(cat, c, need) for c in elig}
    credits = {c: cat.course(c).credits for c in elig}
    assert got == best_pack(weights, credits, cap=3)
    assert got == {"AAA1000"}


def test_greedy_pack_empty_elig():
    cat = _diamond_catalog()
    assert greedy_pack(cat, frozenset(), frozenset(), cap=12) == frozenset()


def test_greedy_pack_four_of_five():
    cat = parse_catalog(
        {
            "courses": [{"id": f"AAA{1000 + i}", "title": str(i), "credits": 3} for i in range(5)],
            "prereq_edges": [],
        }
    )
    elig = frozenset(c.id for c in cat.courses)
    got = greedy_pack(cat, elig, elig, cap=12)
    assert len(got) == 4
    weights = {c: 0 for c in elig}
    credits = {c: 3 for c in elig}
    assert got == best_pack(weights, credits, cap=12)


def test_greedy_pack_matches_exhaustive_on_uniform_credit_instances():
    rng = random.Random(21)
    ids = [f"AAA{1000 + i}" for i in range(8)]
    cat = parse_catalog(
        {"courses": [{"id": c, "title": c, "credits": 3} for c in ids], "prereq_edges": []}
    )
    for _ in range(40):
        elig = frozenset(rng.sample(ids, rng.randint(1, 8)))
        cap = rng.choice([3, 6, 9, 12])
        got = greedy_pack(cat, elig, elig, cap)
        weights = {c: 0 for c in elig}
        assert got == best_pack(weights, {c: 3 for c in elig}, cap)


def test_greedy_pack_overflow_escape():
    cat = parse_catalog(
        {"courses": [{"id": "AAA1000", "title": "A", "credits": 5}], "prereq_edges": []}
    )
    got = greedy_pack(cat, frozenset({"AAA1000"}), frozenset({"AAA1000"}), cap=3)
    assert got == {"AAA1000"}


def test_plan_nothing_left():
    cat = _chain_catalog()
    plan = plan_roadmap(
        cat, "P1", frozenset({"AAA1000", "BBB2000", "CCC3000"}), PlannerConfig(start=FALL25)
    )
    assert plan.blocks == ()
    assert plan.covered == frozenset()


def test_plan_chain_three_terms():
    cat = _chain_catalog()
    config = PlannerConfig(start=FALL25, credit_cap=3, min_courses_per_term=1)
    plan = plan_roadmap(cat, "P1", frozenset(), config)
    assert [b.courses for b in plan.blocks] == [("CCC3000",), ("BBB2000",), ("AAA1000",)]
    assert min_horizon(cat, "P1", set(), cap=3, start=FALL25) == 3


def test_plan_diamond():
    cat = _diamond_catalog()
    config = PlannerConfig(start=FALL25, credit_cap=6, min_courses_per_term=1)
    plan = plan_roadmap(cat, "P1", frozenset(), config)
    assert [b.courses for b in plan.blocks] == [
        ("AAA1000",),
        ("AAA1001", "AAA1002"),
        ("AAA1003",),
    ]
    assert min_horizon(cat, "P1", set(), cap=6, start=FALL25) == 3


def test_plan_blocks_validate_and_cover(catalog, students):
    for profile in students.values():
        config = PlannerConfig(start=TermLabel("Spring", 2026), calendar=catalog.calendar)
        plan = plan_roadmap(catalog, profile.program_id, profile.taken, config)
        taken = set(profile.taken)
        for block in plan.blocks:
            if "overflow" not in block.flags:
                verdict = validate_selection(
                    catalog, set(block.courses), taken, cap=config.cap_for(block.term), term=block.term
                )
                assert verdict.ok, (profile.id, str(block.term), verdict.trace.failures())
            taken |= set(block.courses)
        for member in catalog.members_of(profile.program_id):
            assert member in taken or any(a in taken for a in catalog.alternatives_of(member))


def test_plan_prerequisite_ordering(catalog):
    config = PlannerConfig(start=FALL25, calendar=catalog.calendar)
    plan = plan_roadmap(catalog, "CS-BS", frozenset(), config)
    seen: set[str] = set()
    for block in plan.blocks:
        for cid in block.courses:
            for p in catalog.prereqs_of(cid):
                assert p in seen or any(a in seen for a in catalog.alternatives_of(p)), (cid, p)
        seen |= set(block.courses)


def test_plan_coreq_share_block(catalog):
    plan = plan_roadmap(catalog, "CS-BS", frozenset(), PlannerConfig(start=FALL25))
    block_of = {c: i for i, b in enumerate(plan.blocks) for c in b.courses}
    assert block_of["SWE3500"] == block_of["SWL3501"]


def test_plan_unlock_branch_schedules_outside_program(catalog, students):
    profile = students["S-IT1"]
    plan = plan_roadmap(
        catalog, profile.program_id, profile.taken, PlannerConfig(start=TermLabel("Spring", 2026))
    )
    # DEF2020 is not an IT-BS member but is required by DBS3600 and OSY4200
    assert "DEF2020" in plan.covered
    unlock_blocks = [b for b in plan.blocks if "unlock" in b.flags]
    assert unlock_blocks and "DEF2020" in unlock_blocks[0].courses


def test_plan_alternative_satisfies_membership(catalog, students):
    profile = students["S-DS1"]  # completed STA3250, the alternative for STA3200
    plan = plan_roadmap(
        catalog, profile.program_id, profile.taken, PlannerConfig(start=TermLabel("Spring", 2026))
    )
    assert "STA3200" not in plan.covered


def test_plan_pads_to_minimum_after_cluster_drop():
    # AAA1000 ranks first but its co-requisite lab XLB1001 has an unmet
    # prerequisite, so that cluster drops; padding then fills the
    # three-course floor with the low-id leftovers that still fit.
    cat = parse_catalog(
        {
            "courses": [
                {"id": "AAA1000", "title": "A", "credits": 3},
                {"id": "XLB1001", "title": "A lab", "credits": 1},
                {"id": "ZZZ9000", "title": "Lab prep", "credits": 3},
                {"id": "BBB2000", "title": "B", "credits": 3},
                {"id": "CCC3000", "title": "C", "credits": 3},
                {"id": "DDD4000", "title": "D", "credits": 3},
                {"id": "EEE5000", "title": "E", "credits": 3},
                {"id": "FFF6000", "title": "F", "credits": 3},
            ],
            "programs": [{"id": "P1", "name": "P", "degree_type": "Major"}],
            "program_courses": [
                {"program_id": "P1", "course_id": c}
                for c in ("AAA1000", "BBB2000", "CCC3000", "DDD4000", "EEE5000", "FFF6000")
            ],
            "prereq_edges": [
                {"course_id": "AAA1000", "related_id": "XLB1001", "kind": "Corequisite"},
                {"course_id": "XLB1001", "related_id": "ZZZ9000", "kind": "Prerequisite"},
                # give AAA1000 unlock weight so it ranks ahead of the rest
                {"course_id": "BBB2000", "related_id": "AAA1000", "kind": "Prerequisite"},
                {"course_id": "CCC3000", "related_id": "AAA1000", "kind": "Prerequisite"},
            ],
        }
    )
    plan = plan_roadmap(cat, "P1", frozenset(), PlannerConfig(start=FALL25, credit_cap=9))
    first = plan.blocks[0]
    assert "AAA1000" not in first.courses
    assert first.courses == ("DDD4000", "EEE5000", "FFF6000")


def test_plan_season_skip():
    cat = parse_catalog(
        {
            "courses": [
                {"id": "AAA1000", "title": "A", "credits": 3, "terms_offered": ["Spring"]},
            ],
            "programs": [{"id": "P1", "name": "P", "degree_type": "Major"}],
            "program_courses": [{"program_id": "P1", "course_id": "AAA1000"}],
            "prereq_edges": [],
        }
    )
    plan = plan_roadmap(cat, "P1", frozenset(), PlannerConfig(start=FALL25, min_courses_per_term=1))
    assert len(plan.blocks) == 1
    assert str(plan.blocks[0].term) == "Spring 2026"


def test_plan_overflow_flagged_for_unsplittable_cluster():
    # co-requisite pair totals 6 credits against a cap of 4: the cluster
    # cannot be split, so the block commits with the overflow flag
    cat = parse_catalog(
        {
            "courses": [
                {"id": "AAA1000", "title": "A", "credits": 3},
                {"id": "BBB2000", "title": "B", "credits": 3},
            ],
            "programs": [{"id": "P1", "name": "P", "degree_type": "Major"}],
            "program_courses": [
                {"program_id": "P1", "course_id": "AAA1000"},
                {"program_id": "P1", "course_id": "BBB2000"},
            ],
            "prereq_edges": [
                {"course_id": "AAA1000", "related_id": "BBB2000", "kind": "Corequisite"}
            ],
        }
    )
    plan = plan_roadmap(
        cat, "P1", frozenset(), PlannerConfig(start=FALL25, credit_cap=4, min_courses_per_term=1)
    )
    assert len(plan.blocks) == 1
    assert "overflow" in plan.blocks[0].flags
    assert set(plan.blocks[0].courses) == {"AAA1000", "BBB2000"}


def test_plan_infeasible_cap_below_smallest_credit(catalog):
    with pytest.raises(InfeasiblePlan) as err:
        plan_roadmap(catalog, "PM-BS", frozenset(), PlannerConfig(start=FALL25, credit_cap=2))
    assert err.value.stuck


def test_plan_infeasible_disjoint_coreq_seasons():
    cat = parse_catalog(
        {
            "courses": [
                {"id": "AAA1000", "title": "A", "credits": 3, "terms_offered": ["Fall"]},
                {"id": "BBB2000", "title": "B", "credits": 3, "terms_offered": ["Spring"]},
            ],
            "programs": [{"id": "P1", "name": "P", "degree_type": "Major"}],
            "program_courses": [
                {"program_id": "P1", "course_id": "AAA1000"},
                {"program_id": "P1", "course_id": "BBB2000"},
            ],
            "prereq_edges": [
                {"course_id": "AAA1000", "related_id": "BBB2000", "kind": "Corequisite"}
            ],
        }
    )
    with pytest.raises(InfeasiblePlan) as err:
        plan_roadmap(cat, "P1", frozenset(), PlannerConfig(start=FALL25, min_courses_per_term=1))
    assert set(err.value.stuck) == {"AAA1000", "BBB2000"}


def test_plan_cyclic_catalog_rejected():
    cat = parse_catalog(
        {
            "courses": [
                {"id": "AAA1000", "title": "A", "credits": 3},
                {"id": "BBB2000", "title": "B", "credits": 3},
            ],
            "programs": [{"id": "P1", "name": "P", "degree_type": "Major"}],
            "program_courses": [{"program_id": "P1", "course_id": "AAA1000"}],
            "prereq_edges": [
                {"course_id": "AAA1000", "related_id": "BBB2000", "kind": "Prerequisite"},
                {"course_id": "BBB2000", "related_id": "AAA1000", "kind": "Prerequisite"},
            ],
        }
    )
    with pytest.raises(InfeasiblePlan):
        plan_roadmap(cat, "P1", frozenset(), PlannerConfig(start=FALL25))


def test_plan_deterministic_bytes(catalog):
    config = PlannerConfig(start=FALL25)
    a = json.dumps(plan_roadmap(catalog, "CS-BS", frozenset(), config).to_dict(), sort_keys=True)
    b = json.dumps(plan_roadmap(catalog, "CS-BS", frozenset(), config).to_dict(), sort_keys=True)
    assert a == b


def test_plan_horizon_definition(catalog):
    plan = plan_roadmap(catalog, "CS-MIN", frozenset({"ABC1010"}), PlannerConfig(start=FALL25))
    assert term_span(FALL25, plan.blocks[-1].term, catalog.calendar) == len(plan.blocks)
