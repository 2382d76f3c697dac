from __future__ import annotations

import json
from pathlib import Path

import pytest

from advisor.catalog import Catalog, load_catalog, load_students, parse_catalog
from advisor.prompting import FootprintLog
from advisor.service import AdvisorEngine, ProvenanceStore
from advisor.terms import parse_term

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"


@pytest.fixture(scope="session")
def catalog() -> Catalog:
    return load_catalog(FIXTURES / "catalog.json")


@pytest.fixture(scope="session")
def students(catalog):
    return load_students(FIXTURES / "students.json", catalog)


@pytest.fixture(scope="session")
def footprint_catalog() -> Catalog:
    return load_catalog(FIXTURES / "footprint_catalog.json")


@pytest.fixture(scope="session")
def golden_prompt() -> str:
    return (FIXTURES / "golden_prompt.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def suite_path() -> Path:
    return FIXTURES / "bench_suite.json"


@pytest.fixture()
def engine(catalog, students) -> AdvisorEngine:
    return AdvisorEngine(
        catalog,
        students,
        current_term=parse_term("Fall 2025"),
        provenance=ProvenanceStore(),
        footprint_log=FootprintLog(),
    )


# The five-course fixture behind the prompt-layout scenario: three completed
# foundation courses plus two recommendable ones, with the prerequisite
# chains MLA4100 <- {GHI3030, DEF2020} and DST3300 <- {ABC1010}.
LISTING_FIXTURE = {
    "courses": [
        {"id": "ABC1010", "title": "Programming Fundamentals", "credits": 3},
        {"id": "DEF2020", "title": "Data Structures", "credits": 3},
        {"id": "GHI3030", "title": "Algorithm Analysis", "credits": 3},
        {"id": "MLA4100", "title": "Intro to Machine Learning", "credits": 3,
         "description": "Supervised and unsupervised basics", "skills": ["machine learning"]},
        {"id": "DST3300", "title": "Data-Science Tools", "credits": 3,
         "description": "Python, arrays, data frames.", "skills": ["data science"]},
    ],
    "programs": [{"id": "P1", "name": "Test Program", "degree_type": "Major"}],
    "program_courses": [
        {"program_id": "P1", "course_id": cid, "recommended_year": y}
        for cid, y in [("ABC1010", 1), ("DEF2020", 1), ("GHI3030", 2), ("MLA4100", 3), ("DST3300", 3)]
    ],
    "prereq_edges": [
        {"course_id": "MLA4100", "related_id": "GHI3030", "kind": "Prerequisite"},
        {"course_id": "MLA4100", "related_id": "DEF2020", "kind": "Prerequisite"},
        {"course_id": "DST3300", "related_id": "ABC1010", "kind": "Prerequisite"},
    ],
}


@pytest.fixture(scope="session")
def listing_catalog() -> Catalog:
    return parse_catalog(json.loads(json.dumps(LISTING_FIXTURE)))
