#!/usr/bin/env python3
"""Regenerate fixtures/footprint_catalog.json.

A synthetic 210-course catalog sized so that serializing every course as
a prompt fact entry costs about 60 whitespace tokens per course. Fully
deterministic: running this script twice produces identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

DEPARTMENTS = ["CSC", "MTH", "STA", "DSC", "NET", "SEC", "SWE", "ITM", "PMG", "WEB"]
TITLE_A = ["Applied", "Advanced", "Modern", "Practical", "Quantitative", "Introductory", "Computational"]
TITLE_B = ["Systems", "Data", "Network", "Software", "Statistical", "Product", "Learning"]
TITLE_C = ["Analysis", "Engineering", "Methods", "Design", "Practice", "Principles", "Modeling"]
FILLER = (
    "covering core concepts and applied examples from current industry practice "
    "with emphasis on rigorous evaluation independent work team delivery tooling "
    "workflows documentation communication ethics performance reliability "
    "scalability measurement experimentation analysis design iteration review "
    "standards methods models systems data quality testing"
).split()

N_COURSES = 210
# Fact entry costs 13 tokens plus the description:
#   id = X (3) + name = A B C (5) + credits = N (3) + description = '...' (2)
ENTRY_OVERHEAD = 13


def build() -> dict:
    courses = []
    for i in range(N_COURSES):
        dept = DEPARTMENTS[i % len(DEPARTMENTS)]
        number = 1000 + i * 40
        target_tokens = 60 + (i * 7) % 9 - 4  # 56..64, mean 60
        desc_words = target_tokens - ENTRY_OVERHEAD
        description = " ".join(FILLER[(i * 11 + j) % len(FILLER)] for j in range(desc_words))
        courses.append(
            {
                "id": f"{dept}{number}",
                "title": f"{TITLE_A[i % 7]} {TITLE_B[(i // 7) % 7]} {TITLE_C[(i // 49) % 7]}",
                "credits": 1 + (i * 3) % 4,
                "department": dept,
                "level": int(str(number)[0]),
                "description": description,
                "terms_offered": ["Fall", "Spring"],
                "skills": [TITLE_B[(i // 7) % 7].lower()],
            }
        )
    edges = [
        {"course_id": courses[i]["id"], "related_id": courses[i - 7]["id"], "kind": "Prerequisite"}
        for i in range(7, N_COURSES, 7)
    ]
    return {"calendar": ["Fall", "Spring"], "courses": courses, "programs": [],
            "program_courses": [], "prereq_edges": edges}


def main() -> None:
    out = Path(__file__).resolve().parent.parent / "fixtures" / "footprint_catalog.json"
    out.write_text(json.dumps(build(), indent=1) + "\n", encoding="utf-8")
    total = sum(ENTRY_OVERHEAD + len(c["description"].split()) for c in build()["courses"])
    print(f"wrote {out} ({total} entry tokens + 2 header tokens)")


if __name__ == "__main__":
    main()
