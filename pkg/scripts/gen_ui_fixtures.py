#!/usr/bin/env python3
"""Record service payloads as frontend test fixtures.

The browser client is a thin renderer over these exact payload shapes, so
its tests replay recorded traffic instead of reimplementing the engine.
Re-run after changing fixtures or payload schemas.
"""

from __future__ import annotations

import json
from pathlib import Path

from click.testing import CliRunner
from fastapi.testclient import TestClient

from advisor.cli import main as cli_main
from advisor.service import AdvisorEngine, ServiceConfig, build_engine
from advisor.webapp import create_app

REPO = Path(__file__).resolve().parent.parent
OUT = REPO / "frontend" / "tests" / "fixtures"

GOLDEN_QUERY = "I would like a machine-learning schedule next spring, max 12 credits."
PLAN_BODY = {"program_id": "CS-BS", "taken": [], "credit_cap": 12, "start": "Fall 2025"}
WHATIF_BODY = {"program_id": "CS-BS", "taken": ["ABC1010"], "credit_cap": 12, "start": "Fall 2025"}


def write(name: str, payload) -> None:
    OUT.joinpath(name).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {name}")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    engine = build_engine(
        ServiceConfig(
            catalog_path=str(REPO / "fixtures" / "catalog.json"),
            students_path=str(REPO / "fixtures" / "students.json"),
            current_term="Fall 2025",
        )
    )
    client = TestClient(create_app(engine))

    write("health.json", client.get("/api/health").json())
    write("students.json", client.get("/api/students").json())
    write("courses.json", client.get("/api/catalog/courses").json())

    short = client.post(
        "/api/advise",
        json={"text": "What courses should I take next semester to stay on track for my CS-BS degree?",
              "student_id": "S-CS1"},
    ).json()
    write("advise_short.json", short)

    golden = client.post("/api/advise", json={"text": GOLDEN_QUERY, "student_id": "S-CS2"}).json()
    write("advise_golden.json", golden)
    write(
        "provenance_golden.json",
        client.get(f"/api/provenance/{golden['provenance_ref']}").json(),
    )

    long_term = client.post(
        "/api/advise",
        json={"text": "Plan the rest of my CS-BS degree so I can graduate on time.",
              "student_id": "S-CS2"},
    ).json()
    write("advise_longterm.json", long_term)

    oos = client.post(
        "/api/advise", json={"text": "What can I do if a class is difficult?", "student_id": "S-CS2"}
    ).json()
    write("advise_oos.json", oos)

    write("plan_api.json", client.post("/api/plan", json=PLAN_BODY).json())
    write("plan_whatif.json", client.post("/api/plan", json=WHATIF_BODY).json())
    infeasible = client.post(
        "/api/plan", json={"program_id": "PM-BS", "credit_cap": 2, "start": "Fall 2025"}
    )
    write("plan_infeasible.json", infeasible.json())

    runner = CliRunner()
    result = runner.invoke(
        cli_main,
        ["plan", "--program", "CS-BS", "--cap", "12", "--start", "Fall-2025",
         "--catalog", str(REPO / "fixtures" / "catalog.json"),
         "--students", str(REPO / "fixtures" / "students.json"), "--json"],
    )
    assert result.exit_code == 0, result.output
    write("plan_cli.json", json.loads(result.output))


if __name__ == "__main__":
    main()
