from __future__ import annotations

import json

from advisor.service import ServiceConfig, load_config


def test_load_config_defaults():
    config = load_config(env={})
    assert config.backend == "stub"
    assert config.port == 8000


def test_load_config_file_plus_env_overrides(tmp_path):
    path = tmp_path / "service.json"
    path.write_text(
        json.dumps(
            {
                "catalog_path": "fixtures/catalog.json",
                "backend": "remote",
                "endpoint": "http://backend.test/v1/chat",
                "credential_env": "ADVISOR_TOKEN",
                "current_term": "Fall 2025",
                "port": 9000,
            }
        )
    )
    config = load_config(path, env={"ADVISOR_PORT": "9100", "ADVISOR_BACKEND": "stub"})
    # env wins over file; file wins over defaults
    assert config.port == 9100
    assert config.backend == "stub"
    assert config.endpoint == "http://backend.test/v1/chat"
    assert config.credential_env == "ADVISOR_TOKEN"
    assert config.current_term == "Fall 2025"


def test_service_config_is_plain_data():
    config = ServiceConfig(backend="stub")
    assert config.students_path.endswith("students.json")
