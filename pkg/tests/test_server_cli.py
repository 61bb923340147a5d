import threading
import time

import httpx
import pytest
from click.testing import CliRunner

from academy_sims.cli import main as cli_main
from academy_sims.config import HashParams
from academy_sims.errors import BindFailure, NotMigrated
from academy_sims.server import BackgroundServer, check_bindable, prepare_runtime

from conftest import make_config
from scenario import FIXTURE_PASSWORDS


def test_served_instance_answers_health(tmp_path):
    with BackgroundServer(make_config(tmp_path, bind_port=0)) as server:
        response = httpx.get(f"{server.base_url}/health")
        assert response.status_code == 200
        assert response.json() == {"status": "ok"}
        assert response.headers["x-frame-options"] == "DENY"


def test_occupied_port_is_bind_failure(tmp_path):
    with BackgroundServer(make_config(tmp_path, bind_port=0)) as server:
        (tmp_path / "second").mkdir()
        with pytest.raises(BindFailure):
            BackgroundServer(make_config(tmp_path / "second",
                                         bind_port=server.port))


def test_unmigrated_store_refuses_to_serve(tmp_path):
    config = make_config(tmp_path)
    with pytest.raises(NotMigrated):
        prepare_runtime(config, auto_migrate=False)
    runtime = prepare_runtime(config, auto_migrate=True)
    assert runtime.store.is_migrated()
    runtime.close()


def test_shutdown_completes_inflight_request(tmp_path):
    """A deliberately slow request (expensive hash parameters) survives a
    shutdown signal issued while it is in flight."""
    config = make_config(
        tmp_path, bind_port=0,
        hash_params=HashParams(time_cost=4, memory_cost_kib=128 * 1024,
                               parallelism=1),
    )
    server = BackgroundServer(config, seed_data=True).start()
    outcome = {}

    def slow_login():
        outcome["response"] = httpx.post(
            f"{server.base_url}/api/admin/login",
            json={"email": "admin@academy.example", "password": "whatever99"},
            timeout=60,
        )

    worker = threading.Thread(target=slow_login)
    worker.start()
    time.sleep(0.15)                       # request is now hashing server-side
    stopper = threading.Thread(target=server.stop)
    stopper.start()
    worker.join(timeout=60)
    stopper.join(timeout=60)
    assert outcome["response"].status_code == 401   # completed, then exit


def test_check_bindable_rejects_bad_host():
    with pytest.raises(BindFailure):
        check_bindable("203.0.113.7", 80)   # TEST-NET address, never local


def test_cli_migrate_and_seed_and_acl(tmp_path):
    runner = CliRunner()
    db = str(tmp_path / "cli.db")
    result = runner.invoke(cli_main, ["migrate", "--db", db])
    assert result.exit_code == 0
    assert "applied 0001_" in result.output
    result = runner.invoke(cli_main, ["migrate", "--db", db])
    assert "already up to date" in result.output

    result = runner.invoke(cli_main, ["seed", "--db", db,
                                      "--admin-password", "clipass9901"])
    assert result.exit_code == 0
    assert "admin@academy.example" in result.output
    result = runner.invoke(cli_main, ["seed", "--db", db])
    assert "already seeded" in result.output

    result = runner.invoke(cli_main, ["acl"])
    assert result.exit_code == 0
    assert "upload_scores" in result.output and "cadet" in result.output


def test_cli_audit_requires_destructive_flag(tmp_path):
    runner = CliRunner()
    fixture = tmp_path / "f.json"
    fixture.write_text("{}")
    result = runner.invoke(cli_main, [
        "audit", "--target", "http://127.0.0.1:9", "--fixture", str(fixture)])
    assert result.exit_code != 0
    assert "destructive" in result.output


def test_cli_audit_unreachable_target_exits_2(tmp_path):
    runner = CliRunner()
    fixture = tmp_path / "f.json"
    import json

    fixture.write_text(json.dumps({
        "credentials": {
            role: {"email": f"{role}@academy.example",
                   "password": FIXTURE_PASSWORDS[role]}
            for role in ("admin", "hod", "lecturer", "cadet")
        },
        "storagePath": str(tmp_path / "none.db"),
        "department": "Sociology", "courseCode": "SOC-103", "sessionYear": 2019,
    }))
    result = runner.invoke(cli_main, [
        "audit", "--target", "http://127.0.0.1:9", "--fixture", str(fixture),
        "--i-know-this-is-destructive"])
    assert result.exit_code == 2
    assert "target_unreachable" in result.output


def test_cli_serve_help_lists_configuration():
    runner = CliRunner()
    result = runner.invoke(cli_main, ["serve", "--help"])
    assert result.exit_code == 0
    for flag in ("--db", "--host", "--port", "--encryption-key",
                 "--session-ttl-minutes", "--throttle-max-failures",
                 "--upload-dir", "--hash-time-cost", "--insecure-demo"):
        assert flag in result.output
