import os

import pytest

from academy_sims.clock import ManualClock
from academy_sims.config import FAST_TEST_HASH, ServiceConfig
from academy_sims.domain import Semester
from academy_sims.runtime import Runtime, build_runtime
from academy_sims.security import PasswordHasher
from academy_sims.store import Store

SEED_FACULTY = "Science"
DEPT_A = "Sociology"
DEPT_B = "Computer Science"


@pytest.fixture
def clock():
    return ManualClock()


@pytest.fixture
def store(tmp_path, clock):
    s = Store(str(tmp_path / "test.db"), clock)
    s.migrate()
    yield s
    s.close()


@pytest.fixture
def fast_hasher():
    return PasswordHasher(FAST_TEST_HASH)


def make_config(tmp_path, **overrides) -> ServiceConfig:
    defaults = dict(
        storage_path=str(tmp_path / "svc.db"),
        upload_dir=str(tmp_path / "uploads"),
        hash_params=FAST_TEST_HASH,
    )
    defaults.update(overrides)
    return ServiceConfig(**defaults)


@pytest.fixture
def runtime(tmp_path, clock) -> Runtime:
    rt = build_runtime(make_config(tmp_path), clock)
    rt.store.migrate()
    yield rt
    rt.close()


def seed_catalog(store: Store) -> None:
    """Faculty + two departments + the current session, no principals."""
    from academy_sims.domain import Department, Faculty

    store.faculties.insert(Faculty(name=SEED_FACULTY))
    store.departments.insert(Department(name=DEPT_A, faculty_name=SEED_FACULTY))
    store.departments.insert(Department(name=DEPT_B, faculty_name=SEED_FACULTY))
    store.academic_sessions.set_current(2019, Semester.FIRST)


@pytest.fixture
def seeded_store(store):
    seed_catalog(store)
    return store


class ApiHarness:
    """A TestClient plus per-role login/CSRF conveniences for HTTP tests."""

    def __init__(self, runtime, client):
        self.runtime = runtime
        self.client = client

    def login(self, realm: str, email: str, password: str):
        response = self.client.post(f"/api/{realm}/login",
                                    json={"email": email, "password": password})
        assert response.status_code == 200, response.text
        return response

    def csrf(self) -> str:
        response = self.client.get("/api/csrf")
        assert response.status_code == 200, response.text
        return response.json()["csrfToken"]

    def post(self, path, **kwargs):
        kwargs.setdefault("headers", {})["X-CSRF-Token"] = self.csrf()
        return self.client.post(path, **kwargs)

    def patch(self, path, **kwargs):
        kwargs.setdefault("headers", {})["X-CSRF-Token"] = self.csrf()
        return self.client.patch(path, **kwargs)

    def delete(self, path, **kwargs):
        kwargs.setdefault("headers", {})["X-CSRF-Token"] = self.csrf()
        return self.client.delete(path, **kwargs)

    def get(self, path, **kwargs):
        return self.client.get(path, **kwargs)

    def logout(self):
        return self.post("/api/logout")


def make_harness(runtime) -> ApiHarness:
    from starlette.testclient import TestClient

    from academy_sims.api import create_app

    app = create_app(runtime)
    client = TestClient(app, raise_server_exceptions=False)
    return ApiHarness(runtime, client)


def principal_of(entity) -> "Principal":
    """Build the effective-role principal a validated session would carry."""
    from academy_sims.access_control import Principal
    from academy_sims.domain import Admin, Cadet, Realm, Role, Staff

    if isinstance(entity, Admin):
        return Principal(Realm.ADMIN, entity.id, Role.ADMIN, entity.email, entity.name)
    if isinstance(entity, Staff):
        return Principal(Realm.STAFF, entity.id, entity.role, entity.email,
                         f"{entity.first_name} {entity.sur_name}", entity.department)
    assert isinstance(entity, Cadet)
    return Principal(Realm.CADET, entity.id, Role.CADET, entity.email,
                     f"{entity.first_name} {entity.sur_name}", entity.department)


os.environ.setdefault("SIMS_TEST", "1")
