"""The route table: one row per endpoint, the single source of truth for
wiring, the registry completeness check, and the audit sweep.

Auth levels:
  anonymous      no session; CSRF exempt (compensating controls: login is
                 throttled, registration consumes a pin, reset tokens are
                 single-use)
  session        any authenticated principal
  action(X)      session + permission-matrix gate on X
Every state-changing session route requires the CSRF token.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..access_control import Action

ANONYMOUS = "anonymous"
SESSION = "session"


@dataclass(frozen=True)
class RouteSpec:
    method: str
    path: str
    auth: str                  # ANONYMOUS | SESSION
    action: Action | None = None
    handler: str = ""

    @property
    def state_changing(self) -> bool:
        return self.method in {"POST", "PUT", "PATCH", "DELETE"}

    @property
    def csrf_required(self) -> bool:
        return self.state_changing and self.auth == SESSION


ROUTES: tuple[RouteSpec, ...] = (
    # anonymous
    RouteSpec("GET", "/health", ANONYMOUS, handler="health"),
    RouteSpec("POST", "/api/admin/login", ANONYMOUS, handler="login_admin"),
    RouteSpec("POST", "/api/staff/login", ANONYMOUS, handler="login_staff"),
    RouteSpec("POST", "/api/cadet/login", ANONYMOUS, handler="login_cadet"),
    RouteSpec("POST", "/api/staff/register", ANONYMOUS, handler="register_staff"),
    RouteSpec("POST", "/api/cadet/register", ANONYMOUS, handler="register_cadet"),
    RouteSpec("POST", "/api/password-reset/begin", ANONYMOUS, handler="reset_begin"),
    RouteSpec("POST", "/api/password-reset/complete", ANONYMOUS, handler="reset_complete"),
    # any authenticated principal
    RouteSpec("POST", "/api/logout", SESSION, handler="logout"),
    RouteSpec("GET", "/api/csrf", SESSION, handler="csrf_token"),
    RouteSpec("GET", "/api/me", SESSION, handler="me_get"),
    RouteSpec("PATCH", "/api/me", SESSION, Action.EDIT_OWN_PROFILE, handler="me_patch"),
    RouteSpec("POST", "/api/me/password", SESSION, Action.CHANGE_OWN_PASSWORD, handler="me_password"),
    RouteSpec("GET", "/api/events", SESSION, handler="events_list"),
    # admin
    RouteSpec("GET", "/api/admin/staff", SESSION, Action.VIEW_STAFF_LIST, handler="admin_staff_list"),
    RouteSpec("PATCH", "/api/admin/staff/{staff_id}", SESSION, Action.EDIT_STAFF, handler="admin_staff_patch"),
    RouteSpec("GET", "/api/admin/staff-pins", SESSION, Action.CREATE_STAFF_PIN, handler="admin_staff_pins_list"),
    RouteSpec("POST", "/api/admin/staff-pins", SESSION, Action.CREATE_STAFF_PIN, handler="admin_staff_pins_create"),
    RouteSpec("GET", "/api/admin/events", SESSION, Action.CREATE_EVENT, handler="admin_events_list"),
    RouteSpec("POST", "/api/admin/events", SESSION, Action.CREATE_EVENT, handler="admin_events_create"),
    # hod
    RouteSpec("GET", "/api/hod/cadets", SESSION, Action.LIST_CADETS, handler="hod_cadets_list"),
    RouteSpec("PATCH", "/api/hod/cadets/{cadet_id}", SESSION, Action.EDIT_CADET, handler="hod_cadet_patch"),
    RouteSpec("GET", "/api/hod/cadet-pins", SESSION, Action.CREATE_CADET_PIN, handler="hod_cadet_pins_list"),
    RouteSpec("POST", "/api/hod/cadet-pins", SESSION, Action.CREATE_CADET_PIN, handler="hod_cadet_pins_create"),
    RouteSpec("GET", "/api/hod/npa-roster", SESSION, Action.UPLOAD_NPA_NUMBERS, handler="hod_roster_list"),
    RouteSpec("POST", "/api/hod/npa-roster", SESSION, Action.UPLOAD_NPA_NUMBERS, handler="hod_roster_upload"),
    RouteSpec("GET", "/api/hod/courses", SESSION, Action.CREATE_COURSE, handler="hod_courses_list"),
    RouteSpec("POST", "/api/hod/courses", SESSION, Action.CREATE_COURSE, handler="hod_courses_create"),
    RouteSpec("PATCH", "/api/hod/courses/{course_code}", SESSION, Action.EDIT_COURSE, handler="hod_course_patch"),
    RouteSpec("DELETE", "/api/hod/courses/{course_code}", SESSION, Action.DELETE_COURSE, handler="hod_course_delete"),
    RouteSpec("POST", "/api/hod/assignments", SESSION, Action.ASSIGN_COURSE, handler="hod_assignments_create"),
    RouteSpec("GET", "/api/hod/lecturers", SESSION, Action.ASSIGN_COURSE, handler="hod_lecturers_list"),
    RouteSpec("POST", "/api/hod/registration-window", SESSION, Action.OPEN_REGISTRATION, handler="hod_registration_window"),
    RouteSpec("GET", "/api/hod/results", SESSION, Action.VIEW_DEPARTMENT_RESULTS, handler="hod_results"),
    # lecturer
    RouteSpec("GET", "/api/lecturer/courses", SESSION, Action.LIST_ASSIGNED_COURSES, handler="lecturer_courses"),
    RouteSpec("GET", "/api/lecturer/courses/{course_code}/cadets", SESSION, Action.LIST_REGISTERED_CADETS, handler="lecturer_course_cadets"),
    RouteSpec("POST", "/api/lecturer/courses/{course_code}/scores", SESSION, Action.UPLOAD_SCORES, handler="lecturer_scores_upload"),
    RouteSpec("POST", "/api/lecturer/courses/{course_code}/materials", SESSION, Action.UPLOAD_MATERIAL, handler="lecturer_material_upload"),
    # cadet
    RouteSpec("GET", "/api/cadet/eligible-courses", SESSION, Action.VIEW_ELIGIBLE_COURSES, handler="cadet_eligible_courses"),
    RouteSpec("POST", "/api/cadet/registrations", SESSION, Action.REGISTER_COURSES, handler="cadet_register_courses"),
    RouteSpec("GET", "/api/cadet/results", SESSION, Action.VIEW_OWN_RESULTS, handler="cadet_results"),
    RouteSpec("GET", "/api/cadet/materials", SESSION, Action.DOWNLOAD_MATERIALS, handler="cadet_materials_list"),
    RouteSpec("GET", "/api/cadet/materials/{material_id}", SESSION, Action.DOWNLOAD_MATERIALS, handler="cadet_material_download"),
)

UPLOAD_PATHS = tuple(
    r.path for r in ROUTES if r.path.endswith("/materials") and r.method == "POST"
)


def route_for(method: str, path: str) -> RouteSpec | None:
    for route in ROUTES:
        if route.method == method and route.path == path:
            return route
    return None
