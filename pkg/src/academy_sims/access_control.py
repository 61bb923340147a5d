"""Role -> action permission matrix plus resource-ownership scope checks.

The matrix is static code: there is no permission-editing surface, which
keeps the whole policy auditable at a glance (`sims acl` dumps it). Denial
is the default — an action missing from a role's set is denied, and denials
carry no detail about why.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .domain import PrincipalRef, Realm, Role
from .errors import Unauthorized


class Action(str, Enum):
    # admin
    CREATE_STAFF_PIN = "create_staff_pin"
    VIEW_STAFF_LIST = "view_staff_list"
    EDIT_STAFF = "edit_staff"
    CREATE_EVENT = "create_event"
    # hod
    CREATE_CADET_PIN = "create_cadet_pin"
    UPLOAD_NPA_NUMBERS = "upload_npa_numbers"
    LIST_CADETS = "list_cadets"
    EDIT_CADET = "edit_cadet"
    CREATE_COURSE = "create_course"
    EDIT_COURSE = "edit_course"
    DELETE_COURSE = "delete_course"
    ASSIGN_COURSE = "assign_course"
    OPEN_REGISTRATION = "open_registration"
    VIEW_DEPARTMENT_RESULTS = "view_department_results"
    # lecturer
    LIST_ASSIGNED_COURSES = "list_assigned_courses"
    LIST_REGISTERED_CADETS = "list_registered_cadets"
    UPLOAD_SCORES = "upload_scores"
    UPLOAD_MATERIAL = "upload_material"
    # cadet
    VIEW_ELIGIBLE_COURSES = "view_eligible_courses"
    REGISTER_COURSES = "register_courses"
    VIEW_OWN_RESULTS = "view_own_results"
    DOWNLOAD_MATERIALS = "download_materials"
    # every role
    EDIT_OWN_PROFILE = "edit_own_profile"
    CHANGE_OWN_PASSWORD = "change_own_password"


_LECTURER_ACTIONS = frozenset({
    Action.LIST_ASSIGNED_COURSES,
    Action.LIST_REGISTERED_CADETS,
    Action.UPLOAD_SCORES,
    Action.UPLOAD_MATERIAL,
    Action.EDIT_OWN_PROFILE,
    Action.CHANGE_OWN_PASSWORD,
})

PERMISSION_MATRIX: dict[Role, frozenset[Action]] = {
    Role.ADMIN: frozenset({
        Action.CREATE_STAFF_PIN,
        Action.VIEW_STAFF_LIST,
        Action.EDIT_STAFF,
        Action.CREATE_EVENT,
        Action.EDIT_OWN_PROFILE,
        Action.CHANGE_OWN_PASSWORD,
    }),
    Role.HOD: _LECTURER_ACTIONS | frozenset({
        Action.CREATE_CADET_PIN,
        Action.UPLOAD_NPA_NUMBERS,
        Action.LIST_CADETS,
        Action.EDIT_CADET,
        Action.CREATE_COURSE,
        Action.EDIT_COURSE,
        Action.DELETE_COURSE,
        Action.ASSIGN_COURSE,
        Action.OPEN_REGISTRATION,
        Action.VIEW_DEPARTMENT_RESULTS,
    }),
    Role.LECTURER: _LECTURER_ACTIONS,
    Role.CADET: frozenset({
        Action.VIEW_ELIGIBLE_COURSES,
        Action.REGISTER_COURSES,
        Action.VIEW_OWN_RESULTS,
        Action.DOWNLOAD_MATERIALS,
        Action.EDIT_OWN_PROFILE,
        Action.CHANGE_OWN_PASSWORD,
    }),
}

# Actions whose staff grants bind to the principal's own department.
DEPARTMENT_SCOPED = frozenset({
    Action.CREATE_CADET_PIN,
    Action.UPLOAD_NPA_NUMBERS,
    Action.LIST_CADETS,
    Action.EDIT_CADET,
    Action.CREATE_COURSE,
    Action.EDIT_COURSE,
    Action.DELETE_COURSE,
    Action.ASSIGN_COURSE,
    Action.OPEN_REGISTRATION,
    Action.VIEW_DEPARTMENT_RESULTS,
})

# Course-bound actions: a lecturer needs the assignment, an HOD needs the
# course to sit in their department.
ASSIGNMENT_SCOPED = frozenset({
    Action.UPLOAD_SCORES,
    Action.UPLOAD_MATERIAL,
    Action.LIST_REGISTERED_CADETS,
})

# Record-bound actions: the record's owner must be the caller.
OWNER_SCOPED = frozenset({
    Action.EDIT_OWN_PROFILE,
    Action.CHANGE_OWN_PASSWORD,
    Action.VIEW_OWN_RESULTS,
    Action.VIEW_ELIGIBLE_COURSES,
    Action.REGISTER_COURSES,
})


@dataclass(frozen=True)
class Principal:
    """An authenticated caller: account identity plus the effective role
    resolved from fresh entity state for this request."""

    realm: Realm
    id: int
    role: Role
    email: str
    name: str
    department: str | None = None
    # Set only by a deliberately weakened instance (scanner validation);
    # makes every authorization check pass.
    bypass_authz: bool = False

    @property
    def ref(self) -> PrincipalRef:
        return PrincipalRef(self.realm, self.id)


@dataclass(frozen=True)
class ResourceScope:
    """Facts about the resource a request touches, resolved by the handler
    inside the request's transaction."""

    department: str | None = None
    assigned_staff_id: int | None = None
    owner: PrincipalRef | None = None
    cadet_registered: bool | None = None


def authorize(principal: Principal, action: Action,
              scope: ResourceScope | None = None) -> bool:
    """Permitted iff the matrix grants (role, action) and the scope
    predicates hold for the supplied resource facts. A None scope is a
    route-level gate: matrix membership only; handlers pass real scopes."""
    if principal.bypass_authz:
        return True
    if action not in PERMISSION_MATRIX[principal.role]:
        return False
    if scope is None:
        return True
    if action in DEPARTMENT_SCOPED:
        return scope.department is not None and scope.department == principal.department
    if action in ASSIGNMENT_SCOPED:
        if principal.role == Role.HOD:
            return scope.department is not None and scope.department == principal.department
        return scope.assigned_staff_id is not None and scope.assigned_staff_id == principal.id
    if action == Action.DOWNLOAD_MATERIALS:
        return scope.cadet_registered is True
    if action in OWNER_SCOPED:
        return scope.owner is not None and scope.owner == principal.ref
    return True


def require(principal: Principal, action: Action,
            scope: ResourceScope | None = None) -> None:
    if not authorize(principal, action, scope):
        raise Unauthorized()


def scope_department(principal: Principal) -> str | None:
    """Department filter applied to list queries issued on behalf of staff;
    admins are unscoped, cadets see their own department."""
    if principal.realm == Realm.ADMIN:
        return None
    return principal.department


def render_matrix() -> str:
    """Human-readable dump of the whole matrix for audit."""
    actions = sorted(Action, key=lambda a: a.value)
    roles = [Role.ADMIN, Role.HOD, Role.LECTURER, Role.CADET]
    width = max(len(a.value) for a in actions) + 2
    header = "action".ljust(width) + "".join(r.value.ljust(10) for r in roles)
    lines = [header, "-" * len(header)]
    for action in actions:
        cells = "".join(
            ("yes" if action in PERMISSION_MATRIX[role] else ".").ljust(10)
            for role in roles
        )
        lines.append(action.value.ljust(width) + cells)
    return "\n".join(lines)
