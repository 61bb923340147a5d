/** View state and the role-scoped navigation map.
 *
 * Invariant (tested): a role's sidebar links only to screens whose backing
 * actions that role actually holds, so no dead links to forbidden endpoints
 * ever render. */

import type { ApiClient, Principal, Role } from "./api.js";

export interface ViewState {
  principal: Principal | null;
  route: string;
}

export interface AppContext {
  api: ApiClient;
  state: ViewState;
  navigate: (route: string) => void;
  refresh: () => Promise<void>;
  toast: (kind: "info" | "error" | "success", text: string) => void;
}

export type ScreenAction =
  | "create_staff_pin" | "view_staff_list" | "edit_staff" | "create_event"
  | "create_cadet_pin" | "upload_npa_numbers" | "list_cadets" | "edit_cadet"
  | "create_course" | "edit_course" | "delete_course" | "assign_course"
  | "open_registration" | "view_department_results"
  | "list_assigned_courses" | "list_registered_cadets" | "upload_scores"
  | "upload_material"
  | "view_eligible_courses" | "register_courses" | "view_own_results"
  | "download_materials"
  | "edit_own_profile" | "change_own_password";

const LECTURER_ACTIONS: ScreenAction[] = [
  "list_assigned_courses", "list_registered_cadets", "upload_scores",
  "upload_material", "edit_own_profile", "change_own_password",
];

/** Mirror of the service's permission matrix, used only to decide what to
 * render; the server re-checks every call. */
export const MATRIX: Record<Role, ReadonlySet<ScreenAction>> = {
  admin: new Set<ScreenAction>([
    "create_staff_pin", "view_staff_list", "edit_staff", "create_event",
    "edit_own_profile", "change_own_password",
  ]),
  hod: new Set<ScreenAction>([
    ...LECTURER_ACTIONS,
    "create_cadet_pin", "upload_npa_numbers", "list_cadets", "edit_cadet",
    "create_course", "edit_course", "delete_course", "assign_course",
    "open_registration", "view_department_results",
  ]),
  lecturer: new Set<ScreenAction>(LECTURER_ACTIONS),
  cadet: new Set<ScreenAction>([
    "view_eligible_courses", "register_courses", "view_own_results",
    "download_materials", "edit_own_profile", "change_own_password",
  ]),
};

export interface NavItem {
  label: string;
  route: string;
  /** Action the target screen exercises; null = any authenticated user. */
  action: ScreenAction | null;
}

/** Sidebar layout approximating the portals: Dashboard / role screens /
 * Mail / Profile. "Mail" renders the events list. */
export const NAV: Record<Role, NavItem[]> = {
  admin: [
    { label: "Dashboard", route: "#/dashboard", action: null },
    { label: "Staff", route: "#/staff", action: "view_staff_list" },
    { label: "Staff Pins", route: "#/staff-pins", action: "create_staff_pin" },
    { label: "Events", route: "#/events-admin", action: "create_event" },
    { label: "Mail", route: "#/mail", action: null },
    { label: "Profile", route: "#/profile", action: "edit_own_profile" },
  ],
  hod: [
    { label: "Dashboard", route: "#/dashboard", action: null },
    { label: "Cadet List", route: "#/cadets", action: "list_cadets" },
    { label: "Cadet Pins", route: "#/cadet-pins", action: "create_cadet_pin" },
    { label: "NPA Upload", route: "#/npa-roster", action: "upload_npa_numbers" },
    { label: "Course", route: "#/courses", action: "create_course" },
    { label: "Lecturer", route: "#/assignments", action: "assign_course" },
    { label: "Results", route: "#/department-results", action: "view_department_results" },
    { label: "My Courses", route: "#/my-courses", action: "list_assigned_courses" },
    { label: "Mail", route: "#/mail", action: null },
    { label: "Profile", route: "#/profile", action: "edit_own_profile" },
  ],
  lecturer: [
    { label: "Dashboard", route: "#/dashboard", action: null },
    { label: "My Courses", route: "#/my-courses", action: "list_assigned_courses" },
    { label: "Mail", route: "#/mail", action: null },
    { label: "Profile", route: "#/profile", action: "edit_own_profile" },
  ],
  cadet: [
    { label: "Dashboard", route: "#/dashboard", action: null },
    { label: "Registration", route: "#/registration", action: "register_courses" },
    { label: "Result", route: "#/results", action: "view_own_results" },
    { label: "Materials", route: "#/materials", action: "download_materials" },
    { label: "Mail", route: "#/mail", action: null },
    { label: "Profile", route: "#/profile", action: "edit_own_profile" },
  ],
};

/** Human text for machine codes surfaced in error banners. */
export const ERROR_TEXT: Record<string, string> = {
  invalid_credentials: "Invalid credentials.",
  invalid_session: "Your session has expired; please log in again.",
  unauthorized: "You are not allowed to do that.",
  csrf_mismatch: "Security token expired; reload the page and try again.",
  throttled: "Too many attempts; wait a few minutes and try again.",
  registration_closed: "You have to wait till your course registration begins",
  pin_not_found: "That registration pin does not exist.",
  pin_already_consumed: "That registration pin has already been used.",
  pin_scope_mismatch: "That pin is for a different role or department.",
  npa_not_on_roster: "That NPA number is not on the department roster.",
  npa_already_claimed: "That NPA number has already been claimed.",
  hod_seat_taken: "This department already has a head.",
  duplicate_key: "A record with this value already exists.",
  weak_password: "Passwords need at least 8 characters.",
  validation_error: "Some fields are invalid; check them and retry.",
  file_too_large: "That file is larger than the 10 MiB limit.",
  disallowed_type: "Only pdf, doc, docx, ppt, and pptx files are accepted.",
  score_out_of_range: "Scores must be between 0 and 100.",
  ineligible_course: "One of those courses is not eligible for you.",
  invalid_reset_token: "That reset link is invalid or expired.",
};

export function errorText(machineCode: string, fallback: string): string {
  return ERROR_TEXT[machineCode] ?? fallback;
}
