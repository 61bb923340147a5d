/** Typed client for the service API. All business logic lives server-side;
 * this wrapper only shapes requests, attaches the CSRF token to every
 * state-changing call, and normalizes errors. */

export type Realm = "admin" | "staff" | "cadet";
export type Role = "admin" | "hod" | "lecturer" | "cadet";

export interface Principal {
  realm: Realm;
  role: Role;
  id: number;
  name: string;
  email: string;
  department: string | null;
}

export interface StaffRow {
  id: number;
  surName: string;
  firstName: string;
  faculty: string;
  department: string;
  designation: string | null;
  email: string;
  address: string | null;
  dob: string | null;
  cv: string | null;
  passport: string;
  registrationComplete: boolean;
}

export interface CadetRow {
  id: number;
  surName: string;
  firstName: string;
  middleName: string | null;
  npaNumber: string;
  pin: string;
  email: string;
  rc: number;
  faculty: string;
  department: string;
  level: number;
  semester: string;
  squad: number;
  sex: string;
  address: string | null;
  passport: string;
}

export interface CourseRow {
  courseCode: string;
  courseTitle: string;
  deptName: string;
  level: number;
  unit: number;
  semester: string;
  year: number;
}

export interface PinRow {
  pinCode: string;
  targetRole: string;
  department: string;
  consumed: boolean;
}

export interface RosterRow {
  npaNumber: string;
  department: string;
  claimed: boolean;
}

export interface EventRow {
  id: number;
  title: string;
  body: string;
  eventDate: string;
  createdAt: string | null;
}

export interface ResultRow {
  courseCode: string;
  courseTitle: string;
  sessionYear: number;
  semester: string;
  unit: number;
  total: number | null;
  grade: string | null;
  status: string;
}

export interface MaterialRow {
  id: number;
  courseCode: string;
  originalFilename: string;
  sizeBytes: number;
  mediaKind: string;
}

export interface EligibleCourses {
  sessionYear: number;
  semester: string;
  registrationOpen: boolean;
  courses: CourseRow[];
}

export interface DeptResultRow {
  npaNumber: string;
  cadetName: string;
  courseCode: string;
  sessionYear: number;
  semester: string;
  total: number;
  grade: string;
}

export interface ScoreUploadReport {
  accepted: { npaNumber: string; total: number; grade: string }[];
  rejected: { npaNumber: string; reason: string }[];
}

export interface RosterUploadReport {
  accepted: string[];
  rejected: { line: string; reason: string }[];
}

export class ApiFailure extends Error {
  constructor(
    public status: number,
    public machineCode: string,
    message: string,
  ) {
    super(message);
  }
}

const STATE_CHANGING = new Set(["POST", "PUT", "PATCH", "DELETE"]);

export class ApiClient {
  csrfToken: string | null = null;

  constructor(
    private fetchImpl: typeof fetch = (...args) => fetch(...args),
    private baseUrl: string = "",
  ) {}

  private async raw(
    method: string,
    path: string,
    init: { json?: unknown; body?: BodyInit; headers?: Record<string, string> } = {},
  ): Promise<Response> {
    const headers: Record<string, string> = { ...(init.headers ?? {}) };
    let body: BodyInit | undefined = init.body;
    if (init.json !== undefined) {
      headers["Content-Type"] = "application/json";
      body = JSON.stringify(init.json);
    }
    if (STATE_CHANGING.has(method) && this.csrfToken) {
      headers["X-CSRF-Token"] = this.csrfToken;
    }
    return this.fetchImpl(this.baseUrl + path, {
      method,
      headers,
      body,
      credentials: "include",
    });
  }

  private async request<T>(
    method: string,
    path: string,
    init: { json?: unknown; body?: BodyInit; headers?: Record<string, string> } = {},
  ): Promise<T> {
    const response = await this.raw(method, path, init);
    if (!response.ok) {
      let code = "http_error";
      let message = `request failed (${response.status})`;
      try {
        const payload = await response.json();
        code = payload.machineCode ?? code;
        message = payload.message ?? message;
      } catch {
        /* non-JSON error body; keep defaults */
      }
      throw new ApiFailure(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  // -- auth ------------------------------------------------------------------

  async login(realm: Realm, email: string, password: string): Promise<Principal> {
    const principal = await this.request<Principal>("POST", `/api/${realm}/login`, {
      json: { email, password },
    });
    await this.refreshCsrf();
    return principal;
  }

  async refreshCsrf(): Promise<string> {
    const { csrfToken } = await this.request<{ csrfToken: string }>("GET", "/api/csrf");
    this.csrfToken = csrfToken;
    return csrfToken;
  }

  async me(): Promise<(Record<string, unknown> & { role: Role; realm: Realm }) | null> {
    const response = await this.raw("GET", "/api/me");
    if (response.status === 401) return null;
    if (!response.ok) throw new ApiFailure(response.status, "http_error", "cannot load profile");
    return (await response.json()) as Record<string, unknown> & { role: Role; realm: Realm };
  }

  logout(): Promise<{ status: string }> {
    return this.request("POST", "/api/logout", { json: {} });
  }

  registerStaff(body: Record<string, unknown>) {
    return this.request<StaffRow>("POST", "/api/staff/register", { json: body });
  }

  registerCadet(body: Record<string, unknown>) {
    return this.request<CadetRow>("POST", "/api/cadet/register", { json: body });
  }

  beginReset(email: string) {
    return this.request<{ status: string }>("POST", "/api/password-reset/begin", {
      json: { email },
    });
  }

  completeReset(token: string, newPassword: string) {
    return this.request<{ status: string }>("POST", "/api/password-reset/complete", {
      json: { token, newPassword },
    });
  }

  patchProfile(fields: Record<string, unknown>) {
    return this.request<Record<string, unknown>>("PATCH", "/api/me", { json: fields });
  }

  changePassword(currentPassword: string, newPassword: string) {
    return this.request<{ status: string }>("POST", "/api/me/password", {
      json: { currentPassword, newPassword },
    });
  }

  listEvents() {
    return this.request<EventRow[]>("GET", "/api/events");
  }

  // -- admin -----------------------------------------------------------------

  adminListStaff() {
    return this.request<StaffRow[]>("GET", "/api/admin/staff");
  }

  adminEditStaff(staffId: number, fields: Record<string, unknown>) {
    return this.request<StaffRow>("PATCH", `/api/admin/staff/${staffId}`, { json: fields });
  }

  adminListStaffPins() {
    return this.request<PinRow[]>("GET", "/api/admin/staff-pins");
  }

  adminCreateStaffPins(department: string, count: number) {
    return this.request<PinRow[]>("POST", "/api/admin/staff-pins", {
      json: { department, count },
    });
  }

  adminCreateEvent(title: string, body: string, eventDate: string) {
    return this.request<EventRow>("POST", "/api/admin/events", {
      json: { title, body, eventDate },
    });
  }

  // -- hod -------------------------------------------------------------------

  hodListCadets() {
    return this.request<CadetRow[]>("GET", "/api/hod/cadets");
  }

  hodEditCadet(cadetId: number, fields: Record<string, unknown>) {
    return this.request<CadetRow>("PATCH", `/api/hod/cadets/${cadetId}`, { json: fields });
  }

  hodListCadetPins() {
    return this.request<PinRow[]>("GET", "/api/hod/cadet-pins");
  }

  hodCreateCadetPins(count: number) {
    return this.request<PinRow[]>("POST", "/api/hod/cadet-pins", { json: { count } });
  }

  hodListRoster() {
    return this.request<RosterRow[]>("GET", "/api/hod/npa-roster");
  }

  hodUploadRoster(lines: string) {
    return this.request<RosterUploadReport>("POST", "/api/hod/npa-roster", {
      body: lines,
      headers: { "Content-Type": "text/plain; charset=utf-8" },
    });
  }

  hodListCourses() {
    return this.request<CourseRow[]>("GET", "/api/hod/courses");
  }

  hodCreateCourse(body: Record<string, unknown>) {
    return this.request<CourseRow>("POST", "/api/hod/courses", { json: body });
  }

  hodEditCourse(code: string, fields: Record<string, unknown>) {
    return this.request<CourseRow>("PATCH", `/api/hod/courses/${encodeURIComponent(code)}`, {
      json: fields,
    });
  }

  hodDeleteCourse(code: string) {
    return this.request<{ status: string }>(
      "DELETE",
      `/api/hod/courses/${encodeURIComponent(code)}`,
      { json: {} },
    );
  }

  hodListLecturers() {
    return this.request<StaffRow[]>("GET", "/api/hod/lecturers");
  }

  hodAssignCourse(courseCode: string, staffId: number) {
    return this.request<Record<string, unknown>>("POST", "/api/hod/assignments", {
      json: { courseCode, staffId },
    });
  }

  hodSetRegistrationWindow(open: boolean) {
    return this.request<{ department: string; open: boolean }>(
      "POST",
      "/api/hod/registration-window",
      { json: { open } },
    );
  }

  hodResults() {
    return this.request<DeptResultRow[]>("GET", "/api/hod/results");
  }

  // -- lecturer ----------------------------------------------------------------

  lecturerCourses() {
    return this.request<CourseRow[]>("GET", "/api/lecturer/courses");
  }

  lecturerCourseCadets(code: string) {
    return this.request<CadetRow[]>(
      "GET",
      `/api/lecturer/courses/${encodeURIComponent(code)}/cadets`,
    );
  }

  lecturerUploadScores(code: string, csv: string) {
    return this.request<ScoreUploadReport>(
      "POST",
      `/api/lecturer/courses/${encodeURIComponent(code)}/scores`,
      { body: csv, headers: { "Content-Type": "text/csv; charset=utf-8" } },
    );
  }

  lecturerUploadMaterial(code: string, file: File) {
    const form = new FormData();
    form.append("file", file);
    return this.request<MaterialRow>(
      "POST",
      `/api/lecturer/courses/${encodeURIComponent(code)}/materials`,
      { body: form },
    );
  }

  // -- cadet -------------------------------------------------------------------

  cadetEligibleCourses() {
    return this.request<EligibleCourses>("GET", "/api/cadet/eligible-courses");
  }

  cadetRegisterCourses(courseCodes: string[]) {
    return this.request<{ registered: unknown[] }>("POST", "/api/cadet/registrations", {
      json: { courseCodes },
    });
  }

  cadetResults() {
    return this.request<ResultRow[]>("GET", "/api/cadet/results");
  }

  cadetMaterials() {
    return this.request<MaterialRow[]>("GET", "/api/cadet/materials");
  }

  materialDownloadUrl(materialId: number): string {
    return `${this.baseUrl}/api/cadet/materials/${materialId}`;
  }
}
