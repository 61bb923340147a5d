/** Cadet suite: the course-registration screen (info card, checkbox table,
 * Register action, waiting banner when the window is closed), results, and
 * materials. */

import { banner, clear, dataTable, el, section } from "../dom.js";
import type { AppContext } from "../state.js";
import { describe } from "./auth.js";

export const WAITING_TEXT = "You have to wait till your course registration begins";

export async function renderRegistration(container: HTMLElement, ctx: AppContext) {
  clear(container);
  const me = (await ctx.api.me())!;
  const eligible = await ctx.api.cadetEligibleCourses();
  const notice = el("div", { className: "notice-slot" });

  const infoCard = section("Cadet Information",
    el("div", { className: "info-grid" },
      infoItem("NPA NUMBER", String(me["npaNumber"])),
      infoItem("CADET NAME", `${me["firstName"]} ${me["surName"]}`),
      infoItem("FACULTY", String(me["faculty"])),
      infoItem("DEPARTMENT", String(me["department"])),
      infoItem("LEVEL", String(me["level"])),
      infoItem("SESSION", String(eligible.sessionYear)),
      infoItem("REGULAR COURSE", String(me["rc"])),
      infoItem("SEMESTER", eligible.semester),
    ));

  container.append(
    el("h1", {}, "Course Registration"),
    el("p", { className: "muted" },
      "The System automatically select your level and semester and display"
      + " courses to be taken in a specific semester"),
    infoCard,
  );

  if (!eligible.registrationOpen) {
    container.append(banner("warning", WAITING_TEXT));
    return;
  }

  const checkboxes = new Map<string, HTMLInputElement>();
  const rows = eligible.courses.map((course, index) => {
    const checkbox = el("input", {
      type: "checkbox", dataset: { course: course.courseCode },
    });
    checkboxes.set(course.courseCode, checkbox);
    return [
      String(index + 1), course.courseCode, course.courseTitle,
      String(course.level), String(course.unit), course.semester.toUpperCase(),
      String(course.year), checkbox,
    ];
  });

  container.append(
    section("Course Information",
      el("p", { className: "muted" },
        "Please Select/Tick or Deselect/Untick the checkbox to add/remove"
        + " course information"),
      notice,
      dataTable(["S#", "CODE", "TITLE", "LEVEL", "UNIT", "SEMESTER", "YEAR", ""], rows,
        { emptyText: "no courses match your level and semester yet" }),
      el("button", {
        className: "primary",
        onclick: async () => {
          const picked = [...checkboxes.entries()]
            .filter(([, box]) => box.checked)
            .map(([code]) => code);
          try {
            await ctx.api.cadetRegisterCourses(picked);
            notice.replaceChildren(banner("success",
              picked.length
                ? `Registered: ${picked.join(", ")}`
                : "Nothing selected; nothing registered."));
          } catch (error) {
            notice.replaceChildren(banner("error", describe(error)));
          }
        },
      }, "Register")),
  );
}

function infoItem(label: string, value: string): HTMLElement {
  return el("div", { className: "info-item" },
    el("span", { className: "info-label" }, `${label}: `),
    el("span", {}, value));
}

export async function renderResults(container: HTMLElement, ctx: AppContext) {
  clear(container);
  const results = await ctx.api.cadetResults();
  container.append(
    el("h1", {}, "Result"),
    section("My results",
      dataTable(["Code", "Title", "Session", "Semester", "Unit", "Total", "Grade", "Status"],
        results.map((row) => [
          row.courseCode, row.courseTitle, String(row.sessionYear), row.semester,
          String(row.unit),
          row.total === null ? "-" : String(row.total),
          row.grade ?? "-", row.status,
        ]),
        { emptyText: "no registered courses yet" })),
  );
}

export async function renderMaterials(container: HTMLElement, ctx: AppContext) {
  clear(container);
  const materials = await ctx.api.cadetMaterials();
  container.append(
    el("h1", {}, "Materials"),
    section("Course materials",
      dataTable(["Course", "File", "Kind", "Size", ""],
        materials.map((material) => [
          material.courseCode, material.originalFilename, material.mediaKind,
          `${material.sizeBytes} bytes`,
          el("a", {
            href: ctx.api.materialDownloadUrl(material.id),
            className: "button-link",
          }, "Download"),
        ]),
        { emptyText: "no materials for your registered courses yet" })),
  );
}
