/** Lecturer suite: assigned courses, per-course cadet roster, score CSV
 * upload, and material upload. HODs reach this screen too (their grant is a
 * superset), so it lives under "My Courses" for both. */

import { banner, clear, dataTable, el, field, section } from "../dom.js";
import type { AppContext } from "../state.js";
import { describe } from "./auth.js";

export async function renderMyCourses(container: HTMLElement, ctx: AppContext) {
  clear(container);
  const courses = await ctx.api.lecturerCourses();
  const detail = el("div");
  container.append(
    el("h1", {}, "My Courses"),
    section("Courses to lecture",
      dataTable(["Code", "Title", "Level", "Semester", "Year", "Action"],
        courses.map((course) => [
          course.courseCode, course.courseTitle, String(course.level),
          course.semester, String(course.year),
          el("button", { onclick: () => showCourse(course.courseCode) }, "Open"),
        ]),
        { emptyText: "no courses assigned to you yet" })),
    detail,
  );

  async function showCourse(code: string) {
    const roster = await ctx.api.lecturerCourseCadets(code);
    const csv = el("textarea", {
      rows: 5,
      placeholder: "npa_number,total\nNPA/04/09/00187,68",
    });
    const scoreNotice = el("div", { className: "notice-slot" });
    const file = el("input", { type: "file" });
    const materialNotice = el("div", { className: "notice-slot" });

    detail.replaceChildren(
      section(`Cadets registered for ${code}`,
        dataTable(["Surname", "First Name", "Npa Number", "Level"],
          roster.map((cadet) => [
            cadet.surName, cadet.firstName, cadet.npaNumber, String(cadet.level),
          ]),
          { filter: true, emptyText: "no cadet has registered this course yet" })),
      section(`Upload Cadet Scores for ${code}`,
        scoreNotice,
        el("form", {
          className: "inline-form",
          onsubmit: async (event) => {
            event.preventDefault();
            try {
              const report = await ctx.api.lecturerUploadScores(code, csv.value);
              scoreNotice.replaceChildren(
                banner("success", `${report.accepted.length} scores recorded`),
                ...report.rejected.map((row) =>
                  banner("warning", `rejected ${row.npaNumber}: ${row.reason}`)),
              );
            } catch (error) {
              scoreNotice.replaceChildren(banner("error", describe(error)));
            }
          },
        },
          field("CSV (npa_number,total)", csv),
          el("button", { type: "submit", className: "primary" }, "Upload results"))),
      section(`Upload material for ${code}`,
        materialNotice,
        el("form", {
          className: "inline-form",
          onsubmit: async (event) => {
            event.preventDefault();
            const chosen = file.files?.[0];
            if (!chosen) {
              materialNotice.replaceChildren(banner("error", "Choose a file first."));
              return;
            }
            try {
              const material = await ctx.api.lecturerUploadMaterial(code, chosen);
              materialNotice.replaceChildren(banner("success",
                `Uploaded ${material.originalFilename} (${material.sizeBytes} bytes).`));
            } catch (error) {
              materialNotice.replaceChildren(banner("error", describe(error)));
            }
          },
        },
          field("File (pdf/doc/docx/ppt/pptx, max 10 MiB)", file),
          el("button", { type: "submit", className: "primary" }, "Upload material"))),
    );
  }
}
