/** HOD suite: cadet list with client-side filter and edit, cadet pins, NPA
 * roster upload, course CRUD, lecturer assignment, the registration window,
 * and departmental results. */

import type { CadetRow } from "../api.js";
import { banner, clear, dataTable, el, field, section, textInput } from "../dom.js";
import type { AppContext } from "../state.js";
import { describe } from "./auth.js";

export async function renderCadetList(container: HTMLElement, ctx: AppContext) {
  clear(container);
  const department = ctx.state.principal!.department ?? "";
  const cadets = await ctx.api.hodListCadets();
  const editSlot = el("div");
  container.append(
    el("h1", {}, "Cadet List"),
    el("p", { className: "muted" }, "List of Cadet in this Department"),
    section(`${department} Cadet List`,
      dataTable(
        ["SN", "Surname", "First Name", "Npa Number", "Pin", "Rc", "Squad", "Level", "Action"],
        cadets.map((cadet, index) => [
          String(index + 1), cadet.surName, cadet.firstName, cadet.npaNumber,
          cadet.pin, String(cadet.rc), String(cadet.squad), String(cadet.level),
          el("button", { onclick: () => showEditor(cadet) }, "Edit"),
        ]),
        { filter: true, emptyText: "no cadets in this department yet" })),
    editSlot,
  );

  function showEditor(cadet: CadetRow) {
    const level = textInput({ value: String(cadet.level) });
    const squad = textInput({ value: String(cadet.squad) });
    const address = textInput({ value: cadet.address ?? "" });
    const notice = el("div", { className: "notice-slot" });
    editSlot.replaceChildren(section(`Edit cadet ${cadet.npaNumber}`,
      notice,
      el("form", {
        className: "inline-form",
        onsubmit: async (event) => {
          event.preventDefault();
          try {
            await ctx.api.hodEditCadet(cadet.id, {
              level: Number(level.value),
              squad: Number(squad.value),
              address: address.value || null,
            });
            ctx.toast("success", "Cadet updated.");
            await renderCadetList(container, ctx);
          } catch (error) {
            notice.replaceChildren(banner("error", describe(error)));
          }
        },
      },
        field("Level", level),
        field("Squad", squad),
        field("Address", address),
        el("button", { type: "submit", className: "primary" }, "Save"))));
  }
}

export async function renderCadetPins(container: HTMLElement, ctx: AppContext) {
  clear(container);
  const pins = await ctx.api.hodListCadetPins();
  const count = textInput({ value: "1" });
  const notice = el("div", { className: "notice-slot" });
  container.append(
    el("h1", {}, "Create cadet registration pin"),
    section("Generate",
      notice,
      el("form", {
        className: "inline-form",
        onsubmit: async (event) => {
          event.preventDefault();
          try {
            await ctx.api.hodCreateCadetPins(Number(count.value));
            ctx.toast("success", "Pins created.");
            await renderCadetPins(container, ctx);
          } catch (error) {
            notice.replaceChildren(banner("error", describe(error)));
          }
        },
      },
        field("Count", count),
        el("button", { type: "submit", className: "primary" }, "Generate"))),
    section("Issued pins",
      dataTable(["Pin", "Consumed"],
        pins.map((pin) => [pin.pinCode, pin.consumed ? "yes" : "no"]),
        { filter: true, emptyText: "no pins yet" })),
  );
}

export async function renderNpaRoster(container: HTMLElement, ctx: AppContext) {
  clear(container);
  const roster = await ctx.api.hodListRoster();
  const lines = el("textarea", {
    rows: 6, placeholder: "one NPA number per line, e.g. NPA/04/09/00187",
  });
  const reportSlot = el("div", { className: "notice-slot" });
  container.append(
    el("h1", {}, "Upload cadet npa number"),
    section("Upload",
      reportSlot,
      el("form", {
        className: "inline-form",
        onsubmit: async (event) => {
          event.preventDefault();
          try {
            const report = await ctx.api.hodUploadRoster(lines.value);
            reportSlot.replaceChildren(
              banner("success", `${report.accepted.length} accepted`),
              ...report.rejected.map((row) =>
                banner("warning", `rejected ${row.line}: ${row.reason}`)),
            );
            await refreshTable();
          } catch (error) {
            reportSlot.replaceChildren(banner("error", describe(error)));
          }
        },
      },
        field("Numbers", lines),
        el("button", { type: "submit", className: "primary" }, "Upload"))),
    section("Npa Number List", rosterTable(roster)),
  );

  async function refreshTable() {
    const fresh = await ctx.api.hodListRoster();
    const cards = container.querySelectorAll("section.card");
    cards[cards.length - 1].replaceWith(section("Npa Number List", rosterTable(fresh)));
  }

  function rosterTable(rows: { npaNumber: string; claimed: boolean }[]) {
    return dataTable(["Npa Number", "Claimed"],
      rows.map((row) => [row.npaNumber, row.claimed ? "yes" : "no"]),
      { filter: true, emptyText: "roster is empty" });
  }
}

export async function renderCourses(container: HTMLElement, ctx: AppContext) {
  clear(container);
  const courses = await ctx.api.hodListCourses();
  const code = textInput({ placeholder: "e.g. SOC-103" });
  const title = textInput({ placeholder: "course title" });
  const level = textInput({ value: "100" });
  const unit = textInput({ value: "2" });
  const year = textInput({ value: "2019" });
  const semester = el("select", {},
    el("option", { value: "first" }, "first"),
    el("option", { value: "second" }, "second"));
  const notice = el("div", { className: "notice-slot" });
  const editSlot = el("div");

  container.append(
    el("h1", {}, "Course"),
    section("Create course",
      notice,
      el("form", {
        className: "inline-form",
        onsubmit: async (event) => {
          event.preventDefault();
          try {
            await ctx.api.hodCreateCourse({
              courseCode: code.value, courseTitle: title.value,
              level: Number(level.value), unit: Number(unit.value),
              semester: semester.value, year: Number(year.value),
            });
            ctx.toast("success", "Course created.");
            await renderCourses(container, ctx);
          } catch (error) {
            notice.replaceChildren(banner("error", describe(error)));
          }
        },
      },
        field("Code", code),
        field("Title", title),
        field("Level", level),
        field("Unit", unit),
        field("Semester", semester),
        field("Year", year),
        el("button", { type: "submit", className: "primary" }, "Create course"))),
    section("Course list",
      dataTable(["Code", "Title", "Level", "Unit", "Semester", "Year", "Action"],
        courses.map((course) => [
          course.courseCode, course.courseTitle, String(course.level),
          String(course.unit), course.semester, String(course.year),
          el("span", {},
            el("button", { onclick: () => showEditor(course.courseCode, course.courseTitle) }, "Edit"),
            " ",
            el("button", {
              className: "danger",
              onclick: async () => {
                try {
                  await ctx.api.hodDeleteCourse(course.courseCode);
                  ctx.toast("success", `Deleted ${course.courseCode}.`);
                  await renderCourses(container, ctx);
                } catch (error) {
                  ctx.toast("error", describe(error));
                }
              },
            }, "Delete")),
        ]),
        { filter: true, emptyText: "no courses yet" })),
    editSlot,
  );

  function showEditor(courseCode: string, currentTitle: string) {
    const newTitle = textInput({ value: currentTitle });
    const slotNotice = el("div", { className: "notice-slot" });
    editSlot.replaceChildren(section(`Edit ${courseCode}`,
      slotNotice,
      el("form", {
        className: "inline-form",
        onsubmit: async (event) => {
          event.preventDefault();
          try {
            await ctx.api.hodEditCourse(courseCode, { courseTitle: newTitle.value });
            ctx.toast("success", "Course updated.");
            await renderCourses(container, ctx);
          } catch (error) {
            slotNotice.replaceChildren(banner("error", describe(error)));
          }
        },
      },
        field("Title", newTitle),
        el("button", { type: "submit", className: "primary" }, "Save"))));
  }
}

export async function renderAssignments(container: HTMLElement, ctx: AppContext) {
  clear(container);
  const [lecturers, courses] = await Promise.all([
    ctx.api.hodListLecturers(), ctx.api.hodListCourses(),
  ]);
  const coursePick = el("select", {},
    ...courses.map((course) =>
      el("option", { value: course.courseCode },
        `${course.courseCode} ${course.courseTitle}`)));
  const lecturerPick = el("select", {},
    ...lecturers.map((lecturer) =>
      el("option", { value: String(lecturer.id) },
        `${lecturer.firstName} ${lecturer.surName} (${lecturer.designation})`)));
  const notice = el("div", { className: "notice-slot" });
  const windowNotice = el("div", { className: "notice-slot" });

  container.append(
    el("h1", {}, "Lecturer"),
    section("Assign course to lecturers",
      notice,
      el("form", {
        className: "inline-form",
        onsubmit: async (event) => {
          event.preventDefault();
          try {
            await ctx.api.hodAssignCourse(coursePick.value, Number(lecturerPick.value));
            notice.replaceChildren(banner("success",
              `${coursePick.value} assigned.`));
          } catch (error) {
            notice.replaceChildren(banner("error", describe(error)));
          }
        },
      },
        field("Course", coursePick),
        field("Lecturer", lecturerPick),
        el("button", { type: "submit", className: "primary" }, "Assign"))),
    section("List of lecturers",
      dataTable(["ID", "Name", "Designation", "Email"],
        lecturers.map((lecturer) => [
          String(lecturer.id), `${lecturer.firstName} ${lecturer.surName}`,
          lecturer.designation ?? "", lecturer.email,
        ]),
        { filter: true, emptyText: "no completed staff yet" })),
    section("Course registration window",
      windowNotice,
      el("div", { className: "inline-form" },
        el("button", {
          className: "primary",
          onclick: () => setWindow(true),
        }, "Open registration"),
        " ",
        el("button", { onclick: () => setWindow(false) }, "Close registration"))),
  );

  async function setWindow(open: boolean) {
    try {
      await ctx.api.hodSetRegistrationWindow(open);
      windowNotice.replaceChildren(banner("success",
        open ? "Registration is open for your department."
             : "Registration is closed for your department."));
    } catch (error) {
      windowNotice.replaceChildren(banner("error", describe(error)));
    }
  }
}

export async function renderDepartmentResults(container: HTMLElement, ctx: AppContext) {
  clear(container);
  const results = await ctx.api.hodResults();
  container.append(
    el("h1", {}, "View results"),
    section("Departmental results",
      dataTable(["Npa Number", "Cadet", "Course", "Session", "Semester", "Total", "Grade"],
        results.map((row) => [
          row.npaNumber, row.cadetName, row.courseCode, String(row.sessionYear),
          row.semester, String(row.total), row.grade,
        ]),
        { filter: true, emptyText: "no results uploaded yet" })),
  );
}
