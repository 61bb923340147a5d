/** Admin suite: staff list with edit, staff pin generation, event creation. */

import type { StaffRow } from "../api.js";
import { banner, clear, dataTable, el, field, section, textInput } from "../dom.js";
import type { AppContext } from "../state.js";
import { describe } from "./auth.js";

export async function renderStaffList(container: HTMLElement, ctx: AppContext) {
  clear(container);
  const staff = await ctx.api.adminListStaff();
  const editSlot = el("div");
  container.append(
    el("h1", {}, "Staff"),
    section("All staff",
      dataTable(
        ["ID", "Surname", "First name", "Department", "Designation", "Email", "Edit"],
        staff.map((row) => [
          String(row.id), row.surName, row.firstName, row.department,
          row.designation ?? "(incomplete)", row.email,
          el("button", { onclick: () => showEditor(row) }, "Edit"),
        ]),
        { filter: true, emptyText: "no staff yet" })),
    editSlot,
  );

  function showEditor(row: StaffRow) {
    const surName = textInput({ value: row.surName });
    const firstName = textInput({ value: row.firstName });
    const address = textInput({ value: row.address ?? "" });
    const designation = el("select", {},
      el("option", { value: "" }, "(unchanged)"),
      el("option", { value: "lecturer" }, "lecturer"),
      el("option", { value: "hod" }, "hod"));
    const notice = el("div", { className: "notice-slot" });
    editSlot.replaceChildren(section(`Edit staff #${row.id}: ${row.email}`,
      notice,
      el("form", {
        className: "inline-form",
        onsubmit: async (event) => {
          event.preventDefault();
          try {
            const fields: Record<string, unknown> = {
              surName: surName.value, firstName: firstName.value,
              address: address.value || null,
            };
            if (designation.value) fields["designation"] = designation.value;
            await ctx.api.adminEditStaff(row.id, fields);
            ctx.toast("success", "Staff record updated.");
            await renderStaffList(container, ctx);
          } catch (error) {
            notice.replaceChildren(banner("error", describe(error)));
          }
        },
      },
        field("Surname", surName),
        field("First name", firstName),
        field("Address", address),
        field("Designation", designation),
        el("button", { type: "submit", className: "primary" }, "Save"))));
  }
}

export async function renderStaffPins(container: HTMLElement, ctx: AppContext) {
  clear(container);
  const pins = await ctx.api.adminListStaffPins();
  const department = textInput({ placeholder: "department name" });
  const count = textInput({ value: "1" });
  const notice = el("div", { className: "notice-slot" });
  container.append(
    el("h1", {}, "Staff Registration Pins"),
    section("Create staff registration pin",
      notice,
      el("form", {
        className: "inline-form",
        onsubmit: async (event) => {
          event.preventDefault();
          try {
            await ctx.api.adminCreateStaffPins(department.value, Number(count.value));
            ctx.toast("success", "Pins created.");
            await renderStaffPins(container, ctx);
          } catch (error) {
            notice.replaceChildren(banner("error", describe(error)));
          }
        },
      },
        field("Department", department),
        field("Count", count),
        el("button", { type: "submit", className: "primary" }, "Generate"))),
    section("Issued pins",
      dataTable(["Pin", "Department", "Consumed"],
        pins.map((pin) => [pin.pinCode, pin.department, pin.consumed ? "yes" : "no"]),
        { filter: true, emptyText: "no pins yet" })),
  );
}

export async function renderAdminEvents(container: HTMLElement, ctx: AppContext) {
  clear(container);
  const events = await ctx.api.listEvents();
  const title = textInput({ placeholder: "title" });
  const body = el("textarea", { rows: 3, placeholder: "details" });
  const eventDate = textInput({ placeholder: "YYYY-MM-DD" });
  const notice = el("div", { className: "notice-slot" });
  container.append(
    el("h1", {}, "Events"),
    section("Create event",
      notice,
      el("form", {
        className: "inline-form",
        onsubmit: async (event) => {
          event.preventDefault();
          try {
            await ctx.api.adminCreateEvent(title.value, body.value, eventDate.value);
            ctx.toast("success", "Event published to every dashboard.");
            await renderAdminEvents(container, ctx);
          } catch (error) {
            notice.replaceChildren(banner("error", describe(error)));
          }
        },
      },
        field("Title", title),
        field("Details", body),
        field("Event date", eventDate),
        el("button", { type: "submit", className: "primary" }, "Create event"))),
    section("Published",
      dataTable(["Title", "Event date", "Details"],
        events.map((event) => [event.title, event.eventDate, event.body]),
        { emptyText: "no events yet" })),
  );
}
