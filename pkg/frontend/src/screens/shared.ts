/** Screens every role shares: dashboard, the events list ("Mail"), the
 * profile editor, and password change. */

import { banner, clear, dataTable, el, field, section, textInput } from "../dom.js";
import type { AppContext } from "../state.js";
import { describe } from "./auth.js";

const ROLE_HEADINGS: Record<string, string> = {
  admin: "Admin Dashboard",
  hod: "Staff Dashboard",
  lecturer: "Staff Dashboard",
  cadet: "Cadet Dashboard",
};

const OVERVIEW: Record<string, string[]> = {
  admin: [
    "Creating staff registration pins.",
    "Viewing and editing staff records.",
    "Publishing events to every portal.",
  ],
  hod: [
    "Issuing cadet pins and uploading the NPA number roster.",
    "Managing departmental courses and assigning them to lecturers.",
    "Opening course registration and reviewing departmental results.",
  ],
  lecturer: [
    "Uploading of Academic materials.",
    "Uploading of Academic result.",
    "Access to the list of cadets that you teach.",
    "View Course/Courses to Lecture.",
  ],
  cadet: [
    "Registering the courses selected for your level and semester.",
    "Reading your results as they are uploaded.",
    "Downloading course materials.",
  ],
};

export async function renderDashboard(container: HTMLElement, ctx: AppContext) {
  clear(container);
  const principal = ctx.state.principal!;
  const heading = ROLE_HEADINGS[principal.role] ?? "Dashboard";
  const pieces: HTMLElement[] = [];

  if (principal.realm === "staff") {
    const me = await ctx.api.me();
    if (me && me["registrationComplete"] === false) {
      pieces.push(completionCard(ctx));
    }
  }

  pieces.push(section("The Overview of Portal",
    el("p", {}, `Hello ${principal.role === "cadet" ? "Cadet" : "Staff"}, ${principal.name}.`),
    el("ol", {}, ...(OVERVIEW[principal.role] ?? []).map((line) => el("li", {}, line))),
  ));

  const events = await ctx.api.listEvents();
  if (events.length) {
    pieces.push(section("Latest events",
      dataTable(["Title", "Date", "Details"],
        events.slice(0, 5).map((event) => [event.title, event.eventDate, event.body]))));
  }
  container.append(el("h1", {}, heading), ...pieces);
}

function completionCard(ctx: AppContext): HTMLElement {
  const designation = el("select", {},
    el("option", { value: "lecturer" }, "lecturer"),
    el("option", { value: "hod" }, "hod"));
  const address = textInput({ placeholder: "address (optional)" });
  const dob = textInput({ placeholder: "date of birth (optional)" });
  const cv = textInput({ placeholder: "cv filename (optional)" });
  const notice = el("div", { className: "notice-slot" });
  return section("Complete Registration",
    banner("warning",
      "Your registration is not completed please Click to complete your registration."),
    notice,
    el("form", {
      className: "inline-form",
      onsubmit: async (event) => {
        event.preventDefault();
        try {
          await ctx.api.patchProfile({
            designation: designation.value,
            address: address.value || null,
            dob: dob.value || null,
            cv: cv.value || null,
          });
          await ctx.refresh();
          ctx.toast("success", "Registration completed.");
          ctx.navigate("#/dashboard");
        } catch (error) {
          notice.replaceChildren(banner("error", describe(error)));
        }
      },
    },
      field("Designation", designation),
      field("Address", address),
      field("Date of birth", dob),
      field("CV", cv),
      el("button", { type: "submit", className: "primary" }, "Complete Registration"),
    ));
}

export async function renderMail(container: HTMLElement, ctx: AppContext) {
  clear(container);
  const events = await ctx.api.listEvents();
  container.append(
    el("h1", {}, "Mail"),
    section("Events",
      dataTable(["Title", "Event date", "Details"],
        events.map((event) => [event.title, event.eventDate, event.body]),
        { emptyText: "no events yet" })),
  );
}

export async function renderProfile(container: HTMLElement, ctx: AppContext) {
  clear(container);
  const principal = ctx.state.principal!;
  const me = (await ctx.api.me())!;
  const rows: [string, string][] = Object.entries(me)
    .filter(([key]) => !["role", "realm"].includes(key))
    .map(([key, value]) => [key, value === null ? "" : String(value)]);

  const address = textInput({ value: String(me["address"] ?? ""), placeholder: "address" });
  const passport = textInput({
    value: String(me["passport"] ?? "avatar.png"), placeholder: "passport filename",
  });
  const notice = el("div", { className: "notice-slot" });

  const editable: HTMLElement[] = [];
  if (principal.realm !== "admin") editable.push(field("Address", address));
  editable.push(field("Passport", passport));

  container.append(
    el("h1", {}, "Profile"),
    section("Details",
      el("div", { className: "passport-placeholder", title: String(me["passport"] ?? "") },
        initials(principal.name)),
      dataTable(["Field", "Value"], rows)),
    section("Update profile",
      notice,
      el("form", {
        className: "inline-form",
        onsubmit: async (event) => {
          event.preventDefault();
          try {
            const fields: Record<string, unknown> = { passport: passport.value };
            if (principal.realm !== "admin") fields["address"] = address.value;
            await ctx.api.patchProfile(fields);
            ctx.toast("success", "Profile updated.");
            await renderProfile(container, ctx);
          } catch (error) {
            notice.replaceChildren(banner("error", describe(error)));
          }
        },
      },
        ...editable,
        el("button", { type: "submit", className: "primary" }, "Update profile"))),
    passwordCard(ctx),
  );
}

function initials(name: string): string {
  return name.split(/\s+/).map((part) => part.charAt(0).toUpperCase()).join("").slice(0, 2);
}

function passwordCard(ctx: AppContext): HTMLElement {
  const current = el("input", { type: "password", placeholder: "current password" });
  const replacement = el("input", { type: "password", placeholder: "new password" });
  const notice = el("div", { className: "notice-slot" });
  return section("Change password",
    notice,
    el("form", {
      className: "inline-form",
      onsubmit: async (event) => {
        event.preventDefault();
        try {
          await ctx.api.changePassword(current.value, replacement.value);
          current.value = "";
          replacement.value = "";
          notice.replaceChildren(banner("success", "Password changed."));
        } catch (error) {
          notice.replaceChildren(banner("error", describe(error)));
        }
      },
    },
      field("Current password", current),
      field("New password", replacement),
      el("button", { type: "submit", className: "primary" }, "Change password")));
}
