/** Navigation invariant: rendered sidebars link only to screens whose
 * backing action the role actually holds — no dead links. */

import { describe, expect, it } from "vitest";

import { AUTHENTICATED_ROUTES } from "../src/app.js";
import { MATRIX, NAV } from "../src/state.js";
import type { Role } from "../src/api.js";

const ROLES: Role[] = ["admin", "hod", "lecturer", "cadet"];

describe("role navigation", () => {
  it("links only to screens the role's actions permit", () => {
    for (const role of ROLES) {
      for (const item of NAV[role]) {
        if (item.action !== null) {
          expect(MATRIX[role].has(item.action),
            `${role} nav links ${item.route} without holding ${item.action}`)
            .toBe(true);
        }
      }
    }
  });

  it("every nav route resolves to a registered screen with the same action", () => {
    for (const role of ROLES) {
      for (const item of NAV[role]) {
        const entry = AUTHENTICATED_ROUTES[item.route];
        expect(entry, `${item.route} has no screen`).toBeDefined();
        expect(entry.action).toBe(item.action);
      }
    }
  });

  it("covers every authenticated screen from some role's navigation", () => {
    const reachable = new Set(
      ROLES.flatMap((role) => NAV[role].map((item) => item.route)),
    );
    for (const route of Object.keys(AUTHENTICATED_ROUTES)) {
      expect(reachable.has(route), `${route} is unreachable`).toBe(true);
    }
  });

  it("role matrices mirror the service's grants", () => {
    expect([...MATRIX.admin].sort()).toEqual([
      "change_own_password", "create_event", "create_staff_pin",
      "edit_own_profile", "edit_staff", "view_staff_list",
    ]);
    expect(MATRIX.hod.size).toBe(16);
    expect([...MATRIX.lecturer].sort()).toEqual([
      "change_own_password", "edit_own_profile", "list_assigned_courses",
      "list_registered_cadets", "upload_material", "upload_scores",
    ]);
    expect([...MATRIX.cadet].sort()).toEqual([
      "change_own_password", "download_materials", "edit_own_profile",
      "register_courses", "view_eligible_courses", "view_own_results",
    ]);
  });
});
