/** Application shell: hash router, role-scoped sidebar, session boot. */

import { ApiClient, type Realm } from "./api.js";
import { clear, el } from "./dom.js";
import { MATRIX, NAV, type AppContext, type ScreenAction, type ViewState } from "./state.js";
import { renderAdminEvents, renderStaffList, renderStaffPins } from "./screens/admin.js";
import {
  renderCadetRegistration,
  renderLogin,
  renderReset,
  renderStaffRegistration,
} from "./screens/auth.js";
import { renderMaterials, renderRegistration, renderResults } from "./screens/cadet.js";
import {
  renderAssignments,
  renderCadetList,
  renderCadetPins,
  renderCourses,
  renderDepartmentResults,
  renderNpaRoster,
} from "./screens/hod.js";
import { renderMyCourses } from "./screens/lecturer.js";
import { renderDashboard, renderMail, renderProfile } from "./screens/shared.js";

type Screen = (container: HTMLElement, ctx: AppContext) => void | Promise<void>;

interface RouteEntry {
  screen: Screen;
  action: ScreenAction | null;
}

const AUTHENTICATED_ROUTES: Record<string, RouteEntry> = {
  "#/dashboard": { screen: renderDashboard, action: null },
  "#/mail": { screen: renderMail, action: null },
  "#/profile": { screen: renderProfile, action: "edit_own_profile" },
  "#/staff": { screen: renderStaffList, action: "view_staff_list" },
  "#/staff-pins": { screen: renderStaffPins, action: "create_staff_pin" },
  "#/events-admin": { screen: renderAdminEvents, action: "create_event" },
  "#/cadets": { screen: renderCadetList, action: "list_cadets" },
  "#/cadet-pins": { screen: renderCadetPins, action: "create_cadet_pin" },
  "#/npa-roster": { screen: renderNpaRoster, action: "upload_npa_numbers" },
  "#/courses": { screen: renderCourses, action: "create_course" },
  "#/assignments": { screen: renderAssignments, action: "assign_course" },
  "#/department-results": { screen: renderDepartmentResults, action: "view_department_results" },
  "#/my-courses": { screen: renderMyCourses, action: "list_assigned_courses" },
  "#/registration": { screen: renderRegistration, action: "register_courses" },
  "#/results": { screen: renderResults, action: "view_own_results" },
  "#/materials": { screen: renderMaterials, action: "download_materials" },
};

export class App {
  readonly ctx: AppContext;
  private readonly content: HTMLElement;
  private readonly sidebar: HTMLElement;
  private readonly topbar: HTMLElement;
  private readonly toasts: HTMLElement;
  readonly state: ViewState = { principal: null, route: "#/login/cadet" };

  constructor(
    root: HTMLElement,
    readonly api: ApiClient,
    private readonly window_: Window = window,
  ) {
    this.sidebar = el("nav", { className: "sidebar" });
    this.content = el("main", { className: "content" });
    this.topbar = el("header", { className: "topbar" });
    this.toasts = el("div", { className: "toasts" });
    root.replaceChildren(
      el("div", { className: "shell" },
        this.sidebar,
        el("div", { className: "main-column" }, this.topbar, this.content)),
      this.toasts,
    );
    this.ctx = {
      api,
      state: this.state,
      navigate: (route) => this.navigate(route),
      refresh: async () => {
        await this.loadSession();
        this.renderChrome();
      },
      toast: (kind, text) => this.toast(kind, text),
    };
    this.window_.addEventListener("hashchange", () => {
      void this.render();
    });
  }

  async boot(): Promise<void> {
    await this.loadSession();
    if (!this.window_.location.hash) {
      this.window_.location.hash = this.state.principal ? "#/dashboard" : "#/login/cadet";
    }
    await this.render();
  }

  private async loadSession(): Promise<void> {
    const me = await this.api.me();
    if (me) {
      this.state.principal = {
        realm: me.realm,
        role: me.role,
        id: Number(me["id"]),
        name: `${me["firstName"] ?? me["name"] ?? ""} ${me["surName"] ?? ""}`.trim(),
        email: String(me["email"]),
        department: (me["department"] as string | null) ?? null,
      };
      await this.api.refreshCsrf();
    } else {
      this.state.principal = null;
    }
  }

  navigate(route: string): void {
    if (this.window_.location.hash === route) {
      void this.render();
    } else {
      this.window_.location.hash = route;
    }
  }

  // renders are chained so a stale slow screen can never overwrite a newer one
  private renderChain: Promise<void> = Promise.resolve();

  render(): Promise<void> {
    const next = this.renderChain.then(() => this.renderCurrent());
    this.renderChain = next.catch(() => undefined);
    return next;
  }

  /** Resolves once every queued render has finished. */
  settled(): Promise<void> {
    return this.renderChain;
  }

  private async renderCurrent(): Promise<void> {
    const hash = this.window_.location.hash || "#/login/cadet";
    this.state.route = hash;
    this.renderChrome();
    try {
      if (hash.startsWith("#/login/")) {
        const realm = hash.split("/")[2] as Realm;
        renderLogin(this.content, this.ctx, ["admin", "staff", "cadet"].includes(realm) ? realm : "cadet");
        return;
      }
      if (hash === "#/register/staff") {
        renderStaffRegistration(this.content, this.ctx);
        return;
      }
      if (hash === "#/register/cadet") {
        renderCadetRegistration(this.content, this.ctx);
        return;
      }
      if (hash === "#/reset") {
        renderReset(this.content, this.ctx);
        return;
      }
      if (!this.state.principal) {
        this.navigate("#/login/cadet");
        return;
      }
      const entry = AUTHENTICATED_ROUTES[hash];
      if (!entry) {
        this.navigate("#/dashboard");
        return;
      }
      if (entry.action && !MATRIX[this.state.principal.role].has(entry.action)) {
        this.toast("error", "That screen is not available to your role.");
        this.navigate("#/dashboard");
        return;
      }
      await entry.screen(this.content, this.ctx);
    } catch (error) {
      clear(this.content).append(
        el("div", { className: "banner banner-error" },
          error instanceof Error ? error.message : "failed to load this screen"));
    }
  }

  private renderChrome(): void {
    const principal = this.state.principal;
    if (!principal) {
      this.sidebar.replaceChildren(el("div", { className: "brand" }, "Academy Portal"));
      this.topbar.replaceChildren();
      return;
    }
    const items = NAV[principal.role].map((item) =>
      el("a", {
        href: item.route,
        className: this.state.route === item.route ? "nav-item active" : "nav-item",
      }, item.label));
    this.sidebar.replaceChildren(
      el("div", { className: "brand" },
        principal.role === "cadet" ? "Cadet Portal" : "Staff Portal"),
      ...items,
    );
    this.topbar.replaceChildren(
      el("span", { className: "hello" },
        `Hello ${principal.role === "cadet" ? "Cadet" : "Staff"}, ${principal.name}`),
      el("button", {
        className: "logout",
        onclick: async () => {
          try {
            await this.api.logout();
          } finally {
            this.state.principal = null;
            this.api.csrfToken = null;
            this.navigate("#/login/cadet");
          }
        },
      }, "Logout"),
    );
  }

  private toast(kind: "info" | "error" | "success", text: string): void {
    const node = el("div", { className: `toast toast-${kind}` }, text);
    this.toasts.append(node);
    setTimeout(() => node.remove(), 4000);
  }
}

export async function mountApp(root: HTMLElement, api?: ApiClient): Promise<App> {
  const app = new App(root, api ?? new ApiClient());
  await app.boot();
  return app;
}

export { AUTHENTICATED_ROUTES };
