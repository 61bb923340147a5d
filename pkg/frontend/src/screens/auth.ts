/** Anonymous screens: the three login forms, the two registration forms,
 * and password reset. Login failure always shows the same generic message. */

import { ApiFailure, type Realm } from "../api.js";
import { banner, clear, el, field, section, textInput } from "../dom.js";
import { errorText, type AppContext } from "../state.js";

const LOGIN_TITLES: Record<Realm, string> = {
  admin: "Admin Login",
  staff: "Staff Login",
  cadet: "Cadet Login",
};

export function renderLogin(container: HTMLElement, ctx: AppContext, realm: Realm): void {
  clear(container);
  const email = textInput({ name: "email", placeholder: "email", required: true });
  const password = el("input", {
    type: "password", name: "password", placeholder: "password", required: true,
  });
  const notice = el("div", { className: "notice-slot" });

  const form = el("form", {
    className: "auth-form",
    onsubmit: async (event) => {
      event.preventDefault();
      notice.replaceChildren();
      try {
        const principal = await ctx.api.login(realm, email.value, password.value);
        ctx.state.principal = principal;
        ctx.navigate("#/dashboard");
      } catch (error) {
        notice.replaceChildren(banner("error", loginErrorText(error)));
      }
    },
  },
    field("Email", email),
    field("Password", password),
    el("button", { type: "submit", className: "primary" }, "LOGIN"),
  );

  const links = el("div", { className: "auth-links" },
    ...(["admin", "staff", "cadet"] as Realm[])
      .filter((other) => other !== realm)
      .map((other) => el("a", { href: `#/login/${other}` }, LOGIN_TITLES[other])),
    el("a", { href: "#/register/staff" }, "Staff registration"),
    el("a", { href: "#/register/cadet" }, "Cadet registration"),
    el("a", { href: "#/reset" }, "Forgot password"),
  );

  container.append(
    el("div", { className: "auth-page" },
      section(LOGIN_TITLES[realm], notice, form, links)),
  );
}

function loginErrorText(error: unknown): string {
  if (error instanceof ApiFailure && error.machineCode === "throttled") {
    return errorText("throttled", error.message);
  }
  // one generic message for every other failure: no account enumeration
  return errorText("invalid_credentials", "Invalid credentials.");
}

export function renderStaffRegistration(container: HTMLElement, ctx: AppContext): void {
  clear(container);
  const pin = textInput({ placeholder: "registration pin" });
  const surName = textInput({ placeholder: "surname" });
  const firstName = textInput({ placeholder: "first name" });
  const email = textInput({ placeholder: "email" });
  const password = el("input", { type: "password", placeholder: "password" });
  const notice = el("div", { className: "notice-slot" });

  const form = el("form", {
    className: "auth-form",
    onsubmit: async (event) => {
      event.preventDefault();
      notice.replaceChildren();
      try {
        await ctx.api.registerStaff({
          pin: pin.value, surName: surName.value, firstName: firstName.value,
          email: email.value, password: password.value,
        });
        notice.replaceChildren(banner("success",
          "Account created. Log in with your email and password."));
      } catch (error) {
        notice.replaceChildren(banner("error", describe(error)));
      }
    },
  },
    field("Pin", pin),
    field("Surname", surName),
    field("First name", firstName),
    field("Email", email),
    field("Password", password),
    el("button", { type: "submit", className: "primary" }, "CREATE"),
  );
  container.append(el("div", { className: "auth-page" },
    section("Staff Registration", notice, form,
      el("div", { className: "auth-links" },
        el("a", { href: "#/login/staff" }, "Back to staff login")))));
}

export function renderCadetRegistration(container: HTMLElement, ctx: AppContext): void {
  clear(container);
  const inputs = {
    pin: textInput({ placeholder: "registration pin" }),
    npaNumber: textInput({ placeholder: "NPA/xx/yy/zzzzz" }),
    surName: textInput({ placeholder: "surname" }),
    firstName: textInput({ placeholder: "first name" }),
    middleName: textInput({ placeholder: "middle name (optional)" }),
    email: textInput({ placeholder: "email" }),
    password: el("input", { type: "password", placeholder: "password" }),
    rc: textInput({ placeholder: "regular course (e.g. 6)" }),
    level: textInput({ placeholder: "level (100..500)" }),
    squad: textInput({ placeholder: "squad" }),
  };
  const semester = el("select", {},
    el("option", { value: "first" }, "first"),
    el("option", { value: "second" }, "second"));
  const sex = el("select", {},
    el("option", { value: "M" }, "M"),
    el("option", { value: "F" }, "F"));
  const notice = el("div", { className: "notice-slot" });

  const form = el("form", {
    className: "auth-form",
    onsubmit: async (event) => {
      event.preventDefault();
      notice.replaceChildren();
      try {
        await ctx.api.registerCadet({
          pin: inputs.pin.value,
          npaNumber: inputs.npaNumber.value,
          surName: inputs.surName.value,
          firstName: inputs.firstName.value,
          middleName: inputs.middleName.value || null,
          email: inputs.email.value,
          password: inputs.password.value,
          rc: Number(inputs.rc.value),
          level: Number(inputs.level.value),
          squad: Number(inputs.squad.value),
          semester: semester.value,
          sex: sex.value,
        });
        notice.replaceChildren(banner("success",
          "Account created. Log in with your email and password."));
      } catch (error) {
        notice.replaceChildren(banner("error", describe(error)));
      }
    },
  },
    field("Pin", inputs.pin),
    field("NPA number", inputs.npaNumber),
    field("Surname", inputs.surName),
    field("First name", inputs.firstName),
    field("Middle name", inputs.middleName),
    field("Email", inputs.email),
    field("Password", inputs.password),
    field("Regular course", inputs.rc),
    field("Level", inputs.level),
    field("Squad", inputs.squad),
    field("Semester", semester),
    field("Sex", sex),
    el("button", { type: "submit", className: "primary" }, "CREATE"),
  );
  container.append(el("div", { className: "auth-page" },
    section("Cadet Registration", notice, form,
      el("div", { className: "auth-links" },
        el("a", { href: "#/login/cadet" }, "Back to cadet login")))));
}

export function renderReset(container: HTMLElement, ctx: AppContext): void {
  clear(container);
  const email = textInput({ placeholder: "account email" });
  const token = textInput({ placeholder: "reset token" });
  const newPassword = el("input", { type: "password", placeholder: "new password" });
  const notice = el("div", { className: "notice-slot" });

  const begin = el("form", {
    className: "auth-form",
    onsubmit: async (event) => {
      event.preventDefault();
      await ctx.api.beginReset(email.value).catch(() => undefined);
      notice.replaceChildren(banner("info",
        "If that account exists, a reset token has been issued."));
    },
  },
    field("Email", email),
    el("button", { type: "submit" }, "Request reset"),
  );
  const complete = el("form", {
    className: "auth-form",
    onsubmit: async (event) => {
      event.preventDefault();
      try {
        await ctx.api.completeReset(token.value, newPassword.value);
        notice.replaceChildren(banner("success", "Password replaced; log in now."));
      } catch (error) {
        notice.replaceChildren(banner("error", describe(error)));
      }
    },
  },
    field("Token", token),
    field("New password", newPassword),
    el("button", { type: "submit" }, "Set new password"),
  );
  container.append(el("div", { className: "auth-page" },
    section("Password Reset", notice, begin, complete,
      el("div", { className: "auth-links" },
        el("a", { href: "#/login/cadet" }, "Back to login")))));
}

export function describe(error: unknown): string {
  if (error instanceof ApiFailure) {
    return errorText(error.machineCode, error.message);
  }
  return "Something went wrong; try again.";
}
