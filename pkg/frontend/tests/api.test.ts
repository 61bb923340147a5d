/** Client behavior that must hold for every screen: CSRF token on every
 * state-changing request, none on reads, and machine-code error mapping. */

import { describe, expect, it } from "vitest";

import { ApiClient, ApiFailure } from "../src/api.js";
import { ERROR_TEXT, errorText } from "../src/state.js";

interface Captured {
  url: string;
  method: string;
  headers: Headers;
}

function fakeFetch(respond: (url: string) => { status: number; body: unknown }) {
  const captured: Captured[] = [];
  const impl: typeof fetch = async (input, init) => {
    const url = String(input);
    captured.push({
      url,
      method: init?.method ?? "GET",
      headers: new Headers(init?.headers),
    });
    const { status, body } = respond(url);
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json; charset=utf-8" },
    });
  };
  return { captured, impl };
}

describe("ApiClient", () => {
  it("attaches the CSRF token to every state-changing request", async () => {
    const { captured, impl } = fakeFetch((url) => {
      if (url.endsWith("/api/csrf")) return { status: 200, body: { csrfToken: "tok123" } };
      return { status: 200, body: {} };
    });
    const client = new ApiClient(impl);
    await client.refreshCsrf();
    await client.adminCreateEvent("t", "b", "2019-01-01");
    await client.hodSetRegistrationWindow(true);
    await client.patchProfile({ address: "x" });
    await client.listEvents();

    const writes = captured.filter((c) => c.method !== "GET");
    expect(writes.length).toBe(3);
    for (const request of writes) {
      expect(request.headers.get("X-CSRF-Token")).toBe("tok123");
    }
    const reads = captured.filter((c) => c.method === "GET");
    for (const request of reads) {
      expect(request.headers.get("X-CSRF-Token")).toBeNull();
    }
  });

  it("maps error bodies to ApiFailure with the machine code", async () => {
    const { impl } = fakeFetch(() => ({
      status: 403,
      body: { machineCode: "csrf_mismatch", message: "missing or invalid CSRF token" },
    }));
    const client = new ApiClient(impl);
    const failure = await client.listEvents().catch((error) => error);
    expect(failure).toBeInstanceOf(ApiFailure);
    expect(failure.machineCode).toBe("csrf_mismatch");
    expect(failure.status).toBe(403);
  });

  it("me() returns null on 401 instead of throwing", async () => {
    const { impl } = fakeFetch(() => ({
      status: 401, body: { machineCode: "invalid_session", message: "x" },
    }));
    const client = new ApiClient(impl);
    expect(await client.me()).toBeNull();
  });

  it("login failures surface the generic credentials text", () => {
    expect(errorText("invalid_credentials", "?")).toBe("Invalid credentials.");
    // the closed-window banner wording is pinned
    expect(ERROR_TEXT["registration_closed"])
      .toBe("You have to wait till your course registration begins");
  });
});
