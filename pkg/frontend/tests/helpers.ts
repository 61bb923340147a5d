/** Test plumbing: a cookie-jar fetch (jsdom has no network/cookie handling),
 * a live-backend spawner, and DOM wait/act helpers. */

import { spawn, type ChildProcess } from "node:child_process";

/** Wraps the real fetch with a browser-like cookie jar so session cookies
 * survive across requests in tests. */
export function cookieJarFetch(): typeof fetch {
  const jar = new Map<string, string>();

  return async (input: RequestInfo | URL, init?: RequestInit) => {
    const headers = new Headers(init?.headers);
    if (jar.size) {
      headers.set("cookie",
        [...jar.entries()].map(([name, value]) => `${name}=${value}`).join("; "));
    }
    const response = await fetch(input, { ...init, headers });
    for (const line of response.headers.getSetCookie()) {
      const [pair] = line.split(";");
      const eq = pair.indexOf("=");
      const name = pair.slice(0, eq).trim();
      const value = pair.slice(eq + 1).trim();
      if (value === '""' || value === "") {
        jar.delete(name);
      } else {
        jar.set(name, value);
      }
    }
    return response;
  };
}

const SPAWN_SCRIPT = `
import sys, tempfile, time
from academy_sims.config import ServiceConfig, FAST_TEST_HASH
from academy_sims.seed import seed
from academy_sims.server import BackgroundServer

workdir = tempfile.mkdtemp(prefix="sims-ui-")
config = ServiceConfig(
    storage_path=f"{workdir}/ui.db",
    upload_dir=f"{workdir}/uploads",
    bind_port=0,
    hash_params=FAST_TEST_HASH,
)
server = BackgroundServer(config, auto_migrate=True).start()
seed(server.runtime.store, server.runtime.hasher, admin_password="uiadminpass77")
print(f"READY {server.base_url}", flush=True)
while True:
    time.sleep(1)
`;

export interface Backend {
  baseUrl: string;
  stop: () => void;
}

/** Spawn the real service (the primary component) and wait for readiness. */
export function startBackend(): Promise<Backend> {
  return new Promise((resolve, reject) => {
    const child: ChildProcess = spawn("python3", ["-u", "-c", SPAWN_SCRIPT], {
      stdio: ["ignore", "pipe", "pipe"],
    });
    let output = "";
    const timer = setTimeout(() => {
      child.kill();
      reject(new Error(`backend did not start:\n${output}`));
    }, 60_000);
    child.stdout!.on("data", (chunk: Buffer) => {
      output += chunk.toString();
      const match = output.match(/READY (http:\/\/[\d.:]+)/);
      if (match) {
        clearTimeout(timer);
        resolve({ baseUrl: match[1], stop: () => child.kill() });
      }
    });
    child.stderr!.on("data", (chunk: Buffer) => {
      output += chunk.toString();
    });
    child.on("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`backend exited early (${code}):\n${output}`));
    });
  });
}

export const ADMIN_EMAIL = "admin@academy.example";
export const ADMIN_PASSWORD = "uiadminpass77";

/** Poll until the predicate returns a truthy value. */
export async function waitFor<T>(
  predicate: () => T | null | undefined | false,
  what: string,
  timeoutMs = 10_000,
): Promise<T> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const value = predicate();
    if (value) return value;
    if (Date.now() > deadline) {
      throw new Error(`timed out waiting for ${what}\n---\n`
        + document.body.textContent?.slice(0, 2000));
    }
    await new Promise((tick) => setTimeout(tick, 15));
  }
}

export function fill(input: HTMLInputElement | HTMLTextAreaElement, value: string): void {
  input.value = value;
  input.dispatchEvent(new window.Event("input", { bubbles: true }));
}

export function choose(select: HTMLSelectElement, value: string): void {
  select.value = value;
  select.dispatchEvent(new window.Event("change", { bubbles: true }));
}

export function submit(form: HTMLFormElement): void {
  form.dispatchEvent(new window.Event("submit", { bubbles: true, cancelable: true }));
}

export function findButton(root: ParentNode, label: string): HTMLButtonElement {
  const button = [...root.querySelectorAll("button")]
    .find((b) => b.textContent?.trim() === label);
  if (!button) throw new Error(`no button labelled ${label}`);
  return button as HTMLButtonElement;
}

export function placeholderInput(root: ParentNode, placeholder: string): HTMLInputElement {
  const node = root.querySelector(`input[placeholder="${placeholder}"], textarea[placeholder="${placeholder}"]`);
  if (!node) throw new Error(`no input with placeholder ${placeholder}`);
  return node as HTMLInputElement;
}

export function bodyText(): string {
  return document.body.textContent ?? "";
}
