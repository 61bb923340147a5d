/** The escaping property: any user-controlled text rendered through the DOM
 * helpers ends up as inert text, never as parseable markup. */

import { describe, expect, it } from "vitest";

import { banner, dataTable, el } from "../src/dom.js";

const PAYLOADS = [
  "<script>alert(1)</script>",
  "<img src=x onerror=alert(1)>",
  '"><svg onload=alert(1)>',
  "</td></tr></table><script>alert(1)</script>",
  "javascript:alert(1)",
];

describe("DOM escaping", () => {
  it.each(PAYLOADS)("renders %s as literal text", (payload) => {
    document.body.replaceChildren(
      el("div", {}, payload),
      banner("info", payload),
      dataTable(["col"], [[payload]]),
    );
    expect(document.querySelectorAll("script")).toHaveLength(0);
    expect(document.querySelectorAll("svg, img")).toHaveLength(0);
    expect(document.body.textContent).toContain(payload);
  });

  it("keeps payloads inert inside table cells with filtering enabled", () => {
    const payload = PAYLOADS[0];
    document.body.replaceChildren(
      dataTable(["a", "b"], [[payload, "x"], ["y", payload]], { filter: true }),
    );
    expect(document.querySelectorAll("script")).toHaveLength(0);
    const cells = [...document.querySelectorAll("td")].map((td) => td.textContent);
    expect(cells).toContain(payload);
  });

  it("escapes attribute-breaking payloads in the filter box round trip", () => {
    const table = dataTable(["a"], [['"><script>alert(1)</script>']], { filter: true });
    document.body.replaceChildren(table);
    const box = document.querySelector("input.table-filter") as HTMLInputElement;
    box.value = '"><script>';
    box.dispatchEvent(new window.Event("input", { bubbles: true }));
    expect(document.querySelectorAll("script")).toHaveLength(0);
  });
});
