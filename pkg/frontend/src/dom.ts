/** DOM builders. Every piece of dynamic text enters the document through
 * textContent (never innerHTML), which is what keeps stored payloads inert. */

type Child = Node | string | null | undefined;

export interface Attrs {
  className?: string;
  id?: string;
  type?: string;
  value?: string;
  placeholder?: string;
  name?: string;
  href?: string;
  title?: string;
  required?: boolean;
  checked?: boolean;
  disabled?: boolean;
  rows?: number;
  onclick?: (event: MouseEvent) => void;
  onsubmit?: (event: SubmitEvent) => void;
  oninput?: (event: Event) => void;
  onchange?: (event: Event) => void;
  dataset?: Record<string, string>;
}

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Attrs = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  const { dataset, ...rest } = attrs;
  for (const [key, value] of Object.entries(rest)) {
    if (value === undefined || value === null) continue;
    if (key.startsWith("on") && typeof value === "function") {
      node.addEventListener(key.slice(2), value as EventListener);
    } else if (key === "className") {
      node.className = value as string;
    } else {
      (node as unknown as Record<string, unknown>)[key] = value;
    }
  }
  if (dataset) {
    for (const [key, value] of Object.entries(dataset)) {
      node.dataset[key] = value;
    }
  }
  for (const child of children) {
    if (child === null || child === undefined) continue;
    node.append(typeof child === "string" ? document.createTextNode(child) : child);
  }
  return node;
}

export function clear(node: HTMLElement): HTMLElement {
  node.replaceChildren();
  return node;
}

/** Fig 4.10-style data table with an optional client-side filter box. */
export function dataTable(
  headers: string[],
  rows: Child[][],
  options: { filter?: boolean; emptyText?: string } = {},
): HTMLElement {
  const body = el("tbody");
  const allRows: HTMLTableRowElement[] = rows.map((cells) =>
    el("tr", {}, ...cells.map((cell) => el("td", {}, cell))),
  );

  const renderRows = (needle: string) => {
    body.replaceChildren();
    const lowered = needle.trim().toLowerCase();
    let visible = 0;
    for (const row of allRows) {
      if (!lowered || row.textContent!.toLowerCase().includes(lowered)) {
        body.append(row);
        visible += 1;
      }
    }
    if (visible === 0) {
      body.append(el("tr", {}, el("td", { className: "empty" },
        options.emptyText ?? "nothing to show")));
    }
  };
  renderRows("");

  const table = el("table", { className: "data-table" },
    el("thead", {}, el("tr", {}, ...headers.map((h) => el("th", {}, h)))),
    body,
  );
  if (!options.filter) return el("div", { className: "table-wrap" }, table);

  const box = el("input", {
    type: "search",
    placeholder: "Search:",
    className: "table-filter",
    oninput: () => renderRows(box.value),
  });
  return el("div", { className: "table-wrap" }, box, table);
}

export type BannerKind = "info" | "error" | "success" | "warning";

export function banner(kind: BannerKind, text: string): HTMLElement {
  return el("div", { className: `banner banner-${kind}` }, text);
}

export function field(labelText: string, input: HTMLElement): HTMLElement {
  return el("label", { className: "field" },
    el("span", { className: "field-label" }, labelText), input);
}

export function textInput(attrs: Attrs = {}): HTMLInputElement {
  return el("input", { type: "text", ...attrs });
}

export function section(titleText: string, ...children: Child[]): HTMLElement {
  return el("section", { className: "card" },
    el("h2", {}, titleText), ...children);
}
