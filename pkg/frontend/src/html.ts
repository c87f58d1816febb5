/** Tiny string-template helpers; every view renders to plain markup. */

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/** Displayed numerics come straight from the artifact JSON: no rounding,
 * no client-side recomputation. */
export function num(value: number): string {
  return escapeHtml(String(value));
}

export function placeholderPanel(name: string): string {
  return `<div class="panel placeholder" data-missing="${escapeHtml(name)}">
    <h3>${escapeHtml(name)}</h3>
    <p>artifact unavailable</p>
  </div>`;
}

export function panel(title: string, body: string, cls = ""): string {
  return `<div class="panel ${cls}">
    <h3>${escapeHtml(title)}</h3>
    ${body}
  </div>`;
}

export function table(headers: string[], rows: string[][], cls = ""): string {
  const head = headers.map((h) => `<th>${escapeHtml(h)}</th>`).join("");
  const body = rows
    .map((cells) => `<tr>${cells.map((c) => `<td>${c}</td>`).join("")}</tr>`)
    .join("\n");
  return `<table class="data ${cls}"><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>`;
}

export function select(id: string, options: string[], selected: string): string {
  const opts = options
    .map((o) => {
      const sel = o === selected ? " selected" : "";
      return `<option value="${escapeHtml(o)}"${sel}>${escapeHtml(o)}</option>`;
    })
    .join("");
  return `<select id="${escapeHtml(id)}">${opts}</select>`;
}

export function versionBanner(found: string, supported: string[]): string {
  return `<div class="banner error" id="version-banner">
    Incompatible artifact bundle: manifest schema_version ${escapeHtml(found)}
    is not supported (supported: ${supported.map(escapeHtml).join(", ")}).
  </div>`;
}
