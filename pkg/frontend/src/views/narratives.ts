/** Narratives view: per-category hashtag TF-IDF tables plus the strict
 * distinctive lists. */

import { escapeHtml, num, panel, placeholderPanel, table } from "../html.js";
import { CATEGORY_LABELS, CATEGORY_ORDER, NarrativeRow, Narratives } from "../types.js";

export function renderNarrativesView(narratives: Narratives | null): string {
  if (!narratives) {
    return `<section class="view" id="view-narratives">${placeholderPanel("narratives")}</section>`;
  }
  const columns = CATEGORY_ORDER.map((cat) => {
    const rows = (narratives[cat] as NarrativeRow[] | undefined) ?? [];
    const body = rows.length
      ? table(["Hashtag", "tf", "idf", "score"],
        rows.map((r) => [escapeHtml(r.hashtag), num(r.tf), num(r.idf), num(r.score)]))
      : "<p class=\"empty\">no hashtags</p>";
    return `<div class="narrative-col"><h4>${escapeHtml(CATEGORY_LABELS[cat] ?? cat)}</h4>${body}</div>`;
  }).join("\n");

  const distinctive = narratives["distinctive"] as Record<string, string[]> | undefined;
  const distinctiveBody = distinctive
    ? table(["Category", "Distinctive hashtags"],
      CATEGORY_ORDER.map((cat) => [
        escapeHtml(CATEGORY_LABELS[cat] ?? cat),
        (distinctive[cat] ?? []).map(escapeHtml).join(", "),
      ]))
    : "<p class=\"empty\">not exported</p>";

  return `<section class="view" id="view-narratives">
    ${panel("Top hashtags per misinformation category (TF-IDF)",
      `<div class="narrative-grid">${columns}</div>`)}
    ${panel("Distinctive hashtags (absent from other categories' top lists)",
      distinctiveBody)}
  </section>`;
}
