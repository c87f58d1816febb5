/** Spread view: one cascade's geo trace on a lat/lon plane. The source
 * point is blue; responses are red with opacity tracking their position on
 * the cascade's time scale. */

import { escapeHtml, num, panel, placeholderPanel, select } from "../html.js";
import { MapPoint, mapPlot } from "../svg.js";
import { CascadeFile, CATEGORY_LABELS } from "../types.js";

export function tracePoints(cascade: CascadeFile): MapPoint[] {
  const times = cascade.trace.map((p) => Date.parse(p.t));
  const tMin = Math.min(...times);
  const tMax = Math.max(...times);
  const span = tMax - tMin;
  return cascade.trace.map((p, i) => ({
    lat: p.lat,
    lon: p.lon,
    kind: p.kind,
    timeFrac: span > 0 ? (times[i] - tMin) / span : 0,
  }));
}

export function renderCascadePanel(
  cascade: CascadeFile | null, baseLayer?: string,
): string {
  if (!cascade) return placeholderPanel("cascade");
  const categories = cascade.categories.length
    ? cascade.categories.map((c) => escapeHtml(CATEGORY_LABELS[c] ?? c)).join(", ")
    : "Others";
  const meta = `<p class="cascade-meta">
    root <code>${escapeHtml(cascade.root_id)}</code>
    &middot; size <span class="v">${num(cascade.size)}</span>
    &middot; depth <span class="v">${num(cascade.depth)}</span>
    &middot; categories: ${categories}
    ${cascade.matched_domains.length
      ? `&middot; links: ${cascade.matched_domains.map(escapeHtml).join(", ")}`
      : ""}
  </p>`;
  const map = cascade.trace.length
    ? mapPlot(tracePoints(cascade), { baseLayer })
    : "<p class=\"empty\">no geo-resolved members in this cascade</p>";
  const legend = `<p class="legend">
    <span class="swatch" style="background:#1f77b4"></span> Source tweet
    <span class="swatch" style="background:#d62728"></span> Retweets/Replies
    (intensity follows the time scale)
  </p>`;
  return meta + map + legend;
}

export function renderSpreadView(args: {
  cascadeFiles: string[];
  selected: string;
  cascade: CascadeFile | null;
  baseLayer?: string;
}): string {
  if (args.cascadeFiles.length === 0) {
    return `<section class="view" id="view-spread">
      ${panel("Misinformation spread", "<p class=\"empty\">no cascades exported</p>")}
    </section>`;
  }
  const picker = `<label>Cascade ${select("cascade-select", args.cascadeFiles, args.selected)}</label>`;
  return `<section class="view" id="view-spread">
    ${panel("Misinformation spread across countries",
      picker + renderCascadePanel(args.cascade, args.baseLayer))}
  </section>`;
}
