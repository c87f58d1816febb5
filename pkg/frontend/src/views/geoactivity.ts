/** Geo activity view: per-country daily tweet counts, day-over-day
 * increments, and each country's peak day. */

import { escapeHtml, num, panel, placeholderPanel, table } from "../html.js";
import { sparkline } from "../svg.js";
import { GeoActivity } from "../types.js";

export function renderGeoActivityView(activity: GeoActivity | null): string {
  if (!activity) {
    return `<section class="view" id="view-geoactivity">${placeholderPanel("geo_activity")}</section>`;
  }
  const countries = Object.keys(activity).sort(
    (a, b) => sum(activity[b].counts) - sum(activity[a].counts) || (a < b ? -1 : 1));
  if (countries.length === 0) {
    return `<section class="view" id="view-geoactivity">
      ${panel("Geo activity", "<p class=\"empty\">no geo-resolved tweets</p>")}
    </section>`;
  }
  const rows = countries.map((c) => {
    const a = activity[c];
    const lastIncrement = a.increments.length
      ? num(a.increments[a.increments.length - 1])
      : "";
    return [
      escapeHtml(c),
      num(sum(a.counts)),
      sparkline(a.counts),
      lastIncrement,
      escapeHtml(a.peak_day),
    ];
  });
  return `<section class="view" id="view-geoactivity">
    ${panel("Daily tweet counts by country",
      table(["Country", "Total", "Daily counts", "Latest increment", "Peak day"], rows))}
  </section>`;
}

function sum(values: number[]): number {
  return values.reduce((a, b) => a + b, 0);
}
