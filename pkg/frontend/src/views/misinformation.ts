/** Misinformation view: daily list, per-category volume over time, source
 * vs response volume, and the most-linked low-credibility sources. */

import { escapeHtml, num, panel, placeholderPanel, select, table } from "../html.js";
import { barChart, lineChart } from "../svg.js";
import {
  CATEGORY_COLORS, CATEGORY_LABELS, CATEGORY_ORDER,
  MisinfoDailyRow, MisinfoStats, RelativeVolume, SourceCount, VolumeSeries,
} from "../types.js";

export function renderMisinfoStats(stats: MisinfoStats | null): string {
  if (!stats) return placeholderPanel("misinfo_stats");
  const m = stats.misinfo;
  const rows = [
    ["Source tweets", num(m.n_source_tweets)],
    ["Source tweets with URLs", num(m.n_source_with_urls)],
    ["Misinformation source tweets", num(m.n_misinfo_source)],
    ["Fraction of URL-bearing sources", num(m.fraction)],
    ["Graph edges (retweet/reply links)", num(stats.graph.edge_count)],
  ];
  return panel("Misinformation source tweets", table(["", ""], rows), "stats");
}

export function renderVolumeChart(volume: VolumeSeries[] | null): string {
  if (!volume) return placeholderPanel("volume_by_category");
  const series = volume.map((s) => ({
    label: CATEGORY_LABELS[s.category] ?? s.category,
    color: CATEGORY_COLORS[s.category] ?? "#333",
    values: s.points.map((p) => p.count),
  }));
  const days = volume[0]?.points.map((p) => p.day) ?? [];
  return panel("Volume of misinformation source tweets by type per day",
    lineChart(series, { xLabels: days }));
}

export function renderRelativeVolume(relative: RelativeVolume | null): string {
  if (!relative) return placeholderPanel("relative_volume");
  const items: { label: string; value: number; color?: string }[] = [];
  for (const cat of [...CATEGORY_ORDER, "others"]) {
    const entry = relative[cat];
    if (!entry) continue;
    const label = CATEGORY_LABELS[cat] ?? cat;
    items.push({ label: `${label} sources`, value: entry.n_sources,
                 color: CATEGORY_COLORS[cat] });
    items.push({ label: `${label} responses`, value: entry.n_responses,
                 color: "#aab4c0" });
  }
  const ratios = table(
    ["Category", "Sources", "Responses", "Response ratio"],
    [...CATEGORY_ORDER, "others"].filter((c) => relative[c]).map((c) => [
      escapeHtml(CATEGORY_LABELS[c] ?? c),
      num(relative[c].n_sources),
      num(relative[c].n_responses),
      num(relative[c].response_ratio),
    ]),
  );
  return panel("Relative volume of source tweets to responses",
    barChart(items) + ratios);
}

export function renderSourceBreakdown(breakdown: SourceCount[] | null): string {
  if (!breakdown) return placeholderPanel("source_breakdown");
  if (breakdown.length === 0) {
    return panel("Most-linked low-credibility sources",
      "<p class=\"empty\">no catalog-linked sources in this corpus</p>");
  }
  return panel("Most-linked low-credibility sources",
    barChart(breakdown.map((d) => ({ label: d.domain, value: d.count }))));
}

export function renderDailyList(
  files: string[], selected: string, rows: MisinfoDailyRow[] | null,
): string {
  if (files.length === 0) {
    return panel("Daily misinformation list",
      "<p class=\"empty\">no misinformation days in this corpus</p>");
  }
  const picker = `<label>Day ${select("day-select", files, selected)}</label>`;
  if (!rows) return panel("Daily misinformation list",
    picker + placeholderPanel(`misinfo_daily/${selected}`));
  const body = table(
    ["Tweet id", "Text", "Categories", "Matched domain", "Cascade size"],
    rows.map((r) => [
      escapeHtml(r.tweet_id),
      escapeHtml(r.text),
      r.categories.map((c) => escapeHtml(CATEGORY_LABELS[c] ?? c)).join(", "),
      escapeHtml(r.matched_domain ?? ""),
      num(r.cascade_size),
    ]),
    "daily",
  );
  return panel("Daily misinformation list", picker + body);
}

export function renderMisinformationView(args: {
  stats: MisinfoStats | null;
  volume: VolumeSeries[] | null;
  relative: RelativeVolume | null;
  breakdown: SourceCount[] | null;
  dailyFiles: string[];
  selectedDay: string;
  dailyRows: MisinfoDailyRow[] | null;
}): string {
  return `<section class="view" id="view-misinformation">
    ${renderMisinfoStats(args.stats)}
    ${renderDailyList(args.dailyFiles, args.selectedDay, args.dailyRows)}
    ${renderVolumeChart(args.volume)}
    ${renderRelativeVolume(args.relative)}
    ${renderSourceBreakdown(args.breakdown)}
  </section>`;
}
