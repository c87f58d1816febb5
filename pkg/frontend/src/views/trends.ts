/** Trends view: top emerging hashtags globally (line chart + slope table)
 * and per-country top lists. */

import { escapeHtml, num, panel, placeholderPanel, select, table } from "../html.js";
import { colorFor, lineChart } from "../svg.js";
import { TrendSeries, TrendsByCountry } from "../types.js";

function seriesChart(series: TrendSeries[], maxLines: number): string {
  const lines = series.slice(0, maxLines).map((s, i) => ({
    label: `#${s.key}`,
    color: colorFor(i),
    values: s.counts,
  }));
  return lineChart(lines, {
    xLabels: series[0] ? [series[0].start_day, ""] : [],
    height: 260,
  });
}

function slopeTable(series: TrendSeries[]): string {
  const slopeUnit = series[0]?.normalized ? "rate/day" : "counts/day";
  return table(["Hashtag", `Slope (${slopeUnit})`, "Total"],
    series.map((s) => [escapeHtml("#" + s.key), num(s.slope), num(s.total)]));
}

export function renderGlobalTrends(series: TrendSeries[] | null): string {
  if (!series) return placeholderPanel("trends_global");
  if (series.length === 0) {
    return panel("Top emerging hashtags",
      "<p class=\"empty\">window too short for trend fitting</p>");
  }
  return panel(`Top-${series.length} emerging hashtags (slope of daily usage)`,
    seriesChart(series, 8) + slopeTable(series));
}

export function renderCountryTrends(
  byCountry: TrendsByCountry | null, selected: string,
): string {
  if (!byCountry) return placeholderPanel("trends_by_country");
  const countries = Object.keys(byCountry).sort();
  if (countries.length === 0) {
    return panel("Emerging hashtags by country",
      "<p class=\"empty\">no geo-resolved tweets in the trailing window</p>");
  }
  const country = countries.includes(selected) ? selected : countries[0];
  const picker = `<label>Country ${select("country-select", countries, country)}</label>`;
  const series = byCountry[country];
  return panel("Emerging hashtags by country (trailing window)",
    picker + seriesChart(series, 6) + slopeTable(series));
}

export function renderTrendsView(args: {
  global: TrendSeries[] | null;
  byCountry: TrendsByCountry | null;
  selectedCountry: string;
}): string {
  return `<section class="view" id="view-trends">
    ${renderGlobalTrends(args.global)}
    ${renderCountryTrends(args.byCountry, args.selectedCountry)}
  </section>`;
}
