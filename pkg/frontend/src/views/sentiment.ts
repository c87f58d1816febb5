/** Sentiment view: country/day aggregate chart plus the policy-hashtag
 * panels (work from home, social distancing). */

import { escapeHtml, num, panel, placeholderPanel, table } from "../html.js";
import { colorFor, lineChart } from "../svg.js";
import { PolicySentiment, SentimentRow } from "../types.js";

const PANEL_TITLES: Record<string, string> = {
  work_from_home: "Work from home",
  social_distancing: "Social distancing",
};

export function topCountries(rows: SentimentRow[], k = 6): string[] {
  const totals = new Map<string, number>();
  for (const row of rows) {
    if (!row.country) continue;
    totals.set(row.country, (totals.get(row.country) ?? 0) + row.n);
  }
  return [...totals.entries()]
    .sort((a, b) => b[1] - a[1] || (a[0] < b[0] ? -1 : 1))
    .slice(0, k)
    .map(([c]) => c);
}

export function renderCountryDay(rows: SentimentRow[] | null): string {
  if (!rows) return placeholderPanel("sentiment_country_day");
  if (rows.length === 0) {
    return panel("Country-wise sentiment", "<p class=\"empty\">no scored tweets</p>");
  }
  const days = [...new Set(rows.map((r) => r.day ?? ""))].sort();
  const dayIndex = new Map(days.map((d, i) => [d, i]));
  const countries = topCountries(rows);
  const series = countries.map((country, ci) => {
    const values = new Array(days.length).fill(0);
    for (const row of rows) {
      if (row.country === country && row.day) {
        values[dayIndex.get(row.day)!] = row.mean_compound;
      }
    }
    return { label: country, color: colorFor(ci), values };
  });
  const chart = lineChart(series, { xLabels: days });
  const latest = rows.slice(-12);
  const tail = table(
    ["Country", "Day", "n", "Mean compound", "% pos", "% neg", "% neu"],
    latest.map((r) => [
      escapeHtml(r.country ?? ""), escapeHtml(r.day ?? ""), num(r.n),
      num(r.mean_compound), num(r.pct_pos), num(r.pct_neg), num(r.pct_neu),
    ]),
  );
  return panel("Country-wise mean sentiment per day (top countries by volume)",
    chart + tail);
}

function tweetTable(rows: { tweet_id: string; text: string; compound: number }[]): string {
  if (rows.length === 0) return "<p class=\"empty\">none</p>";
  return table(["Tweet", "Compound"],
    rows.map((r) => [escapeHtml(r.text), num(r.compound)]));
}

export function renderPolicyPanels(policy: PolicySentiment | null): string {
  if (!policy) return placeholderPanel("policy_sentiment");
  const blocks = Object.keys(policy).sort().map((key) => {
    const p = policy[key];
    const title = PANEL_TITLES[key] ?? key;
    const chart = p.distribution.length
      ? lineChart([{
          label: "mean compound",
          color: "#2ca02c",
          values: p.distribution.map((r) => r.mean_compound),
        }], { xLabels: p.distribution.map((r) => r.day ?? "") })
      : "<p class=\"empty\">no matching tweets</p>";
    return panel(`${title} (${p.tags.map((t) => "#" + t).join(", ")})`,
      chart
      + `<h4>Most positive</h4>` + tweetTable(p.top_positive)
      + `<h4>Most negative</h4>` + tweetTable(p.top_negative),
      "policy");
  });
  return blocks.join("\n");
}

export function renderSentimentView(args: {
  countryDay: SentimentRow[] | null;
  policy: PolicySentiment | null;
}): string {
  return `<section class="view" id="view-sentiment">
    ${renderCountryDay(args.countryDay)}
    ${renderPolicyPanels(args.policy)}
  </section>`;
}
