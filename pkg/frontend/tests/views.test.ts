/** Every view renders from the committed exporter output; spot-checked
 * display numbers must appear verbatim (no client-side recomputation). */

import { describe, expect, it } from "vitest";

import { initialViewState, renderHeader, renderNav, renderView, VIEWS, ViewId } from "../src/app.js";
import { Bundle } from "../src/loader.js";
import {
  CascadeFile, GeoActivity, MisinfoDailyRow, MisinfoStats, NarrativeRow,
  Narratives, PolicySentiment, RelativeVolume, SentimentRow, SourceCount,
  Topics, TrendSeries,
} from "../src/types.js";
import { fixtureBundle, fixtureJson, fsFetch } from "./helpers.js";
import { loadCascade, loadDaily } from "../src/loader.js";

async function fullState(bundle: Bundle) {
  const state = initialViewState(bundle);
  state.dailyRows = (await loadDaily(bundle, state.selectedDay, fsFetch())) as
    MisinfoDailyRow[];
  state.cascade = (await loadCascade(bundle, state.selectedCascade, fsFetch())) as
    CascadeFile;
  return state;
}

describe("all seven views", () => {
  it("render from the fixture bundle without placeholders", async () => {
    const bundle = await fixtureBundle();
    const state = await fullState(bundle);
    for (const [id] of VIEWS) {
      const html = renderView(id as ViewId, bundle, state);
      expect(html, id).toContain(`id="view-${id}"`);
      expect(html, id).not.toContain("artifact unavailable");
      expect(html.length, id).toBeGreaterThan(200);
    }
    const nav = renderNav("misinformation");
    for (const [id, label] of VIEWS) {
      expect(nav).toContain(`#${id}`);
      expect(nav).toContain(label);
    }
  });

  it("header shows corpus range and no version banner for 1.0", async () => {
    const bundle = await fixtureBundle();
    const header = renderHeader(bundle);
    expect(header).toContain(bundle.manifest.corpus_range.start as string);
    expect(header).not.toContain("Incompatible artifact bundle");
  });
});

describe("display fidelity (rendered numerics equal the JSON values)", () => {
  it("spot-checks ten values across views", async () => {
    const bundle = await fixtureBundle();
    const state = await fullState(bundle);
    const checks: Array<[ViewId, string]> = [];

    const stats = (await fixtureJson("misinfo_stats.json")) as MisinfoStats;
    checks.push(["misinformation", String(stats.misinfo.n_source_tweets)]);   // 1
    checks.push(["misinformation", String(stats.misinfo.fraction)]);          // 2

    const breakdown = (await fixtureJson("source_breakdown.json")) as SourceCount[];
    checks.push(["misinformation", String(breakdown[0].count)]);              // 3

    const relative = (await fixtureJson("relative_volume.json")) as RelativeVolume;
    checks.push(["misinformation", String(relative.others.response_ratio)]);  // 4

    const daily = state.dailyRows as MisinfoDailyRow[];
    checks.push(["misinformation", String(daily[0].cascade_size)]);           // 5

    const narratives = (await fixtureJson("narratives.json")) as Narratives;
    const row = (narratives.unreliable as NarrativeRow[])[0];
    checks.push(["narratives", String(row.score)]);                           // 6

    const sentiment = (await fixtureJson("sentiment_country_day.json")) as SentimentRow[];
    const last = sentiment[sentiment.length - 1];
    checks.push(["sentiment", String(last.mean_compound)]);                   // 7

    const topics = (await fixtureJson("topics.json")) as Topics;
    checks.push(["topics", String(topics.clusters[0].size)]);                 // 8

    const trends = (await fixtureJson("trends_global.json")) as TrendSeries[];
    checks.push(["trends", String(trends[0].slope)]);                         // 9

    const cascade = state.cascade as CascadeFile;
    checks.push(["spread", String(cascade.depth)]);                           // 10

    const geo = (await fixtureJson("geo_activity.json")) as GeoActivity;
    const firstCountry = Object.keys(geo).sort()[0];
    checks.push(["geoactivity", geo[firstCountry].peak_day]);                 // 11

    expect(checks.length).toBeGreaterThanOrEqual(10);
    for (const [view, value] of checks) {
      const html = renderView(view, bundle, state);
      expect(html, `${view} should display ${value}`).toContain(value);
    }
  });

  it("policy panel shows top tweet compounds verbatim", async () => {
    const bundle = await fixtureBundle();
    const state = await fullState(bundle);
    const policy = (await fixtureJson("policy_sentiment.json")) as PolicySentiment;
    const html = renderView("sentiment", bundle, state);
    for (const key of Object.keys(policy)) {
      const top = policy[key].top_positive[0];
      if (top) expect(html).toContain(String(top.compound));
    }
  });
});

describe("degradation", () => {
  it("missing trends artifact shows a placeholder, other views unaffected", async () => {
    const bundle = await fixtureBundle({ fail: /trends_global/ });
    const state = await fullState(bundle);
    const trends = renderView("trends", bundle, state);
    expect(trends).toContain("artifact unavailable");
    expect(trends).toContain("trends_global");
    // per-country panel still renders
    expect(trends).toContain("country-select");
    const narr = renderView("narratives", bundle, state);
    expect(narr).not.toContain("artifact unavailable");
  });

  it("every view degrades to a placeholder with an all-null bundle", async () => {
    const bundle = await fixtureBundle();
    for (const name of Object.keys(bundle.artifacts)) {
      (bundle.artifacts as Record<string, unknown>)[name] = null;
    }
    const state = initialViewState(bundle);
    for (const [id] of VIEWS) {
      const html = renderView(id as ViewId, bundle, state);
      expect(html, id).toContain(`id="view-${id}"`);   // never a blank page
      if (id !== "spread") {
        expect(html, id).toContain("artifact unavailable");
      }
    }
  });

  it("unsupported manifest version renders the incompatibility banner", async () => {
    const bundle = await fixtureBundle();
    bundle.manifest.schema_version = "99.0";
    bundle.versionSupported = false;
    const header = renderHeader(bundle);
    expect(header).toContain("Incompatible artifact bundle");
    expect(header).toContain("99.0");
  });
});
