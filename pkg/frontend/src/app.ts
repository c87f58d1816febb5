/** Dashboard shell: loads the artifact bundle once, then renders the view
 * picked in the hash route. Read-only; artifact fetch failures degrade to
 * placeholder panels. */

import { escapeHtml, versionBanner } from "./html.js";
import { Bundle, loadBundle, loadCascade, loadDaily } from "./loader.js";
import {
  CascadeFile, DashboardConfig, GeoActivity, MisinfoDailyRow, MisinfoStats,
  Narratives, PolicySentiment, RelativeVolume, SentimentRow, SourceCount,
  SUPPORTED_SCHEMA_VERSIONS, Topics, TrendSeries, TrendsByCountry, VolumeSeries,
} from "./types.js";
import { renderGeoActivityView } from "./views/geoactivity.js";
import { renderMisinformationView } from "./views/misinformation.js";
import { renderNarrativesView } from "./views/narratives.js";
import { renderSentimentView } from "./views/sentiment.js";
import { renderSpreadView } from "./views/spread.js";
import { renderTopicsView } from "./views/topics.js";
import { renderTrendsView } from "./views/trends.js";

export const VIEWS = [
  ["misinformation", "Misinformation"],
  ["narratives", "Narratives"],
  ["spread", "Spread"],
  ["sentiment", "Sentiment"],
  ["topics", "Topics"],
  ["trends", "Trends"],
  ["geoactivity", "Geo activity"],
] as const;

export type ViewId = (typeof VIEWS)[number][0];

export const DEFAULT_CONFIG: DashboardConfig = {
  manifestUrl: "artifacts/manifest.json",
  defaultView: "misinformation",
  mapTiles: "none",
};

export interface ViewState {
  selectedDay: string;
  dailyRows: MisinfoDailyRow[] | null;
  selectedCascade: string;
  cascade: CascadeFile | null;
  selectedCountry: string;
  /** pre-rendered GeoJSON outlines when map_tiles = static-geojson */
  mapBaseLayer?: string;
}

export function initialViewState(bundle: Bundle): ViewState {
  return {
    selectedDay: bundle.dailyFiles[0] ?? "",
    dailyRows: null,
    selectedCascade: bundle.cascadeFiles[0] ?? "",
    cascade: null,
    selectedCountry: "",
  };
}

export function renderView(view: ViewId, bundle: Bundle, state: ViewState): string {
  const a = bundle.artifacts;
  switch (view) {
    case "misinformation":
      return renderMisinformationView({
        stats: a.misinfo_stats as MisinfoStats | null,
        volume: a.volume_by_category as VolumeSeries[] | null,
        relative: a.relative_volume as RelativeVolume | null,
        breakdown: a.source_breakdown as SourceCount[] | null,
        dailyFiles: bundle.dailyFiles,
        selectedDay: state.selectedDay,
        dailyRows: state.dailyRows,
      });
    case "narratives":
      return renderNarrativesView(a.narratives as Narratives | null);
    case "spread":
      return renderSpreadView({
        cascadeFiles: bundle.cascadeFiles,
        selected: state.selectedCascade,
        cascade: state.cascade,
        baseLayer: state.mapBaseLayer,
      });
    case "sentiment":
      return renderSentimentView({
        countryDay: a.sentiment_country_day as SentimentRow[] | null,
        policy: a.policy_sentiment as PolicySentiment | null,
      });
    case "topics":
      return renderTopicsView(a.topics as Topics | null);
    case "trends":
      return renderTrendsView({
        global: a.trends_global as TrendSeries[] | null,
        byCountry: a.trends_by_country as TrendsByCountry | null,
        selectedCountry: state.selectedCountry,
      });
    case "geoactivity":
      return renderGeoActivityView(a.geo_activity as GeoActivity | null);
  }
}

export function renderNav(active: ViewId): string {
  return `<nav>${VIEWS.map(([id, label]) =>
    `<a href="#${id}" class="${id === active ? "active" : ""}">${escapeHtml(label)}</a>`,
  ).join("")}</nav>`;
}

export function renderHeader(bundle: Bundle): string {
  const range = bundle.manifest.corpus_range;
  const banner = bundle.versionSupported
    ? ""
    : versionBanner(bundle.manifest.schema_version, SUPPORTED_SCHEMA_VERSIONS);
  return `${banner}<header>
    <h1>Tweet corpus dashboard</h1>
    <p class="muted">corpus ${escapeHtml(range.start ?? "?")} to ${escapeHtml(range.end ?? "?")}
    &middot; generated ${escapeHtml(bundle.manifest.generated_at)}</p>
  </header>`;
}

function currentView(cfg: DashboardConfig): ViewId {
  const hash = window.location.hash.replace("#", "");
  const known = VIEWS.map(([id]) => id) as readonly string[];
  if (known.includes(hash)) return hash as ViewId;
  return (known.includes(cfg.defaultView) ? cfg.defaultView : "misinformation") as ViewId;
}

function readConfig(): DashboardConfig {
  const override = (window as unknown as { TWEETSCOPE_CONFIG?: Partial<DashboardConfig> })
    .TWEETSCOPE_CONFIG ?? {};
  const params = new URLSearchParams(window.location.search);
  const manifestParam = params.get("manifest");
  return {
    ...DEFAULT_CONFIG,
    ...override,
    ...(manifestParam ? { manifestUrl: manifestParam } : {}),
  };
}

export async function bootstrap(root: HTMLElement): Promise<void> {
  const cfg = readConfig();
  let bundle: Bundle;
  try {
    bundle = await loadBundle(cfg.manifestUrl);
  } catch (err) {
    root.innerHTML = `<div class="banner error">Cannot load manifest at
      <code>${escapeHtml(cfg.manifestUrl)}</code>: ${escapeHtml(String(err))}.
      Run the pipeline export first, then serve its artifacts directory.</div>`;
    return;
  }
  const state = initialViewState(bundle);
  if (cfg.mapTiles === "static-geojson" && cfg.geojsonUrl) {
    try {
      const { geoJsonPaths } = await import("./svg.js");
      const geojson = await (await fetch(cfg.geojsonUrl)).json();
      state.mapBaseLayer = geoJsonPaths(geojson);
    } catch {
      state.mapBaseLayer = undefined;   // degrade to the graticule-only map
    }
  }

  async function refreshState(view: ViewId): Promise<void> {
    if (view === "misinformation" && state.selectedDay && !state.dailyRows) {
      state.dailyRows = (await loadDaily(bundle, state.selectedDay)) as
        MisinfoDailyRow[] | null;
    }
    if (view === "spread" && state.selectedCascade && !state.cascade) {
      state.cascade = (await loadCascade(bundle, state.selectedCascade)) as
        CascadeFile | null;
    }
  }

  async function draw(): Promise<void> {
    const view = currentView(cfg);
    await refreshState(view);
    root.innerHTML = renderHeader(bundle) + renderNav(view)
      + `<main>${renderView(view, bundle, state)}</main>`;
  }

  root.addEventListener("change", async (event) => {
    const target = event.target as HTMLSelectElement;
    if (target.id === "day-select") {
      state.selectedDay = target.value;
      state.dailyRows = null;
      await draw();
    } else if (target.id === "cascade-select") {
      state.selectedCascade = target.value;
      state.cascade = null;
      await draw();
    } else if (target.id === "country-select") {
      state.selectedCountry = target.value;
      await draw();
    }
  });
  window.addEventListener("hashchange", () => { void draw(); });
  await draw();
}

// Browser entry point; tests import the pure pieces instead.
if (typeof document !== "undefined" && document.getElementById("app")) {
  void bootstrap(document.getElementById("app") as HTMLElement);
}
