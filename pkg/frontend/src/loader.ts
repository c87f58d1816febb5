/** Artifact bundle loading with per-file degradation: a failed fetch makes
 * that artifact null (its panel degrades to a placeholder); it never takes
 * the page down. */

import { Manifest, SUPPORTED_SCHEMA_VERSIONS } from "./types.js";

export type FetchJson = (url: string) => Promise<unknown>;

export const ARTIFACT_NAMES = [
  "dataset_stats",
  "misinfo_stats",
  "volume_by_category",
  "source_breakdown",
  "relative_volume",
  "narratives",
  "sentiment_country_day",
  "policy_sentiment",
  "topics",
  "trends_global",
  "trends_by_country",
  "geo_activity",
] as const;

export type ArtifactName = (typeof ARTIFACT_NAMES)[number];

export interface Bundle {
  baseUrl: string;
  manifest: Manifest;
  versionSupported: boolean;
  artifacts: Partial<Record<ArtifactName, unknown>>;
  dailyFiles: string[];
  cascadeFiles: string[];
}

export function defaultFetchJson(url: string): Promise<unknown> {
  return fetch(url).then((resp) => {
    if (!resp.ok) {
      throw new Error(`${resp.status} for ${url}`);
    }
    return resp.json();
  });
}

function dirname(url: string): string {
  const i = url.lastIndexOf("/");
  return i === -1 ? "." : url.slice(0, i);
}

export async function loadBundle(
  manifestUrl: string,
  fetchJson: FetchJson = defaultFetchJson,
): Promise<Bundle> {
  const manifest = (await fetchJson(manifestUrl)) as Manifest;
  const baseUrl = dirname(manifestUrl);
  const bundle: Bundle = {
    baseUrl,
    manifest,
    versionSupported: SUPPORTED_SCHEMA_VERSIONS.includes(manifest.schema_version),
    artifacts: {},
    dailyFiles: manifest.directories?.misinfo_daily?.files ?? [],
    cascadeFiles: manifest.directories?.cascades?.files ?? [],
  };
  await Promise.all(
    ARTIFACT_NAMES.map(async (name) => {
      const entry = manifest.files?.[name];
      if (!entry) {
        bundle.artifacts[name] = null;
        return;
      }
      try {
        bundle.artifacts[name] = await fetchJson(`${baseUrl}/${entry.path}`);
      } catch {
        bundle.artifacts[name] = null;
      }
    }),
  );
  return bundle;
}

export async function loadDaily(
  bundle: Bundle,
  fname: string,
  fetchJson: FetchJson = defaultFetchJson,
): Promise<unknown | null> {
  const dir = bundle.manifest.directories.misinfo_daily.path;
  try {
    return await fetchJson(`${bundle.baseUrl}/${dir}/${fname}`);
  } catch {
    return null;
  }
}

export async function loadCascade(
  bundle: Bundle,
  fname: string,
  fetchJson: FetchJson = defaultFetchJson,
): Promise<unknown | null> {
  const dir = bundle.manifest.directories.cascades.path;
  try {
    return await fetchJson(`${bundle.baseUrl}/${dir}/${fname}`);
  } catch {
    return null;
  }
}
