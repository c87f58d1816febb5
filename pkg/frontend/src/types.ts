/** Artifact bundle schemas, mirroring the exporter's JSON exactly. */

export interface ManifestFileEntry {
  path: string;
  sha256: string;
  row_count: number;
}

export interface ManifestDirEntry {
  path: string;
  file_count: number;
  files: string[];
}

export interface Manifest {
  schema_version: string;
  generated_at: string;
  corpus_range: { start: string | null; end: string | null };
  files: Record<string, ManifestFileEntry>;
  directories: {
    misinfo_daily: ManifestDirEntry;
    cascades: ManifestDirEntry;
  };
}

export interface DatasetStats {
  n_tweets: number;
  pct_english: number;
  pct_geo_of_english: number;
  n_unique_users: number;
  pct_verified_users: number;
  per_country: Record<string, number>;
  per_us_state: Record<string, number>;
  empty_corpus: boolean;
}

export interface MisinfoStats {
  misinfo: {
    n_source_tweets: number;
    n_source_with_urls: number;
    n_misinfo_source: number;
    fraction: number;
  };
  graph: {
    node_count: number;
    edge_count: number;
    dangling_count: number;
    self_edge_count: number;
    time_inverted_count: number;
  };
}

export interface VolumePoint {
  day: string;
  count: number;
}

export interface VolumeSeries {
  category: string;
  points: VolumePoint[];
}

export interface SourceCount {
  domain: string;
  count: number;
}

export interface RelativeVolumeEntry {
  n_sources: number;
  n_responses: number;
  response_ratio: number;
  empty: boolean;
}

export type RelativeVolume = Record<string, RelativeVolumeEntry>;

export interface NarrativeRow {
  hashtag: string;
  tf: number;
  idf: number;
  score: number;
}

export type Narratives = Record<string, NarrativeRow[] | Record<string, string[]>>;

export interface SentimentRow {
  country?: string;
  day?: string;
  n: number;
  mean_compound: number;
  pct_pos: number;
  pct_neg: number;
  pct_neu: number;
}

export interface PolicyTweet {
  tweet_id: string;
  text: string;
  compound: number;
}

export interface PolicyPanel {
  tags: string[];
  distribution: SentimentRow[];
  top_positive: PolicyTweet[];
  top_negative: PolicyTweet[];
}

export type PolicySentiment = Record<string, PolicyPanel>;

export interface TopicWord {
  word: string;
  weight: number;
}

export interface TopicCluster {
  cluster: number;
  size: number;
  words: TopicWord[];
  representatives: { tweet_id: string; text: string }[];
}

export interface Topics {
  k: number;
  seed: number;
  sample_size: number;
  clusters: TopicCluster[];
  note?: string;
}

export interface TrendSeries {
  key: string;
  start_day: string;
  counts: number[];
  slope: number;
  intercept: number;
  total: number;
  /** slope fitted on per-day usage rates rather than raw counts */
  normalized?: boolean;
}

export type TrendsByCountry = Record<string, TrendSeries[]>;

export interface CountryActivity {
  country: string;
  start_day: string;
  counts: number[];
  increments: number[];
  peak_day: string;
}

export type GeoActivity = Record<string, CountryActivity>;

export interface MisinfoDailyRow {
  tweet_id: string;
  text: string;
  categories: string[];
  matched_domain: string | null;
  cascade_size: number;
}

export interface CascadeMember {
  tweet_id: string;
  parent_id: string | null;
  t: string;
}

export interface CascadeTracePoint {
  t: string;
  lat: number;
  lon: number;
  kind: "source" | "response";
}

export interface CascadeFile {
  root_id: string;
  categories: string[];
  matched_domains: string[];
  size: number;
  depth: number;
  members: CascadeMember[];
  trace: CascadeTracePoint[];
}

export interface DashboardConfig {
  manifestUrl: string;
  defaultView: string;
  mapTiles: "none" | "static-geojson";
  geojsonUrl?: string;
}

export const SUPPORTED_SCHEMA_VERSIONS = ["1.0", "1.1"];

export const CATEGORY_LABELS: Record<string, string> = {
  unreliable: "Unreliable",
  conspiracy: "Conspiracy",
  clickbait: "Clickbait",
  political_biased: "Political/Biased",
  others: "Others",
};

export const CATEGORY_ORDER = [
  "unreliable",
  "conspiracy",
  "clickbait",
  "political_biased",
];

export const CATEGORY_COLORS: Record<string, string> = {
  unreliable: "#d62728",
  conspiracy: "#9467bd",
  clickbait: "#ff7f0e",
  political_biased: "#1f77b4",
  others: "#7f7f7f",
};
