/** Hand-rolled SVG charts: no chart library, no DOM dependency, pure
 * strings. Render data values are never rescaled into display text; only
 * geometry is derived. */

import { escapeHtml } from "./html.js";

export interface LineSeries {
  label: string;
  color: string;
  values: number[];
}

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

export function colorFor(i: number): string {
  return PALETTE[i % PALETTE.length];
}

export function lineChart(
  series: LineSeries[],
  opts: { width?: number; height?: number; xLabels?: string[] } = {},
): string {
  const width = opts.width ?? 640;
  const height = opts.height ?? 220;
  const padL = 44;
  const padB = 22;
  const padT = 10;
  const plotW = width - padL - 8;
  const plotH = height - padT - padB;
  const n = Math.max(...series.map((s) => s.values.length), 1);
  const maxY = Math.max(...series.flatMap((s) => s.values), 1);

  const x = (i: number) => padL + (n === 1 ? plotW / 2 : (i * plotW) / (n - 1));
  const y = (v: number) => padT + plotH - (v / maxY) * plotH;

  const lines = series
    .map((s) => {
      const pts = s.values.map((v, i) => `${x(i).toFixed(1)},${y(v).toFixed(1)}`).join(" ");
      return `<polyline fill="none" stroke="${s.color}" stroke-width="1.5" points="${pts}"><title>${escapeHtml(s.label)}</title></polyline>`;
    })
    .join("\n");

  const legend = series
    .map(
      (s, i) =>
        `<g transform="translate(${padL + i * 150},${height - 4})">` +
        `<rect width="10" height="10" y="-9" fill="${s.color}"></rect>` +
        `<text x="14" font-size="10">${escapeHtml(s.label)}</text></g>`,
    )
    .join("");

  const first = opts.xLabels?.[0] ?? "";
  const last = opts.xLabels?.[opts.xLabels.length - 1] ?? "";
  return `<svg viewBox="0 0 ${width} ${height}" class="chart line-chart" role="img">
    <line x1="${padL}" y1="${padT}" x2="${padL}" y2="${padT + plotH}" stroke="#999"/>
    <line x1="${padL}" y1="${padT + plotH}" x2="${padL + plotW}" y2="${padT + plotH}" stroke="#999"/>
    <text x="4" y="${padT + 10}" font-size="10">${escapeHtml(String(maxY))}</text>
    <text x="4" y="${padT + plotH}" font-size="10">0</text>
    <text x="${padL}" y="${height - 10}" font-size="9">${escapeHtml(first)}</text>
    <text x="${padL + plotW}" y="${height - 10}" font-size="9" text-anchor="end">${escapeHtml(last)}</text>
    ${lines}
    ${legend}
  </svg>`;
}

export function barChart(
  items: { label: string; value: number; color?: string }[],
  opts: { width?: number; barHeight?: number } = {},
): string {
  const width = opts.width ?? 640;
  const barHeight = opts.barHeight ?? 18;
  const labelW = 220;
  const gap = 4;
  const maxV = Math.max(...items.map((d) => d.value), 1);
  const plotW = width - labelW - 80;
  const height = items.length * (barHeight + gap) + gap;
  const bars = items
    .map((d, i) => {
      const w = Math.max((d.value / maxV) * plotW, 0.5);
      const yPos = gap + i * (barHeight + gap);
      return (
        `<text x="${labelW - 6}" y="${yPos + barHeight - 5}" text-anchor="end" font-size="11">${escapeHtml(d.label)}</text>` +
        `<rect x="${labelW}" y="${yPos}" width="${w.toFixed(1)}" height="${barHeight}" fill="${d.color ?? "#1f77b4"}"></rect>` +
        `<text class="bar-value" x="${labelW + w + 4}" y="${yPos + barHeight - 5}" font-size="11">${escapeHtml(String(d.value))}</text>`
      );
    })
    .join("\n");
  return `<svg viewBox="0 0 ${width} ${height}" class="chart bar-chart" role="img">${bars}</svg>`;
}

export interface MapPoint {
  lat: number;
  lon: number;
  kind: "source" | "response";
  /** 0..1 position on the cascade's time scale */
  timeFrac: number;
}

/** Country outlines from a user-supplied GeoJSON (FeatureCollection of
 * Polygon/MultiPolygon), projected like the points. */
export function geoJsonPaths(
  geojson: unknown, width = 720, height = 360,
): string {
  const x = (lon: number) => ((lon + 180) / 360) * width;
  const y = (lat: number) => ((90 - lat) / 180) * height;
  const ringPath = (ring: number[][]) =>
    "M" + ring.map(([lon, lat]) => `${x(lon).toFixed(1)},${y(lat).toFixed(1)}`).join("L") + "Z";

  const fc = geojson as { features?: { geometry?: { type: string; coordinates: unknown } }[] };
  const paths: string[] = [];
  for (const feature of fc.features ?? []) {
    const geom = feature.geometry;
    if (!geom) continue;
    if (geom.type === "Polygon") {
      for (const ring of geom.coordinates as number[][][]) {
        paths.push(ringPath(ring));
      }
    } else if (geom.type === "MultiPolygon") {
      for (const poly of geom.coordinates as number[][][][]) {
        for (const ring of poly) {
          paths.push(ringPath(ring));
        }
      }
    }
  }
  if (!paths.length) return "";
  return `<path class="geojson-layer" d="${paths.join(" ")}" fill="#e8eef6" stroke="#c6d2e1" stroke-width="0.5"/>`;
}

export function mapPlot(
  points: MapPoint[],
  opts: { width?: number; height?: number; baseLayer?: string } = {},
): string {
  const width = opts.width ?? 720;
  const height = opts.height ?? 360;
  const x = (lon: number) => ((lon + 180) / 360) * width;
  const y = (lat: number) => ((90 - lat) / 180) * height;

  const grid: string[] = [];
  for (let lon = -150; lon <= 150; lon += 30) {
    grid.push(`<line x1="${x(lon)}" y1="0" x2="${x(lon)}" y2="${height}" class="graticule"/>`);
  }
  for (let lat = -60; lat <= 60; lat += 30) {
    grid.push(`<line x1="0" y1="${y(lat)}" x2="${width}" y2="${y(lat)}" class="graticule"/>`);
  }
  grid.push(`<line x1="0" y1="${y(0)}" x2="${width}" y2="${y(0)}" class="graticule equator"/>`);

  const dots = points
    .map((p) => {
      if (p.kind === "source") {
        return `<circle cx="${x(p.lon).toFixed(1)}" cy="${y(p.lat).toFixed(1)}" r="6" class="dot-source" fill="#1f77b4" stroke="#fff"/>`;
      }
      const opacity = (0.25 + 0.75 * p.timeFrac).toFixed(3);
      return `<circle cx="${x(p.lon).toFixed(1)}" cy="${y(p.lat).toFixed(1)}" r="3.5" class="dot-response" fill="#d62728" fill-opacity="${opacity}"/>`;
    })
    .join("\n");

  return `<svg viewBox="0 0 ${width} ${height}" class="chart map-plot" role="img">
    <rect width="${width}" height="${height}" fill="#f4f7fb"/>
    ${opts.baseLayer ?? ""}
    ${grid.join("\n")}
    ${dots}
  </svg>`;
}

export function sparkline(values: number[], width = 160, height = 28): string {
  const maxV = Math.max(...values, 1);
  const n = values.length;
  const pts = values
    .map((v, i) => {
      const px = n === 1 ? width / 2 : (i * width) / (n - 1);
      const py = height - 2 - (v / maxV) * (height - 4);
      return `${px.toFixed(1)},${py.toFixed(1)}`;
    })
    .join(" ");
  return `<svg viewBox="0 0 ${width} ${height}" class="sparkline"><polyline fill="none" stroke="#1f77b4" stroke-width="1.2" points="${pts}"/></svg>`;
}
