/** Topics view: per-cluster word distributions and representative tweets.
 * Cluster labels are left to humans; the cards show the evidence. */

import { escapeHtml, num, panel, placeholderPanel, table } from "../html.js";
import { Topics } from "../types.js";

export function renderTopicsView(topics: Topics | null): string {
  if (!topics) {
    return `<section class="view" id="view-topics">${placeholderPanel("topics")}</section>`;
  }
  if (!topics.clusters.length) {
    return `<section class="view" id="view-topics">
      ${panel("Topic clusters", `<p class="empty">${escapeHtml(topics.note ?? "no clusters")}</p>`)}
    </section>`;
  }
  const cards = topics.clusters.map((cluster) => {
    const words = cluster.words.slice(0, 12)
      .map((w) => `<span class="word" title="weight ${escapeHtml(String(w.weight))}">${escapeHtml(w.word)}</span>`)
      .join(" ");
    const reps = cluster.representatives.length
      ? table(["Representative tweets"],
        cluster.representatives.map((r) => [escapeHtml(r.text)]))
      : "<p class=\"empty\">empty cluster</p>";
    return `<div class="topic-card">
      <h4>Cluster ${num(cluster.cluster)} <span class="muted">(${num(cluster.size)} tweets)</span></h4>
      <p class="words">${words}</p>
      ${reps}
    </div>`;
  }).join("\n");
  return `<section class="view" id="view-topics">
    ${panel(`Topic clusters (k = ${num(topics.k)}, sample ${num(topics.sample_size)} tweets)`,
      `<div class="topic-grid">${cards}</div>`)}
  </section>`;
}
