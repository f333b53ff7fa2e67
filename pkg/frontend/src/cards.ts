/**
 * Destination card rendering.
 *
 * Every number shown is taken verbatim from the API payload and run through
 * the formatters below; nothing is recomputed client-side. The score badge
 * sits in the card's top-right corner and is colored on a three-band scale
 * that mirrors the API's percentile-label convention: within the displayed
 * set, scores in the top 5% (nearest rank) get the red band, the top half
 * amber, the rest green.
 */

import type { Recommendation } from "./types";

export type BadgeBand = "band-green" | "band-amber" | "band-red";

export function formatHours(value: number): string {
  return `${value.toFixed(1)} h`;
}

export function formatKg(value: number): string {
  return `${value.toFixed(1)} kg CO2e`;
}

export function formatEur(value: number): string {
  return `${value.toFixed(2)} €`;
}

function nearestRankCut(descending: number[], percent: number): number {
  const k = Math.max(1, Math.ceil((percent / 100) * descending.length));
  return descending[k - 1];
}

/** Badge color band per city, from the displayed set's score distribution. */
export function badgeBands(recommendations: Recommendation[]): Map<string, BadgeBand> {
  const bands = new Map<string, BadgeBand>();
  if (!recommendations.length) return bands;
  const descending = recommendations.map((r) => r.score).sort((a, b) => b - a);
  const redCut = nearestRankCut(descending, 5);
  const amberCut = nearestRankCut(descending, 50);
  for (const rec of recommendations) {
    const band: BadgeBand =
      rec.score >= redCut ? "band-red" : rec.score >= amberCut ? "band-amber" : "band-green";
    bands.set(rec.city.id, band);
  }
  return bands;
}

function modeLine(rec: Recommendation, index: number): HTMLLIElement {
  const mode = rec.modes[index];
  const li = document.createElement("li");
  li.className = "mode-line";
  if (mode.mode === rec.best_mode) li.classList.add("mode-best");
  const name = document.createElement("span");
  name.className = "mode-name";
  name.textContent = mode.mode;
  const figures = document.createElement("span");
  figures.className = "mode-figures";
  figures.textContent = `${formatHours(mode.duration_h)} · ${formatKg(mode.emissions_kg)} · ${formatEur(mode.cost_eur)}`;
  li.append(name, figures);
  return li;
}

export function renderCard(rec: Recommendation, band: BadgeBand): HTMLElement {
  const card = document.createElement("article");
  card.className = "card";
  card.dataset.city = rec.city.id;

  const head = document.createElement("div");
  head.className = "card-head";
  const title = document.createElement("h3");
  title.textContent = rec.city.name;
  const subtitle = document.createElement("span");
  subtitle.className = "card-country";
  subtitle.textContent = rec.city.country;
  const badge = document.createElement("span");
  badge.className = `badge ${band}`;
  badge.title = "overall impact out of 100; lower is fairer";
  badge.textContent = String(rec.score);
  head.append(title, subtitle, badge);

  const tags = document.createElement("div");
  tags.className = "tags";
  for (const [kind, label] of [
    ["popularity", rec.popularity_label],
    ["seasonality", rec.seasonality_label],
  ] as const) {
    const tag = document.createElement("span");
    tag.className = `tag tag-${label}`;
    tag.textContent = `${kind} ${label}`;
    tags.append(tag);
  }

  const modes = document.createElement("ul");
  modes.className = "modes";
  rec.modes.forEach((_, i) => modes.append(modeLine(rec, i)));

  card.append(head, tags, modes);
  return card;
}

/** Replace the container's content with one card per recommendation, in order. */
export function renderCards(container: HTMLElement, recommendations: Recommendation[]): void {
  container.replaceChildren();
  if (!recommendations.length) {
    const empty = document.createElement("p");
    empty.className = "empty";
    empty.textContent = "No destination matches the current filters.";
    container.append(empty);
    return;
  }
  const bands = badgeBands(recommendations);
  for (const rec of recommendations) {
    container.append(renderCard(rec, bands.get(rec.city.id) ?? "band-green"));
  }
}
