/**
 * Explorer state and its URL round-trip.
 *
 * The full view state lives in the query string, so reloading or sharing a
 * link reproduces the identical view against the same snapshot. Weight
 * groups are null while the server defaults apply; they become explicit
 * (and normalized to sum 1) once the user touches a slider.
 */

import type { LabelValue, SortKey } from "./types";

export type WeightGroupName = "composite" | "tradeoff" | "popularity" | "seasonality";

export interface ExplorerState {
  origin: string;
  month: number; // 1..12
  sort: SortKey;
  composite: number[] | null;
  tradeoff: number[] | null;
  popularity: number[] | null;
  seasonality: number[] | null;
  country: string | null;
  popularityLabel: LabelValue | null;
  seasonalityLabel: LabelValue | null;
  maxScore: number | null; // 0..100 display-score cap
}

export const GROUP_SIZES: Record<WeightGroupName, number> = {
  composite: 3,
  tradeoff: 3,
  popularity: 3,
  seasonality: 2,
};

const SORT_KEYS: SortKey[] = ["sfairness", "tradeoff", "popularity", "seasonality"];
const LABELS: LabelValue[] = ["high", "medium", "low"];

export function defaultState(): ExplorerState {
  return {
    origin: "",
    month: 7,
    sort: "sfairness",
    composite: null,
    tradeoff: null,
    popularity: null,
    seasonality: null,
    country: null,
    popularityLabel: null,
    seasonalityLabel: null,
    maxScore: null,
  };
}

/**
 * Scale a slider group so it sums to 1. Returns null when the values are
 * unusable (negative entries or an all-zero group): the caller must reject
 * the edit inline instead of dispatching a query.
 */
export function normalizeGroup(values: number[]): number[] | null {
  if (values.some((v) => v < 0 || !Number.isFinite(v))) return null;
  const total = values.reduce((acc, v) => acc + v, 0);
  if (total <= 0) return null;
  return values.map((v) => v / total);
}

function encodeGroup(values: number[]): string {
  return values.map((v) => String(v)).join(",");
}

function decodeGroup(text: string, size: number): number[] | null {
  const parts = text.split(",").map((p) => Number(p));
  if (parts.length !== size || parts.some((v) => !Number.isFinite(v) || v < 0)) return null;
  return parts;
}

/** Serialize the state into a query string; defaults are omitted. */
export function stateToQuery(state: ExplorerState): string {
  const params = new URLSearchParams();
  if (state.origin) params.set("origin", state.origin);
  params.set("month", String(state.month));
  if (state.sort !== "sfairness") params.set("sort", state.sort);
  for (const group of Object.keys(GROUP_SIZES) as WeightGroupName[]) {
    const values = state[group];
    if (values) params.set(`w_${group}`, encodeGroup(values));
  }
  if (state.country) params.set("country", state.country);
  if (state.popularityLabel) params.set("plabel", state.popularityLabel);
  if (state.seasonalityLabel) params.set("slabel", state.seasonalityLabel);
  if (state.maxScore !== null) params.set("max", String(state.maxScore));
  return params.toString();
}

/** Rebuild the state from a query string; invalid pieces fall back to defaults. */
export function stateFromQuery(query: string): ExplorerState {
  const params = new URLSearchParams(query);
  const state = defaultState();
  state.origin = params.get("origin") ?? "";
  const month = Number(params.get("month"));
  if (Number.isInteger(month) && month >= 1 && month <= 12) state.month = month;
  const sort = params.get("sort") as SortKey | null;
  if (sort && SORT_KEYS.includes(sort)) state.sort = sort;
  for (const group of Object.keys(GROUP_SIZES) as WeightGroupName[]) {
    const encoded = params.get(`w_${group}`);
    if (encoded) state[group] = decodeGroup(encoded, GROUP_SIZES[group]);
  }
  state.country = params.get("country");
  const plabel = params.get("plabel") as LabelValue | null;
  if (plabel && LABELS.includes(plabel)) state.popularityLabel = plabel;
  const slabel = params.get("slabel") as LabelValue | null;
  if (slabel && LABELS.includes(slabel)) state.seasonalityLabel = slabel;
  const max = params.get("max");
  if (max !== null && max !== "" && Number.isFinite(Number(max))) {
    state.maxScore = Number(max);
  }
  return state;
}

/** The JSON weight override the API expects, or null while defaults apply. */
export function weightsOverride(state: ExplorerState): string | null {
  const override: Record<string, number[]> = {};
  for (const group of Object.keys(GROUP_SIZES) as WeightGroupName[]) {
    const values = state[group];
    if (values) override[group] = values;
  }
  return Object.keys(override).length ? JSON.stringify(override) : null;
}

/** Query parameters for /recommendations derived from the state. */
export function toApiParams(state: ExplorerState): URLSearchParams {
  const params = new URLSearchParams();
  params.set("origin", state.origin);
  params.set("month", String(state.month));
  if (state.sort !== "sfairness") params.set("sort", state.sort);
  const weights = weightsOverride(state);
  if (weights) params.set("weights", weights);
  if (state.country) params.set("country", state.country);
  if (state.popularityLabel) params.set("popularity_label", state.popularityLabel);
  if (state.seasonalityLabel) params.set("seasonality_label", state.seasonalityLabel);
  if (state.maxScore !== null) params.set("max_score", String(state.maxScore / 100));
  return params;
}
