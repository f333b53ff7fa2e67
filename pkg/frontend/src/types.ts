/** Payload shapes returned by the scoring API (single source of truth). */

export type SortKey = "sfairness" | "tradeoff" | "popularity" | "seasonality";
export type LabelValue = "high" | "medium" | "low";
export type ModeName = "flight" | "drive" | "train";

export interface CitySummary {
  id: string;
  name: string;
  country: string;
  lat: number;
  lon: number;
  population: number;
}

export interface CityListEntry extends CitySummary {
  airports: string[];
}

export interface CitiesResponse {
  total: number;
  page: number;
  per_page: number;
  cities: CityListEntry[];
}

export interface ModeSummary {
  mode: ModeName;
  distance_km: number;
  duration_h: number;
  emissions_kg: number;
  cost_eur: number;
  carrier: string | null;
  time_norm: number;
  emissions_norm: number;
  cost_norm: number;
  weighted: number;
}

export interface Recommendation {
  rank: number;
  city: CitySummary;
  sfairness: number;
  score: number;
  tradeoff: number;
  popularity: number;
  seasonality: number;
  popularity_label: LabelValue;
  seasonality_label: LabelValue;
  best_mode: ModeName;
  modes: ModeSummary[];
}

export interface WeightsDict {
  tradeoff: number[];
  popularity: number[];
  seasonality: number[];
  composite: number[];
}

export interface RecommendationsResponse {
  origin: string;
  month: number;
  sort: SortKey;
  snapshot_digest: string;
  weights: WeightsDict;
  recommendations: Recommendation[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  details?: unknown;
}
