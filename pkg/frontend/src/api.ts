/** Thin typed client for the scoring API; all numbers on screen come from here. */

import type { ApiErrorBody, CitiesResponse, RecommendationsResponse } from "./types";
import type { ExplorerState } from "./state";
import { toApiParams } from "./state";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.status = status;
    this.code = body.code;
  }
}

export type FetchLike = typeof fetch;

async function getJson<T>(
  fetchImpl: FetchLike,
  url: string,
  signal?: AbortSignal,
): Promise<T> {
  const response = await fetchImpl(url, { signal });
  if (!response.ok) {
    let body: ApiErrorBody;
    try {
      body = (await response.json()) as ApiErrorBody;
    } catch {
      body = { code: "http_error", message: `request failed with ${response.status}` };
    }
    throw new ApiError(response.status, body);
  }
  return (await response.json()) as T;
}

export function fetchCities(
  fetchImpl: FetchLike,
  baseUrl: string,
  signal?: AbortSignal,
): Promise<CitiesResponse> {
  return getJson<CitiesResponse>(fetchImpl, `${baseUrl}/cities?per_page=500`, signal);
}

export function fetchRecommendations(
  fetchImpl: FetchLike,
  baseUrl: string,
  state: ExplorerState,
  signal?: AbortSignal,
): Promise<RecommendationsResponse> {
  const params = toApiParams(state);
  return getJson<RecommendationsResponse>(
    fetchImpl,
    `${baseUrl}/recommendations?${params.toString()}`,
    signal,
  );
}
