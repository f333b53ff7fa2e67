/**
 * Explorer wiring: controls in, ranked cards out.
 *
 * Every state change re-queries the API after a short debounce; at most one
 * request is in flight and a newer state aborts the older request. The URL
 * mirrors the full state at all times.
 */

import { ApiError, fetchCities, fetchRecommendations, type FetchLike } from "./api";
import { renderCards } from "./cards";
import {
  GROUP_SIZES,
  normalizeGroup,
  stateFromQuery,
  stateToQuery,
  type ExplorerState,
  type WeightGroupName,
} from "./state";
import type { RecommendationsResponse } from "./types";

export const DEBOUNCE_MS = 250;

const MONTH_NAMES = [
  "January", "February", "March", "April", "May", "June",
  "July", "August", "September", "October", "November", "December",
];

const GROUP_TITLES: Record<WeightGroupName, string> = {
  composite: "Overall mix",
  tradeoff: "Transport trade-off",
  popularity: "Popularity",
  seasonality: "Seasonality",
};

const FACTOR_NAMES: Record<WeightGroupName, string[]> = {
  composite: ["trade-off", "popularity", "seasonality"],
  tradeoff: ["time", "emissions", "cost"],
  popularity: ["poi", "ugc", "trends"],
  seasonality: ["visitors", "rates"],
};

export interface AppOptions {
  fetchImpl?: FetchLike;
  baseUrl?: string;
  debounceMs?: number;
}

export interface App {
  /** The live state (read-only from outside). */
  readonly state: ExplorerState;
  /** Programmatic state edit, as the controls would do it. */
  update(patch: Partial<ExplorerState>): void;
  /** Set one weight group from raw slider values; false = rejected inline. */
  setWeights(group: WeightGroupName, raw: number[]): boolean;
  /** Resolves when the currently scheduled/running query settles. */
  settled(): Promise<void>;
  /** The last successful response, if any. */
  readonly lastResponse: RecommendationsResponse | null;
}

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id} in the document`);
  return found as T;
}

export function createApp(options: AppOptions = {}): App {
  const fetchImpl: FetchLike = options.fetchImpl ?? fetch.bind(globalThis);
  const baseUrl = options.baseUrl ?? "";
  const debounceMs = options.debounceMs ?? DEBOUNCE_MS;

  const originSelect = el<HTMLSelectElement>("origin-select");
  const monthSelect = el<HTMLSelectElement>("month-select");
  const sortSelect = el<HTMLSelectElement>("sort-select");
  const sliderGroups = el<HTMLDivElement>("slider-groups");
  const weightsError = el<HTMLParagraphElement>("weights-error");
  const countryInput = el<HTMLInputElement>("country-input");
  const plabelSelect = el<HTMLSelectElement>("plabel-select");
  const slabelSelect = el<HTMLSelectElement>("slabel-select");
  const maxScoreInput = el<HTMLInputElement>("max-score-input");
  const errorBanner = el<HTMLDivElement>("error-banner");
  const errorMessage = el<HTMLSpanElement>("error-message");
  const errorRetry = el<HTMLButtonElement>("error-retry");
  const statusLine = el<HTMLParagraphElement>("status-line");
  const cards = el<HTMLDivElement>("cards");

  let state: ExplorerState = stateFromQuery(window.location.search);
  let lastResponse: RecommendationsResponse | null = null;
  let inFlight: AbortController | null = null;
  let timer: ReturnType<typeof setTimeout> | null = null;
  let settledResolvers: (() => void)[] = [];
  let pending = 0;

  function markSettled(): void {
    if (pending === 0 && timer === null) {
      settledResolvers.forEach((resolve) => resolve());
      settledResolvers = [];
    }
  }

  // --- static controls -----------------------------------------------------

  MONTH_NAMES.forEach((name, i) => {
    const option = document.createElement("option");
    option.value = String(i + 1);
    option.textContent = name;
    monthSelect.append(option);
  });

  const sliderInputs = new Map<WeightGroupName, HTMLInputElement[]>();
  const sliderValues = new Map<WeightGroupName, HTMLSpanElement[]>();
  for (const group of Object.keys(GROUP_SIZES) as WeightGroupName[]) {
    const block = document.createElement("div");
    block.className = "slider-group";
    const title = document.createElement("h3");
    title.textContent = GROUP_TITLES[group];
    block.append(title);
    const inputs: HTMLInputElement[] = [];
    const values: HTMLSpanElement[] = [];
    FACTOR_NAMES[group].forEach((factor, i) => {
      const row = document.createElement("div");
      row.className = "slider-row";
      const label = document.createElement("span");
      label.textContent = factor;
      const input = document.createElement("input");
      input.type = "range";
      input.min = "0";
      input.max = "100";
      input.step = "1";
      input.value = "50";
      input.dataset.group = group;
      input.dataset.index = String(i);
      const value = document.createElement("span");
      value.className = "slider-value";
      value.textContent = "-";
      row.append(label, input, value);
      block.append(row);
      inputs.push(input);
      values.push(value);
      input.addEventListener("input", () => {
        setWeights(group, inputs.map((inp) => Number(inp.value)));
      });
    });
    sliderInputs.set(group, inputs);
    sliderValues.set(group, values);
    sliderGroups.append(block);
  }

  function showSliderPositions(group: WeightGroupName, weights: number[]): void {
    const inputs = sliderInputs.get(group)!;
    const values = sliderValues.get(group)!;
    weights.forEach((w, i) => {
      inputs[i].value = String(Math.round(w * 100));
      values[i].textContent = w.toFixed(3);
    });
  }

  function syncControls(): void {
    if (state.origin) originSelect.value = state.origin;
    monthSelect.value = String(state.month);
    sortSelect.value = state.sort;
    countryInput.value = state.country ?? "";
    plabelSelect.value = state.popularityLabel ?? "";
    slabelSelect.value = state.seasonalityLabel ?? "";
    maxScoreInput.value = state.maxScore === null ? "" : String(state.maxScore);
    for (const group of Object.keys(GROUP_SIZES) as WeightGroupName[]) {
      const explicit = state[group];
      if (explicit) showSliderPositions(group, explicit);
    }
  }

  // --- querying ------------------------------------------------------------

  function pushUrl(): void {
    const query = stateToQuery(state);
    window.history.replaceState(null, "", query ? `?${query}` : window.location.pathname);
  }

  function showError(message: string): void {
    errorMessage.textContent = message;
    errorBanner.hidden = false;
  }

  function hideError(): void {
    errorBanner.hidden = true;
  }

  async function runQuery(): Promise<void> {
    pending += 1;
    let controller: AbortController | null = null;
    try {
      if (!state.origin) return;
      inFlight?.abort();
      controller = new AbortController();
      inFlight = controller;
      const response = await fetchRecommendations(fetchImpl, baseUrl, state, controller.signal);
      if (inFlight !== controller) return; // a newer query superseded this one
      lastResponse = response;
      hideError();
      renderCards(cards, response.recommendations);
      statusLine.textContent =
        `${response.recommendations.length} destination(s) from ${response.origin} in ` +
        `${MONTH_NAMES[response.month - 1]} · snapshot ${response.snapshot_digest.slice(0, 12)}`;
      for (const group of Object.keys(GROUP_SIZES) as WeightGroupName[]) {
        if (!state[group]) {
          showSliderPositions(group, response.weights[group]);
        }
      }
    } catch (error) {
      if (controller?.signal.aborted) return;
      const message =
        error instanceof ApiError
          ? `${error.code}: ${error.message}`
          : "The scoring service is unreachable.";
      showError(message);
    } finally {
      pending -= 1;
      markSettled();
    }
  }

  function schedule(): void {
    pushUrl();
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = null;
      void runQuery();
    }, debounceMs);
  }

  // --- state editing -------------------------------------------------------

  function update(patch: Partial<ExplorerState>): void {
    state = { ...state, ...patch };
    syncControls();
    schedule();
  }

  function setWeights(group: WeightGroupName, raw: number[]): boolean {
    const normalized = normalizeGroup(raw);
    if (normalized === null) {
      weightsError.textContent =
        "Weights must be nonnegative and not all zero; the edit was not applied.";
      weightsError.hidden = false;
      return false;
    }
    weightsError.hidden = true;
    showSliderPositions(group, normalized);
    update({ [group]: normalized } as Partial<ExplorerState>);
    return true;
  }

  // --- control events ------------------------------------------------------

  originSelect.addEventListener("change", () => update({ origin: originSelect.value }));
  monthSelect.addEventListener("change", () => update({ month: Number(monthSelect.value) }));
  sortSelect.addEventListener("change", () =>
    update({ sort: sortSelect.value as ExplorerState["sort"] }),
  );
  countryInput.addEventListener("change", () =>
    update({ country: countryInput.value.trim() || null }),
  );
  plabelSelect.addEventListener("change", () =>
    update({ popularityLabel: (plabelSelect.value || null) as ExplorerState["popularityLabel"] }),
  );
  slabelSelect.addEventListener("change", () =>
    update({ seasonalityLabel: (slabelSelect.value || null) as ExplorerState["seasonalityLabel"] }),
  );
  maxScoreInput.addEventListener("change", () =>
    update({ maxScore: maxScoreInput.value === "" ? null : Number(maxScoreInput.value) }),
  );
  errorRetry.addEventListener("click", () => schedule());
  window.addEventListener("popstate", () => {
    state = stateFromQuery(window.location.search);
    syncControls();
    schedule();
  });

  // --- boot ----------------------------------------------------------------

  pending += 1;
  void (async () => {
    try {
      const response = await fetchCities(fetchImpl, baseUrl);
      for (const city of response.cities) {
        const option = document.createElement("option");
        option.value = city.id;
        option.textContent = `${city.name} (${city.country})`;
        originSelect.append(option);
      }
      if (!state.origin && response.cities.length) {
        state = { ...state, origin: response.cities[0].id };
      }
      syncControls();
      pushUrl();
      void runQuery();
    } catch {
      showError("Could not load the city list.");
    } finally {
      pending -= 1;
      markSettled();
    }
  })();

  return {
    get state() {
      return state;
    },
    update,
    setWeights,
    settled() {
      return new Promise((resolve) => {
        settledResolvers.push(resolve);
        markSettled();
      });
    },
    get lastResponse() {
      return lastResponse;
    },
  };
}
