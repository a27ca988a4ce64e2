import type { ApiClient } from "./api.js";
import type { SelectionBasket } from "./basket.js";
import type { Route } from "./routes.js";

// Categories are part of the API contract; the lexicon assigns one of
// these to every concept.
export const CATEGORIES = [
  "brain_disease",
  "cognitive_function",
  "medicine",
  "brain_region",
  "neuron",
  "gene_protein",
  "pathway",
  "neurotransmitter",
] as const;

// Everything a view needs: the API, the basket, an abort signal tied to
// the current render (navigation cancels in-flight requests), and app
// callbacks for routing, notices, and async-work tracking.
export interface ViewContext {
  api: ApiClient;
  basket: SelectionBasket;
  signal: AbortSignal;
  searchDebounceMs: number;
  navigate(route: Route): void;
  replaceRoute(route: Route): void;
  notify(message: string): void;
  track<T>(work: Promise<T>): Promise<T>;
}
