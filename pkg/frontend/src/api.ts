// Typed client for the /v1 relation service. All numbers shown in the UI
// come straight from these payloads; nothing is recomputed client-side.

export interface ProbabilityValue {
  display: string;
  numerator: number;
  denominator: number;
}

export interface ConceptRow {
  id: string;
  name: string;
  category: string | null;
  total_relations: number;
}

export interface CategoryConceptRow extends ConceptRow {
  partner_count: number;
}

export interface RelatedRow {
  concept_id: string;
  name: string;
  category: string | null;
  count: number;
  p_a_given_b: ProbabilityValue;
  p_b_given_a: ProbabilityValue;
}

export interface EvidenceRow {
  article_id: string;
  sentence: string;
  sentence_index: number;
  pub_date: string;
  species: string[];
  citation: string;
}

export interface RelationDetail {
  a: string;
  b: string;
  count: number;
  first_pub_date: string;
  last_pub_date: string;
  p_a_given_b: ProbabilityValue;
  p_b_given_a: ProbabilityValue;
  evidence: EvidenceRow[];
}

export interface SemanticHit {
  concept_id: string;
  score: number;
  directly_related: boolean;
}

export interface SemanticResult {
  sources: string[];
  k: number;
  exclude_direct: boolean;
  hits: SemanticHit[];
}

export interface StatsPayload {
  concepts: number;
  relations: number;
  triples: number;
  articles: number;
  snapshot_id: number;
  last_update: string | null;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

interface RelationQuery {
  order?: "pub_date_asc" | "pub_date_desc";
  limit?: number;
  offset?: number;
}

interface RelatedQuery {
  category?: string;
  sort?: "count" | "p_a_given_b" | "p_b_given_a";
  limit?: number;
  offset?: number;
}

export class ApiClient {
  constructor(private baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let res: Response;
    try {
      res = await fetch(this.baseUrl + path, init);
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") throw err;
      throw new ApiError(0, "network", `request failed: ${String(err)}`);
    }
    if (!res.ok) {
      let code = `http_${res.status}`;
      let message = res.statusText || `HTTP ${res.status}`;
      try {
        const body = await res.json();
        if (body && body.error) {
          code = body.error.code ?? code;
          message = body.error.message ?? message;
        }
      } catch {
        // non-JSON error body: keep the status-derived code
      }
      throw new ApiError(res.status, code, message);
    }
    return (await res.json()) as T;
  }

  searchConcepts(
    q: string,
    limit = 20,
    signal?: AbortSignal,
  ): Promise<{ results: ConceptRow[] }> {
    const params = new URLSearchParams({ q, limit: String(limit) });
    return this.request(`/v1/concepts?${params}`, { signal });
  }

  categoryConcepts(
    category: string,
    limit = 50,
    offset = 0,
    signal?: AbortSignal,
  ): Promise<{ category: string; results: CategoryConceptRow[] }> {
    const params = new URLSearchParams({
      limit: String(limit),
      offset: String(offset),
    });
    return this.request(
      `/v1/categories/${encodeURIComponent(category)}/concepts?${params}`,
      { signal },
    );
  }

  relationDetail(
    a: string,
    b: string,
    query: RelationQuery = {},
    signal?: AbortSignal,
  ): Promise<RelationDetail> {
    const params = new URLSearchParams();
    if (query.order) params.set("order", query.order);
    if (query.limit !== undefined) params.set("limit", String(query.limit));
    if (query.offset !== undefined) params.set("offset", String(query.offset));
    const qs = params.toString();
    const path =
      `/v1/relations/${encodeURIComponent(a)}/${encodeURIComponent(b)}` +
      (qs ? `?${qs}` : "");
    return this.request(path, { signal });
  }

  relatedTable(
    conceptId: string,
    query: RelatedQuery = {},
    signal?: AbortSignal,
  ): Promise<{ concept_id: string; results: RelatedRow[] }> {
    const params = new URLSearchParams();
    if (query.category) params.set("category", query.category);
    if (query.sort) params.set("sort", query.sort);
    if (query.limit !== undefined) params.set("limit", String(query.limit));
    if (query.offset !== undefined) params.set("offset", String(query.offset));
    const qs = params.toString();
    const path =
      `/v1/concepts/${encodeURIComponent(conceptId)}/related` +
      (qs ? `?${qs}` : "");
    return this.request(path, { signal });
  }

  semanticRelated(
    concepts: string[],
    k: number,
    excludeDirect: boolean,
    signal?: AbortSignal,
  ): Promise<SemanticResult> {
    return this.request("/v1/semantic/related", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ concepts, k, exclude_direct: excludeDirect }),
      signal,
    });
  }

  stats(signal?: AbortSignal): Promise<StatsPayload> {
    return this.request("/v1/stats", { signal });
  }
}
