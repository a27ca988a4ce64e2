// Typed client for the /v1 relation service. All numbers shown in the UI
// come straight from these payloads; nothing is recomputed client-side.
export class ApiError extends Error {
    status;
    code;
    constructor(status, code, message) {
        super(message);
        this.status = status;
        this.code = code;
        this.name = "ApiError";
    }
}
export class ApiClient {
    baseUrl;
    constructor(baseUrl) {
        this.baseUrl = baseUrl;
        this.baseUrl = baseUrl.replace(/\/+$/, "");
    }
    async request(path, init) {
        let res;
        try {
            res = await fetch(this.baseUrl + path, init);
        }
        catch (err) {
            if (err instanceof DOMException && err.name === "AbortError")
                throw err;
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
            }
            catch {
                // non-JSON error body: keep the status-derived code
            }
            throw new ApiError(res.status, code, message);
        }
        return (await res.json());
    }
    searchConcepts(q, limit = 20, signal) {
        const params = new URLSearchParams({ q, limit: String(limit) });
        return this.request(`/v1/concepts?${params}`, { signal });
    }
    categoryConcepts(category, limit = 50, offset = 0, signal) {
        const params = new URLSearchParams({
            limit: String(limit),
            offset: String(offset),
        });
        return this.request(`/v1/categories/${encodeURIComponent(category)}/concepts?${params}`, { signal });
    }
    relationDetail(a, b, query = {}, signal) {
        const params = new URLSearchParams();
        if (query.order)
            params.set("order", query.order);
        if (query.limit !== undefined)
            params.set("limit", String(query.limit));
        if (query.offset !== undefined)
            params.set("offset", String(query.offset));
        const qs = params.toString();
        const path = `/v1/relations/${encodeURIComponent(a)}/${encodeURIComponent(b)}` +
            (qs ? `?${qs}` : "");
        return this.request(path, { signal });
    }
    relatedTable(conceptId, query = {}, signal) {
        const params = new URLSearchParams();
        if (query.category)
            params.set("category", query.category);
        if (query.sort)
            params.set("sort", query.sort);
        if (query.limit !== undefined)
            params.set("limit", String(query.limit));
        if (query.offset !== undefined)
            params.set("offset", String(query.offset));
        const qs = params.toString();
        const path = `/v1/concepts/${encodeURIComponent(conceptId)}/related` +
            (qs ? `?${qs}` : "");
        return this.request(path, { signal });
    }
    semanticRelated(concepts, k, excludeDirect, signal) {
        return this.request("/v1/semantic/related", {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ concepts, k, exclude_direct: excludeDirect }),
            signal,
        });
    }
    stats(signal) {
        return this.request("/v1/stats", { signal });
    }
}
//# sourceMappingURL=api.js.map