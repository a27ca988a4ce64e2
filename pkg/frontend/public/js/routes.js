// Hash routes. Everything a view needs to redraw itself lives in the
// route (plus the basket, whose ids ride along in the "sel" parameter),
// so any URL can be shared and reproduces the same screen.
import { decodeBasketParam, encodeBasketParam } from "./basket.js";
const SORT_KEYS = ["count", "p_a_given_b", "p_b_given_a"];
function intParam(params, name, fallback) {
    const raw = params.get(name);
    if (raw === null)
        return fallback;
    const value = Number.parseInt(raw, 10);
    return Number.isFinite(value) && value >= 0 ? value : fallback;
}
export function parseHash(hash) {
    let path = hash.startsWith("#") ? hash.slice(1) : hash;
    if (!path.startsWith("/"))
        path = "/" + path;
    const queryAt = path.indexOf("?");
    const params = new URLSearchParams(queryAt >= 0 ? path.slice(queryAt + 1) : "");
    if (queryAt >= 0)
        path = path.slice(0, queryAt);
    const selIds = decodeBasketParam(params.get("sel"));
    const parts = path.split("/").filter((p) => p.length > 0).map(decodeURIComponent);
    let route = { view: "search", q: params.get("q") ?? "" };
    if (parts[0] === "concept" && parts[1]) {
        const sortRaw = params.get("sort");
        route = {
            view: "concept",
            id: parts[1],
            sort: sortRaw && SORT_KEYS.includes(sortRaw) ? sortRaw : "count",
            dir: params.get("dir") === "asc" ? "asc" : "desc",
            category: params.get("category"),
        };
    }
    else if (parts[0] === "graph") {
        route = {
            view: "graph",
            k: Math.max(1, intParam(params, "k", 8)),
            excludeDirect: params.get("exclude") === "1",
        };
    }
    else if (parts[0] === "evidence" && parts[1] && parts[2]) {
        route = {
            view: "evidence",
            a: parts[1],
            b: parts[2],
            order: params.get("order") === "pub_date_desc" ? "pub_date_desc" : "pub_date_asc",
            offset: intParam(params, "offset", 0),
        };
    }
    return { route, selIds };
}
export function formatHash(route, selIds) {
    const params = new URLSearchParams();
    let path;
    switch (route.view) {
        case "search":
            path = "/search";
            if (route.q)
                params.set("q", route.q);
            break;
        case "concept":
            path = `/concept/${encodeURIComponent(route.id)}`;
            if (route.sort !== "count")
                params.set("sort", route.sort);
            if (route.dir !== "desc")
                params.set("dir", route.dir);
            if (route.category)
                params.set("category", route.category);
            break;
        case "graph":
            path = "/graph";
            if (route.k !== 8)
                params.set("k", String(route.k));
            if (route.excludeDirect)
                params.set("exclude", "1");
            break;
        case "evidence":
            path = `/evidence/${encodeURIComponent(route.a)}/${encodeURIComponent(route.b)}`;
            if (route.order !== "pub_date_asc")
                params.set("order", route.order);
            if (route.offset > 0)
                params.set("offset", String(route.offset));
            break;
    }
    if (selIds.length > 0)
        params.set("sel", encodeBasketParam(selIds));
    const qs = params.toString();
    return "#" + path + (qs ? `?${qs}` : "");
}
//# sourceMappingURL=routes.js.map