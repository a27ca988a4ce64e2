// Semantic graph: sends the basket to /v1/semantic/related, lays the
// sources and hits out with a force simulation, and draws an edge for
// every direct relation between displayed concepts (width grows with
// the logarithm of the relation count). Clicking a hit adds it to the
// basket, which immediately re-runs the combined query: the feedback
// loop the whole explorer is built around.
import { ApiError } from "../api.js";
import { clear, el, svgEl } from "../dom.js";
import { runLayout } from "../force.js";
const WIDTH = 720;
const HEIGHT = 480;
const SOURCE_R = 16;
const HIT_R_MIN = 7;
const HIT_R_MAX = 15;
function edgeKey(a, b) {
    return a < b ? `${a}|${b}` : `${b}|${a}`;
}
function hitRadius(hit, hits) {
    const scores = hits.map((h) => h.score);
    const lo = Math.min(...scores);
    const hi = Math.max(...scores);
    if (hi - lo < 1e-12)
        return (HIT_R_MIN + HIT_R_MAX) / 2;
    return HIT_R_MIN + ((hit.score - lo) / (hi - lo)) * (HIT_R_MAX - HIT_R_MIN);
}
export async function renderGraphView(ctx, container, route) {
    clear(container);
    const section = el("section", { class: "view view-graph" });
    section.append(el("h2", {}, "Semantic neighborhood"));
    section.append(buildControls(ctx, route));
    container.append(section);
    const sourceIds = ctx.basket.ids();
    if (sourceIds.length === 0) {
        section.append(el("p", { class: "empty" }, "The basket is empty. Search for concepts and select some first."));
        return;
    }
    let result;
    try {
        result = await ctx.api.semanticRelated(sourceIds, route.k, route.excludeDirect, ctx.signal);
    }
    catch (err) {
        if (err instanceof ApiError && err.code === "degenerate_query") {
            section.append(el("div", { class: "guidance" }, el("p", {}, err.message), el("p", {}, "The selected concepts cancel out to a zero query vector. "
                + "Remove one or add a different concept and try again.")));
            return;
        }
        if (err instanceof ApiError && err.code === "not_found") {
            ctx.notify(err.message);
            section.append(el("p", { class: "empty" }, "Some selected concepts are not in the current snapshot's embedding."));
            return;
        }
        throw err;
    }
    section.append(el("p", { class: "query-sources" }, "Sources: " + result.sources.join(", ")));
    const displayed = [...result.sources, ...result.hits.map((h) => h.concept_id)];
    const displayedSet = new Set(displayed);
    const edges = await collectDirectEdges(ctx, result.sources, displayedSet);
    const nodes = [
        ...result.sources.map((id) => ({ id, r: SOURCE_R, x: 0, y: 0 })),
        ...result.hits.map((hit) => ({
            id: hit.concept_id, r: hitRadius(hit, result.hits), x: 0, y: 0,
        })),
    ];
    const links = edges.map((e) => ({ source: e.a, target: e.b }));
    runLayout(nodes, links, { width: WIDTH, height: HEIGHT, seed: 42 });
    const position = new Map(nodes.map((n) => [n.id, n]));
    const svg = svgEl("svg", {
        class: "relation-graph",
        viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    });
    for (const edge of edges) {
        const from = position.get(edge.a);
        const to = position.get(edge.b);
        const line = svgEl("line", {
            class: "edge",
            x1: String(from.x), y1: String(from.y),
            x2: String(to.x), y2: String(to.y),
            "stroke-width": String(1 + Math.log(edge.count)),
            "data-a": edge.a,
            "data-b": edge.b,
            "data-count": String(edge.count),
        });
        line.append(svgEl("title", {}, `${edge.a} — ${edge.b}: ${edge.count}`));
        line.addEventListener("click", () => {
            ctx.navigate({
                view: "evidence", a: edge.a, b: edge.b,
                order: "pub_date_asc", offset: 0,
            });
        });
        svg.append(line);
    }
    for (const id of result.sources) {
        svg.append(nodeGroup(ctx, position.get(id), "source", null));
    }
    for (const hit of result.hits) {
        svg.append(nodeGroup(ctx, position.get(hit.concept_id), "hit", hit));
    }
    section.append(svg);
    if (result.hits.length === 0) {
        section.append(el("p", { class: "empty" }, "No further concepts to suggest for this selection."));
    }
}
function buildControls(ctx, route) {
    const kInput = el("input", {
        class: "k-input", type: "number", min: "1", max: "50", value: String(route.k),
    });
    kInput.addEventListener("change", () => {
        const k = Number.parseInt(kInput.value, 10);
        if (Number.isFinite(k) && k >= 1)
            ctx.navigate({ ...route, k });
    });
    const exclude = el("input", { class: "exclude-toggle", type: "checkbox" });
    exclude.checked = route.excludeDirect;
    exclude.addEventListener("change", () => {
        ctx.navigate({ ...route, excludeDirect: exclude.checked });
    });
    return el("div", { class: "controls" }, el("label", {}, "Results: ", kInput), el("label", {}, exclude, " hide directly related"));
}
// One related-table call per source covers every source-to-displayed
// relation; each drawn edge is the /v1/relations resource it links to.
async function collectDirectEdges(ctx, sources, displayed) {
    const edges = new Map();
    for (const source of sources) {
        const table = await ctx.api.relatedTable(source, { limit: 200 }, ctx.signal);
        for (const row of table.results) {
            if (!displayed.has(row.concept_id))
                continue;
            const key = edgeKey(source, row.concept_id);
            if (!edges.has(key)) {
                edges.set(key, { a: source, b: row.concept_id, count: row.count });
            }
        }
    }
    return [...edges.values()];
}
function nodeGroup(ctx, node, kind, hit) {
    const group = svgEl("g", {
        class: `node node-${kind}`,
        transform: `translate(${node.x} ${node.y})`,
        "data-id": node.id,
    });
    if (hit)
        group.setAttribute("data-direct", String(hit.directly_related));
    const circle = svgEl("circle", { r: String(node.r) });
    if (hit)
        circle.append(svgEl("title", {}, `${node.id} (score ${hit.score})`));
    group.append(circle);
    group.append(svgEl("text", { class: "node-label", dy: String(-node.r - 4) }, node.id));
    if (kind === "hit") {
        group.addEventListener("click", () => {
            ctx.basket.add({ id: node.id, name: node.id, category: null });
        });
    }
    return group;
}
//# sourceMappingURL=graph.js.map