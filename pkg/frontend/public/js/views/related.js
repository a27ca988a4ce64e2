// Concept page: a chord-style category summary plus the sortable table
// of directly related concepts with Count, P(A|B), and P(B|A). Count
// cells open the evidence view; concept names feed back into the basket.
import { clear, el } from "../dom.js";
import { CATEGORIES } from "../context.js";
import { renderCategorySummary } from "./summary.js";
const COLUMNS = [
    { key: "count", label: "Count" },
    { key: "p_a_given_b", label: "P(A|B)" },
    { key: "p_b_given_a", label: "P(B|A)" },
];
export async function renderConceptView(ctx, container, route) {
    const data = await ctx.api.relatedTable(route.id, {
        category: route.category ?? undefined,
        sort: route.sort,
        limit: 200,
    }, ctx.signal);
    // The service returns rows in descending order of the sort key;
    // ascending just shows the same rows bottom-up.
    const rows = route.dir === "asc" ? data.results.slice().reverse() : data.results;
    clear(container);
    const section = el("section", { class: "view view-concept" });
    section.append(el("h2", {}, route.id));
    const filter = el("select", { class: "category-filter" });
    filter.append(el("option", { value: "" }, "all categories"));
    for (const category of CATEGORIES) {
        const option = el("option", { value: category }, category);
        if (category === route.category)
            option.setAttribute("selected", "");
        filter.append(option);
    }
    filter.value = route.category ?? "";
    filter.addEventListener("change", () => {
        ctx.navigate({ ...route, category: filter.value || null });
    });
    section.append(el("div", { class: "controls" }, el("label", {}, "Category: ", filter)));
    section.append(renderCategorySummary(route.id, rows));
    const table = el("table", { class: "related-table" });
    const headRow = el("tr", {}, el("th", {}, "Concept"), el("th", {}, "Category"));
    for (const column of COLUMNS) {
        const sorted = route.sort === column.key;
        const th = el("th", {
            class: "sortable" + (sorted ? ` sorted-${route.dir}` : ""),
            "data-sort": column.key,
        }, column.label + (sorted ? (route.dir === "desc" ? " ↓" : " ↑") : ""));
        th.addEventListener("click", () => {
            ctx.navigate(sorted
                ? { ...route, dir: route.dir === "desc" ? "asc" : "desc" }
                : { ...route, sort: column.key, dir: "desc" });
        });
        headRow.append(th);
    }
    table.append(el("thead", {}, headRow));
    const body = el("tbody", {});
    for (const row of rows) {
        const tr = el("tr", { class: "related-row", "data-id": row.concept_id });
        const nameButton = el("button", { class: "concept-add", type: "button" }, row.name);
        nameButton.addEventListener("click", () => {
            ctx.basket.add({ id: row.concept_id, name: row.name, category: row.category });
        });
        const countLink = el("a", { class: "count-link", href: "#" }, String(row.count));
        countLink.addEventListener("click", (event) => {
            event.preventDefault();
            ctx.navigate({
                view: "evidence", a: route.id, b: row.concept_id,
                order: "pub_date_asc", offset: 0,
            });
        });
        tr.append(el("td", {}, nameButton), el("td", {}, el("span", { class: "category-chip" }, row.category ?? "uncategorized")), el("td", { class: "num" }, countLink), el("td", { class: "num", title: `${row.p_a_given_b.numerator}/${row.p_a_given_b.denominator}` }, row.p_a_given_b.display), el("td", { class: "num", title: `${row.p_b_given_a.numerator}/${row.p_b_given_a.denominator}` }, row.p_b_given_a.display));
        body.append(tr);
    }
    table.append(body);
    if (rows.length === 0) {
        section.append(el("p", { class: "empty" }, route.category
            ? `No related concepts in category "${route.category}".`
            : "No relations on record for this concept."));
    }
    else {
        section.append(table);
    }
    container.append(section);
}
//# sourceMappingURL=related.js.map