// Evidence view: the sentences behind one relation, oldest first by
// default, with citation and species badges and offset pagination.
import { clear, el } from "../dom.js";
const PAGE_SIZE = 10;
export async function renderEvidenceView(ctx, container, route) {
    const detail = await ctx.api.relationDetail(route.a, route.b, {
        order: route.order,
        limit: PAGE_SIZE,
        offset: route.offset,
    }, ctx.signal);
    clear(container);
    const section = el("section", { class: "view view-evidence" });
    section.append(el("h2", {}, `${detail.a} — ${detail.b}`));
    section.append(el("dl", { class: "relation-facts" }, el("dt", {}, "Count"), el("dd", { class: "relation-count" }, String(detail.count)), el("dt", {}, `P(${detail.a} | ${detail.b})`), el("dd", {
        class: "prob prob-a-given-b",
        title: `${detail.p_a_given_b.numerator}/${detail.p_a_given_b.denominator}`,
    }, detail.p_a_given_b.display), el("dt", {}, `P(${detail.b} | ${detail.a})`), el("dd", {
        class: "prob prob-b-given-a",
        title: `${detail.p_b_given_a.numerator}/${detail.p_b_given_a.denominator}`,
    }, detail.p_b_given_a.display), el("dt", {}, "First reported"), el("dd", {}, detail.first_pub_date), el("dt", {}, "Last reported"), el("dd", {}, detail.last_pub_date)));
    const toggle = el("button", { class: "order-toggle", type: "button" }, route.order === "pub_date_asc" ? "oldest first ↓" : "newest first ↑");
    toggle.addEventListener("click", () => {
        ctx.navigate({
            ...route,
            order: route.order === "pub_date_asc" ? "pub_date_desc" : "pub_date_asc",
            offset: 0,
        });
    });
    section.append(el("div", { class: "controls" }, toggle));
    const list = el("ol", { class: "evidence-list" });
    for (const row of detail.evidence) {
        const item = el("li", { class: "evidence-row", "data-article": row.article_id }, el("span", { class: "pub-date" }, row.pub_date), el("blockquote", { class: "sentence" }, row.sentence), el("span", { class: "badge citation" }, row.citation));
        for (const species of row.species) {
            item.append(el("span", { class: "badge species" }, species));
        }
        list.append(item);
    }
    section.append(list);
    const pager = el("div", { class: "pager" });
    if (route.offset > 0) {
        const prev = el("button", { class: "page-prev", type: "button" }, "← previous");
        prev.addEventListener("click", () => {
            ctx.navigate({ ...route, offset: Math.max(0, route.offset - PAGE_SIZE) });
        });
        pager.append(prev);
    }
    if (route.offset + detail.evidence.length < detail.count) {
        const next = el("button", { class: "page-next", type: "button" }, "next →");
        next.addEventListener("click", () => {
            ctx.navigate({ ...route, offset: route.offset + PAGE_SIZE });
        });
        pager.append(next);
    }
    section.append(pager);
    container.append(section);
}
//# sourceMappingURL=evidence.js.map