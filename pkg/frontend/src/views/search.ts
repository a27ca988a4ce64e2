// Concept search: debounced text queries against /v1/concepts. Clicking
// a row puts the concept in the basket; an empty query clears the list
// without calling the API.

import { ApiError, type ConceptRow } from "../api.js";
import { clear, el } from "../dom.js";
import type { ViewContext } from "../context.js";
import type { Route } from "../routes.js";

type SearchRoute = Extract<Route, { view: "search" }>;

export async function renderSearchView(
  ctx: ViewContext,
  container: HTMLElement,
  route: SearchRoute,
): Promise<void> {
  clear(container);
  const input = el("input", {
    class: "search-input",
    type: "search",
    placeholder: "Search concepts by name or synonym",
    value: route.q,
  });
  input.value = route.q;
  const results = el("div", { class: "search-results" });
  container.append(
    el("section", { class: "view view-search" },
      el("h2", {}, "Find concepts"),
      input,
      results),
  );

  async function runSearch(q: string): Promise<void> {
    if (!q.trim()) {
      clear(results);
      return;
    }
    let rows: ConceptRow[];
    try {
      rows = (await ctx.api.searchConcepts(q, 20, ctx.signal)).results;
    } catch (err) {
      if (err instanceof ApiError) {
        ctx.notify(err.message);
        return;
      }
      throw err;
    }
    clear(results);
    if (rows.length === 0) {
      results.append(el("p", { class: "empty" }, `No concepts match "${q}".`));
      return;
    }
    const list = el("ul", { class: "concept-list" });
    for (const row of rows) {
      list.append(searchRow(ctx, row));
    }
    results.append(list);
  }

  let seq = 0;
  input.addEventListener("input", () => {
    const mySeq = ++seq;
    const q = input.value;
    void ctx.track(
      (async () => {
        await new Promise((resolve) => setTimeout(resolve, ctx.searchDebounceMs));
        if (mySeq !== seq || ctx.signal.aborted) return;
        ctx.replaceRoute({ view: "search", q });
        await runSearch(q);
      })(),
    );
  });

  await runSearch(route.q);
}

function searchRow(ctx: ViewContext, row: ConceptRow): HTMLLIElement {
  const inBasket = ctx.basket.has(row.id);
  const item = el("li", {
    class: "search-row" + (inBasket ? " in-basket" : ""),
    "data-id": row.id,
  });
  const addButton = el("button", { class: "add", type: "button" },
    inBasket ? "✓ selected" : "+ select");
  addButton.addEventListener("click", () => {
    if (ctx.basket.add({ id: row.id, name: row.name, category: row.category })) {
      addButton.textContent = "✓ selected";
      item.classList.add("in-basket");
    }
  });
  const nameLink = el("a", { class: "name", href: "#" }, row.name);
  nameLink.addEventListener("click", (event) => {
    event.preventDefault();
    ctx.navigate({
      view: "concept", id: row.id, sort: "count", dir: "desc", category: null,
    });
  });
  item.append(
    addButton,
    nameLink,
    el("span", { class: "category-chip" }, row.category ?? "uncategorized"),
    el("span", { class: "relation-count", title: "relations on record" },
      String(row.total_relations)),
  );
  // Whole-row click selects too, except on the explicit name link.
  item.addEventListener("click", (event) => {
    if (event.target === nameLink) return;
    if (event.target !== addButton) addButton.click();
  });
  return item;
}
