// Application shell: header with stats, the basket bar, a notice area,
// and a hash-routed main view. Navigation aborts in-flight requests for
// the previous view; basket changes rewrite the URL's "sel" parameter
// (so deep links always carry the selection) and, on the graph view,
// immediately re-run the semantic query.

import { ApiClient, ApiError } from "./api.js";
import { SelectionBasket } from "./basket.js";
import { clear, el } from "./dom.js";
import { formatHash, parseHash, type Route } from "./routes.js";
import type { ViewContext } from "./context.js";
import { renderSearchView } from "./views/search.js";
import { renderConceptView } from "./views/related.js";
import { renderGraphView } from "./views/graph.js";
import { renderEvidenceView } from "./views/evidence.js";

export interface AppOptions {
  apiBase: string;
  searchDebounceMs?: number;
}

export class ExplorerApp {
  api: ApiClient;
  basket: SelectionBasket;
  route: Route = { view: "search", q: "" };

  private readonly searchDebounceMs: number;
  private abortController: AbortController | null = null;
  private pending = new Set<Promise<unknown>>();
  private syncingBasket = false;
  private lastRenderedHash: string | null = null;
  private hashListener = (): void => {
    if (window.location.hash === this.lastRenderedHash) return;
    void this.track(this.render());
  };
  private unsubscribeBasket: () => void;

  private main!: HTMLElement;
  private basketBar!: HTMLElement;
  private notices!: HTMLElement;
  private statsLine!: HTMLElement;

  constructor(private root: HTMLElement, options: AppOptions) {
    this.api = new ApiClient(options.apiBase);
    this.searchDebounceMs = options.searchDebounceMs ?? 200;
    const { selIds } = parseHash(window.location.hash);
    this.basket = SelectionBasket.restore(
      typeof sessionStorage === "undefined" ? null : sessionStorage, selIds);
    this.unsubscribeBasket = this.basket.subscribe(() => this.onBasketChanged());
  }

  async start(): Promise<void> {
    this.buildChrome();
    window.addEventListener("hashchange", this.hashListener);
    void this.track(this.loadStats());
    await this.track(this.render());
  }

  // Detach from the window and cancel in-flight requests; the DOM under
  // the root is left as-is for the caller to discard.
  stop(): void {
    window.removeEventListener("hashchange", this.hashListener);
    this.unsubscribeBasket();
    this.abortController?.abort();
  }

  // Tests and callers can await settle() to know all fetches and
  // re-renders kicked off so far have finished.
  track<T>(work: Promise<T>): Promise<T> {
    this.pending.add(work);
    work.finally(() => this.pending.delete(work)).catch(() => undefined);
    return work;
  }

  async settle(): Promise<void> {
    while (this.pending.size > 0) {
      await Promise.allSettled([...this.pending]);
    }
  }

  navigate(route: Route): void {
    const hash = formatHash(route, this.basket.ids());
    if (window.location.hash !== hash) {
      window.location.hash = hash;
    }
    void this.track(this.render());
  }

  // Update the address bar without a history entry or a re-render
  // (used while typing a search query and after basket edits).
  private replaceRoute(route: Route): void {
    this.route = route;
    const hash = formatHash(route, this.basket.ids());
    this.lastRenderedHash = hash;
    try {
      history.replaceState(null, "", hash);
    } catch {
      window.location.hash = hash;
    }
  }

  notify(message: string): void {
    const notice = el("div", { class: "notice", role: "alert" },
      el("span", {}, message));
    const dismiss = el("button", { class: "dismiss", type: "button" }, "×");
    dismiss.addEventListener("click", () => notice.remove());
    notice.append(dismiss);
    this.notices.append(notice);
  }

  async render(): Promise<void> {
    const hash = window.location.hash || "#/search";
    this.lastRenderedHash = hash;
    const { route, selIds } = parseHash(hash);
    this.route = route;
    this.reconcileBasket(selIds);
    this.renderBasketBar();
    await this.renderView();
  }

  private async renderView(): Promise<void> {
    this.abortController?.abort();
    const controller = new AbortController();
    this.abortController = controller;
    const ctx: ViewContext = {
      api: this.api,
      basket: this.basket,
      signal: controller.signal,
      searchDebounceMs: this.searchDebounceMs,
      navigate: (route) => this.navigate(route),
      replaceRoute: (route) => this.replaceRoute(route),
      notify: (message) => this.notify(message),
      track: (work) => this.track(work),
    };
    const route = this.route;
    try {
      switch (route.view) {
        case "search":
          await renderSearchView(ctx, this.main, route);
          break;
        case "concept":
          await renderConceptView(ctx, this.main, route);
          break;
        case "graph":
          await renderGraphView(ctx, this.main, route);
          break;
        case "evidence":
          await renderEvidenceView(ctx, this.main, route);
          break;
      }
    } catch (err) {
      if (controller.signal.aborted) return; // superseded by a newer render
      if (err instanceof ApiError) {
        this.notify(err.message);
        clear(this.main);
        this.main.append(el("p", { class: "view-error" },
          `Request failed: ${err.message}`));
        return;
      }
      throw err;
    }
  }

  private onBasketChanged(): void {
    if (this.syncingBasket) return;
    this.renderBasketBar();
    this.replaceRoute(this.route);
    if (this.route.view === "graph") {
      // The feedback loop: a changed selection re-queries immediately.
      void this.track(this.renderView());
    }
  }

  // A pasted or externally edited URL wins over the stored basket.
  private reconcileBasket(selIds: string[]): void {
    const current = this.basket.ids();
    if (selIds.length === 0 || selIds.join(",") === current.join(",")) return;
    const known = new Map(this.basket.list().map((e) => [e.id, e]));
    this.syncingBasket = true;
    try {
      this.basket.clear();
      for (const id of selIds) {
        this.basket.add(known.get(id) ?? { id, name: id, category: null });
      }
    } finally {
      this.syncingBasket = false;
    }
  }

  private buildChrome(): void {
    clear(this.root);
    this.statsLine = el("span", { class: "stats" }, "…");
    const searchLink = el("a", { class: "nav-search", href: "#/search" }, "Search");
    const graphLink = el("a", { class: "nav-graph", href: "#/graph" }, "Graph");
    for (const [link, view] of [[searchLink, "search"], [graphLink, "graph"]] as const) {
      link.addEventListener("click", (event) => {
        event.preventDefault();
        this.navigate(view === "search"
          ? { view: "search", q: "" }
          : { view: "graph", k: 8, excludeDirect: false });
      });
    }
    this.basketBar = el("div", { class: "basket-bar" });
    this.notices = el("div", { class: "notices" });
    this.main = el("main", { class: "main" });
    this.root.append(
      el("header", { class: "app-header" },
        el("h1", {}, "Relation explorer"),
        el("nav", {}, searchLink, " ", graphLink),
        this.statsLine),
      this.basketBar,
      this.notices,
      this.main,
    );
  }

  private renderBasketBar(): void {
    clear(this.basketBar);
    this.basketBar.append(el("span", { class: "basket-label" },
      `Selected (${this.basket.size()}):`));
    for (const entry of this.basket.list()) {
      const chip = el("span", { class: "basket-chip", "data-id": entry.id });
      const name = el("a", { class: "chip-name", href: "#", title: entry.id }, entry.name);
      name.addEventListener("click", (event) => {
        event.preventDefault();
        this.navigate({
          view: "concept", id: entry.id, sort: "count", dir: "desc", category: null,
        });
      });
      const remove = el("button", { class: "chip-remove", type: "button" }, "×");
      remove.addEventListener("click", () => this.basket.remove(entry.id));
      chip.append(name, remove);
      this.basketBar.append(chip);
    }
    if (this.basket.size() > 0) {
      const clearAll = el("button", { class: "basket-clear", type: "button" }, "clear");
      clearAll.addEventListener("click", () => this.basket.clear());
      this.basketBar.append(clearAll);
    }
  }

  private async loadStats(): Promise<void> {
    try {
      const stats = await this.api.stats();
      this.statsLine.textContent =
        `snapshot ${stats.snapshot_id} · ${stats.concepts} concepts · ` +
        `${stats.relations} relations · ${stats.triples} mentions · ` +
        `${stats.articles} articles`;
    } catch {
      this.statsLine.textContent = "service unreachable";
    }
  }
}
