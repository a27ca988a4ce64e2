// Mounts the app against the fixture service and wraps the DOM
// interactions tests need: every helper settles outstanding fetches and
// re-renders before returning, so assertions always see a quiet UI.

import { inject } from "vitest";
import { ExplorerApp } from "../src/app.js";

export interface TestApp {
  app: ExplorerApp;
  root: HTMLElement;
  $(selector: string): HTMLElement;
  $$(selector: string): HTMLElement[];
  maybe(selector: string): HTMLElement | null;
  text(selector: string): string;
  click(selector: string): Promise<void>;
  type(selector: string, value: string): Promise<void>;
  goto(hash: string): Promise<void>;
}

let mounted: ExplorerApp | null = null;

export async function mountApp(
  hash = "#/search",
  options: { keepStorage?: boolean } = {},
): Promise<TestApp> {
  mounted?.stop();
  if (!options.keepStorage) sessionStorage.clear();
  window.location.hash = hash;
  document.body.innerHTML = '<div id="app"></div>';
  const root = document.getElementById("app") as HTMLElement;
  const app = new ExplorerApp(root, {
    apiBase: inject("apiBase"),
    searchDebounceMs: 0,
  });
  mounted = app;
  await app.start();
  await app.settle();

  const find = (selector: string): HTMLElement => {
    const node = root.querySelector(selector);
    if (!node) throw new Error(`no element matches ${selector}`);
    return node as HTMLElement;
  };

  return {
    app,
    root,
    $: find,
    $$: (selector) => [...root.querySelectorAll(selector)] as HTMLElement[],
    maybe: (selector) => root.querySelector(selector) as HTMLElement | null,
    text: (selector) => find(selector).textContent ?? "",
    click: async (selector) => {
      find(selector).dispatchEvent(
        new MouseEvent("click", { bubbles: true, cancelable: true }));
      await app.settle();
    },
    type: async (selector, value) => {
      const input = find(selector) as HTMLInputElement;
      input.value = value;
      input.dispatchEvent(new Event("input", { bubbles: true }));
      await app.settle();
    },
    goto: async (hash) => {
      window.location.hash = hash;
      await app.render();
      await app.settle();
    },
  };
}
