// DOM wiring. All data flows one way: user intent goes to the store,
// the store talks to the service, and every panel re-renders from the
// server-confirmed view the store holds. Nothing here computes a
// probability or keeps a number the service did not send.

import { ApiClient, ApiError, type ServiceClient } from "./api.js";
import { renderDiagram } from "./diagram.js";
import {
  renderChips,
  renderDistributionTable,
  renderHistory,
  renderStatus,
  renderSuggestions,
  renderTargetOptions,
} from "./render.js";
import { SessionStore, type MutationResult } from "./state.js";
import type { LayoutResponse, Suggestion } from "./types.js";

export const SUKIYAKI = [
  "soy sauce",
  "beef sirloin",
  "white sugar",
  "green onions",
  "mirin",
  "shiitake",
  "egg",
  "vegetable oil",
  "konnyaku",
  "chinese cabbage",
];

interface SuggestPanel {
  ingredient: string;
  suggestions: Suggestion[];
  invalid: Set<string>;
}

export class App {
  private readonly client: ServiceClient;
  private readonly store: SessionStore;
  private readonly doc: Document;
  private layout: LayoutResponse | null = null;
  private panel: SuggestPanel | null = null;

  constructor(doc: Document, client: ServiceClient, store: SessionStore) {
    this.doc = doc;
    this.client = client;
    this.store = store;
  }

  private el<T extends HTMLElement>(id: string): T {
    const node = this.doc.getElementById(id);
    if (node === null) {
      throw new Error(`missing element #${id}`);
    }
    return node as T;
  }

  async mount(): Promise<void> {
    this.el<HTMLButtonElement>("preset").addEventListener("click", () => {
      this.el<HTMLTextAreaElement>("ingredients-input").value = SUKIYAKI.join(", ");
      this.el<HTMLSelectElement>("target-select").value = "french";
    });
    this.el<HTMLButtonElement>("start").addEventListener("click", () => {
      void this.startSession();
    });
    this.el<HTMLButtonElement>("undo").addEventListener("click", () => {
      void this.store.undo().then((r) => this.afterMutation(r));
    });
    this.el<HTMLButtonElement>("redo").addEventListener("click", () => {
      void this.store.redo().then((r) => this.afterMutation(r));
    });
    this.el<HTMLElement>("recipe").addEventListener("click", (ev) => {
      const chip = (ev.target as HTMLElement).closest<HTMLElement>(".chip");
      if (chip?.dataset.ingredient) {
        void this.openSuggestions(chip.dataset.ingredient);
      }
    });
    this.el<HTMLElement>("suggest-panel").addEventListener("click", (ev) => {
      const pick = (ev.target as HTMLElement).closest<HTMLElement>(".pick");
      if (pick?.dataset.candidate) {
        void this.applyFromPanel(pick.dataset.candidate);
      }
    });
    this.store.subscribe(() => this.renderControls());
    await this.loadLayout();
  }

  private async loadLayout(): Promise<void> {
    try {
      this.layout = await this.client.layout();
      const countries = Object.keys(this.layout.countries);
      this.el<HTMLSelectElement>("target-select").innerHTML = renderTargetOptions(countries);
      this.clearError();
      this.renderAll();
    } catch (err) {
      this.layout = null;
      this.showError(err, true);
    }
  }

  private async startSession(): Promise<void> {
    const raw = this.el<HTMLTextAreaElement>("ingredients-input").value;
    const ingredients = raw
      .split(/[\n,]/)
      .map((part) => part.trim())
      .filter((part) => part.length > 0);
    const target = this.el<HTMLSelectElement>("target-select").value;
    if (ingredients.length === 0) {
      this.showError(new ApiError(400, "enter at least one ingredient"), false);
      return;
    }
    const result = await this.store.start(ingredients, target);
    this.panel = null;
    this.afterMutation(result);
  }

  private async openSuggestions(ingredient: string): Promise<void> {
    try {
      const suggestions = await this.store.suggestFor(ingredient);
      this.panel = { ingredient, suggestions, invalid: new Set() };
      this.clearError();
      this.renderPanel();
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // not part of the recipe any more; stale chip click
        this.panel = null;
        this.renderPanel();
      }
      this.showError(err, err instanceof ApiError && err.status === 0);
    }
  }

  private async applyFromPanel(candidate: string): Promise<void> {
    if (this.panel === null) {
      return;
    }
    const panel = this.panel;
    const result = await this.store.applySwap(panel.ingredient, candidate);
    if (result.kind === "invalid") {
      // service refused the swap; keep the panel, flag the row
      panel.invalid.add(candidate);
      this.renderPanel();
      return;
    }
    if (result.kind === "ok") {
      this.panel = null;
    }
    this.afterMutation(result);
  }

  private afterMutation(result: MutationResult): void {
    switch (result.kind) {
      case "ok":
        this.clearError();
        this.renderAll();
        break;
      case "busy":
      case "noop":
        break;
      case "invalid":
        this.showError(new ApiError(409, result.detail), false);
        break;
      case "error":
        this.showError(new ApiError(result.unreachable ? 0 : 500, result.detail), result.unreachable);
        break;
    }
  }

  private showError(err: unknown, wipe: boolean): void {
    const banner = this.el<HTMLElement>("error");
    const message =
      err instanceof ApiError && err.status === 0
        ? "service unreachable; showing no data rather than stale data"
        : err instanceof Error
          ? err.message
          : String(err);
    banner.textContent = message;
    banner.classList.remove("hidden");
    if (wipe) {
      // unreachable service: blank every data panel instead of lying
      for (const id of ["recipe", "suggest-panel", "diagram", "history", "dist", "status"]) {
        this.el<HTMLElement>(id).innerHTML = "";
      }
    }
  }

  private clearError(): void {
    const banner = this.el<HTMLElement>("error");
    banner.textContent = "";
    banner.classList.add("hidden");
  }

  private renderControls(): void {
    this.el<HTMLButtonElement>("undo").disabled = !this.store.canUndo;
    this.el<HTMLButtonElement>("redo").disabled = !this.store.canRedo;
    this.el<HTMLButtonElement>("start").disabled = this.store.isBusy;
    this.el<HTMLElement>("suggest-panel").classList.toggle("busy", this.store.isBusy);
  }

  private renderPanel(): void {
    const host = this.el<HTMLElement>("suggest-panel");
    if (this.panel === null) {
      host.innerHTML = "";
      return;
    }
    host.innerHTML = renderSuggestions(this.panel.ingredient, this.panel.suggestions, this.panel.invalid);
  }

  private renderAll(): void {
    const view = this.store.currentView;
    if (this.layout === null) {
      return;
    }
    if (view === null) {
      this.el<HTMLElement>("diagram").innerHTML = renderDiagram(this.layout, []);
      for (const id of ["recipe", "suggest-panel", "history", "dist", "status"]) {
        this.el<HTMLElement>(id).innerHTML = "";
      }
      this.renderControls();
      return;
    }
    this.el<HTMLElement>("status").innerHTML = renderStatus(view);
    this.el<HTMLElement>("recipe").innerHTML = renderChips(view);
    this.el<HTMLElement>("diagram").innerHTML = renderDiagram(
      this.layout,
      this.store.trail(),
      view.distribution,
    );
    this.el<HTMLElement>("history").innerHTML = renderHistory(view);
    this.el<HTMLElement>("dist").innerHTML = renderDistributionTable(view.distribution);
    this.renderPanel();
    this.renderControls();
  }
}

export async function mountApp(doc: Document): Promise<App> {
  const client = new ApiClient("");
  const store = new SessionStore(client);
  const app = new App(doc, client, store);
  await app.mount();
  return app;
}
