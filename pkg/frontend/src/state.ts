// Client-side session state. The store never fabricates a number: the
// current view, the initial view, and everything in between are bodies
// the service returned. Undo rebuilds the session on the server and
// replays the remaining swaps, so even "old" states are re-confirmed
// rather than resurrected from a local cache.

import { ApiError, type ServiceClient } from "./api.js";
import type { Point, SessionView, Suggestion, Swap } from "./types.js";

export type MutationResult =
  | { kind: "ok" }
  | { kind: "noop" }
  | { kind: "busy" }
  | { kind: "invalid"; detail: string }
  | { kind: "error"; detail: string; unreachable: boolean };

function asResult(err: unknown): MutationResult {
  if (err instanceof ApiError) {
    if (err.status === 409) {
      return { kind: "invalid", detail: err.message };
    }
    return { kind: "error", detail: err.message, unreachable: err.status === 0 };
  }
  return { kind: "error", detail: String(err), unreachable: false };
}

export class SessionStore {
  private readonly client: ServiceClient;
  private view: SessionView | null = null;
  private initial: SessionView | null = null;
  private request: { ingredients: string[]; target: string } | null = null;
  private swaps: Swap[] = [];
  private redoStack: Swap[] = [];
  private busy = false;
  private listeners: Array<() => void> = [];

  constructor(client: ServiceClient) {
    this.client = client;
  }

  subscribe(listener: () => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) {
      listener();
    }
  }

  get currentView(): SessionView | null {
    return this.view;
  }

  get appliedSwaps(): readonly Swap[] {
    return this.swaps;
  }

  get isBusy(): boolean {
    return this.busy;
  }

  get canUndo(): boolean {
    return !this.busy && this.swaps.length > 0;
  }

  get canRedo(): boolean {
    return !this.busy && this.redoStack.length > 0;
  }

  /** Oldest-to-newest diagram points: creation state plus one per swap. */
  trail(): Point[] {
    if (this.view === null || this.initial === null) {
      return [];
    }
    return [this.initial.diagram_point, ...this.view.history.map((h) => h.diagram_point)];
  }

  /** Start a fresh session, replacing any active one (one per tab). */
  async start(ingredients: string[], target: string): Promise<MutationResult> {
    if (this.busy) {
      return { kind: "busy" };
    }
    this.busy = true;
    this.emit();
    try {
      const created = await this.client.createSession(ingredients, target);
      const previous = this.view;
      this.request = { ingredients: [...ingredients], target };
      this.initial = created.state;
      this.view = created.state;
      this.swaps = [];
      this.redoStack = [];
      if (previous !== null) {
        // the replaced session is garbage on the server; drop it quietly
        this.client.deleteSession(previous.session_id).catch(() => {});
      }
      return { kind: "ok" };
    } catch (err) {
      return asResult(err);
    } finally {
      this.busy = false;
      this.emit();
    }
  }

  /** Fetch suggestions for one current ingredient. Read-only. */
  async suggestFor(ingredient: string): Promise<Suggestion[]> {
    if (this.view === null) {
      throw new ApiError(0, "no active session");
    }
    const response = await this.client.suggest(this.view.session_id, ingredient);
    return response.suggestions;
  }

  /**
   * Apply one substitution. While a mutation is in flight every further
   * mutation is rejected, so a double-submitted apply lands exactly once.
   */
  async applySwap(replaced: string, replacement: string): Promise<MutationResult> {
    if (this.busy) {
      return { kind: "busy" };
    }
    if (this.view === null) {
      return { kind: "noop" };
    }
    this.busy = true;
    this.emit();
    try {
      const view = await this.client.apply(this.view.session_id, replaced, replacement);
      this.view = view;
      this.swaps = [...this.swaps, { replaced, replacement }];
      this.redoStack = [];
      return { kind: "ok" };
    } catch (err) {
      return asResult(err);
    } finally {
      this.busy = false;
      this.emit();
    }
  }

  /**
   * Undo the last swap by recreating the session and replaying the
   * prefix through the ordinary apply route. If anything fails the
   * current session is left untouched.
   */
  async undo(): Promise<MutationResult> {
    if (this.busy) {
      return { kind: "busy" };
    }
    if (this.view === null || this.request === null || this.swaps.length === 0) {
      return { kind: "noop" };
    }
    this.busy = true;
    this.emit();
    const prefix = this.swaps.slice(0, -1);
    const undone = this.swaps[this.swaps.length - 1]!;
    try {
      const created = await this.client.createSession(this.request.ingredients, this.request.target);
      let view = created.state;
      try {
        for (const swap of prefix) {
          view = await this.client.apply(created.session_id, swap.replaced, swap.replacement);
        }
      } catch (err) {
        this.client.deleteSession(created.session_id).catch(() => {});
        throw err;
      }
      const stale = this.view.session_id;
      this.initial = created.state;
      this.view = view;
      this.swaps = prefix;
      this.redoStack = [...this.redoStack, undone];
      this.client.deleteSession(stale).catch(() => {});
      return { kind: "ok" };
    } catch (err) {
      return asResult(err);
    } finally {
      this.busy = false;
      this.emit();
    }
  }

  /** Re-apply the most recently undone swap. */
  async redo(): Promise<MutationResult> {
    if (this.busy) {
      return { kind: "busy" };
    }
    const swap = this.redoStack[this.redoStack.length - 1];
    if (this.view === null || swap === undefined) {
      return { kind: "noop" };
    }
    this.busy = true;
    this.emit();
    try {
      const view = await this.client.apply(this.view.session_id, swap.replaced, swap.replacement);
      this.view = view;
      this.swaps = [...this.swaps, swap];
      this.redoStack = this.redoStack.slice(0, -1);
      return { kind: "ok" };
    } catch (err) {
      return asResult(err);
    } finally {
      this.busy = false;
      this.emit();
    }
  }

  /** Re-fetch the authoritative view of the active session. */
  async refresh(): Promise<MutationResult> {
    if (this.view === null) {
      return { kind: "noop" };
    }
    try {
      this.view = await this.client.getSession(this.view.session_id);
      this.emit();
      return { kind: "ok" };
    } catch (err) {
      return asResult(err);
    }
  }
}
