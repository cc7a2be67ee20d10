/**
 * Step router: keeps the page in sync with the server-side session step
 * and hands each step to its view. Exactly one mutating request is in
 * flight at any time; every server response reports the authoritative
 * step, and refresh() re-reads it after anything that can move the flow.
 */

import { ApiClient, ApiError } from "./api.js";
import { clear, el } from "./dom.js";
import { ClientSession } from "./session.js";
import { t } from "./strings.js";
import { renderLanding } from "./views/landing.js";
import { renderMotivation } from "./views/motivation.js";
import { renderBriefing } from "./views/briefing.js";
import { renderBattle } from "./views/battle.js";
import { renderRound } from "./views/round.js";
import { renderResults } from "./views/results.js";

export interface AppOptions {
  /** injectable ms clock (tests) */
  now?: () => number;
  /** delay before auto-navigating away from a decided round */
  navigateDelayMs?: number;
}

export class App {
  readonly api: ApiClient;
  readonly session: ClientSession;
  readonly root: HTMLElement;
  readonly now: () => number;
  readonly navigateDelayMs: number;

  private busy = false;
  private cleanups: (() => void)[] = [];

  constructor(root: HTMLElement, api: ApiClient, session: ClientSession, opts: AppOptions = {}) {
    this.root = root;
    this.api = api;
    this.session = session;
    this.now = opts.now ?? (() => Date.now());
    this.navigateDelayMs = opts.navigateDelayMs ?? 600;
  }

  /** Resume a stored session if the server still knows it, else land. */
  async start(): Promise<void> {
    const stored = this.session.resume();
    if (stored) {
      try {
        await this.refresh();
        return;
      } catch {
        this.session.clear();
      }
    }
    this.showLanding();
  }

  showLanding(): void {
    this.beginView();
    renderLanding(this);
  }

  async refresh(): Promise<void> {
    const token = this.session.token;
    if (!token) {
      this.showLanding();
      return;
    }
    const state = await this.api.state(token);
    this.session.setStep(state.step);
    await this.route(state.step);
  }

  private async route(step: string): Promise<void> {
    this.beginView();
    if (step === "motivation") {
      renderMotivation(this);
    } else if (step.startsWith("briefing_")) {
      renderBriefing(this, step);
    } else if (step === "item_battle") {
      renderBattle(this, await this.api.battlePair(this.session.token!));
    } else if (step.startsWith("game_")) {
      renderRound(this, await this.api.roundView(this.session.token!));
    } else if (step === "score_feedback" || step === "finished") {
      renderResults(this, await this.api.result(this.session.token!));
    } else {
      this.root.append(el("p", { text: `unknown step: ${step}` }));
    }
  }

  /**
   * Run one mutating call; concurrent triggers (double clicks, races) are
   * dropped while a request is in flight, and server-side state conflicts
   * surface as a toast plus a refresh instead of breaking the view.
   */
  async mutate(action: () => Promise<void>): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    try {
      await action();
    } catch (error) {
      if (error instanceof ApiError) {
        this.toast(t("error.toast", { message: error.payload.message }));
        if (error.status === 409) {
          await this.refresh();
        }
      } else {
        this.toast(t("error.network"));
      }
    } finally {
      this.busy = false;
    }
  }

  toast(message: string): void {
    const note = el("div", { class: "toast", role: "status", text: message });
    this.root.append(note);
    setTimeout(() => note.remove(), 4000);
  }

  /** register per-view cleanup (listeners, intervals) */
  onCleanup(fn: () => void): void {
    this.cleanups.push(fn);
  }

  private beginView(): void {
    for (const fn of this.cleanups.splice(0)) {
      try {
        fn();
      } catch {
        // cleanup best-effort
      }
    }
    clear(this.root);
  }
}
