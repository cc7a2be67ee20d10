/**
 * Client-side session state: the token, the last known step, and caches
 * of payloads already received (battle pair, round view, display names
 * seen per gallery so the results view can label person ids). Visibility
 * data is never stored because the API never provides it before a round
 * is decided.
 */

export interface StoredSession {
  token: string;
  step: string;
}

const STORAGE_KEY = "privcheck.session";

export class ClientSession {
  token: string | null = null;
  step: string | null = null;
  locale = "en";
  /** display names seen in galleries, for the results breakdown */
  readonly names = new Map<string, string>();
  private readonly storage: Storage | null;

  constructor(storage: Storage | null = defaultStorage()) {
    this.storage = storage;
  }

  start(token: string, step: string): void {
    this.token = token;
    this.step = step;
    this.names.clear();
    this.save();
  }

  setStep(step: string): void {
    this.step = step;
    this.save();
  }

  rememberNames(entries: Iterable<{ person_id: string; display_name: string }>): void {
    for (const entry of entries) {
      this.names.set(entry.person_id, entry.display_name);
    }
  }

  nameOf(personId: string): string {
    return this.names.get(personId) ?? personId;
  }

  clear(): void {
    this.token = null;
    this.step = null;
    this.names.clear();
    this.storage?.removeItem(STORAGE_KEY);
  }

  /** Try to resume a session stored by a previous page load. */
  resume(): StoredSession | null {
    const raw = this.storage?.getItem(STORAGE_KEY);
    if (!raw) return null;
    try {
      const parsed = JSON.parse(raw) as StoredSession;
      if (typeof parsed.token === "string" && typeof parsed.step === "string") {
        this.token = parsed.token;
        this.step = parsed.step;
        return parsed;
      }
    } catch {
      this.storage?.removeItem(STORAGE_KEY);
    }
    return null;
  }

  private save(): void {
    if (this.token && this.step) {
      this.storage?.setItem(STORAGE_KEY, JSON.stringify({ token: this.token, step: this.step }));
    }
  }
}

function defaultStorage(): Storage | null {
  try {
    return typeof localStorage === "undefined" ? null : localStorage;
  } catch {
    return null;
  }
}
