/**
 * Typed client for the session API.
 *
 * GalleryEntry deliberately has no viewer/visibility field: the server
 * never sends one before a round is decided, and keeping the type closed
 * means no view code can ever render visibility it does not have
 * (tests/api-secrecy.test.ts checks this statically and at runtime).
 */

export interface ItemView {
  id: string;
  kind: "picture" | "status_message";
  content_ref: string;
  shared_at?: string;
}

export interface GalleryEntry {
  person_id: string;
  display_name: string;
  avatar_ref?: string;
}

export interface BattlePair {
  round_no: number;
  rounds_total: number;
  item_a: ItemView;
  item_b: ItemView;
}

export interface BattleOutcome {
  done: boolean;
  next?: BattlePair;
  step?: string;
}

export interface RoundView {
  round_no: number;
  rounds_total: number;
  item: ItemView;
  gallery: GalleryEntry[];
  score: number;
  hearts: number;
}

export interface SelectOutcome {
  outcome: "correct" | "wrong" | "won_round" | "lost_round";
  score: number;
  hearts: number;
  frame: "green" | "red";
}

export interface SessionStateView {
  step: string;
  progress: {
    battles_done: number;
    battles_total: number;
    rounds_done: number;
    rounds_total: number;
  };
}

export interface RoundReport {
  item: string;
  points: number;
  wrong_picks: string[];
  missed_viewers: string[];
  selected: string[];
  displayed_viewers: string[];
}

export interface Recommendation {
  code: string;
  rationale: string;
  evidence: string[];
}

export interface GameReport {
  rounds: RoundReport[];
  base_score: number;
  list_bonus: number;
  public_penalty: number;
  total: number;
  smiley: "sad" | "neutral" | "happy";
  awareness_index: number;
  recommendations: Recommendation[];
  share_text: string;
}

export interface ApiErrorPayload {
  code: string;
  message: string;
  details: Record<string, unknown>;
}

export class ApiError extends Error {
  readonly status: number;
  readonly payload: ApiErrorPayload;

  constructor(status: number, payload: ApiErrorPayload) {
    super(payload.message);
    this.status = status;
    this.payload = payload;
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base = "", fetchImpl: FetchLike = fetch) {
    this.base = base.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.base}/api/v1${path}`, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    const data = text ? JSON.parse(text) : {};
    if (!response.ok) {
      const payload: ApiErrorPayload =
        typeof data.code === "string"
          ? data
          : { code: `http_${response.status}`, message: text || response.statusText, details: {} };
      throw new ApiError(response.status, payload);
    }
    return data as T;
  }

  createSession(body: {
    snapshot?: unknown;
    snapshot_path?: string;
    seed?: number;
  }): Promise<{ token: string; step: string }> {
    return this.request("POST", "/sessions", body);
  }

  state(token: string): Promise<SessionStateView> {
    return this.request("GET", `/sessions/${token}`);
  }

  advance(token: string): Promise<{ step: string }> {
    return this.request("POST", `/sessions/${token}/advance`);
  }

  battlePair(token: string): Promise<BattlePair> {
    return this.request("GET", `/sessions/${token}/battle`);
  }

  battleChoice(token: string, winner: string): Promise<BattleOutcome> {
    return this.request("POST", `/sessions/${token}/battle`, { winner });
  }

  roundView(token: string): Promise<RoundView> {
    return this.request("GET", `/sessions/${token}/round`);
  }

  roundSelect(token: string, person: string): Promise<SelectOutcome> {
    return this.request("POST", `/sessions/${token}/round/select`, { person });
  }

  result(token: string): Promise<GameReport> {
    return this.request("GET", `/sessions/${token}/result`);
  }
}
