/**
 * Client-side score countdown, anchored to server-confirmed values.
 *
 * The server clock is the only authority for scoring; the ticker just
 * animates between confirmations. The displayed value is always
 *
 *     anchorScore - 200 * floor(secondsSinceAnchor)
 *
 * clamped at zero, so it can never show less than the last confirmed
 * score minus elapsed decay. Every server response re-anchors the model
 * (monotone, since server scores only fall within a round); if the local
 * estimate has drifted from the server by more than one second's worth
 * of decay, re-anchoring snaps the display back to the server value.
 */

export const DECAY_PER_SECOND = 200;

export interface TickerAnchor {
  score: number;
  atMs: number;
}

export function anchor(score: number, nowMs: number): TickerAnchor {
  return { score, atMs: nowMs };
}

export function displayedScore(state: TickerAnchor, nowMs: number): number {
  const elapsedSeconds = Math.max(0, (nowMs - state.atMs) / 1000);
  return Math.max(0, state.score - DECAY_PER_SECOND * Math.floor(elapsedSeconds));
}

export function reconcile(
  state: TickerAnchor,
  serverScore: number,
  nowMs: number,
): TickerAnchor {
  return { score: serverScore, atMs: nowMs };
}

export function divergenceSeconds(state: TickerAnchor, serverScore: number, nowMs: number): number {
  return Math.abs(displayedScore(state, nowMs) - serverScore) / DECAY_PER_SECOND;
}
