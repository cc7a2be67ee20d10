/**
 * Score & feedback: the smiley, the total with its decomposition, an
 * expandable per-round breakdown, recommendation cards, and the share
 * message with a copy button.
 */

import type { App } from "../app.js";
import type { GameReport } from "../api.js";
import { el } from "../dom.js";
import { t, type StringKey } from "../strings.js";

const SMILEY_GLYPH: Record<GameReport["smiley"], string> = {
  sad: "☹",
  neutral: "\u{1F610}",
  happy: "\u{1F603}",
};

const SMILEY_TEXT: Record<GameReport["smiley"], StringKey> = {
  sad: "smiley.sad",
  neutral: "smiley.neutral",
  happy: "smiley.happy",
};

const RECOMMENDATION_TITLE: Record<string, StringKey> = {
  review_public_items: "recommendation.review_public_items.title",
  create_friend_lists: "recommendation.create_friend_lists.title",
  use_targeted_sharing: "recommendation.use_targeted_sharing.title",
  reconsider_friendship_semantics: "recommendation.reconsider_friendship_semantics.title",
};

export function renderResults(app: App, report: GameReport): void {
  const names = (ids: string[]) =>
    ids.length ? ids.map((id) => app.session.nameOf(id)).join(", ") : t("results.none");

  const breakdown = el("div", { class: "breakdown", id: "round-breakdown" });
  report.rounds.forEach((round, index) => {
    const panel = el("details", { class: "round-panel" }, [
      el("summary", {}, [
        el("span", { text: `${index + 1}. ` }),
        el("span", { class: "panel-points", text: t("results.round_points", { points: round.points }) }),
      ]),
      el("p", {}, [
        el("strong", { text: `${t("results.wrong_picks")}: ` }),
        names(round.wrong_picks),
      ]),
      el("p", {}, [
        el("strong", { text: `${t("results.missed_viewers")}: ` }),
        names(round.missed_viewers),
      ]),
    ]);
    breakdown.append(panel);
  });

  const recommendations = el("div", { class: "recommendations", id: "recommendations" });
  for (const rec of report.recommendations) {
    const titleKey = RECOMMENDATION_TITLE[rec.code];
    recommendations.append(
      el("article", { class: "recommendation-card", "data-code": rec.code }, [
        el("h3", { text: titleKey ? t(titleKey) : rec.code }),
        el("p", { text: rec.rationale }),
        rec.evidence.length
          ? el("p", { class: "evidence", text: rec.evidence.join(", ") })
          : el("span", {}),
      ]),
    );
  }

  const shareButton = el("button", { id: "share-button", text: t("results.share_button") });
  shareButton.addEventListener("click", () => {
    void copyText(report.share_text).then((copied) => {
      if (copied) shareButton.textContent = t("results.share_copied");
    });
  });

  const replay = el("button", { class: "primary", id: "replay-button", text: t("results.replay_button") });
  replay.addEventListener("click", () => {
    app.session.clear();
    app.showLanding();
  });

  app.root.append(
    el("section", { class: "results" }, [
      el("h1", { text: t("results.title") }),
      el("div", { class: "smiley", id: "smiley", "data-smiley": report.smiley }, [
        el("span", { class: "smiley-glyph", text: SMILEY_GLYPH[report.smiley] }),
        el("p", { text: t(SMILEY_TEXT[report.smiley]) }),
      ]),
      el("p", { class: "total", id: "total-score" }, [
        el("span", { text: `${t("results.total_label")}: ` }),
        el("strong", { text: String(report.total) }),
      ]),
      el("ul", { class: "decomposition", id: "decomposition" }, [
        el("li", { text: `${t("results.base_label")}: ${report.base_score}` }),
        el("li", { text: `${t("results.bonus_label")}: +${report.list_bonus}` }),
        el("li", { text: `${t("results.penalty_label")}: −${report.public_penalty}` }),
      ]),
      el("p", {
        class: "awareness",
        id: "awareness",
        text: `${t("results.awareness_label")}: ${report.awareness_index.toFixed(2)}`,
      }),
      el("h2", { text: t("results.breakdown_title") }),
      breakdown,
      report.recommendations.length
        ? el("h2", { text: t("results.recommendations_title") })
        : el("span", {}),
      recommendations,
      el("p", { class: "share-text", id: "share-text", text: report.share_text }),
      el("div", { class: "actions" }, [shareButton, replay]),
    ]),
  );
}

async function copyText(text: string): Promise<boolean> {
  try {
    await navigator.clipboard.writeText(text);
    return true;
  } catch {
    return false;
  }
}
