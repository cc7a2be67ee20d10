import type { App } from "../app.js";
import { el } from "../dom.js";
import { t, type StringKey } from "../strings.js";

const BRIEFINGS: Record<string, { title: StringKey; body: StringKey }> = {
  briefing_item_battle: {
    title: "briefing.item_battle.title",
    body: "briefing.item_battle.body",
  },
  briefing_game: { title: "briefing.game.title", body: "briefing.game.body" },
  briefing_score_feedback: {
    title: "briefing.score_feedback.title",
    body: "briefing.score_feedback.body",
  },
};

export function renderBriefing(app: App, step: string): void {
  const keys = BRIEFINGS[step] ?? BRIEFINGS["briefing_item_battle"]!;
  const go = el("button", { class: "primary", id: "briefing-continue", text: t("briefing.continue") });
  go.addEventListener("click", () =>
    void app.mutate(async () => {
      await app.api.advance(app.session.token!);
      await app.refresh();
    }),
  );
  app.root.append(
    el("section", { class: "briefing" }, [
      el("h1", { text: t(keys.title) }),
      el("p", { text: t(keys.body) }),
      go,
    ]),
  );
}
